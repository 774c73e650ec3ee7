#![allow(clippy::needless_range_loop)]

use polaris_core::network::{
    build_graph, count_triangles, echo_chamber_stats, node_views, triad_census, triad_census_with_signs,
    InteractionGraph, Sign,
};
use polaris_core::polarity::{compute_all, PolarityOptions, UserPeriodStats};
use polaris_core::{Stance, UserId};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

mod common;

fn graph(n: u32, edges: &[(u32, u32)]) -> InteractionGraph {
    let nodes: Vec<UserId> = (0..n).map(UserId).collect();
    InteractionGraph::from_events(0, edges.iter().map(|&(a, b)| (UserId(a), UserId(b))), &nodes)
}

fn stats_for(polarities: &[f64]) -> Vec<UserPeriodStats> {
    polarities
        .iter()
        .enumerate()
        .map(|(u, &p)| UserPeriodStats {
            user: UserId(u as u32),
            period: 0,
            pro: u64::from(p > 0.0),
            neutral: 1,
            anti: u64::from(p < 0.0),
            activity: 2,
            polarity: p,
        })
        .collect()
}

#[test]
fn replies_make_edges() {
    let c = common::corpus(
        &[
            ("p", "A", 1, None, None),
            ("b1", "B", 2, Some("p"), None),
            ("c1", "C", 3, Some("b1"), None),
            ("b2", "B", 4, Some("p"), None),
            ("b3", "B", 5, Some("b2"), None),
        ],
        &[(0, 10)],
    );
    let g = build_graph(&c, 0);
    let id = |n: &str| c.user_id(n).unwrap();
    assert_eq!(g.n_edges(), 2);
    assert_eq!(g.degree_of(id("B")), 2);
    assert_eq!(g.degree_of(id("A")), 1);
    let edges: Vec<_> = g.edges().collect();
    assert!(edges.contains(&(id("A"), id("B"), 2)));
    assert!(edges.contains(&(id("B"), id("C"), 1)));
}

#[test]
fn graph_ignores_input_order() {
    let rows = [
        ("p", "A", 1, None, Some(Stance::Pro)),
        ("x", "B", 2, Some("p"), Some(Stance::Anti)),
        ("y", "C", 3, Some("x"), None),
        ("z", "A", 4, Some("y"), Some(Stance::Pro)),
        ("w", "D", 5, Some("p"), None),
    ];
    let mut reversed = rows;
    reversed.reverse();
    let a = build_graph(&common::corpus(&rows, &[(0, 10)]), 0);
    let b = build_graph(&common::corpus(&reversed, &[(0, 10)]), 0);
    assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
}

#[test]
fn node_view_arithmetic() {
    let g = graph(4, &[(0, 1), (0, 2), (0, 3)]);
    let v = node_views(&g, &stats_for(&[0.5, 0.4, -0.2, 0.0]));
    assert_eq!(v[0].edge_homogeneities, vec![0.2, -0.1, 0.0]);
    assert!((v[0].mean_interaction_polarity.unwrap() - 0.2 / 3.0).abs() < 1e-12);
    assert!((v[0].mean_edge_homogeneity.unwrap() - 0.1 / 3.0).abs() < 1e-12);
    let iso = node_views(&graph(1, &[]), &stats_for(&[0.3]));
    assert_eq!(iso[0].mean_interaction_polarity, None);
}

#[test]
fn echo_two_node_cases() {
    let g = graph(2, &[(0, 1)]);
    let like = echo_chamber_stats(&g, &node_views(&g, &stats_for(&[0.5, 0.5])));
    assert_eq!(like.fraction_like_minded, 1.0);
    let cross = echo_chamber_stats(&g, &node_views(&g, &stats_for(&[0.5, -0.5])));
    assert_eq!(cross.fraction_cross_cutting, 1.0);
}

#[test]
fn four_clique_census() {
    let g = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let c = triad_census(&g, &stats_for(&[1.0, 0.5, -0.5, 0.0]));
    assert_eq!(c.get("++-"), Some(1));
    assert_eq!(c.get("++0"), Some(1));
    assert_eq!(c.get("+0-"), Some(2));
    assert_eq!(c.total(), 4);
    let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
    assert_eq!(triad_census(&star, &stats_for(&[1.0; 5])).total(), 0);
}

fn naive_triangles(n: usize, adj: &[Vec<bool>]) -> u64 {
    let mut t = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                t += u64::from(adj[a][b] && adj[b][c] && adj[a][c]);
            }
        }
    }
    t
}

#[test]
fn census_sums_to_triangle_oracle() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    for _ in 0..100 {
        let n = rng.random_range(3..=50usize);
        let density = rng.random_range(0.05..0.6);
        let mut adj = vec![vec![false; n]; n];
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random_bool(density) {
                    adj[a][b] = true;
                    adj[b][a] = true;
                    edges.push((a as u32, b as u32));
                }
            }
        }
        let g = graph(n as u32, &edges);
        let signs: Vec<Sign> = (0..n).map(|_| [Sign::Minus, Sign::Zero, Sign::Plus][rng.random_range(0..3)]).collect();
        let oracle = naive_triangles(n, &adj);
        assert_eq!(count_triangles(&g), oracle);
        assert_eq!(triad_census_with_signs(&g, &signs).total(), oracle);
    }
}

#[test]
fn unlabelled_partner_is_neutral_and_counted() {
    use Stance::*;
    let c = common::corpus(
        &[("p", "A", 1, None, None), ("a", "A", 2, Some("p"), Some(Pro)), ("b", "B", 3, Some("a"), None)],
        &[(0, 10)],
    );
    let stats = compute_all(&c, PolarityOptions::default());
    let g = build_graph(&c, 0);
    let views = node_views(&g, &stats);
    let e = echo_chamber_stats(&g, &views);
    assert_eq!(e.fraction_neutral_pairs, 1.0);
    assert_eq!(e.instances.unknown, 2);
}

proptest! {
    #[test]
    fn fractions_sum_to_one_and_negation_is_invariant(
        pols in prop::collection::vec(-1.0f64..1.0, 3..30),
        seed in any::<u64>(),
    ) {
        let n = pols.len();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let edges: Vec<(u32, u32)> = (0..3 * n)
            .map(|_| (rng.random_range(0..n as u32), rng.random_range(0..n as u32)))
            .collect();
        let g = graph(n as u32, &edges);
        let v = node_views(&g, &stats_for(&pols));
        let e = echo_chamber_stats(&g, &v);
        if e.instances.total() > 0 {
            let s = e.fraction_like_minded + e.fraction_cross_cutting + e.fraction_neutral_pairs;
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
        let neg: Vec<f64> = pols.iter().map(|p| -p).collect();
        let vn = node_views(&g, &stats_for(&neg));
        for (a, b) in v.iter().zip(&vn) {
            prop_assert_eq!(&a.edge_homogeneities, &b.edge_homogeneities);
        }
    }
}
