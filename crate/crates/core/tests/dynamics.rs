use polaris_core::dynamics::{
    chi_square_test, percentile_ranks, presence_patterns, prolific_retention_effect, prolific_users,
    retention_next_period, PresenceMatrix, RetentionRule,
};
use polaris_core::network::InteractionGraph;
use polaris_core::polarity::UserPeriodStats;
use polaris_core::UserId;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn matrix(rows: &[&str]) -> PresenceMatrix {
    let mut m = PresenceMatrix::new(rows.len(), rows[0].len());
    for (u, r) in rows.iter().enumerate() {
        for (p, c) in r.chars().enumerate() {
            m.set(UserId(u as u32), p, c == '1');
        }
    }
    m
}

fn stat(user: u32, period: usize, activity: u64) -> UserPeriodStats {
    UserPeriodStats { user: UserId(user), period, pro: 0, neutral: 0, anti: 0, activity, polarity: 0.0 }
}

fn brute_chi(t: &[[u64; 2]; 2]) -> f64 {
    let n: f64 = t.iter().flatten().sum::<u64>() as f64;
    let mut s = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let e = (t[i][0] + t[i][1]) as f64 * (t[0][j] + t[1][j]) as f64 / n;
            s += (t[i][j] as f64 - e).powi(2) / e;
        }
    }
    s
}

#[test]
fn patterns_are_trimmed() {
    let m = matrix(&["00100", "01010", "00000", "11000", "00100"]);
    let t = presence_patterns(&m);
    assert_eq!(t.n_users, 4);
    assert_eq!(t.rows[0].pattern, "1");
    assert_eq!(t.rows[0].users, 2);
    assert_eq!(t.single_period_fraction, 0.5);
    assert_eq!(t.rows.iter().map(|r| r.users).sum::<u64>(), 4);
    assert!(t.rows.iter().any(|r| r.pattern == "101"));
}

#[test]
fn chi_square_fixtures() {
    let c = chi_square_test(&[vec![100, 0], vec![0, 100]]).unwrap();
    assert!((c.statistic - 200.0).abs() < 1e-9);
    assert!(c.p_value < 1e-40);
    let scaled = [[500, 500], [330, 670]];
    let c = chi_square_test(&[scaled[0].to_vec(), scaled[1].to_vec()]).unwrap();
    assert!((c.statistic - brute_chi(&scaled)).abs() < 1e-9);
    let ind = chi_square_test(&[vec![10, 20], vec![30, 60]]).unwrap();
    assert!(ind.statistic.abs() < 1e-12 && (ind.p_value - 1.0).abs() < 1e-9);
    assert!(chi_square_test(&[vec![0, 0], vec![1, 2]]).is_none());
}

#[test]
fn chi_square_matches_oracle_on_random_tables() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    let mut done = 0;
    while done < 1000 {
        let t = [[rng.random_range(0..500), rng.random_range(0..500)], [rng.random_range(0..500), rng.random_range(0..500)]];
        let Some(c) = chi_square_test(&[t[0].to_vec(), t[1].to_vec()]) else { continue };
        assert!((c.statistic - brute_chi(&t)).abs() < 1e-9);
        done += 1;
    }
}

#[test]
fn retention_step_function() {
    // period 0: users 0..10 with activity = id + 1; the top half returns in period 1
    let mut rows = Vec::new();
    for u in 0..10 {
        rows.push(if u >= 5 { "11" } else { "10" });
    }
    let m = matrix(&rows);
    let stats: Vec<_> = (0..10).map(|u| stat(u, 0, u as u64 + 1)).chain((5..10).map(|u| stat(u, 1, 1))).collect();
    let graphs = vec![InteractionGraph::from_events(0, [], &[]), InteractionGraph::from_events(1, [], &[])];
    let h = retention_next_period(&m, &stats, &graphs, 2, 1, RetentionRule::NextPeriod);
    assert_eq!(h.cells[0].fraction_retained, Some(0.0));
    assert_eq!(h.cells[1].fraction_retained, Some(1.0));
    assert_eq!(h.pooled_fraction, Some(0.5));
    let single = retention_next_period(&matrix(&["1"]), &[stat(0, 0, 1)], &graphs[..1], 2, 2, RetentionRule::NextPeriod);
    assert_eq!(single.n_users, 0);
}

#[test]
fn any_future_rule() {
    let m = matrix(&["101"]);
    assert!(!m.retained(UserId(0), 0, RetentionRule::NextPeriod));
    assert!(m.retained(UserId(0), 0, RetentionRule::AnyFuture));
}

#[test]
fn prolific_top_one_of_hundred() {
    let stats: Vec<_> = (0..100).map(|u| stat(u, 0, u as u64 + 1)).collect();
    // one hub: user 0 has the highest degree and the lowest activity
    let nodes: Vec<UserId> = (0..100).map(UserId).collect();
    let hub = InteractionGraph::from_events(0, (1..4).map(|u| (UserId(0), UserId(u))), &nodes);
    let sets = prolific_users(&stats, &[hub], 0.99);
    assert_eq!(sets[0].users, vec![UserId(0), UserId(99)]);
    assert_eq!((sets[0].by_activity, sets[0].by_degree, sets[0].both), (1, 1, 0));
    let g = InteractionGraph::from_events(0, [], &nodes);
    let flat: Vec<_> = (0..100).map(|u| stat(u, 0, 3)).collect();
    assert_eq!(prolific_users(&flat, &[g], 0.99)[0].users.len(), 100);
}

#[test]
fn prolific_effect_table() {
    // star around user 0 in period 0; spokes 1 and 2 return, 3 and 4 (isolated) do not, 5 isolated returns
    let m = matrix(&["11", "11", "11", "10", "10", "11"]);
    let nodes: Vec<UserId> = (0..6).map(UserId).collect();
    let g0 = InteractionGraph::from_events(0, [(UserId(0), UserId(1)), (UserId(0), UserId(2))], &nodes);
    let g1 = InteractionGraph::from_events(1, [], &nodes);
    let stats: Vec<_> = (0..6).map(|u| stat(u, 0, if u == 0 { 100 } else { 1 })).collect();
    let sets = prolific_users(&stats, &[g0.clone(), g1.clone()], 0.99);
    let e = prolific_retention_effect(&m, &[g0, g1], &sets, RetentionRule::NextPeriod);
    // user 0 is prolific and touched users 1, 2; user 0 itself touched no prolific peer
    assert_eq!(e.table, [[2, 0], [2, 2]]);
    assert_eq!(e.retention_with, Some(1.0));
    assert_eq!(e.retention_without, Some(0.5));
}

proptest! {
    #[test]
    fn percentiles_invariant_under_monotone_maps(v in prop::collection::vec(-1000i32..1000, 1..60)) {
        let raw: Vec<f64> = v.iter().map(|&x| f64::from(x)).collect();
        let mapped: Vec<f64> = v.iter().map(|&x| (f64::from(x) / 100.0).exp() * 3.0 + 1.0).collect();
        prop_assert_eq!(percentile_ranks(&raw), percentile_ranks(&mapped));
    }

    #[test]
    fn p_value_decreases(a in 0.0f64..50.0, b in 0.0f64..50.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(polaris_core::special::chi_square_sf(lo, 1.0) >= polaris_core::special::chi_square_sf(hi, 1.0));
    }

    #[test]
    fn retention_pools_cells(seed in any::<u64>()) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let (nu, np) = (40usize, 4usize);
        let mut m = PresenceMatrix::new(nu, np);
        let mut stats = Vec::new();
        for p in 0..np {
            for u in 0..nu {
                if rng.random_bool(0.5) {
                    m.set(UserId(u as u32), p, true);
                    stats.push(stat(u as u32, p, rng.random_range(1..20)));
                }
            }
        }
        let graphs: Vec<_> = (0..np).map(|p| InteractionGraph::from_events(p, [], &[])).collect();
        let h = retention_next_period(&m, &stats, &graphs, 5, 3, RetentionRule::NextPeriod);
        let n: u64 = h.cells.iter().map(|c| c.n_users).sum();
        let kept: u64 = h.cells.iter().map(|c| c.retained).sum();
        prop_assert_eq!(n, h.n_users);
        prop_assert_eq!(kept, h.retained);
        for c in &h.cells {
            if let Some(f) = c.fraction_retained { prop_assert!((0.0..=1.0).contains(&f)); }
        }
    }
}
