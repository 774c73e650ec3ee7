use alloc::vec::Vec;
use serde::Serialize;

use super::graph::InteractionGraph;
use crate::polarity::{find, UserPeriodStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

pub fn node_sign(polarity: f64) -> Sign {
    if polarity > 0.0 {
        Sign::Plus
    } else if polarity < 0.0 {
        Sign::Minus
    } else {
        Sign::Zero
    }
}

/// Triangle classes by the multiset of node signs.
pub const TRIAD_CLASSES: [&str; 10] = ["+++", "++0", "++-", "+00", "+0-", "+--", "000", "00-", "0--", "---"];

fn class_index(signs: [Sign; 3]) -> usize {
    let plus = signs.iter().filter(|&&s| s == Sign::Plus).count();
    let zero = signs.iter().filter(|&&s| s == Sign::Zero).count();
    // Listed by descending plus count, then descending zero count.
    let block_start = [6, 3, 1, 0][plus];
    block_start + (3 - plus - zero)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TriadCensus {
    pub counts: [u64; 10],
}

impl TriadCensus {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn get(&self, class: &str) -> Option<u64> {
        TRIAD_CLASSES.iter().position(|c| *c == class).map(|k| self.counts[k])
    }

    pub fn merge(&mut self, other: &TriadCensus) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }
}

// Orient each edge from lower to higher (degree, index) rank; every triangle is
// then found exactly once from its lowest-ranked corner.
fn for_each_triangle(graph: &InteractionGraph, mut visit: impl FnMut(usize, usize, usize)) {
    let n = graph.n_nodes();
    let rank_key = |v: usize| (graph.degree(v), v);
    let mut offsets = Vec::with_capacity(n + 1);
    let mut out: Vec<u32> = Vec::with_capacity(graph.n_edges());
    offsets.push(0);
    for v in 0..n {
        let kv = rank_key(v);
        out.extend(graph.neighbours(v).iter().copied().filter(|&u| rank_key(u as usize) > kv));
        offsets.push(out.len());
    }
    let mut mark = alloc::vec![u32::MAX; n];
    for v in 0..n {
        let ov = &out[offsets[v]..offsets[v + 1]];
        for &u in ov {
            mark[u as usize] = v as u32;
        }
        for &u in ov {
            for &w in &out[offsets[u as usize]..offsets[u as usize + 1]] {
                if mark[w as usize] == v as u32 {
                    visit(v, u as usize, w as usize);
                }
            }
        }
    }
}

pub fn count_triangles(graph: &InteractionGraph) -> u64 {
    let mut n = 0;
    for_each_triangle(graph, |_, _, _| n += 1);
    n
}

/// Census with caller-provided signs, one per local node.
pub fn triad_census_with_signs(graph: &InteractionGraph, signs: &[Sign]) -> TriadCensus {
    assert_eq!(signs.len(), graph.n_nodes());
    let mut census = TriadCensus::default();
    for_each_triangle(graph, |a, b, c| census.counts[class_index([signs[a], signs[b], signs[c]])] += 1);
    census
}

/// Census using each node's period polarity; users without labelled content are `0`.
pub fn triad_census(graph: &InteractionGraph, period_stats: &[UserPeriodStats]) -> TriadCensus {
    let signs: Vec<Sign> = graph
        .nodes()
        .iter()
        .map(|&u| find(period_stats, u).map_or(Sign::Zero, |s| node_sign(s.polarity)))
        .collect();
    triad_census_with_signs(graph, &signs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::UserId;
    use alloc::vec;

    #[test]
    fn class_indices_follow_the_listing() {
        use Sign::*;
        let listed = [
            [Plus, Plus, Plus],
            [Plus, Plus, Zero],
            [Plus, Plus, Minus],
            [Plus, Zero, Zero],
            [Plus, Zero, Minus],
            [Plus, Minus, Minus],
            [Zero, Zero, Zero],
            [Zero, Zero, Minus],
            [Zero, Minus, Minus],
            [Minus, Minus, Minus],
        ];
        for (k, s) in listed.iter().enumerate() {
            assert_eq!(class_index(*s), k, "{}", TRIAD_CLASSES[k]);
            assert_eq!(class_index([s[2], s[0], s[1]]), k);
        }
    }

    fn clique(n: u32) -> InteractionGraph {
        let mut ev = vec![];
        for a in 0..n {
            for b in a + 1..n {
                ev.push((UserId(a), UserId(b)));
            }
        }
        InteractionGraph::from_events(0, ev, &[])
    }

    #[test]
    fn single_triangle() {
        let c = triad_census_with_signs(&clique(3), &[Sign::Plus; 3]);
        assert_eq!(c.get("+++"), Some(1));
        assert_eq!(c.total(), 1);
    }

    #[test]
    fn four_clique_by_hand() {
        use Sign::*;
        // nodes: +, +, -, 0
        // {0,1,2}: ++-   {0,1,3}: ++0   {0,2,3}: +-0   {1,2,3}: +-0
        let c = triad_census_with_signs(&clique(4), &[Plus, Plus, Minus, Zero]);
        assert_eq!(c.get("++-"), Some(1));
        assert_eq!(c.get("++0"), Some(1));
        assert_eq!(c.get("+0-"), Some(2));
        assert_eq!(c.total(), 4);
    }

    #[test]
    fn star_has_no_triangles() {
        let ev: Vec<_> = (1..10).map(|k| (UserId(0), UserId(k))).collect();
        let g = InteractionGraph::from_events(0, ev, &[]);
        assert_eq!(triad_census_with_signs(&g, &[Sign::Plus; 10]).total(), 0);
        assert_eq!(count_triangles(&g), 0);
        assert_eq!(count_triangles(&clique(6)), 20);
    }
}
