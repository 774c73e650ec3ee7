use alloc::vec::Vec;

use crate::corpus::{Corpus, UserId};

/// Undirected weighted graph in compressed adjacency form.
///
/// Nodes are sorted by user id; adjacency lists are sorted by local index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionGraph {
    pub period: usize,
    nodes: Vec<UserId>,
    offsets: Vec<usize>,
    neighbours: Vec<u32>,
    weights: Vec<u32>,
}

impl InteractionGraph {
    /// Build from reply events `(u, v)`; order and duplicates are irrelevant.
    /// Extra `nodes` are included even when isolated.
    pub fn from_events<I>(period: usize, events: I, nodes: &[UserId]) -> Self
    where
        I: IntoIterator<Item = (UserId, UserId)>,
    {
        let mut pairs: Vec<(u32, u32)> = events
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| if a < b { (a.0, b.0) } else { (b.0, a.0) })
            .collect();
        pairs.sort_unstable();

        let mut ids: Vec<u32> = nodes.iter().map(|u| u.0).collect();
        ids.extend(pairs.iter().flat_map(|&(a, b)| [a, b]));
        ids.sort_unstable();
        ids.dedup();
        let local = |u: u32| ids.binary_search(&u).expect("endpoint registered") as u32;

        // (local a, local b, weight) for unique edges
        let mut edges: Vec<(u32, u32, u32)> = Vec::new();
        for &(a, b) in &pairs {
            match edges.last_mut() {
                Some(last) if (last.0, last.1) == (local(a), local(b)) => last.2 += 1,
                _ => edges.push((local(a), local(b), 1)),
            }
        }

        let n = ids.len();
        let mut degree = alloc::vec![0usize; n];
        for &(a, b, _) in &edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbours = alloc::vec![0u32; offsets[n]];
        let mut weights = alloc::vec![0u32; offsets[n]];
        // Edges are sorted by (a, b): a node's lower partners (where it is `b`)
        // all arrive before its higher ones, each run ascending.
        for &(a, b, w) in &edges {
            for (x, y) in [(a, b), (b, a)] {
                let slot = fill[x as usize];
                neighbours[slot] = y;
                weights[slot] = w;
                fill[x as usize] += 1;
            }
        }
        debug_assert!((0..n).all(|v| neighbours[offsets[v]..offsets[v + 1]].windows(2).all(|w| w[0] < w[1])));
        Self { period, nodes: ids.into_iter().map(UserId).collect(), offsets, neighbours, weights }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edges(&self) -> usize {
        self.neighbours.len() / 2
    }

    pub fn nodes(&self) -> &[UserId] {
        &self.nodes
    }

    pub fn local(&self, user: UserId) -> Option<usize> {
        self.nodes.binary_search(&user).ok()
    }

    /// Local indices of `v`'s neighbours, ascending.
    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.neighbours[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn weights(&self, v: usize) -> &[u32] {
        &self.weights[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Number of distinct partners of `user`; zero when absent.
    pub fn degree_of(&self, user: UserId) -> usize {
        self.local(user).map_or(0, |v| self.degree(v))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbours(a).binary_search(&(b as u32)).is_ok()
    }

    /// Each undirected edge once as `(user_a, user_b, weight)` with `user_a < user_b`.
    pub fn edges(&self) -> impl Iterator<Item = (UserId, UserId, u32)> + '_ {
        (0..self.n_nodes()).flat_map(move |v| {
            self.neighbours(v)
                .iter()
                .zip(self.weights(v))
                .filter(move |(&u, _)| (u as usize) > v)
                .map(move |(&u, &w)| (self.nodes[v], self.nodes[u as usize], w))
        })
    }

    pub fn total_events(&self) -> u64 {
        self.weights.iter().map(|&w| u64::from(w)).sum::<u64>() / 2
    }
}

/// Interaction graph for one period.
///
/// Every non-deleted author active in the period is a node, as is every author
/// who received a reply during it.
pub fn build_graph(corpus: &Corpus, period: usize) -> InteractionGraph {
    let idx = corpus.in_period(period);
    let subs = corpus.submissions();
    let mut active: Vec<UserId> = idx.iter().filter_map(|&i| subs[i as usize].author).collect();
    active.sort_unstable();
    active.dedup();
    let events = idx.iter().filter_map(|&i| {
        let replier = subs[i as usize].author?;
        let target = corpus.parent_author(i as usize)?;
        Some((replier, target))
    });
    InteractionGraph::from_events(period, events, &active)
}

pub fn build_all(corpus: &Corpus) -> Vec<InteractionGraph> {
    (0..corpus.n_periods()).map(|p| build_graph(corpus, p)).collect()
}
