use alloc::vec::Vec;
use serde::Serialize;

use super::graph::InteractionGraph;
use crate::corpus::UserId;
use crate::polarity::{find, UserPeriodStats};
use crate::stats;

/// A node's own polarity alongside its partners' polarities and the pairwise products.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodePolarityView {
    pub user: UserId,
    pub polarity: f64,
    /// False when the user has no labelled content in the period.
    pub labelled: bool,
    /// One entry per partner, in the graph's neighbour order.
    pub interaction_polarities: Vec<f64>,
    pub edge_homogeneities: Vec<f64>,
    /// Partners with no labelled content in the period (scored as 0).
    pub unknown_partners: u64,
    pub mean_interaction_polarity: Option<f64>,
    pub mean_edge_homogeneity: Option<f64>,
}

impl NodePolarityView {
    pub fn degree(&self) -> usize {
        self.interaction_polarities.len()
    }
}

fn known_polarity(period_stats: &[UserPeriodStats], user: UserId) -> Option<f64> {
    find(period_stats, user).filter(|s| !s.no_labelled_content()).map(|s| s.polarity)
}

/// Views for every node of `graph`, in node order.
///
/// `period_stats` must hold the graph's period only, sorted by user. Users
/// without labelled content count as polarity 0.
pub fn node_views(graph: &InteractionGraph, period_stats: &[UserPeriodStats]) -> Vec<NodePolarityView> {
    let known: Vec<Option<f64>> = graph.nodes().iter().map(|&u| known_polarity(period_stats, u)).collect();
    (0..graph.n_nodes())
        .map(|v| {
            let own = known[v].unwrap_or(0.0);
            let nbrs = graph.neighbours(v);
            let interaction: Vec<f64> = nbrs.iter().map(|&u| known[u as usize].unwrap_or(0.0)).collect();
            let homogeneity: Vec<f64> = interaction.iter().map(|p| own * p).collect();
            NodePolarityView {
                user: graph.nodes()[v],
                polarity: own,
                labelled: known[v].is_some(),
                unknown_partners: nbrs.iter().filter(|&&u| known[u as usize].is_none()).count() as u64,
                mean_interaction_polarity: stats::mean(&interaction),
                mean_edge_homogeneity: stats::mean(&homogeneity),
                interaction_polarities: interaction,
                edge_homogeneities: homogeneity,
            }
        })
        .collect()
}

/// Like-minded / cross-cutting / neutral tallies at one counting granularity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PairCounts {
    pub like_minded: u64,
    pub cross_cutting: u64,
    pub neutral: u64,
    /// Subset of `neutral` where at least one side had no labelled content.
    pub unknown: u64,
}

impl PairCounts {
    fn add(&mut self, homogeneity: f64, unknown: bool, weight: u64) {
        if homogeneity > 0.0 {
            self.like_minded += weight;
        } else if homogeneity < 0.0 {
            self.cross_cutting += weight;
        } else {
            self.neutral += weight;
            if unknown {
                self.unknown += weight;
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.like_minded + self.cross_cutting + self.neutral
    }

    /// `(like_minded, cross_cutting, neutral)` shares; zeros when empty.
    pub fn fractions(&self) -> (f64, f64, f64) {
        let t = self.total();
        if t == 0 {
            return (0.0, 0.0, 0.0);
        }
        let t = t as f64;
        (self.like_minded as f64 / t, self.cross_cutting as f64 / t, self.neutral as f64 / t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EchoChamberStats {
    /// Headline fractions, counted over (user, partner) instances.
    pub fraction_like_minded: f64,
    pub fraction_cross_cutting: f64,
    pub fraction_neutral_pairs: f64,
    /// Each undirected edge contributes one instance per endpoint.
    pub instances: PairCounts,
    /// Each undirected edge once.
    pub edges: PairCounts,
    /// Each edge weighted by its reply events.
    pub events: PairCounts,
    pub mean_interaction_polarity_cdf: Vec<(f64, f64)>,
    pub mean_edge_homogeneity_cdf: Vec<(f64, f64)>,
}

/// Pools echo-chamber tallies over any number of period graphs.
#[derive(Clone, Debug, Default)]
pub struct EchoAccumulator {
    instances: PairCounts,
    edges: PairCounts,
    events: PairCounts,
    mean_interaction: Vec<f64>,
    mean_homogeneity: Vec<f64>,
}

impl EchoAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// `views` must be `node_views(graph, ..)` for the same graph.
    pub fn add(&mut self, graph: &InteractionGraph, views: &[NodePolarityView]) {
        debug_assert_eq!(graph.n_nodes(), views.len());
        for (v, view) in views.iter().enumerate() {
            let nbrs = graph.neighbours(v);
            for (k, &h) in view.edge_homogeneities.iter().enumerate() {
                let u = nbrs[k] as usize;
                let unknown = !view.labelled || !views[u].labelled;
                self.instances.add(h, unknown, 1);
                if u > v {
                    self.edges.add(h, unknown, 1);
                    self.events.add(h, unknown, u64::from(graph.weights(v)[k]));
                }
            }
            if let Some(m) = view.mean_interaction_polarity {
                self.mean_interaction.push(m);
            }
            if let Some(m) = view.mean_edge_homogeneity {
                self.mean_homogeneity.push(m);
            }
        }
    }

    pub fn finish(self) -> EchoChamberStats {
        let (like, cross, neutral) = self.instances.fractions();
        EchoChamberStats {
            fraction_like_minded: like,
            fraction_cross_cutting: cross,
            fraction_neutral_pairs: neutral,
            instances: self.instances,
            edges: self.edges,
            events: self.events,
            mean_interaction_polarity_cdf: stats::ecdf(self.mean_interaction),
            mean_edge_homogeneity_cdf: stats::ecdf(self.mean_homogeneity),
        }
    }
}

/// Echo-chamber statistics for a single period graph.
pub fn echo_chamber_stats(graph: &InteractionGraph, views: &[NodePolarityView]) -> EchoChamberStats {
    let mut acc = EchoAccumulator::new();
    acc.add(graph, views);
    acc.finish()
}
