//! Per-period interaction graphs and the polarity metrics defined on them.
//!
//! Two users interact in a period when one replied, within that period, to a
//! submission the other authored. Self-replies and deleted authors produce no
//! edge. Edge weights count reply events.

mod echo;
mod graph;
mod triads;

pub use echo::{echo_chamber_stats, node_views, EchoAccumulator, EchoChamberStats, NodePolarityView, PairCounts};
pub use graph::{build_all, build_graph, InteractionGraph};
pub use triads::{count_triangles, node_sign, triad_census, triad_census_with_signs, Sign, TriadCensus, TRIAD_CLASSES};
