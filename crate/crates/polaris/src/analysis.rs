//! Per-corpus derived data shared by the CLI subcommands and the pipeline.

use polaris_core::dynamics::PresenceMatrix;
use polaris_core::features::{self, ExternalFeatures, FeatureTable};
use polaris_core::network::{build_graph, node_views, InteractionGraph, NodePolarityView};
use polaris_core::polarity::{by_period, compute_all, PolarityOptions, UserPeriodStats};
use polaris_core::Corpus;
use rayon::prelude::*;

pub struct Analysis {
    pub corpus: Corpus,
    pub stats: Vec<UserPeriodStats>,
    pub graphs: Vec<InteractionGraph>,
}

impl Analysis {
    pub fn new(corpus: Corpus, options: PolarityOptions) -> Self {
        let stats = compute_all(&corpus, options);
        let graphs = build_graphs(&corpus);
        Self { corpus, stats, graphs }
    }

    pub fn n_periods(&self) -> usize {
        self.corpus.n_periods()
    }

    pub fn period_stats(&self) -> Vec<&[UserPeriodStats]> {
        by_period(&self.stats, self.n_periods())
    }

    /// Node views for every period, in period order.
    pub fn views(&self) -> Vec<Vec<NodePolarityView>> {
        let per = self.period_stats();
        self.graphs.par_iter().zip(per.par_iter()).map(|(g, s)| node_views(g, s)).collect()
    }

    pub fn matrix(&self) -> PresenceMatrix {
        PresenceMatrix::from_corpus(&self.corpus)
    }

    pub fn features(&self, external: Option<&ExternalFeatures>) -> FeatureTable {
        features::extract(&self.corpus, &self.stats, &self.graphs, external)
    }
}

pub fn build_graphs(corpus: &Corpus) -> Vec<InteractionGraph> {
    (0..corpus.n_periods()).into_par_iter().map(|p| build_graph(corpus, p)).collect()
}
