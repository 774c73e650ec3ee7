//! Artefact writers. Users appear under their original names.

use std::path::Path;

use polaris_core::corpus::{temporal_density, Kind};
use polaris_core::dynamics::{
    presence_patterns, prolific_retention_effect, prolific_users, retention_next_period, PatternTable,
    ProlificEffect, RetentionHeatmap, RetentionRule,
};
use polaris_core::features::FeatureTable;
use polaris_core::network::{
    triad_census, EchoAccumulator, EchoChamberStats, NodePolarityView, PairCounts, TriadCensus, TRIAD_CLASSES,
};
use polaris_core::polarity::{polarity_distribution, PolarityDistribution};
use polaris_core::{Corpus, IngestReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::Analysis;
use crate::error::Result;
use crate::output::{num, opt, write_json, CsvOut};

#[derive(Serialize)]
pub struct PeriodSummary {
    pub index: usize,
    pub name: String,
    pub start_utc: i64,
    pub end_utc: i64,
    pub posts: u64,
    pub comments: u64,
}

#[derive(Serialize)]
pub struct IngestSummary {
    pub report: IngestReport,
    pub submissions: usize,
    pub posts: usize,
    pub comments: usize,
    pub users: usize,
    pub threads: usize,
    pub unassigned: usize,
    pub periods: Vec<PeriodSummary>,
}

pub fn ingest_summary(corpus: &Corpus) -> IngestSummary {
    let posts = corpus.submissions().iter().filter(|s| s.kind == Kind::Post).count();
    let counts = corpus.period_counts();
    IngestSummary {
        report: corpus.report().clone(),
        submissions: corpus.len(),
        posts,
        comments: corpus.len() - posts,
        users: corpus.users().len(),
        threads: corpus.threads().len(),
        unassigned: corpus.unassigned(),
        periods: corpus
            .schedule()
            .periods()
            .iter()
            .zip(counts)
            .map(|(p, c)| PeriodSummary {
                index: p.index,
                name: p.name.clone(),
                start_utc: p.start_utc,
                end_utc: p.end_utc,
                posts: c.posts,
                comments: c.comments,
            })
            .collect(),
    }
}

pub fn write_density(path: &Path, corpus: &Corpus, bucket: i64) -> Result<()> {
    let rows = temporal_density(corpus, bucket)?;
    let mut out = CsvOut::create(path, &["bucket_start", "posts", "comments"])?;
    for r in rows {
        out.row([r.bucket_start.to_string(), r.posts.to_string(), r.comments.to_string()])?;
    }
    out.finish()
}

pub fn write_stats(path: &Path, a: &Analysis) -> Result<()> {
    let mut out = CsvOut::create(path, &["user_id", "period", "P", "N", "A", "activity", "polarity"])?;
    for s in &a.stats {
        out.row([
            a.corpus.user_name(s.user).to_string(),
            s.period.to_string(),
            s.pro.to_string(),
            s.neutral.to_string(),
            s.anti.to_string(),
            s.activity.to_string(),
            num(s.polarity),
        ])?;
    }
    out.finish()
}

pub fn distribution(a: &Analysis, bins: usize) -> PolarityDistribution {
    polarity_distribution(&a.stats, bins)
}

pub fn write_edges(path: &Path, a: &Analysis) -> Result<()> {
    let mut out = CsvOut::create(path, &["period", "user_a", "user_b", "weight"])?;
    for (p, g) in a.graphs.iter().enumerate() {
        for (u, v, w) in g.edges() {
            out.row([p.to_string(), a.corpus.user_name(u).into(), a.corpus.user_name(v).into(), w.to_string()])?;
        }
    }
    out.finish()
}

pub fn write_node_metrics(path: &Path, a: &Analysis, views: &[Vec<NodePolarityView>]) -> Result<()> {
    let mut out = CsvOut::create(
        path,
        &[
            "period",
            "user_id",
            "degree",
            "polarity",
            "labelled",
            "mean_interaction_polarity",
            "mean_edge_homogeneity",
            "unknown_partners",
        ],
    )?;
    for (p, vs) in views.iter().enumerate() {
        for v in vs {
            out.row([
                p.to_string(),
                a.corpus.user_name(v.user).into(),
                v.degree().to_string(),
                num(v.polarity),
                v.labelled.to_string(),
                opt(v.mean_interaction_polarity),
                opt(v.mean_edge_homogeneity),
                v.unknown_partners.to_string(),
            ])?;
        }
    }
    out.finish()
}

#[derive(Serialize)]
pub struct EchoPeriod {
    pub period: usize,
    pub fraction_like_minded: f64,
    pub fraction_cross_cutting: f64,
    pub fraction_neutral_pairs: f64,
    pub instances: PairCounts,
}

#[derive(Serialize)]
pub struct EchoSummary {
    pub fraction_like_minded: f64,
    pub fraction_cross_cutting: f64,
    pub fraction_neutral_pairs: f64,
    pub instances: PairCounts,
    pub edges: PairCounts,
    pub events: PairCounts,
    pub periods: Vec<EchoPeriod>,
}

pub fn echo(a: &Analysis, views: &[Vec<NodePolarityView>]) -> (EchoSummary, EchoChamberStats) {
    let mut pooled = EchoAccumulator::new();
    let mut periods = Vec::with_capacity(views.len());
    for (p, (g, v)) in a.graphs.iter().zip(views).enumerate() {
        let mut one = EchoAccumulator::new();
        one.add(g, v);
        let s = one.finish();
        periods.push(EchoPeriod {
            period: p,
            fraction_like_minded: s.fraction_like_minded,
            fraction_cross_cutting: s.fraction_cross_cutting,
            fraction_neutral_pairs: s.fraction_neutral_pairs,
            instances: s.instances,
        });
        pooled.add(g, v);
    }
    let all = pooled.finish();
    let summary = EchoSummary {
        fraction_like_minded: all.fraction_like_minded,
        fraction_cross_cutting: all.fraction_cross_cutting,
        fraction_neutral_pairs: all.fraction_neutral_pairs,
        instances: all.instances,
        edges: all.edges,
        events: all.events,
        periods,
    };
    (summary, all)
}

pub fn write_echo_cdf(path: &Path, stats: &EchoChamberStats) -> Result<()> {
    let mut out = CsvOut::create(path, &["series", "value", "cumulative_fraction"])?;
    for (name, cdf) in [
        ("mean_interaction_polarity", &stats.mean_interaction_polarity_cdf),
        ("mean_edge_homogeneity", &stats.mean_edge_homogeneity_cdf),
    ] {
        for (v, f) in cdf {
            out.row([name.to_string(), num(*v), num(*f)])?;
        }
    }
    out.finish()
}

pub fn triads(a: &Analysis) -> Vec<TriadCensus> {
    let per = a.period_stats();
    a.graphs.par_iter().zip(per.par_iter()).map(|(g, s)| triad_census(g, s)).collect()
}

pub fn write_triads(path: &Path, census: &[TriadCensus]) -> Result<()> {
    let mut out = CsvOut::create(path, &["period", "class", "count"])?;
    let mut total = TriadCensus::default();
    for (p, c) in census.iter().enumerate() {
        total.merge(c);
        for (k, class) in TRIAD_CLASSES.iter().enumerate() {
            out.row([p.to_string(), class.to_string(), c.counts[k].to_string()])?;
        }
    }
    for (k, class) in TRIAD_CLASSES.iter().enumerate() {
        out.row(["all".to_string(), class.to_string(), total.counts[k].to_string()])?;
    }
    out.finish()
}

pub fn write_patterns(path: &Path, table: &PatternTable) -> Result<()> {
    let mut out = CsvOut::create(path, &["pattern", "users", "fraction"])?;
    for r in &table.rows {
        out.row([r.pattern.clone(), r.users.to_string(), num(r.fraction)])?;
    }
    out.finish()
}

pub fn patterns(a: &Analysis) -> PatternTable {
    presence_patterns(&a.matrix())
}

pub fn retention(a: &Analysis, activity_bins: usize, degree_bins: usize, rule: RetentionRule) -> RetentionHeatmap {
    retention_next_period(&a.matrix(), &a.stats, &a.graphs, activity_bins, degree_bins, rule)
}

pub fn write_retention(path: &Path, h: &RetentionHeatmap) -> Result<()> {
    let mut out = CsvOut::create(
        path,
        &[
            "activity_bin",
            "degree_bin",
            "activity_pct_lo",
            "activity_pct_hi",
            "degree_pct_lo",
            "degree_pct_hi",
            "n_users",
            "retained",
            "fraction_retained",
        ],
    )?;
    for c in &h.cells {
        out.row([
            c.activity_bin.to_string(),
            c.degree_bin.to_string(),
            num(c.activity_range.0),
            num(c.activity_range.1),
            num(c.degree_range.0),
            num(c.degree_range.1),
            c.n_users.to_string(),
            c.retained.to_string(),
            opt(c.fraction_retained),
        ])?;
    }
    out.finish()
}

#[derive(Serialize)]
pub struct ProlificPeriod {
    pub period: usize,
    pub activity_threshold: f64,
    pub degree_threshold: f64,
    pub prolific_users: usize,
    pub by_activity: u64,
    pub by_degree: u64,
    pub both: u64,
    pub overlap_fraction: Option<f64>,
}

#[derive(Serialize)]
pub struct ProlificReport {
    pub percentile: f64,
    pub rule: RetentionRule,
    pub periods: Vec<ProlificPeriod>,
    pub effect: ProlificEffect,
}

pub fn prolific(a: &Analysis, percentile: f64, rule: RetentionRule) -> ProlificReport {
    let sets = prolific_users(&a.stats, &a.graphs, percentile);
    let effect = prolific_retention_effect(&a.matrix(), &a.graphs, &sets, rule);
    ProlificReport {
        percentile,
        rule,
        periods: sets
            .iter()
            .map(|s| ProlificPeriod {
                period: s.period,
                activity_threshold: s.activity_threshold,
                degree_threshold: s.degree_threshold,
                prolific_users: s.users.len(),
                by_activity: s.by_activity,
                by_degree: s.by_degree,
                both: s.both,
                overlap_fraction: s.overlap_fraction(),
            })
            .collect(),
        effect,
    }
}

pub fn write_features(path: &Path, corpus: &Corpus, table: &FeatureTable) -> Result<()> {
    let mut header: Vec<&str> = vec!["user_id", "period"];
    header.extend(table.names.iter().map(String::as_str));
    let mut out = CsvOut::create(path, &header)?;
    let mut fields: Vec<String> = Vec::with_capacity(header.len());
    for r in &table.rows {
        fields.clear();
        fields.push(corpus.user_name(r.user).to_string());
        fields.push(r.period.to_string());
        fields.extend(r.values.iter().map(|v| opt(*v)));
        out.row(&fields)?;
    }
    out.finish()
}

pub fn write_distribution(path: &Path, d: &PolarityDistribution) -> Result<()> {
    write_json(path, d)
}
