//! Synthetic corpora and fixtures with planted structure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use polaris_core::network::InteractionGraph;
use polaris_core::polarity::UserPeriodStats;
use polaris_core::predict::{Dataset, Task};
use polaris_core::rng;
use polaris_core::{RawSubmission, Stance, UserId};
use rand::Rng;
use rand_distr::{Distribution, Normal, Pareto};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::periods::PeriodEntry;

/// 2015-11-01T00:00:00Z
pub const DEFAULT_START: i64 = 1_446_336_000;
const DAY: i64 = 86_400;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub submissions: usize,
    pub users: usize,
    pub periods: usize,
    pub period_days: i64,
    pub post_fraction: f64,
    pub deleted_fraction: f64,
    /// Share of submissions with a predicted label.
    pub predicted_fraction: f64,
    /// Share of submissions with a gold label.
    pub gold_fraction: f64,
    /// Probability that a predicted label equals the true one.
    pub predicted_accuracy: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            submissions: 100_000,
            users: 10_000,
            periods: 27,
            period_days: 70,
            post_fraction: 0.065,
            deleted_fraction: 0.02,
            predicted_fraction: 0.95,
            gold_fraction: 0.01,
            predicted_accuracy: 0.8,
            seed: 0,
        }
    }
}

pub struct SynthCorpus {
    pub records: Vec<RawSubmission>,
    pub periods: Vec<PeriodEntry>,
    pub gold: Vec<(String, Stance)>,
    pub predicted: Vec<(String, Stance)>,
}

fn contiguous_periods(n: usize, start: i64, days: i64) -> Vec<PeriodEntry> {
    (0..n)
        .map(|k| PeriodEntry {
            name: format!("period-{:02}", k + 1),
            start_utc: start + k as i64 * days * DAY,
            end_utc: start + (k as i64 + 1) * days * DAY,
        })
        .collect()
}

// Stance mix [pro, anti, neutral] for each leaning.
const MIX: [[f64; 3]; 3] = [[0.45, 0.10, 0.45], [0.08, 0.50, 0.42], [0.04, 0.06, 0.90]];

fn draw_stance(rng: &mut impl Rng, mix: &[f64; 3]) -> Stance {
    let x: f64 = rng.random();
    if x < mix[0] {
        Stance::Pro
    } else if x < mix[0] + mix[1] {
        Stance::Anti
    } else {
        Stance::Neutral
    }
}

/// A reply forest over `config.periods` contiguous periods. Users have
/// heavy-tailed activity, a leaning that shapes their stance mix, and short,
/// gappy lifetimes, so most appear in a single period.
pub fn generate(config: &SynthConfig) -> SynthCorpus {
    let n_periods = config.periods.max(1);
    let n_users = config.users.max(1);
    let mut rng = rng::stream(config.seed, "synth-users", 0);
    let pareto = Pareto::<f64>::new(1.0, 1.4).expect("valid pareto");
    let mut cumulative = Vec::with_capacity(n_users);
    let mut leaning = Vec::with_capacity(n_users);
    let mut active: Vec<Vec<u16>> = Vec::with_capacity(n_users);
    let mut total = 0.0;
    for _ in 0..n_users {
        total += pareto.sample(&mut rng).min(5_000.0);
        cumulative.push(total);
        let x: f64 = rng.random();
        leaning.push(if x < 0.2 { 0 } else if x < 0.5 { 1 } else { 2 });
        let first = rng.random_range(0..n_periods);
        let mut periods = vec![first as u16];
        let mut p = first;
        while rng.random_bool(0.45) {
            p += if rng.random_bool(0.8) { 1 } else { 2 };
            if p >= n_periods {
                break;
            }
            periods.push(p as u16);
        }
        active.push(periods);
    }

    // slots[p] = authors of the submissions falling in period p
    let mut slots: Vec<Vec<u32>> = vec![Vec::new(); n_periods];
    let mut rng = rng::stream(config.seed, "synth-slots", 0);
    for _ in 0..config.submissions {
        let x = rng.random::<f64>() * total;
        let u = cumulative.partition_point(|&c| c <= x).min(n_users - 1);
        let ps = &active[u];
        let p = ps[rng.random_range(0..ps.len())] as usize;
        slots[p].push(u as u32);
    }

    let periods = contiguous_periods(n_periods, DEFAULT_START, config.period_days);
    let mut records = Vec::with_capacity(config.submissions);
    let mut gold = Vec::new();
    let mut predicted = Vec::new();
    let mut next_id: u64 = 0;
    for (p, authors) in slots.into_iter().enumerate() {
        let mut rng = rng::stream(config.seed, "synth-period", p as u64);
        let span = periods[p].end_utc - periods[p].start_utc;
        let mut times: Vec<i64> = (0..authors.len()).map(|_| periods[p].start_utc + rng.random_range(0..span)).collect();
        times.sort_unstable();
        // (id, thread root id) of earlier submissions in this period
        let mut earlier: Vec<(usize, usize)> = Vec::with_capacity(authors.len());
        for (k, &u) in authors.iter().enumerate() {
            let id = format!("{next_id:x}");
            next_id += 1;
            let is_post = earlier.is_empty() || rng.random_bool(config.post_fraction);
            let (link_id, parent_id) = if is_post {
                earlier.push((records.len(), records.len()));
                (None, None)
            } else {
                let (parent, root) = earlier[rng.random_range(0..earlier.len())];
                earlier.push((records.len(), root));
                let parent_rec: &RawSubmission = &records[parent];
                let prefix = if parent_rec.link_id.is_none() { "t3_" } else { "t1_" };
                (Some(format!("t3_{}", records[root].id)), Some(format!("{prefix}{}", parent_rec.id)))
            };
            let author = if rng.random_bool(config.deleted_fraction) {
                "[deleted]".to_string()
            } else {
                format!("user{u}")
            };
            let truth = draw_stance(&mut rng, &MIX[leaning[u as usize]]);
            if rng.random_bool(config.gold_fraction) {
                gold.push((id.clone(), truth));
            }
            if rng.random_bool(config.predicted_fraction) {
                let label = if rng.random_bool(config.predicted_accuracy) {
                    truth
                } else {
                    Stance::ALL[rng.random_range(0..3)]
                };
                predicted.push((id.clone(), label));
            }
            records.push(RawSubmission {
                id,
                author,
                created_utc: times[k],
                body: String::new(),
                link_id,
                parent_id,
            });
        }
    }
    SynthCorpus { records, periods, gold, predicted }
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    id: &'a str,
    author: &'a str,
    created_utc: i64,
    body: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    link_id: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parent_id: Option<&'a str>,
}

pub fn write_jsonl(path: &Path, records: &[RawSubmission]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io("synth", path, e))?;
    let mut w = BufWriter::new(file);
    for r in records {
        let rec = JsonRecord {
            id: &r.id,
            author: &r.author,
            created_utc: r.created_utc,
            body: &r.body,
            link_id: r.link_id.as_deref(),
            parent_id: r.parent_id.as_deref(),
        };
        serde_json::to_writer(&mut w, &rec).map_err(|e| Error::Internal(e.to_string()))?;
        w.write_all(b"\n").map_err(|e| Error::io("synth", path, e))?;
    }
    w.flush().map_err(|e| Error::io("synth", path, e))
}

pub fn write_labels(path: &Path, labels: &[(String, Stance)]) -> Result<()> {
    let mut out = crate::output::CsvOut::create(path, &["submission_id", "label"])?;
    for (id, s) in labels {
        out.row([id.as_str(), s.as_str()])?;
    }
    out.finish()
}

/// Write `corpus.jsonl`, `periods.json`, `gold.csv` and `predicted.csv` into `dir`.
pub fn write_dir(dir: &Path, corpus: &SynthCorpus) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io("synth", dir, e))?;
    write_jsonl(&dir.join("corpus.jsonl"), &corpus.records)?;
    crate::output::write_json(&dir.join("periods.json"), &corpus.periods)?;
    write_labels(&dir.join("gold.csv"), &corpus.gold)?;
    write_labels(&dir.join("predicted.csv"), &corpus.predicted)
}

/// Users whose presence follows planted patterns such as `"101"`. Each user
/// writes one or two posts in every period marked `1`, at a random offset.
pub fn pattern_cohort(planted: &[(&str, usize)], n_periods: usize, seed: u64) -> (Vec<RawSubmission>, Vec<PeriodEntry>) {
    let periods = contiguous_periods(n_periods, DEFAULT_START, 7);
    let mut rng = rng::stream(seed, "pattern-cohort", 0);
    let mut records = Vec::new();
    let mut user = 0usize;
    for &(pattern, count) in planted {
        let len = pattern.len();
        assert!(len <= n_periods && pattern.starts_with('1') && pattern.ends_with('1'), "bad pattern {pattern:?}");
        for _ in 0..count {
            let offset = rng.random_range(0..=n_periods - len);
            for (j, c) in pattern.chars().enumerate() {
                if c != '1' {
                    continue;
                }
                let p = &periods[offset + j];
                for _ in 0..rng.random_range(1..=2) {
                    records.push(RawSubmission {
                        id: format!("s{}", records.len()),
                        author: format!("u{user}"),
                        created_utc: rng.random_range(p.start_utc..p.end_utc),
                        body: String::new(),
                        link_id: None,
                        parent_id: None,
                    });
                }
            }
            user += 1;
        }
    }
    (records, periods)
}

/// Two communities of `n_nodes / 2` with polarities of opposite sign and
/// `|polarity| >= 0.05`. Each of `n_edges` distinct edges joins two members of
/// the same community with probability `homophily`.
pub fn planted_homophily(
    n_nodes: usize,
    n_edges: usize,
    homophily: f64,
    seed: u64,
) -> (InteractionGraph, Vec<UserPeriodStats>) {
    let mut rng = rng::stream(seed, "homophily", 0);
    let half = n_nodes / 2;
    let stats: Vec<UserPeriodStats> = (0..n_nodes)
        .map(|u| {
            let magnitude: f64 = rng.random_range(0.05..=1.0);
            let polarity = if u < half { magnitude } else { -magnitude };
            UserPeriodStats { user: UserId(u as u32), period: 0, pro: 1, neutral: 0, anti: 0, activity: 1, polarity }
        })
        .collect();
    let mut seen = std::collections::HashSet::with_capacity(n_edges);
    let mut events = Vec::with_capacity(n_edges);
    while events.len() < n_edges {
        let a = rng.random_range(0..n_nodes);
        let same = rng.random_bool(homophily);
        let in_first = (a < half) == same;
        let b = if in_first { rng.random_range(0..half) } else { rng.random_range(half..n_nodes) };
        if a == b || !seen.insert((a.min(b), a.max(b))) {
            continue;
        }
        events.push((UserId(a as u32), UserId(b as u32)));
    }
    let nodes: Vec<UserId> = (0..n_nodes as u32).map(UserId).collect();
    (InteractionGraph::from_events(0, events, &nodes), stats)
}

/// Regression rows where next-period polarity is the current one plus
/// Gaussian noise, clamped to [-1, 1], alongside `n_noise` uninformative
/// columns. Each row belongs to its own user.
pub fn polarity_cohort(n_rows: usize, n_noise: usize, sigma: f64, seed: u64) -> Dataset {
    let mut rng = rng::stream(seed, "polarity-cohort", 0);
    let noise = Normal::new(0.0, sigma).expect("valid sigma");
    let mut names = vec!["current_polarity".to_string()];
    names.extend((0..n_noise).map(|k| format!("noise_{k}")));
    let mut d = Dataset::new(Task::Polarity, names);
    let mut row = vec![0.0; n_noise + 1];
    for i in 0..n_rows {
        // a third of users sit exactly at zero, as neutral posters do
        let current = if rng.random_bool(1.0 / 3.0) { 0.0 } else { rng.random_range(-1.0..=1.0) };
        row[0] = current;
        for v in &mut row[1..] {
            *v = rng.random_range(-1.0..=1.0);
        }
        let target = (current + noise.sample(&mut rng)).clamp(-1.0, 1.0);
        d.push((UserId(i as u32), 0), &row, target);
    }
    d
}
