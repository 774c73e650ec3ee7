//! Per-(user, period) feature vectors for the prediction harness.
//!
//! Besides activity, degree and the polarity features, each row carries the
//! discussion-composition family `pS-y%`: for stance `S` in {B (pro), A (anti),
//! N (neutral)}, the `y`-th percentile (y in 0, 25, 50, 75, 100) of stance-`S`
//! saturation over the threads the user took part in that period. Saturation of
//! a thread is the share of its labelled in-period submissions carrying `S`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::Serialize;

use crate::corpus::{Corpus, ThreadId, UserId};
use crate::network::{node_views, InteractionGraph};
use crate::polarity::{by_period, UserPeriodStats};
use crate::stats;

pub const SATURATION_PERCENTILES: [u32; 5] = [0, 25, 50, 75, 100];
pub const STANCE_CODES: [&str; 3] = ["B", "A", "N"];
pub const BASE_FEATURES: [&str; 5] =
    ["activity", "degree", "current_polarity", "mean_interaction_polarity", "mean_edge_homogeneity"];

/// Column names in output order, before any external columns.
pub fn base_feature_names() -> Vec<String> {
    let mut names: Vec<String> = BASE_FEATURES.iter().map(|s| String::from(*s)).collect();
    for s in STANCE_CODES {
        for y in SATURATION_PERCENTILES {
            names.push(format!("p{s}-{y}%"));
        }
    }
    names
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeatureRow {
    pub user: UserId,
    pub period: usize,
    /// `None` marks a missing value.
    pub values: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeatureTable {
    pub names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Row for `(user, period)`; rows are sorted by `(period, user)`.
    pub fn find(&self, user: UserId, period: usize) -> Option<&FeatureRow> {
        self.rows
            .binary_search_by(|r| (r.period, r.user).cmp(&(period, user)))
            .ok()
            .map(|k| &self.rows[k])
    }
}

/// Externally computed numeric columns, joined on `(user, period)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExternalFeatures {
    pub names: Vec<String>,
    pub rows: BTreeMap<(UserId, usize), Vec<Option<f64>>>,
}

/// Stance shares `[pro, anti, neutral]` of one thread's labelled submissions in
/// `period`, or `None` if none are labelled.
pub fn discussion_saturation(corpus: &Corpus, thread: ThreadId, period: usize) -> Option<[f64; 3]> {
    let mut counts = [0u64; 3];
    for &i in corpus.in_period(period) {
        let s = &corpus.submissions()[i as usize];
        if s.thread == thread {
            if let Some(st) = s.stance {
                counts[st.index()] += 1;
            }
        }
    }
    shares(counts)
}

fn shares(counts: [u64; 3]) -> Option<[f64; 3]> {
    let total: u64 = counts.iter().sum();
    (total > 0).then(|| counts.map(|c| c as f64 / total as f64))
}

fn percentiles_of(saturations: &[[f64; 3]]) -> Option<[f64; 15]> {
    if saturations.is_empty() {
        return None;
    }
    let mut out = [0.0; 15];
    let mut col: Vec<f64> = Vec::with_capacity(saturations.len());
    for s in 0..3 {
        col.clear();
        col.extend(saturations.iter().map(|sat| sat[s]));
        stats::sort_f64(&mut col);
        for (k, y) in SATURATION_PERCENTILES.iter().enumerate() {
            out[s * 5 + k] = stats::percentile_sorted(&col, f64::from(*y) / 100.0).expect("non-empty");
        }
    }
    Some(out)
}

/// The 15 `pS-y%` values for one user in one period, ordered B, A, N and then
/// by percentile. `None` when the user joined no thread with labelled content.
pub fn saturation_percentiles(corpus: &Corpus, user: UserId, period: usize) -> Option<[f64; 15]> {
    let mut threads: Vec<ThreadId> = corpus
        .in_period(period)
        .iter()
        .map(|&i| &corpus.submissions()[i as usize])
        .filter(|s| s.author == Some(user))
        .map(|s| s.thread)
        .collect();
    threads.sort_unstable();
    threads.dedup();
    let sats: Vec<[f64; 3]> =
        threads.into_iter().filter_map(|t| discussion_saturation(corpus, t, period)).collect();
    percentiles_of(&sats)
}

// Bulk version of `saturation_percentiles` for every user active in `period`,
// sorted by user.
fn period_saturations(corpus: &Corpus, period: usize) -> Vec<(UserId, Option<[f64; 15]>)> {
    let subs = corpus.submissions();
    let idx = corpus.in_period(period);
    let mut thread_codes: Vec<(u32, u8)> = idx
        .iter()
        .filter_map(|&i| subs[i as usize].stance.map(|st| (subs[i as usize].thread.0, st.index() as u8)))
        .collect();
    thread_codes.sort_unstable();
    let mut thread_sat: Vec<(u32, [f64; 3])> = Vec::new();
    let mut k = 0;
    while k < thread_codes.len() {
        let t = thread_codes[k].0;
        let mut counts = [0u64; 3];
        while k < thread_codes.len() && thread_codes[k].0 == t {
            counts[thread_codes[k].1 as usize] += 1;
            k += 1;
        }
        thread_sat.push((t, shares(counts).expect("at least one label")));
    }

    let mut user_threads: Vec<(u32, u32)> = idx
        .iter()
        .filter_map(|&i| subs[i as usize].author.map(|u| (u.0, subs[i as usize].thread.0)))
        .collect();
    user_threads.sort_unstable();
    user_threads.dedup();

    let mut out = Vec::new();
    let mut sats: Vec<[f64; 3]> = Vec::new();
    let mut k = 0;
    while k < user_threads.len() {
        let u = user_threads[k].0;
        sats.clear();
        while k < user_threads.len() && user_threads[k].0 == u {
            let t = user_threads[k].1;
            if let Ok(j) = thread_sat.binary_search_by_key(&t, |x| x.0) {
                sats.push(thread_sat[j].1);
            }
            k += 1;
        }
        out.push((UserId(u), percentiles_of(&sats)));
    }
    out
}

/// One row per stats record, in stats order (`(period, user)`).
pub fn extract(
    corpus: &Corpus,
    stats: &[UserPeriodStats],
    graphs: &[InteractionGraph],
    external: Option<&ExternalFeatures>,
) -> FeatureTable {
    let mut names = base_feature_names();
    if let Some(ext) = external {
        names.extend(ext.names.iter().cloned());
    }
    let n_ext = external.map_or(0, |e| e.names.len());
    let mut rows = Vec::with_capacity(stats.len());
    for (p, ps) in by_period(stats, corpus.n_periods()).into_iter().enumerate() {
        if ps.is_empty() {
            continue;
        }
        let sat = period_saturations(corpus, p);
        let graph = &graphs[p];
        let views = node_views(graph, ps);
        for s in ps {
            let mut values: Vec<Option<f64>> = Vec::with_capacity(names.len());
            values.push(Some(s.activity as f64));
            values.push(Some(graph.degree_of(s.user) as f64));
            values.push(Some(s.polarity));
            let view = graph.local(s.user).map(|v| &views[v]);
            values.push(view.and_then(|v| v.mean_interaction_polarity));
            values.push(view.and_then(|v| v.mean_edge_homogeneity));
            let pct = sat
                .binary_search_by_key(&s.user, |x| x.0)
                .ok()
                .and_then(|j| sat[j].1);
            match pct {
                Some(v) => values.extend(v.iter().map(|x| Some(*x))),
                None => values.extend(core::iter::repeat_n(None, 15)),
            }
            if let Some(ext) = external {
                match ext.rows.get(&(s.user, p)) {
                    Some(v) => values.extend(v.iter().copied().chain(core::iter::repeat(None)).take(n_ext)),
                    None => values.extend(core::iter::repeat_n(None, n_ext)),
                }
            }
            rows.push(FeatureRow { user: s.user, period: p, values });
        }
    }
    FeatureTable { names, rows }
}
