//! Survivorship analytics: who is present in which period, who returns, and
//! whether contact with prolific users predicts returning.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, UserId};
use crate::features::FeatureTable;
use crate::network::InteractionGraph;
use crate::polarity::UserPeriodStats;
use crate::special::chi_square_sf;
use crate::stats;

/// What counts as "retained" after period `p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum RetentionRule {
    /// Present in `p + 1`.
    #[default]
    NextPeriod,
    /// Present in any period after `p`.
    AnyFuture,
}

/// Users × periods presence bits. Row `u` is `UserId(u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresenceMatrix {
    n_users: usize,
    n_periods: usize,
    cells: Vec<bool>,
}

impl PresenceMatrix {
    pub fn new(n_users: usize, n_periods: usize) -> Self {
        Self { n_users, n_periods, cells: vec![false; n_users * n_periods] }
    }

    /// Presence from authored submissions. Deleted authors are ignored.
    pub fn from_corpus(corpus: &Corpus) -> Self {
        let mut m = Self::new(corpus.users().len(), corpus.n_periods());
        for p in 0..corpus.n_periods() {
            for &i in corpus.in_period(p) {
                if let Some(u) = corpus.submissions()[i as usize].author {
                    m.set(u, p, true);
                }
            }
        }
        m
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn n_periods(&self) -> usize {
        self.n_periods
    }

    pub fn set(&mut self, user: UserId, period: usize, present: bool) {
        self.cells[user.0 as usize * self.n_periods + period] = present;
    }

    pub fn get(&self, user: UserId, period: usize) -> bool {
        period < self.n_periods && self.cells[user.0 as usize * self.n_periods + period]
    }

    pub fn row(&self, user: UserId) -> &[bool] {
        let s = user.0 as usize * self.n_periods;
        &self.cells[s..s + self.n_periods]
    }

    /// Whether `user`, present in `period`, counts as retained under `rule`.
    pub fn retained(&self, user: UserId, period: usize, rule: RetentionRule) -> bool {
        match rule {
            RetentionRule::NextPeriod => self.get(user, period + 1),
            RetentionRule::AnyFuture => self.row(user)[period + 1..].iter().any(|&b| b),
        }
    }

    /// Presence trimmed to the first..=last active period, e.g. `"101"`.
    pub fn pattern(&self, user: UserId) -> Option<String> {
        let row = self.row(user);
        let first = row.iter().position(|&b| b)?;
        let last = row.iter().rposition(|&b| b)?;
        Some(row[first..=last].iter().map(|&b| if b { '1' } else { '0' }).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternRow {
    pub pattern: String,
    pub users: u64,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternTable {
    /// Users present in at least one period.
    pub n_users: u64,
    pub single_period_fraction: f64,
    /// Sorted by descending count, then pattern.
    pub rows: Vec<PatternRow>,
}

pub fn presence_patterns(matrix: &PresenceMatrix) -> PatternTable {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for u in 0..matrix.n_users() {
        if let Some(p) = matrix.pattern(UserId(u as u32)) {
            *counts.entry(p).or_default() += 1;
        }
    }
    let n: u64 = counts.values().sum();
    let single = counts.get("1").copied().unwrap_or(0);
    let mut rows: Vec<PatternRow> = counts
        .into_iter()
        .map(|(pattern, users)| PatternRow { pattern, users, fraction: users as f64 / n.max(1) as f64 })
        .collect();
    rows.sort_by(|a, b| b.users.cmp(&a.users).then_with(|| a.pattern.cmp(&b.pattern)));
    PatternTable { n_users: n, single_period_fraction: if n == 0 { 0.0 } else { single as f64 / n as f64 }, rows }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RetentionCell {
    pub activity_bin: usize,
    pub degree_bin: usize,
    /// Percentile range of the bin, in percent.
    pub activity_range: (f64, f64),
    pub degree_range: (f64, f64),
    pub n_users: u64,
    pub retained: u64,
    pub fraction_retained: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RetentionHeatmap {
    pub cells: Vec<RetentionCell>,
    pub n_users: u64,
    pub retained: u64,
    pub pooled_fraction: Option<f64>,
}

/// Within-group percentile of each value in `(0, 1)`, from average ranks.
pub fn percentile_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    stats::average_ranks(values).into_iter().map(|r| (r - 0.5) / n).collect()
}

fn bin_of(pct: f64, bins: usize) -> usize {
    (libm::floor(pct * bins as f64) as usize).min(bins - 1)
}

/// Retention after each period, binned by within-period activity and degree
/// percentiles. Only (user, period) pairs with a following period contribute.
pub fn retention_next_period(
    matrix: &PresenceMatrix,
    stats: &[UserPeriodStats],
    graphs: &[InteractionGraph],
    activity_bins: usize,
    degree_bins: usize,
    rule: RetentionRule,
) -> RetentionHeatmap {
    let activity_bins = activity_bins.max(1);
    let degree_bins = degree_bins.max(1);
    let mut n = vec![0u64; activity_bins * degree_bins];
    let mut kept = vec![0u64; activity_bins * degree_bins];
    let n_periods = matrix.n_periods();
    for (p, period_stats) in crate::polarity::by_period(stats, n_periods).into_iter().enumerate() {
        if p + 1 >= n_periods || period_stats.is_empty() {
            continue;
        }
        let activity: Vec<f64> = period_stats.iter().map(|s| s.activity as f64).collect();
        let degree: Vec<f64> =
            period_stats.iter().map(|s| graphs.get(p).map_or(0, |g| g.degree_of(s.user)) as f64).collect();
        let ap = percentile_ranks(&activity);
        let dp = percentile_ranks(&degree);
        for (k, s) in period_stats.iter().enumerate() {
            let cell = bin_of(ap[k], activity_bins) * degree_bins + bin_of(dp[k], degree_bins);
            n[cell] += 1;
            if matrix.retained(s.user, p, rule) {
                kept[cell] += 1;
            }
        }
    }
    let range = |b: usize, bins: usize| (100.0 * b as f64 / bins as f64, 100.0 * (b + 1) as f64 / bins as f64);
    let cells = (0..activity_bins * degree_bins)
        .map(|c| {
            let (a, d) = (c / degree_bins, c % degree_bins);
            RetentionCell {
                activity_bin: a,
                degree_bin: d,
                activity_range: range(a, activity_bins),
                degree_range: range(d, degree_bins),
                n_users: n[c],
                retained: kept[c],
                fraction_retained: (n[c] > 0).then(|| kept[c] as f64 / n[c] as f64),
            }
        })
        .collect();
    let total: u64 = n.iter().sum();
    let retained: u64 = kept.iter().sum();
    RetentionHeatmap {
        cells,
        n_users: total,
        retained,
        pooled_fraction: (total > 0).then(|| retained as f64 / total as f64),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProlificSet {
    pub period: usize,
    pub activity_threshold: f64,
    pub degree_threshold: f64,
    /// Sorted union of both criteria.
    pub users: Vec<UserId>,
    pub by_activity: u64,
    pub by_degree: u64,
    pub both: u64,
}

impl ProlificSet {
    pub fn contains(&self, user: UserId) -> bool {
        self.users.binary_search(&user).is_ok()
    }

    /// Share of prolific users meeting both criteria.
    pub fn overlap_fraction(&self) -> Option<f64> {
        (!self.users.is_empty()).then(|| self.both as f64 / self.users.len() as f64)
    }
}

/// Users at or above the `percentile` of activity or degree within each period.
pub fn prolific_users(stats: &[UserPeriodStats], graphs: &[InteractionGraph], percentile: f64) -> Vec<ProlificSet> {
    crate::polarity::by_period(stats, graphs.len())
        .into_iter()
        .enumerate()
        .map(|(p, ps)| {
            let activity: Vec<f64> = ps.iter().map(|s| s.activity as f64).collect();
            let degree: Vec<f64> = ps.iter().map(|s| graphs[p].degree_of(s.user) as f64).collect();
            let threshold = |v: &[f64]| {
                let mut sorted = v.to_vec();
                stats::sort_f64(&mut sorted);
                stats::percentile_sorted(&sorted, percentile).unwrap_or(f64::INFINITY)
            };
            let (at, dt) = (threshold(&activity), threshold(&degree));
            let mut users = Vec::new();
            let (mut by_activity, mut by_degree, mut both) = (0, 0, 0);
            for (k, s) in ps.iter().enumerate() {
                let a = activity[k] >= at;
                let d = degree[k] >= dt;
                by_activity += u64::from(a);
                by_degree += u64::from(d);
                both += u64::from(a && d);
                if a || d {
                    users.push(s.user);
                }
            }
            ProlificSet { period: p, activity_threshold: at, degree_threshold: dt, users, by_activity, by_degree, both }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: u32,
    pub p_value: f64,
    /// Some expected count fell below 5.
    pub low_expected: bool,
}

/// Pearson chi-square test of independence on an r × c table of counts.
///
/// Returns `None` when a row or column total is zero (expected counts undefined).
pub fn chi_square_test(table: &[Vec<u64>]) -> Option<ChiSquare> {
    let r = table.len();
    let c = table.first()?.len();
    if r < 2 || c < 2 || table.iter().any(|row| row.len() != c) {
        return None;
    }
    let rows: Vec<f64> = table.iter().map(|row| row.iter().sum::<u64>() as f64).collect();
    let cols: Vec<f64> = (0..c).map(|j| table.iter().map(|row| row[j]).sum::<u64>() as f64).collect();
    let total: f64 = rows.iter().sum();
    if rows.iter().chain(&cols).any(|&t| t == 0.0) {
        return None;
    }
    let mut statistic = 0.0;
    let mut low_expected = false;
    for i in 0..r {
        for j in 0..c {
            let expected = rows[i] * cols[j] / total;
            low_expected |= expected < 5.0;
            let d = table[i][j] as f64 - expected;
            statistic += d * d / expected;
        }
    }
    let dof = ((r - 1) * (c - 1)) as u32;
    Some(ChiSquare { statistic, dof, p_value: chi_square_sf(statistic, f64::from(dof)), low_expected })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProlificEffect {
    /// Rows: interacted with a prolific user (yes, no). Columns: retained (yes, no).
    pub table: [[u64; 2]; 2],
    pub retention_with: Option<f64>,
    pub retention_without: Option<f64>,
    pub test: Option<ChiSquare>,
}

/// Pool, over every period with a successor, whether users who interacted with a
/// prolific user in that period were retained more often than those who did not.
pub fn prolific_retention_effect(
    matrix: &PresenceMatrix,
    graphs: &[InteractionGraph],
    prolific: &[ProlificSet],
    rule: RetentionRule,
) -> ProlificEffect {
    let mut table = [[0u64; 2]; 2];
    let n_periods = matrix.n_periods();
    for p in 0..n_periods.saturating_sub(1) {
        let (Some(g), Some(set)) = (graphs.get(p), prolific.get(p)) else { continue };
        let is_prolific: Vec<bool> = g.nodes().iter().map(|&u| set.contains(u)).collect();
        for u in 0..matrix.n_users() {
            let user = UserId(u as u32);
            if !matrix.get(user, p) {
                continue;
            }
            let touched = g
                .local(user)
                .is_some_and(|v| g.neighbours(v).iter().any(|&w| is_prolific[w as usize]));
            let row = usize::from(!touched);
            let col = usize::from(!matrix.retained(user, p, rule));
            table[row][col] += 1;
        }
    }
    let rate = |row: [u64; 2]| {
        let t = row[0] + row[1];
        (t > 0).then(|| row[0] as f64 / t as f64)
    };
    ProlificEffect {
        retention_with: rate(table[0]),
        retention_without: rate(table[1]),
        test: chi_square_test(&[table[0].to_vec(), table[1].to_vec()]),
        table,
    }
}

/// Next-period presence label for each feature row whose period has a successor.
///
/// Returns `(row index, present in p + 1)` pairs in row order.
pub fn presence_classifier_dataset(matrix: &PresenceMatrix, features: &FeatureTable) -> Vec<(usize, bool)> {
    features
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.period + 1 < matrix.n_periods())
        .map(|(k, r)| (k, matrix.get(r.user, r.period + 1)))
        .collect()
}
