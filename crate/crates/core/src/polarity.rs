//! Continuous polarity per (user, period).
//!
//! Polarity is `P/(P+N) - A/(N+A)` over the user's Pro, Neutral and Anti
//! comment counts, where a fraction with an empty denominator contributes 0.
//! It is `+1` for purely pro users, `-1` for purely anti users and `0` for users
//! who post only neutral content or an equal pro/anti mix.
//!
//! [`PolarityForm::Verbatim`] keeps the uncorrected two-bracket expression
//! `((P-N)/(P+N)+1)/2 - ((N-A)/(N+A)+1)/2`, which scores purely neutral users at
//! `-1`. It exists only so the difference can be shown on real data.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Kind, UserId};
use crate::stance::Stance;
use crate::stats;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolarityForm {
    #[default]
    Corrected,
    Verbatim,
}

/// Which submissions feed the stance counts and activity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarityOptions {
    pub form: PolarityForm,
    /// Count labelled posts in P/N/A as well as comments.
    pub posts_in_stance: bool,
}

impl Default for PolarityOptions {
    fn default() -> Self {
        Self { form: PolarityForm::Corrected, posts_in_stance: false }
    }
}

fn frac(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Polarity from stance counts.
pub fn user_polarity(p: u64, n: u64, a: u64) -> f64 {
    frac(p, p + n) - frac(a, n + a)
}

/// The uncorrected expression, with the same empty-denominator convention.
pub fn user_polarity_verbatim(p: u64, n: u64, a: u64) -> f64 {
    let bracket = |x: u64, y: u64| {
        if x + y == 0 {
            0.0
        } else {
            ((x as f64 - y as f64) / (x + y) as f64 + 1.0) / 2.0
        }
    };
    bracket(p, n) - bracket(n, a)
}

pub fn polarity_with(form: PolarityForm, p: u64, n: u64, a: u64) -> f64 {
    match form {
        PolarityForm::Corrected => user_polarity(p, n, a),
        PolarityForm::Verbatim => user_polarity_verbatim(p, n, a),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UserPeriodStats {
    pub user: UserId,
    pub period: usize,
    pub pro: u64,
    pub neutral: u64,
    pub anti: u64,
    /// Submissions authored in the period, labelled or not.
    pub activity: u64,
    pub polarity: f64,
}

impl UserPeriodStats {
    pub fn labelled(&self) -> u64 {
        self.pro + self.neutral + self.anti
    }

    /// True when no labelled content backs the polarity value.
    pub fn no_labelled_content(&self) -> bool {
        self.labelled() == 0
    }

    /// Arg-max of the stance counts; any tie resolves to Neutral.
    pub fn majority_vote(&self) -> Stance {
        majority_vote_stance(self.pro, self.neutral, self.anti)
    }
}

pub fn majority_vote_stance(p: u64, n: u64, a: u64) -> Stance {
    if p > n && p > a {
        Stance::Pro
    } else if a > n && a > p {
        Stance::Anti
    } else {
        Stance::Neutral
    }
}

/// One record per (user, period) with at least one authored submission, sorted
/// by `(period, user)`. Deleted authors and unassigned submissions are skipped.
pub fn compute_all(corpus: &Corpus, options: PolarityOptions) -> Vec<UserPeriodStats> {
    let mut out = Vec::new();
    let mut rows: Vec<(u32, u8)> = Vec::new();
    for period in 0..corpus.n_periods() {
        rows.clear();
        for &i in corpus.in_period(period) {
            let s = &corpus.submissions()[i as usize];
            let Some(user) = s.author else { continue };
            let counts_stance = s.kind == Kind::Comment || options.posts_in_stance;
            let code = match (counts_stance, s.stance) {
                (true, Some(st)) => st.index() as u8,
                _ => 3,
            };
            rows.push((user.0, code));
        }
        rows.sort_unstable();
        let mut k = 0;
        while k < rows.len() {
            let user = rows[k].0;
            let mut counts = [0u64; 4];
            while k < rows.len() && rows[k].0 == user {
                counts[rows[k].1 as usize] += 1;
                k += 1;
            }
            let [pro, anti, neutral, _] = counts;
            out.push(UserPeriodStats {
                user: UserId(user),
                period,
                pro,
                neutral,
                anti,
                activity: counts.iter().sum(),
                polarity: polarity_with(options.form, pro, neutral, anti),
            });
        }
    }
    out
}

/// Slice `(period, user)`-sorted stats into one run per period.
pub fn by_period(stats: &[UserPeriodStats], n_periods: usize) -> Vec<&[UserPeriodStats]> {
    let mut out = Vec::with_capacity(n_periods);
    let mut start = 0;
    for p in 0..n_periods {
        let end = start + stats[start..].partition_point(|s| s.period == p);
        out.push(&stats[start..end]);
        start = end;
    }
    out
}

/// Look up one user's record in a single period's sorted stats.
pub fn find(period_stats: &[UserPeriodStats], user: UserId) -> Option<&UserPeriodStats> {
    period_stats.binary_search_by_key(&user, |s| s.user).ok().map(|i| &period_stats[i])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    pub density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarityDistribution {
    pub n: u64,
    pub bins: Vec<HistogramBin>,
    pub zero_count: u64,
    pub zero_mass: f64,
    /// ECDF of |polarity| over records with polarity > 0.
    pub pro_abs_cdf: Vec<(f64, f64)>,
    /// ECDF of |polarity| over records with polarity < 0.
    pub anti_abs_cdf: Vec<(f64, f64)>,
}

/// Histogram over `[-1, 1]` (last bin closed), exact-zero mass and the two
/// sign-split CDFs of absolute polarity.
pub fn polarity_distribution(stats: &[UserPeriodStats], bins: usize) -> PolarityDistribution {
    let bins = bins.max(1);
    let width = 2.0 / bins as f64;
    let mut counts = alloc::vec![0u64; bins];
    let mut zero = 0u64;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for s in stats {
        let x = s.polarity;
        let k = (libm::floor((x + 1.0) / width) as isize).clamp(0, bins as isize - 1) as usize;
        counts[k] += 1;
        if x == 0.0 {
            zero += 1;
        } else if x > 0.0 {
            pos.push(x);
        } else {
            neg.push(-x);
        }
    }
    let n = stats.len() as u64;
    let total = n.max(1) as f64;
    PolarityDistribution {
        n,
        bins: counts
            .iter()
            .enumerate()
            .map(|(k, &count)| HistogramBin {
                lo: -1.0 + k as f64 * width,
                hi: -1.0 + (k + 1) as f64 * width,
                count,
                density: count as f64 / total / width,
            })
            .collect(),
        zero_count: zero,
        zero_mass: if n == 0 { 0.0 } else { zero as f64 / n as f64 },
        pro_abs_cdf: stats::ecdf(pos),
        anti_abs_cdf: stats::ecdf(neg),
    }
}
