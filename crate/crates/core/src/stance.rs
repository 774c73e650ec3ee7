//! Stance labels: merging label sources onto a corpus and scoring a classifier
//! against gold labels.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stance {
    Pro,
    Anti,
    Neutral,
}

impl Stance {
    pub const ALL: [Stance; 3] = [Stance::Pro, Stance::Anti, Stance::Neutral];

    pub fn index(self) -> usize {
        match self {
            Stance::Pro => 0,
            Stance::Anti => 1,
            Stance::Neutral => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stance::Pro => "pro",
            Stance::Anti => "anti",
            Stance::Neutral => "neither",
        }
    }
}

impl fmt::Display for Stance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown stance label {0:?}")]
pub struct UnknownLabel(pub String);

impl FromStr for Stance {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("pro") {
            Ok(Stance::Pro)
        } else if t.eq_ignore_ascii_case("anti") {
            Ok(Stance::Anti)
        } else if t.eq_ignore_ascii_case("neither") || t.eq_ignore_ascii_case("neutral") {
            Ok(Stance::Neutral)
        } else {
            Err(UnknownLabel(String::from(t)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SourceKind {
    Gold,
    Predicted,
}

/// A mapping from submission id to label, tagged with its priority class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSource {
    pub name: String,
    pub kind: SourceKind,
    pub assignments: BTreeMap<String, Stance>,
}

impl LabelSource {
    pub fn new(name: impl Into<String>, kind: SourceKind) -> Self {
        Self { name: name.into(), kind, assignments: BTreeMap::new() }
    }

    pub fn with(mut self, id: &str, stance: Stance) -> Self {
        self.assignments.insert(String::from(id), stance);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StanceError {
    #[error("label sources {first:?} and {second:?} share priority and both label {id:?}")]
    OverlappingSources { first: String, second: String, id: String },
    #[error("gold and predicted labels share no submission ids")]
    EmptyIntersection,
    #[error("class distribution is invalid: {0}")]
    BadDistribution(&'static str),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MergeReport {
    pub labelled: u64,
    pub unlabelled: u64,
    /// Per source: number of ids that do not resolve to a corpus submission.
    pub unresolved: Vec<(String, u64)>,
    /// Per source: number of submissions whose final label came from it.
    pub applied: Vec<(String, u64)>,
}

/// Apply label sources to the corpus. Gold sources override predicted ones;
/// sources of the same kind must not label the same id.
pub fn merge_labels(corpus: Corpus, sources: &[LabelSource]) -> Result<(Corpus, MergeReport), StanceError> {
    let mut order: Vec<usize> = (0..sources.len()).collect();
    order.sort_by_key(|&i| sources[i].kind);

    for (a, &i) in order.iter().enumerate() {
        for &j in &order[a + 1..] {
            if sources[i].kind != sources[j].kind {
                continue;
            }
            let (small, large) = if sources[i].assignments.len() <= sources[j].assignments.len() {
                (&sources[i], &sources[j])
            } else {
                (&sources[j], &sources[i])
            };
            if let Some(id) = small.assignments.keys().find(|id| large.assignments.contains_key(*id)) {
                return Err(StanceError::OverlappingSources {
                    first: sources[i].name.clone(),
                    second: sources[j].name.clone(),
                    id: id.clone(),
                });
            }
        }
    }

    let mut stances: Vec<Option<Stance>> = vec![None; corpus.len()];
    let mut report = MergeReport::default();
    // Lowest priority first so higher priority writes win.
    let mut applied = vec![0u64; sources.len()];
    let mut winner: Vec<Option<usize>> = vec![None; corpus.len()];
    for &i in order.iter().rev() {
        let mut unresolved = 0u64;
        for (id, &label) in &sources[i].assignments {
            match corpus.index_of(id) {
                Some(k) => {
                    stances[k] = Some(label);
                    winner[k] = Some(i);
                }
                None => unresolved += 1,
            }
        }
        report.unresolved.push((sources[i].name.clone(), unresolved));
    }
    report.unresolved.reverse();
    for w in winner.iter().flatten() {
        applied[*w] += 1;
    }
    report.applied = order.iter().map(|&i| (sources[i].name.clone(), applied[i])).collect();
    report.labelled = stances.iter().filter(|s| s.is_some()).count() as u64;
    report.unlabelled = corpus.len() as u64 - report.labelled;
    Ok((corpus.with_stances(stances), report))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub stance: Stance,
    pub support: u64,
    pub predicted: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Neither predicted nor present in gold; scored as F1 = 0.
    pub absent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifierReport {
    pub n: u64,
    pub accuracy: f64,
    pub per_class: [ClassMetrics; 3],
    pub macro_f1: f64,
    /// Rows are gold labels, columns predictions, both in `Stance::ALL` order.
    pub confusion: [[u64; 3]; 3],
}

/// Score predictions against gold labels over the ids both sources share.
pub fn eval_classifier(
    gold: &BTreeMap<String, Stance>,
    predicted: &BTreeMap<String, Stance>,
) -> Result<ClassifierReport, StanceError> {
    let mut confusion = [[0u64; 3]; 3];
    for (id, g) in gold {
        if let Some(p) = predicted.get(id) {
            confusion[g.index()][p.index()] += 1;
        }
    }
    metrics_from_confusion(confusion)
}

pub fn metrics_from_confusion(confusion: [[u64; 3]; 3]) -> Result<ClassifierReport, StanceError> {
    let n: u64 = confusion.iter().flatten().sum();
    if n == 0 {
        return Err(StanceError::EmptyIntersection);
    }
    let correct: u64 = (0..3).map(|k| confusion[k][k]).sum();
    let per_class = Stance::ALL.map(|stance| {
        let k = stance.index();
        let tp = confusion[k][k];
        let support: u64 = confusion[k].iter().sum();
        let predicted: u64 = (0..3).map(|r| confusion[r][k]).sum();
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support);
        let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        ClassMetrics { stance, support, predicted, precision, recall, f1, absent: support == 0 && predicted == 0 }
    });
    let macro_f1 = per_class.iter().map(|c| c.f1).sum::<f64>() / 3.0;
    Ok(ClassifierReport { n, accuracy: correct as f64 / n as f64, per_class, macro_f1, confusion })
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Class prevalences in `Stance::ALL` order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassDistribution {
    pub p_pro: f64,
    pub p_anti: f64,
    pub p_neutral: f64,
}

impl ClassDistribution {
    pub fn new(p_pro: f64, p_anti: f64, p_neutral: f64) -> Result<Self, StanceError> {
        let d = Self { p_pro, p_anti, p_neutral };
        let ps = d.as_array();
        if ps.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(StanceError::BadDistribution("fractions must be finite and non-negative"));
        }
        if libm::fabs(ps.iter().sum::<f64>() - 1.0) > 1e-9 {
            return Err(StanceError::BadDistribution("fractions must sum to 1"));
        }
        Ok(d)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.p_pro, self.p_anti, self.p_neutral]
    }
}

/// Expected macro-F1 of a predictor that picks each of the three classes with
/// probability 1/3, independently of the input.
///
/// Per class, precision is the prevalence `p` and recall is `1/3`, giving
/// `F1 = 2 p q / (p + q)` with `q = 1/3`.
pub fn random_chance_macro_f1(dist: &ClassDistribution) -> f64 {
    const Q: f64 = 1.0 / 3.0;
    dist.as_array().iter().map(|&p| 2.0 * p * Q / (p + Q)).sum::<f64>() / 3.0
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::corpus::{CorpusBuilder, RawSubmission};
    use alloc::string::ToString;

    fn ids(pairs: &[(&str, Stance)]) -> BTreeMap<String, Stance> {
        pairs.iter().map(|(i, s)| (i.to_string(), *s)).collect()
    }

    fn corpus(n: usize) -> Corpus {
        let mut b = CorpusBuilder::new();
        for i in 0..n {
            b.push(RawSubmission {
                id: alloc::format!("s{i}"),
                author: "u".into(),
                created_utc: 0,
                body: String::new(),
                link_id: None,
                parent_id: None,
            })
            .unwrap();
        }
        b.finish()
    }

    #[test]
    fn parse_labels_case_insensitively() {
        assert_eq!("PRO".parse::<Stance>(), Ok(Stance::Pro));
        assert_eq!(" Anti ".parse::<Stance>(), Ok(Stance::Anti));
        assert_eq!("Neither".parse::<Stance>(), Ok(Stance::Neutral));
        assert!("maybe".parse::<Stance>().is_err());
    }

    #[test]
    fn gold_overrides_predicted() {
        let gold = LabelSource::new("gold", SourceKind::Gold).with("s0", Stance::Pro);
        let pred = LabelSource::new("pred", SourceKind::Predicted).with("s0", Stance::Neutral);
        // Priority comes from the kind, not the list order.
        let (c, _) = merge_labels(corpus(2), &[pred, gold]).unwrap();
        assert_eq!(c.get("s0").unwrap().stance, Some(Stance::Pro));
        assert_eq!(c.get("s1").unwrap().stance, None);
    }

    #[test]
    fn partial_overlap_matches_hand_table() {
        // s0: gold Pro / pred Anti -> Pro
        // s1: pred Neutral -> Neutral
        // s2: gold Anti -> Anti
        // s3: none -> unlabelled
        // s4: gold Neutral / pred Pro -> Neutral
        let gold = LabelSource::new("gold", SourceKind::Gold)
            .with("s0", Stance::Pro)
            .with("s2", Stance::Anti)
            .with("s4", Stance::Neutral)
            .with("zzz", Stance::Pro);
        let pred = LabelSource::new("pred", SourceKind::Predicted)
            .with("s0", Stance::Anti)
            .with("s1", Stance::Neutral)
            .with("s4", Stance::Pro);
        let (c, report) = merge_labels(corpus(5), &[gold, pred]).unwrap();
        let got: Vec<_> = c.submissions().iter().map(|s| s.stance).collect();
        assert_eq!(
            got,
            vec![Some(Stance::Pro), Some(Stance::Neutral), Some(Stance::Anti), None, Some(Stance::Neutral)]
        );
        assert_eq!(report.labelled, 4);
        assert_eq!(report.unlabelled, 1);
        assert_eq!(report.unresolved, vec![("gold".to_string(), 1), ("pred".to_string(), 0)]);
        assert_eq!(report.applied, vec![("gold".to_string(), 3), ("pred".to_string(), 1)]);
    }

    #[test]
    fn overlapping_same_priority_is_fatal() {
        let a = LabelSource::new("a", SourceKind::Predicted).with("s0", Stance::Pro);
        let b = LabelSource::new("b", SourceKind::Predicted).with("s0", Stance::Pro);
        assert!(matches!(merge_labels(corpus(1), &[a, b]), Err(StanceError::OverlappingSources { .. })));
    }

    #[test]
    fn perfect_predictions() {
        let g = ids(&[("a", Stance::Pro), ("b", Stance::Anti), ("c", Stance::Neutral)]);
        let r = eval_classifier(&g, &g).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.macro_f1, 1.0);
    }

    #[test]
    fn diagonal_confusion_is_perfect() {
        let r = metrics_from_confusion([[2, 0, 0], [0, 2, 0], [0, 0, 2]]).unwrap();
        assert!(r.per_class.iter().all(|c| c.f1 == 1.0));
    }

    #[test]
    fn off_diagonal_matches_brute_force() {
        let m = [[1u64, 1, 0], [0, 2, 0], [1, 0, 1]];
        // Expand the matrix back into label pairs and recount from scratch.
        let mut pairs = Vec::new();
        for g in 0..3 {
            for p in 0..3 {
                for _ in 0..m[g][p] {
                    pairs.push((g, p));
                }
            }
        }
        let r = metrics_from_confusion(m).unwrap();
        let mut f1s = Vec::new();
        for k in 0..3 {
            let tp = pairs.iter().filter(|&&(g, p)| g == k && p == k).count() as f64;
            let fp = pairs.iter().filter(|&&(g, p)| g != k && p == k).count() as f64;
            let fneg = pairs.iter().filter(|&&(g, p)| g == k && p != k).count() as f64;
            let f1 = 2.0 * tp / (2.0 * tp + fp + fneg);
            assert!(libm::fabs(r.per_class[k].f1 - f1) < 1e-12);
            f1s.push(f1);
        }
        // Hand values: Pro 0.5, Anti 0.8, Neutral 2/3.
        assert!(libm::fabs(f1s[0] - 0.5) < 1e-12);
        assert!(libm::fabs(f1s[1] - 0.8) < 1e-12);
        assert!(libm::fabs(f1s[2] - 2.0 / 3.0) < 1e-12);
        assert!(libm::fabs(r.macro_f1 - (0.5 + 0.8 + 2.0 / 3.0) / 3.0) < 1e-12);
        assert!(libm::fabs(r.accuracy - 4.0 / 6.0) < 1e-12);
    }

    #[test]
    fn absent_classes_score_zero() {
        let g = ids(&[("a", Stance::Pro), ("b", Stance::Neutral)]);
        let r = eval_classifier(&g, &g).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert!(r.per_class[Stance::Anti.index()].absent);
        assert!(libm::fabs(r.macro_f1 - 2.0 / 3.0) < 1e-12);
    }

    #[test]
    fn disjoint_sources_cannot_be_scored() {
        let g = ids(&[("a", Stance::Pro)]);
        let p = ids(&[("b", Stance::Pro)]);
        assert_eq!(eval_classifier(&g, &p), Err(StanceError::EmptyIntersection));
    }

    #[test]
    fn chance_baseline_closed_forms() {
        let third = 1.0 / 3.0;
        let u = ClassDistribution::new(third, third, 1.0 - 2.0 * third).unwrap();
        assert!(libm::fabs(random_chance_macro_f1(&u) - third) < 1e-12);
        let skew = ClassDistribution::new(0.05, 0.183, 0.767).unwrap();
        assert!(libm::fabs(random_chance_macro_f1(&skew) - 0.263) < 0.0005);
        let one = ClassDistribution::new(1.0, 0.0, 0.0).unwrap();
        assert!(libm::fabs(random_chance_macro_f1(&one) - 1.0 / 6.0) < 1e-12);
        assert!(ClassDistribution::new(-0.1, 0.6, 0.5).is_err());
        assert!(ClassDistribution::new(0.2, 0.2, 0.2).is_err());
    }
}
