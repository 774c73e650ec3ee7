use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, Task};
use super::PredictError;
use crate::rng;

const MISSING_BIN: u8 = u8::MAX;
const MIN_GAIN: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    /// Share of features considered at each split.
    pub feature_fraction: f64,
    pub seed: u64,
    /// Upper bound on candidate thresholds per feature, at most 255.
    pub max_bins: usize,
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self { n_trees: 100, max_depth: 12, min_leaf: 5, feature_fraction: 1.0 / 3.0, seed: 0, max_bins: 255, bootstrap: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        /// Mean target (regression) or share of positives (classification).
        value: f64,
        n: u32,
    },
    Split {
        feature: u32,
        /// Rows with `x <= threshold` go left.
        threshold: f64,
        missing_left: bool,
        left: u32,
        right: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf_value(&self, row: &[f64]) -> f64 {
        let mut k = 0usize;
        loop {
            match &self.nodes[k] {
                Node::Leaf { value, .. } => return *value,
                Node::Split { feature, threshold, missing_left, left, right } => {
                    let x = row[*feature as usize];
                    let go_left = if x.is_nan() { *missing_left } else { x <= *threshold };
                    k = if go_left { *left } else { *right } as usize;
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], k: usize) -> usize {
            match &nodes[k] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left as usize).max(walk(nodes, *right as usize)),
            }
        }
        walk(&self.nodes, 0)
    }
}

/// A trained ensemble. Self-describing when serialised.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub task: Task,
    pub config: ForestConfig,
    pub feature_names: Vec<String>,
    pub trees: Vec<Tree>,
    /// The training target had a single value.
    pub constant_target: bool,
}

impl RandomForest {
    /// Train all trees sequentially. Identical to assembling the output of
    /// [`Prepared::train_tree`] for `0..n_trees` in order.
    pub fn train(dataset: &Dataset, rows: &[usize], config: &ForestConfig) -> Result<Self, PredictError> {
        let prepared = Prepared::new(dataset, rows, config)?;
        let trees = (0..config.n_trees).map(|k| prepared.train_tree(k)).collect();
        Ok(prepared.into_forest(trees))
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Regression: mean of tree outputs. Classification: majority vote as 0.0 / 1.0,
    /// ties resolve to 0.
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        if self.constant_target {
            return self.trees.first().map_or(0.0, |t| t.leaf_value(row));
        }
        match self.task {
            Task::Polarity => self.trees.iter().map(|t| t.leaf_value(row)).sum::<f64>() / self.trees.len() as f64,
            Task::Presence => {
                let votes = self.trees.iter().filter(|t| t.leaf_value(row) > 0.5).count();
                if 2 * votes > self.trees.len() {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn predict(&self, dataset: &Dataset, rows: &[usize]) -> Vec<f64> {
        let mut buf = vec![0.0; dataset.n_features()];
        rows.iter()
            .map(|&i| {
                for (b, col) in buf.iter_mut().zip(&dataset.columns) {
                    *b = col[i];
                }
                self.predict_row(&buf)
            })
            .collect()
    }

    pub fn check_compatible(&self, dataset: &Dataset) -> Result<(), PredictError> {
        if dataset.task != self.task {
            return Err(PredictError::TaskMismatch { expected: self.task, found: dataset.task });
        }
        if dataset.n_features() != self.n_features() {
            return Err(PredictError::FeatureMismatch { expected: self.n_features(), found: dataset.n_features() });
        }
        Ok(())
    }
}

/// Binned training data shared by every tree of one forest.
pub struct Prepared {
    task: Task,
    config: ForestConfig,
    feature_names: Vec<String>,
    /// Per feature: ascending thresholds; bin `b` holds `cuts[b-1] < x <= cuts[b]`.
    cuts: Vec<Vec<f64>>,
    /// Per feature, per training row.
    bins: Vec<Vec<u8>>,
    target: Vec<f64>,
    constant_target: bool,
}

fn feature_cuts(values: &mut Vec<f64>, max_bins: usize) -> Vec<f64> {
    values.retain(|v| !v.is_nan());
    crate::stats::sort_f64(values);
    let mut distinct = values.clone();
    distinct.dedup();
    if distinct.len() <= 1 {
        return Vec::new();
    }
    let mid = |k: usize| distinct[k] + (distinct[k + 1] - distinct[k]) / 2.0;
    if distinct.len() <= max_bins {
        return (0..distinct.len() - 1).map(mid).collect();
    }
    let n = values.len();
    let mut cuts: Vec<f64> = Vec::with_capacity(max_bins - 1);
    for q in 1..max_bins {
        let v = values[q * n / max_bins];
        let k = distinct.partition_point(|&d| d < v);
        if k + 1 < distinct.len() {
            let c = mid(k);
            if cuts.last().is_none_or(|&l| l < c) {
                cuts.push(c);
            }
        }
    }
    cuts
}

fn bin_value(cuts: &[f64], x: f64) -> u8 {
    if x.is_nan() {
        MISSING_BIN
    } else {
        cuts.partition_point(|&c| c < x) as u8
    }
}

#[derive(Clone, Copy, Default)]
struct Acc {
    n: u32,
    sum: f64,
    sumsq: f64,
}

impl Acc {
    fn add(&mut self, y: f64) {
        self.n += 1;
        self.sum += y;
        self.sumsq += y * y;
    }

    fn merged(self, o: Acc) -> Acc {
        Acc { n: self.n + o.n, sum: self.sum + o.sum, sumsq: self.sumsq + o.sumsq }
    }

    fn minus(self, o: Acc) -> Acc {
        Acc { n: self.n - o.n, sum: self.sum - o.sum, sumsq: self.sumsq - o.sumsq }
    }

    // Sum of squared errors (regression) or n-weighted Gini impurity (0/1 targets).
    fn impurity(&self, task: Task) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let n = f64::from(self.n);
        match task {
            Task::Polarity => (self.sumsq - self.sum * self.sum / n).max(0.0),
            Task::Presence => {
                let pos = self.sum;
                let neg = n - pos;
                n - (pos * pos + neg * neg) / n
            }
        }
    }
}

struct BestSplit {
    gain: f64,
    feature: usize,
    bin: usize,
    missing_left: bool,
}

struct Scratch {
    hist: Vec<Acc>,
    features: Vec<usize>,
}

impl Prepared {
    pub fn new(dataset: &Dataset, rows: &[usize], config: &ForestConfig) -> Result<Self, PredictError> {
        if rows.len() < 2 {
            return Err(PredictError::TooFewRows(rows.len()));
        }
        if dataset.n_features() == 0 {
            return Err(PredictError::NoFeatures);
        }
        let max_bins = config.max_bins.clamp(2, 255);
        let mut cuts = Vec::with_capacity(dataset.n_features());
        let mut bins = Vec::with_capacity(dataset.n_features());
        let mut scratch = Vec::with_capacity(rows.len());
        for col in &dataset.columns {
            scratch.clear();
            scratch.extend(rows.iter().map(|&i| col[i]));
            let c = feature_cuts(&mut scratch, max_bins);
            bins.push(rows.iter().map(|&i| bin_value(&c, col[i])).collect());
            cuts.push(c);
        }
        let target: Vec<f64> = rows.iter().map(|&i| dataset.target[i]).collect();
        let constant_target = target.windows(2).all(|w| w[0] == w[1]);
        Ok(Self {
            task: dataset.task,
            config: ForestConfig { max_bins, ..config.clone() },
            feature_names: dataset.feature_names.clone(),
            cuts,
            bins,
            target,
            constant_target,
        })
    }

    pub fn constant_target(&self) -> bool {
        self.constant_target
    }

    pub fn into_forest(self, trees: Vec<Tree>) -> RandomForest {
        RandomForest {
            task: self.task,
            config: self.config,
            feature_names: self.feature_names,
            trees,
            constant_target: self.constant_target,
        }
    }

    /// Grow tree `index` from its own derived random stream.
    pub fn train_tree(&self, index: usize) -> Tree {
        let mut rng = rng::stream(self.config.seed, "tree", index as u64);
        let n = self.target.len();
        let mut sample: Vec<u32> = if self.config.bootstrap {
            (0..n).map(|_| rng.random_range(0..n as u32)).collect()
        } else {
            (0..n as u32).collect()
        };
        let mut nodes = Vec::new();
        let mut scratch = Scratch { hist: vec![Acc::default(); 256], features: Vec::new() };
        self.grow(&mut sample, 0, &mut rng, &mut nodes, &mut scratch);
        Tree { nodes }
    }

    fn n_candidates(&self) -> usize {
        let f = self.cuts.len();
        let k = libm::round(self.config.feature_fraction * f as f64) as usize;
        k.clamp(1, f)
    }

    fn grow(
        &self,
        rows: &mut [u32],
        depth: usize,
        rng: &mut impl RngCore,
        nodes: &mut Vec<Node>,
        scratch: &mut Scratch,
    ) -> u32 {
        let id = nodes.len() as u32;
        let mut total = Acc::default();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &r in rows.iter() {
            let y = self.target[r as usize];
            total.add(y);
            lo = lo.min(y);
            hi = hi.max(y);
        }
        let value = if lo == hi { lo } else { total.sum / f64::from(total.n.max(1)) };
        let leaf = Node::Leaf { value, n: total.n };
        let min_leaf = self.config.min_leaf.max(1);
        if depth >= self.config.max_depth || rows.len() < 2 * min_leaf || lo == hi {
            nodes.push(leaf);
            return id;
        }
        let Some(best) = self.best_split(rows, total, rng, scratch) else {
            nodes.push(leaf);
            return id;
        };

        let bins = &self.bins[best.feature];
        let goes_left = |r: u32| {
            let b = bins[r as usize];
            if b == MISSING_BIN {
                best.missing_left
            } else {
                usize::from(b) <= best.bin
            }
        };
        let mut split = 0;
        for k in 0..rows.len() {
            if goes_left(rows[k]) {
                rows.swap(split, k);
                split += 1;
            }
        }
        nodes.push(Node::Split {
            feature: best.feature as u32,
            threshold: self.cuts[best.feature][best.bin],
            missing_left: best.missing_left,
            left: 0,
            right: 0,
        });
        let (left_rows, right_rows) = rows.split_at_mut(split);
        let left = self.grow(left_rows, depth + 1, rng, nodes, scratch);
        let right = self.grow(right_rows, depth + 1, rng, nodes, scratch);
        if let Node::Split { left: l, right: r, .. } = &mut nodes[id as usize] {
            *l = left;
            *r = right;
        }
        id
    }

    fn best_split(&self, rows: &[u32], total: Acc, rng: &mut impl RngCore, scratch: &mut Scratch) -> Option<BestSplit> {
        let n_features = self.cuts.len();
        let k = self.n_candidates();
        scratch.features.clear();
        scratch.features.extend(0..n_features);
        if k < n_features {
            // partial Fisher-Yates, then evaluate in index order
            for i in 0..k {
                let j = rng.random_range(i..n_features);
                scratch.features.swap(i, j);
            }
            scratch.features.truncate(k);
            scratch.features.sort_unstable();
        }
        let parent = total.impurity(self.task);
        let min_leaf = self.config.min_leaf.max(1) as u32;
        let mut best: Option<BestSplit> = None;
        for fi in 0..scratch.features.len() {
            let f = scratch.features[fi];
            let n_cuts = self.cuts[f].len();
            if n_cuts == 0 {
                continue;
            }
            let hist = &mut scratch.hist;
            for h in hist[..=n_cuts].iter_mut() {
                *h = Acc::default();
            }
            let mut missing = Acc::default();
            let bins = &self.bins[f];
            for &r in rows {
                let y = self.target[r as usize];
                match bins[r as usize] {
                    MISSING_BIN => missing.add(y),
                    b => hist[b as usize].add(y),
                }
            }
            let present = total.minus(missing);
            let mut left = Acc::default();
            for (b, h) in hist[..n_cuts].iter().enumerate() {
                left = left.merged(*h);
                let right = present.minus(left);
                if left.n == 0 || right.n == 0 {
                    continue;
                }
                // missing rows follow the larger side; ties go left
                let missing_left = left.n >= right.n;
                let (l, r) = if missing_left { (left.merged(missing), right) } else { (left, right.merged(missing)) };
                if l.n < min_leaf || r.n < min_leaf {
                    continue;
                }
                let gain = parent - l.impurity(self.task) - r.impurity(self.task);
                if gain > MIN_GAIN && best.as_ref().is_none_or(|bst| gain > bst.gain) {
                    best = Some(BestSplit { gain, feature: f, bin: b, missing_left });
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::UserId;
    use alloc::string::ToString;

    fn dataset(task: Task, xs: &[Vec<f64>], ys: &[f64]) -> Dataset {
        let names = (0..xs[0].len()).map(|k| alloc::format!("x{k}")).collect();
        let mut d = Dataset::new(task, names);
        for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
            d.push((UserId(i as u32), 0), x, *y);
        }
        d
    }

    #[test]
    fn cuts_are_midpoints_for_few_distinct_values() {
        let mut v = vec![3.0, 1.0, f64::NAN, 2.0, 1.0];
        assert_eq!(feature_cuts(&mut v, 255), vec![1.5, 2.5]);
        assert_eq!(bin_value(&[1.5, 2.5], 1.0), 0);
        assert_eq!(bin_value(&[1.5, 2.5], 2.0), 1);
        assert_eq!(bin_value(&[1.5, 2.5], 2.5), 1);
        assert_eq!(bin_value(&[1.5, 2.5], 9.0), 2);
        assert_eq!(bin_value(&[1.5, 2.5], f64::NAN), MISSING_BIN);
    }

    #[test]
    fn cuts_are_bounded_and_ascending() {
        let mut v: Vec<f64> = (0..10_000).map(|i| (i as f64 * 0.37).sin()).collect();
        let c = feature_cuts(&mut v, 64);
        assert!(c.len() < 64 && c.len() > 32);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn constant_target_gives_single_leaves() {
        let xs: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let d = dataset(Task::Polarity, &xs, &[0.3; 20]);
        let rows: Vec<usize> = (0..20).collect();
        let m = RandomForest::train(&d, &rows, &ForestConfig { n_trees: 5, ..Default::default() }).unwrap();
        assert!(m.constant_target);
        assert!(m.trees.iter().all(|t| t.nodes.len() == 1));
        assert!(m.predict(&d, &rows).iter().all(|&p| p == 0.3));
    }

    #[test]
    fn too_few_rows() {
        let d = dataset(Task::Polarity, &[vec![1.0]], &[0.0]);
        assert_eq!(RandomForest::train(&d, &[0], &ForestConfig::default()), Err(PredictError::TooFewRows(1)));
    }

    #[test]
    fn missing_values_follow_the_larger_side() {
        // 30 rows at x <= 0 (y = -1), 10 rows at x > 0 (y = 1), 5 missing with y = -1.
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..30 {
            xs.push(vec![-(i as f64) - 1.0]);
            ys.push(-1.0);
        }
        for i in 0..10 {
            xs.push(vec![i as f64 + 1.0]);
            ys.push(1.0);
        }
        for _ in 0..5 {
            xs.push(vec![f64::NAN]);
            ys.push(-1.0);
        }
        let d = dataset(Task::Polarity, &xs, &ys);
        let rows: Vec<usize> = (0..d.n_rows()).collect();
        let cfg = ForestConfig { n_trees: 1, bootstrap: false, feature_fraction: 1.0, min_leaf: 1, ..Default::default() };
        let m = RandomForest::train(&d, &rows, &cfg).unwrap();
        match &m.trees[0].nodes[0] {
            Node::Split { missing_left, threshold, .. } => {
                assert!(*missing_left);
                assert_eq!(*threshold, 0.0);
            }
            other => panic!("expected a split, got {other:?}"),
        }
        assert_eq!(m.predict_row(&[f64::NAN]), -1.0);
    }

    #[test]
    fn ties_pick_the_lowest_feature() {
        // Two identical columns: the split must use feature 0.
        let xs: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64, i as f64]).collect();
        let ys: Vec<f64> = (0..40).map(|i| if i < 20 { 0.0 } else { 1.0 }).collect();
        let d = dataset(Task::Presence, &xs, &ys);
        let rows: Vec<usize> = (0..40).collect();
        let cfg = ForestConfig { n_trees: 3, feature_fraction: 1.0, ..Default::default() };
        let m = RandomForest::train(&d, &rows, &cfg).unwrap();
        for t in &m.trees {
            if let Node::Split { feature, .. } = &t.nodes[0] {
                assert_eq!(*feature, 0);
            }
        }
        assert_eq!(m.feature_names[0], "x0".to_string());
    }
}
