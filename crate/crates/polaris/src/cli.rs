//! `polaris` command-line interface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use polaris_core::annotation::{
    build_allowlist, check_unique, dataset_iaa, flag_malicious, item_agreement, low_confidence_filter,
    majority_labels, worker_map, DEFAULT_ALLOW_MAP, DEFAULT_MALICIOUS_MAP, DEFAULT_MIN_ANNOTATIONS, DEFAULT_MIN_IAA,
};
use polaris_core::dynamics::RetentionRule;
use polaris_core::features::ExternalFeatures;
use polaris_core::polarity::{PolarityForm, PolarityOptions};
use polaris_core::predict::{build_dataset, evaluate, random_baselines, ForestConfig, ImportanceMetric, Task};
use polaris_core::stance::{eval_classifier, merge_labels, SourceKind};
use serde::Serialize;

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::modeling::{self, ModelFile, PredictConfig};
use crate::output::{num, opt, write_json, write_stdout_json, CsvOut};
use crate::pipeline::{self, PipelineConfig};
use crate::synth::{self, SynthConfig};
use crate::{jsonl, labels, periods, report, store};

#[derive(Parser, Debug)]
#[command(name = "polaris", version, about = "Polarisation dynamics on threaded discussion corpora")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a JSONL dump, assign periods and write a corpus store.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        periods: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Annotation quality control: agreement, MAP, allowlist and gold labels.
    Qa {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MIN_IAA)]
        min_iaa: f64,
        #[arg(long, default_value_t = DEFAULT_MALICIOUS_MAP)]
        map_flag: f64,
        #[arg(long, default_value_t = DEFAULT_ALLOW_MAP)]
        map_allow: f64,
        #[arg(long, default_value_t = DEFAULT_MIN_ANNOTATIONS)]
        min_annotations: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    #[command(subcommand)]
    Labels(LabelsCmd),
    #[command(subcommand)]
    Polarity(PolarityCmd),
    #[command(subcommand)]
    Network(NetworkCmd),
    #[command(subcommand)]
    Dynamics(DynamicsCmd),
    #[command(subcommand)]
    Features(FeaturesCmd),
    #[command(subcommand)]
    Predict(PredictCmd),
    /// Run every stage and write all artefacts into one directory.
    Pipeline(PipelineArgs),
    /// Write a synthetic corpus with labels and a period schedule.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        submissions: usize,
        /// Defaults to a tenth of the submissions.
        #[arg(long)]
        users: Option<usize>,
        #[arg(long, default_value_t = 27)]
        periods: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum LabelsCmd {
    /// Attach gold and predicted labels to a stored corpus (gold wins).
    Merge {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        gold: Option<PathBuf>,
        #[arg(long)]
        predicted: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score predicted labels against gold labels on their shared ids.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        predicted: PathBuf,
        /// JSON report path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    /// Corpus store written by `ingest` or `labels merge`.
    #[arg(long)]
    corpus: PathBuf,
    /// Use the uncorrected polarity expression (pure-neutral users score -1).
    #[arg(long)]
    eq1_verbatim: bool,
    /// Count labelled posts in the stance counts too.
    #[arg(long)]
    posts_in_stance: bool,
}

impl CorpusArgs {
    fn options(&self) -> PolarityOptions {
        PolarityOptions {
            form: if self.eq1_verbatim { PolarityForm::Verbatim } else { PolarityForm::Corrected },
            posts_in_stance: self.posts_in_stance,
        }
    }

    fn load(&self) -> Result<Analysis> {
        Ok(Analysis::new(store::read_store(&self.corpus)?, self.options()))
    }
}

#[derive(Subcommand, Debug)]
pub enum PolarityCmd {
    /// Per (user, period) stance counts, activity and polarity as CSV.
    Compute {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Histogram, mass at zero and sign-split CDFs as JSON.
    Dist {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum NetworkCmd {
    /// Edge list of every period's reply graph.
    Build {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-user network metrics plus echo-chamber summary and CDFs.
    Stats {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Stance-labelled triangle census per period.
    Triads {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct RuleArgs {
    /// Count a user as retained if they return in any later period.
    #[arg(long)]
    any_future: bool,
}

impl RuleArgs {
    fn rule(&self) -> RetentionRule {
        if self.any_future {
            RetentionRule::AnyFuture
        } else {
            RetentionRule::NextPeriod
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum DynamicsCmd {
    /// Frequency table of trimmed presence patterns.
    Patterns {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Retention heatmap by activity and degree percentile.
    Retention {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 20)]
        activity_bins: usize,
        #[arg(long, default_value_t = 20)]
        degree_bins: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Prolific users and the retention of those who interact with them.
    Prolific {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 0.99)]
        percentile: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum FeaturesCmd {
    /// Per (user, period) feature table as CSV.
    Extract {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Extra numeric columns keyed by `user_id,period`.
        #[arg(long)]
        f0: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TaskArg {
    Presence,
    Polarity,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Presence => Task::Presence,
            TaskArg::Polarity => Task::Polarity,
        }
    }
}

#[derive(Args, Debug)]
pub struct DatasetArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_enum)]
    task: TaskArg,
    #[arg(long)]
    f0: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SplitArgs {
    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,
    #[arg(long, default_value_t = 0)]
    split_seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum PredictCmd {
    /// Train a forest on the training split and write it as JSON.
    Train {
        #[command(flatten)]
        data: DatasetArgs,
        #[command(flatten)]
        split: SplitArgs,
        #[arg(long, default_value_t = 100)]
        trees: usize,
        #[arg(long, default_value_t = 12)]
        max_depth: usize,
        #[arg(long, default_value_t = 5)]
        min_leaf: usize,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        feature_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a trained model on its test split.
    Eval {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long)]
        model: PathBuf,
    },
    /// Score the naive baselines on the test split.
    Baselines {
        #[command(flatten)]
        data: DatasetArgs,
        #[command(flatten)]
        split: SplitArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Permutation importance of every feature on the test split.
    Importance {
        #[command(flatten)]
        data: DatasetArgs,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 10)]
        repetitions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    periods: PathBuf,
    #[arg(long)]
    gold: Option<PathBuf>,
    #[arg(long)]
    predicted: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    eq1_verbatim: bool,
    #[arg(long)]
    posts_in_stance: bool,
    #[arg(long)]
    any_future: bool,
    #[arg(long, default_value_t = 50)]
    trees: usize,
    #[arg(long, default_value_t = 5)]
    importance_repetitions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the binary corpus store.
    #[arg(long)]
    store: bool,
}

fn read_f0(path: &Path, corpus: &polaris_core::Corpus) -> Result<ExternalFeatures> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::format("features", path, e))?;
    let header = rdr.headers().map_err(|e| Error::format("features", path, e))?.clone();
    if header.len() < 3 || &header[0] != "user_id" || &header[1] != "period" {
        return Err(Error::format("features", path, "header must be user_id,period,<feature>..."));
    }
    let mut ext = ExternalFeatures { names: header.iter().skip(2).map(String::from).collect(), ..Default::default() };
    for (k, rec) in rdr.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| Error::format("features", path, e))?;
        let Some(user) = corpus.user_id(&rec[0]) else { continue };
        let period: usize =
            rec[1].parse().map_err(|_| Error::format("features", path, format!("line {line}: bad period")))?;
        let mut values = Vec::with_capacity(ext.names.len());
        for field in rec.iter().skip(2) {
            values.push(if field.is_empty() {
                None
            } else {
                Some(field.parse::<f64>().map_err(|_| {
                    Error::format("features", path, format!("line {line}: bad number {field:?}"))
                })?)
            });
        }
        ext.rows.insert((user, period), values);
    }
    Ok(ext)
}

fn dataset(data: &DatasetArgs) -> Result<(Analysis, polaris_core::predict::Dataset)> {
    let a = data.corpus.load()?;
    let ext = data.f0.as_deref().map(|p| read_f0(p, &a.corpus)).transpose()?;
    let features = a.features(ext.as_ref());
    let ds = build_dataset(&features, &a.stats, &a.matrix(), data.task.into());
    Ok((a, ds))
}

fn load_model(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io("predict", path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::format("predict", path, e))
}

fn split_for(ds: &polaris_core::predict::Dataset, test_fraction: f64, split_seed: u64) -> polaris_core::predict::Split {
    modeling::split(ds, &PredictConfig { test_fraction, split_seed, ..Default::default() })
}

#[derive(Serialize)]
struct QaSummary {
    items: usize,
    kept: usize,
    discarded: usize,
    iaa_before: Option<f64>,
    iaa_after: Option<f64>,
    workers: usize,
    flagged: Vec<String>,
    allowlist: Vec<String>,
}

fn qa(records: &Path, min_iaa: f64, map_flag: f64, map_allow: f64, min_annotations: u64, out: &Path) -> Result<()> {
    let recs = labels::read_annotations(records)?;
    check_unique(&recs)?;
    std::fs::create_dir_all(out).map_err(|e| Error::io("qa", out, e))?;
    let agreement = item_agreement(&recs);
    let iaa_before = dataset_iaa(&agreement);
    let mut items = CsvOut::create(
        &out.join("items.csv"),
        &["item_id", "n_annotations", "majority_label", "majority_count", "iaa", "kept"],
    )?;
    for a in &agreement {
        items.row([
            a.item_id.clone(),
            a.n_annotations.to_string(),
            a.majority_label.map(|s| s.as_str().to_string()).unwrap_or_default(),
            a.majority_count.to_string(),
            num(a.iaa),
            (a.iaa >= min_iaa).to_string(),
        ])?;
    }
    items.finish()?;
    let qualities = worker_map(&recs);
    let flagged = flag_malicious(&qualities, map_flag);
    let allow = build_allowlist(&qualities, map_allow, min_annotations);
    let mut workers = CsvOut::create(
        &out.join("workers.csv"),
        &["worker_id", "n_annotations", "usable", "agreeing", "map", "malicious", "allowlisted"],
    )?;
    for q in &qualities {
        workers.row([
            q.worker_id.clone(),
            q.n_annotations.to_string(),
            q.usable.to_string(),
            q.agreeing.to_string(),
            opt(q.map),
            flagged.contains(&q.worker_id).to_string(),
            allow.contains(&q.worker_id).to_string(),
        ])?;
    }
    workers.finish()?;
    let n_items = agreement.len();
    let (kept, discarded) = low_confidence_filter(agreement, min_iaa);
    let mut gold = CsvOut::create(&out.join("gold.csv"), &["submission_id", "label"])?;
    for (id, s) in majority_labels(&kept) {
        gold.row([id.as_str(), s.as_str()])?;
    }
    gold.finish()?;
    write_json(
        &out.join("summary.json"),
        &QaSummary {
            items: n_items,
            kept: kept.len(),
            discarded: discarded.len(),
            iaa_before,
            iaa_after: dataset_iaa(&kept),
            workers: qualities.len(),
            flagged: flagged.into_iter().collect(),
            allowlist: allow.into_iter().collect(),
        },
    )
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { input, periods, out } => {
            let schedule = periods::load_periods(&periods)?;
            let corpus = jsonl::read_corpus(&input)?.assign_periods(schedule);
            store::write_store(&out, &corpus)?;
            write_stdout_json(&report::ingest_summary(&corpus))
        }
        Command::Qa { records, min_iaa, map_flag, map_allow, min_annotations, out } => {
            qa(&records, min_iaa, map_flag, map_allow, min_annotations, &out)
        }
        Command::Labels(LabelsCmd::Merge { corpus, gold, predicted, out }) => {
            let c = store::read_store(&corpus)?;
            let sources = pipeline::label_sources(gold.as_deref(), predicted.as_deref())?;
            let (c, merge) = merge_labels(c, &sources)?;
            store::write_store(&out, &c)?;
            write_stdout_json(&merge)
        }
        Command::Labels(LabelsCmd::Eval { gold, predicted, out }) => {
            let g = labels::read_label_source(&gold, SourceKind::Gold)?;
            let p = labels::read_label_source(&predicted, SourceKind::Predicted)?;
            let r = eval_classifier(&g.assignments, &p.assignments)?;
            match out {
                Some(path) => write_json(&path, &r),
                None => write_stdout_json(&r),
            }
        }
        Command::Polarity(PolarityCmd::Compute { corpus, out }) => report::write_stats(&out, &corpus.load()?),
        Command::Polarity(PolarityCmd::Dist { corpus, bins, out }) => {
            report::write_distribution(&out, &report::distribution(&corpus.load()?, bins))
        }
        Command::Network(NetworkCmd::Build { corpus, out }) => report::write_edges(&out, &corpus.load()?),
        Command::Network(NetworkCmd::Stats { corpus, out }) => {
            let a = corpus.load()?;
            std::fs::create_dir_all(&out).map_err(|e| Error::io("network", &out, e))?;
            let views = a.views();
            report::write_node_metrics(&out.join("network_stats.csv"), &a, &views)?;
            let (summary, all) = report::echo(&a, &views);
            write_json(&out.join("echo.json"), &summary)?;
            report::write_echo_cdf(&out.join("echo_cdf.csv"), &all)
        }
        Command::Network(NetworkCmd::Triads { corpus, out }) => {
            report::write_triads(&out, &report::triads(&corpus.load()?))
        }
        Command::Dynamics(DynamicsCmd::Patterns { corpus, out }) => {
            report::write_patterns(&out, &report::patterns(&corpus.load()?))
        }
        Command::Dynamics(DynamicsCmd::Retention { corpus, rule, activity_bins, degree_bins, out }) => {
            report::write_retention(&out, &report::retention(&corpus.load()?, activity_bins, degree_bins, rule.rule()))
        }
        Command::Dynamics(DynamicsCmd::Prolific { corpus, rule, percentile, out }) => {
            if !(0.0..=1.0).contains(&percentile) {
                return Err(Error::invalid("dynamics", "percentile must lie in [0, 1]"));
            }
            write_json(&out, &report::prolific(&corpus.load()?, percentile, rule.rule()))
        }
        Command::Features(FeaturesCmd::Extract { corpus, f0, out }) => {
            let a = corpus.load()?;
            let ext = f0.as_deref().map(|p| read_f0(p, &a.corpus)).transpose()?;
            report::write_features(&out, &a.corpus, &a.features(ext.as_ref()))
        }
        Command::Predict(cmd) => predict(cmd),
        Command::Pipeline(args) => {
            let mut config = PipelineConfig::new(args.input, args.periods);
            config.gold = args.gold;
            config.predicted = args.predicted;
            config.polarity = PolarityOptions {
                form: if args.eq1_verbatim { PolarityForm::Verbatim } else { PolarityForm::Corrected },
                posts_in_stance: args.posts_in_stance,
            };
            if args.any_future {
                config.retention = RetentionRule::AnyFuture;
            }
            config.predict.forest.n_trees = args.trees;
            config.predict.forest.seed = args.seed;
            config.predict.split_seed = args.seed;
            config.predict.importance_repetitions = args.importance_repetitions;
            config.write_store = args.store;
            pipeline::run(&config, &args.out).map(|_| ())
        }
        Command::Synth { out, submissions, users, periods, seed } => {
            let config = SynthConfig {
                submissions,
                users: users.unwrap_or((submissions / 10).max(1)),
                periods,
                seed,
                ..Default::default()
            };
            synth::write_dir(&out, &synth::generate(&config))
        }
    }
}

fn predict(cmd: PredictCmd) -> Result<()> {
    match cmd {
        PredictCmd::Train { data, split, trees, max_depth, min_leaf, feature_fraction, seed, out } => {
            let (_, ds) = dataset(&data)?;
            let s = split_for(&ds, split.test_fraction, split.split_seed);
            let config = ForestConfig { n_trees: trees, max_depth, min_leaf, feature_fraction, seed, ..Default::default() };
            let model = modeling::train(&ds, &s.train, &config)?;
            if model.constant_target {
                eprintln!("warning: training target is constant; the model predicts it everywhere");
            }
            write_json(&out, &ModelFile { test_fraction: split.test_fraction, split_seed: split.split_seed, model })
        }
        PredictCmd::Eval { data, model } => {
            let (_, ds) = dataset(&data)?;
            let m = load_model(&model)?;
            let s = split_for(&ds, m.test_fraction, m.split_seed);
            write_stdout_json(&evaluate(&m.model, &ds, &s.test)?)
        }
        PredictCmd::Baselines { data, split, seed } => {
            let (_, ds) = dataset(&data)?;
            let s = split_for(&ds, split.test_fraction, split.split_seed);
            write_stdout_json(&random_baselines(&ds, &s, seed)?)
        }
        PredictCmd::Importance { data, model, repetitions, seed, out } => {
            let (_, ds) = dataset(&data)?;
            let m = load_model(&model)?;
            let s = split_for(&ds, m.test_fraction, m.split_seed);
            let r = modeling::importance(
                &m.model,
                &ds,
                &s.test,
                ImportanceMetric::default_for(ds.task),
                repetitions,
                seed,
            )?;
            match out {
                Some(p) => write_json(&p, &r),
                None => write_stdout_json(&r),
            }
        }
    }
}

/// Parse `args`, run, and map the outcome to a process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return 3;
        }
    }
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
