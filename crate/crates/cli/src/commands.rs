use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clue_core::analysis::{histogram_rows, pair_distances, AnalysisReport, QualifyingDistance};
use clue_core::corpus::{write_dataset, SynthConfig};
use clue_core::probe::{tendency_report, train};
use clue_core::sampler::{proportion_curve, read_order, resample, write_order, write_provenance};
use clue_core::{
    build_histogram, flag_csc, gap, ingest, partition_eval, CluePolicy, Dataset, Error, Format, ProbeHyperparams,
    SamplerConfig, Strategy,
};
use serde::Serialize;

use crate::args::{AnalyzeArgs, Command, PartitionArgs, PolicyArgs, ProbeArgs, ReplayArgs, ResampleArgs, SynthArgs};
use crate::manifest::{RunManifest, MANIFEST_FILE};

/// Process exit codes. Everything not covered by the contract (for
/// example a failed write) exits with `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Other = 1,
    Input = 2,
    Flags = 3,
    Empty = 4,
}

#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { exit: Exit::Other, error }
    }
}

impl From<std::io::Error> for Failure {
    fn from(error: std::io::Error) -> Self {
        Failure { exit: Exit::Other, error: error.into() }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { exit: Exit::Other, error: error.into() }
    }
}

pub type CmdResult<T = ()> = Result<T, Failure>;

trait OrExit<T> {
    fn or_exit(self, exit: Exit) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> OrExit<T> for Result<T, E> {
    fn or_exit(self, exit: Exit) -> CmdResult<T> {
        self.map_err(|e| Failure { exit, error: e.into() })
    }
}

pub fn run(mut command: Command) -> CmdResult {
    command.absolutize().context("resolving paths")?;
    match command {
        Command::Replay(args) => replay(args),
        Command::Analyze(ref args) => analyze(args, RunManifest::new(&command)),
        Command::Resample(ref args) => resample_cmd(args, RunManifest::new(&command)),
        Command::Partition(ref args) => partition(args, RunManifest::new(&command)),
        Command::Probe(ref args) => probe(args, RunManifest::new(&command)),
        Command::Synth(ref args) => synth(args, RunManifest::new(&command)),
    }
}

fn load(path: &Path, format: Format) -> CmdResult<Dataset> {
    ingest(path, format).with_context(|| format!("reading {}", path.display())).or_exit(Exit::Input)
}

fn policy(args: &PolicyArgs) -> CmdResult<CluePolicy> {
    let policy = CluePolicy::from(*args);
    policy.validate().or_exit(Exit::Flags)?;
    Ok(policy)
}

fn out_dir(dir: &Path) -> CmdResult<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir.to_path_buf())
}

fn create(path: &Path) -> CmdResult<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CmdResult {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).context("serializing JSON")?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// CSV with an explicit header, so files with no rows still name their
/// columns.
fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = T>) -> CmdResult {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(create(path)?);
    w.write_record(header).context("writing CSV")?;
    for row in rows {
        w.serialize(row).context("writing CSV")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct FlagsFile<'a> {
    total: usize,
    csc_count: usize,
    qualifying: &'a [QualifyingDistance],
    csc_indices: Vec<usize>,
}

fn analyze(args: &AnalyzeArgs, mut manifest: RunManifest) -> CmdResult {
    let policy = policy(&args.policy)?;
    let ds = load(&args.input.input, args.input.format())?;
    let dir = out_dir(&args.out_dir)?;

    let hist = build_histogram(&ds);
    let flags = flag_csc(&ds, &hist, &policy)?;

    write_csv(
        &dir.join("histogram.csv"),
        &["distance", "count0", "count1", "majority", "qualifies"],
        histogram_rows(&hist, &flags),
    )?;
    write_json(
        &dir.join("flags.json"),
        &FlagsFile {
            total: ds.len(),
            csc_count: flags.count(),
            qualifying: flags.qualifying(),
            csc_indices: flags.csc_indices(),
        },
    )?;
    write_json(&dir.join("report.json"), &AnalysisReport::new(&ds, &hist, &flags, &policy))?;

    manifest.policy = Some(policy);
    manifest.write(&dir.join(MANIFEST_FILE))?;
    eprintln!("analyze: {} pairs, {} CSC, {} qualifying distances", ds.len(), flags.count(), flags.qualifying().len());
    Ok(())
}

fn resample_cmd(args: &ResampleArgs, mut manifest: RunManifest) -> CmdResult {
    let policy = policy(&args.policy)?;
    let config = SamplerConfig { strategy: args.strategy, seed: args.seed, alpha_override: args.alpha };
    config.validate().or_exit(Exit::Flags)?;
    let ds = load(&args.input.input, args.input.format())?;
    let n = ds.len();
    let window = match args.window {
        Some(w) if w == 0 || w > n.max(1) => {
            return Err(anyhow!("--window must lie in 1..={}, got {w}", n.max(1))).or_exit(Exit::Flags);
        }
        Some(w) => w,
        None => (n / 100).max(1),
    };
    let dir = out_dir(&args.out_dir)?;

    let flags = flag_csc(&ds, &build_histogram(&ds), &policy)?;
    let result = resample(&ds, &flags, &config)?;

    write_order(&result, create(&dir.join("order.txt"))?)?;
    write_provenance(&result, create(&dir.join("provenance.jsonl"))?)?;
    let points = if n == 0 { Vec::new() } else { proportion_curve(&result, &flags, window)?.points };
    write_csv(&dir.join("proportion.csv"), &["step", "csc_fraction"], points)?;

    manifest.policy = Some(policy);
    manifest.sampler = Some(config);
    manifest.write(&dir.join(MANIFEST_FILE))?;
    eprintln!("resample: {} order over {n} pairs ({} CSC)", args.strategy, flags.count());
    Ok(())
}

#[derive(Serialize)]
struct PartitionRow<'a> {
    index: usize,
    text_a: &'a str,
    text_b: &'a str,
    label: u8,
    distance: usize,
}

fn partition(args: &PartitionArgs, mut manifest: RunManifest) -> CmdResult {
    let policy = policy(&args.policy)?;
    let ds = load(&args.input.input, args.input.format())?;
    let dir = out_dir(&args.out_dir)?;

    let distances = pair_distances(&ds);
    let part = partition_eval(&ds, &policy);
    for (name, indices) in
        [("epred.jsonl", &part.e_pred), ("hpred.jsonl", &part.h_pred), ("normal.jsonl", &part.normal)]
    {
        let mut out = create(&dir.join(name))?;
        for &i in indices {
            let p = &ds[i];
            let row = PartitionRow {
                index: p.index,
                text_a: &p.text_a,
                text_b: &p.text_b,
                label: p.label.as_u8(),
                distance: distances[i],
            };
            serde_json::to_writer(&mut out, &row).context("serializing JSON")?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
    }
    let sizes = part.sizes();
    write_json(&dir.join("sizes.json"), &sizes)?;

    manifest.policy = Some(policy);
    manifest.write(&dir.join(MANIFEST_FILE))?;
    eprintln!("partition: e_pred {} / h_pred {} / normal {}", sizes.e_pred, sizes.h_pred, sizes.normal);
    Ok(())
}

fn probe(args: &ProbeArgs, mut manifest: RunManifest) -> CmdResult {
    let policy = policy(&args.policy)?;
    let hp = ProbeHyperparams { learning_rate: args.lr, steps: args.steps, loss_window: args.loss_window };
    hp.validate().or_exit(Exit::Flags)?;
    let train_ds = load(&args.train, args.train_format.unwrap_or_else(|| Format::from_path(&args.train)))?;
    let eval_ds = load(&args.eval, args.eval_format.unwrap_or_else(|| Format::from_path(&args.eval)))?;

    let flags = flag_csc(&train_ds, &build_histogram(&train_ds), &policy)?;
    let (order, sampler) = match &args.order {
        Some(path) => {
            let file = File::open(path).with_context(|| format!("reading {}", path.display())).or_exit(Exit::Input)?;
            let order = read_order(BufReader::new(file), train_ds.len())
                .with_context(|| format!("reading {}", path.display()))
                .or_exit(Exit::Input)?;
            (order, None)
        }
        None => {
            let config = SamplerConfig::new(args.strategy.unwrap_or(Strategy::Random), args.seed);
            (resample(&train_ds, &flags, &config)?.order, Some(config))
        }
    };

    let csc = args.csc_only.then(|| flags.csc_indices());
    let model = match train(&train_ds, &order, &hp, csc.as_deref()) {
        Err(Error::EmptyTrainingSet) => {
            let what = if args.csc_only { "no CSC samples in the training set" } else { "empty training set" };
            return Err(anyhow!("{what}")).or_exit(Exit::Empty);
        }
        other => other?,
    };

    let dir = out_dir(&args.out_dir)?;
    let mut json = model.to_json()?;
    json.push('\n');
    fs::write(dir.join("model.json"), json).context("writing model.json")?;
    model.write_loss_trace(create(&dir.join("losstrace.csv"))?)?;

    let predictions = model.predict_all(&eval_ds)?;
    let report = gap(&predictions, &eval_ds.labels(), &partition_eval(&eval_ds, &policy))?;
    write_json(&dir.join("gap.json"), &report)?;
    write_csv(&dir.join("tendency.csv"), &["distance", "count", "mean_p1"], tendency_report(&model, &eval_ds)?)?;

    manifest.policy = Some(policy);
    manifest.sampler = sampler;
    manifest.hyperparams = Some(hp);
    manifest.write(&dir.join(MANIFEST_FILE))?;
    let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_owned(), |a| format!("{a:.4}"));
    eprintln!("probe: {} steps, acc_e {} acc_h {}", model.loss_trace.len(), fmt(report.acc_e), fmt(report.acc_h));
    Ok(())
}

fn synth(args: &SynthArgs, manifest: RunManifest) -> CmdResult {
    let defaults = SynthConfig::default();
    let config = SynthConfig {
        n: args.n,
        p_csc: args.p_csc,
        clue_fidelity: args.clue_fidelity,
        semantic_fidelity: args.semantic_fidelity,
        low_band: args.low_band,
        high_band: args.high_band,
        text_len: args.text_len,
        alphabet: args.alphabet.as_ref().map_or(defaults.alphabet, |s| s.chars().collect()),
        seed: args.seed,
    };
    config.validate().or_exit(Exit::Flags)?;
    let ds = clue_core::generate_synthetic(&config).or_exit(Exit::Flags)?;

    if let Some(parent) = args.out.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let format = args.format.unwrap_or_else(|| Format::from_path(&args.out));
    write_dataset(&ds, format, create(&args.out)?)?;

    let name = args.out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    manifest.write(&args.out.with_file_name(format!("{name}.{MANIFEST_FILE}")))?;
    eprintln!("synth: wrote {} pairs to {}", ds.len(), args.out.display());
    Ok(())
}

fn replay(args: ReplayArgs) -> CmdResult {
    let manifest = RunManifest::read(&args.manifest).or_exit(Exit::Input)?;
    let mut command = manifest.args;
    if let Some(dir) = &args.out_dir {
        command.redirect(dir);
    }
    run(command)
}
