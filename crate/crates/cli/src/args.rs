use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use clue_core::analysis::BoundaryMode;
use clue_core::corpus::Band;
use clue_core::{CluePolicy, Format, Strategy};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "clue", version, about = "Edit-distance clue analysis, resampling and probing for text-pair corpora")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Per-distance label histogram, CSC flags and a summary report.
    Analyze(AnalyzeArgs),
    /// Emit a training order under one of the sampling strategies.
    Resample(ResampleArgs),
    /// Split an evaluation set into easy, hard and normal subsets.
    Partition(PartitionArgs),
    /// Train the bias-only probe and report the easy/hard gap.
    Probe(ProbeArgs),
    /// Write a synthetic corpus with a controlled edit-distance clue.
    Synth(SynthArgs),
    /// Re-run a command recorded in a manifest.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Resample(_) => "resample",
            Command::Partition(_) => "partition",
            Command::Probe(_) => "probe",
            Command::Synth(_) => "synth",
            Command::Replay(_) => "replay",
        }
    }

    /// Makes every path absolute so a recorded command replays from any
    /// working directory.
    pub fn absolutize(&mut self) -> std::io::Result<()> {
        fn abs(p: &mut PathBuf) -> std::io::Result<()> {
            *p = std::path::absolute(&*p)?;
            Ok(())
        }
        match self {
            Command::Analyze(a) => {
                abs(&mut a.input.input)?;
                abs(&mut a.out_dir)
            }
            Command::Resample(a) => {
                abs(&mut a.input.input)?;
                abs(&mut a.out_dir)
            }
            Command::Partition(a) => {
                abs(&mut a.input.input)?;
                abs(&mut a.out_dir)
            }
            Command::Probe(a) => {
                abs(&mut a.train)?;
                abs(&mut a.eval)?;
                if let Some(order) = &mut a.order {
                    abs(order)?;
                }
                abs(&mut a.out_dir)
            }
            Command::Synth(a) => abs(&mut a.out),
            Command::Replay(a) => {
                abs(&mut a.manifest)?;
                if let Some(dir) = &mut a.out_dir {
                    abs(dir)?;
                }
                Ok(())
            }
        }
    }

    /// Input files read by the command.
    pub fn inputs(&self) -> Vec<PathBuf> {
        match self {
            Command::Analyze(a) => vec![a.input.input.clone()],
            Command::Resample(a) => vec![a.input.input.clone()],
            Command::Partition(a) => vec![a.input.input.clone()],
            Command::Probe(a) => {
                let mut v = vec![a.train.clone(), a.eval.clone()];
                v.extend(a.order.clone());
                v
            }
            Command::Synth(_) => Vec::new(),
            Command::Replay(a) => vec![a.manifest.clone()],
        }
    }

    /// Redirects outputs to `dir`, keeping file names.
    pub fn redirect(&mut self, dir: &Path) {
        match self {
            Command::Analyze(a) => a.out_dir = dir.to_path_buf(),
            Command::Resample(a) => a.out_dir = dir.to_path_buf(),
            Command::Partition(a) => a.out_dir = dir.to_path_buf(),
            Command::Probe(a) => a.out_dir = dir.to_path_buf(),
            Command::Synth(a) => {
                let name = a.out.file_name().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("synthetic.tsv"));
                a.out = dir.join(name);
            }
            Command::Replay(_) => {}
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct InputArgs {
    /// Dataset file, TSV (text_a, text_b, label) or JSONL.
    #[arg(long)]
    pub input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long)]
    pub format: Option<Format>,
}

impl InputArgs {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_else(|| Format::from_path(&self.input))
    }
}

#[derive(Debug, Clone, Copy, Args, Serialize, Deserialize)]
pub struct PolicyArgs {
    /// Majority-label share a distance bucket needs to carry the clue.
    #[arg(long, default_value_t = 0.70)]
    pub threshold: f64,
    /// Minimum bucket size for a distance to qualify.
    #[arg(long, default_value_t = 50)]
    pub min_support: usize,
    /// Distances at or below this count as "low".
    #[arg(long, default_value_t = 3)]
    pub low_boundary: usize,
    /// Distances at or above this count as "high".
    #[arg(long, default_value_t = 12)]
    pub high_boundary: usize,
    /// `fixed` restricts qualifying buckets to the clue direction; `derived`
    /// accepts any bucket passing the threshold.
    #[arg(long, default_value_t = BoundaryMode::Fixed)]
    pub boundary_mode: BoundaryMode,
}

impl From<PolicyArgs> for CluePolicy {
    fn from(p: PolicyArgs) -> Self {
        CluePolicy {
            threshold: p.threshold,
            min_support: p.min_support,
            low_boundary: p.low_boundary,
            high_boundary: p.high_boundary,
            boundary_mode: p.boundary_mode,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ResampleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// random, lls-csc, gls-csc or curriculum.
    #[arg(long)]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the derived GLS-CSC ramp slope.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Window size of proportion.csv; defaults to about 100 windows.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ProbeArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub train_format: Option<Format>,
    #[arg(long)]
    pub eval: PathBuf,
    #[arg(long)]
    pub eval_format: Option<Format>,
    /// Training order, one train index per line (as written by `resample`).
    #[arg(long, conflicts_with = "strategy")]
    pub order: Option<PathBuf>,
    /// Derive the training order with this strategy instead of reading one.
    #[arg(long)]
    pub strategy: Option<Strategy>,
    /// Seed for `--strategy`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Train only on CSC samples of the training set.
    #[arg(long)]
    pub csc_only: bool,
    #[arg(long, default_value_t = 0.1)]
    pub lr: f64,
    /// SGD steps; defaults to one pass over the training order.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Trailing window of the running-mean loss trace.
    #[arg(long, default_value_t = 100)]
    pub loss_window: usize,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.3)]
    pub p_csc: f64,
    #[arg(long, default_value_t = 0.95)]
    pub clue_fidelity: f64,
    #[arg(long, default_value_t = 0.9)]
    pub semantic_fidelity: f64,
    /// Inclusive distance range of low-band pairs, e.g. `2-3`.
    #[arg(long, default_value = "2-3", value_parser = parse_band)]
    pub low_band: Band,
    #[arg(long, default_value = "12-13", value_parser = parse_band)]
    pub high_band: Band,
    #[arg(long, default_value_t = 16)]
    pub text_len: usize,
    /// Characters to draw texts from; defaults to 200 CJK ideographs.
    #[arg(long)]
    pub alphabet: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output format; guessed from the extension of `--out` when omitted.
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// A manifest.json written by an earlier run.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write outputs here instead of the recorded location.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn parse_band(s: &str) -> Result<Band, String> {
    let (lo, hi) = match s.split_once('-') {
        Some((lo, hi)) => (lo, hi),
        None => (s, s),
    };
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("invalid band {s:?}, expected MIN-MAX"));
    Ok(Band::new(parse(lo)?, parse(hi)?))
}
