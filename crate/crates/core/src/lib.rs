//! Edit-distance clue diagnostics and clue-aware training orders for
//! text-pair matching corpora.
//!
//! - [`corpus`]: the text-pair data model, TSV/JSONL I/O and a synthetic
//!   generator with a controllable distance/label correlation.
//! - [`metrics`]: Levenshtein distance, character overlap, Spearman's rho.
//! - [`analysis`]: per-distance label histograms, CSC flags, the
//!   E-pred/H-pred/Normal partition and accuracy gaps.
//! - [`sampler`]: random, LLS-CSC, GLS-CSC and length-curriculum orders.
//! - [`probe`]: a logistic-regression bias probe trained in a given order.

pub mod analysis;
pub mod corpus;
mod error;
pub mod metrics;
pub mod probe;
pub mod sampler;

pub use analysis::{
    build_histogram, flag_csc, gap, partition_eval, BoundaryMode, ClueFlags, CluePolicy, DistanceHistogram,
    EvalPartition, GapReport,
};
pub use corpus::{generate_synthetic, ingest, Dataset, Format, Label, SynthConfig, TextPair};
pub use error::{Error, Result};
pub use metrics::{char_overlap, featurize, levenshtein, spearman_rho, PairFeatures};
pub use probe::{train, ProbeHyperparams, ProbeModel};
pub use sampler::{compute_alpha, gls_csc, lls_csc, random_order, ResampleResult, SamplerConfig, Strategy};
