//! Clue diagnostics: per-distance label histograms, CSC flags, the
//! E-pred / H-pred / Normal evaluation partition, cross-dataset rank
//! correlation and accuracy gaps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Label};
use crate::error::{Error, Result};
use crate::metrics::{levenshtein, spearman_rho};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub zero: usize,
    pub one: usize,
}

impl LabelCounts {
    pub fn total(&self) -> usize {
        self.zero + self.one
    }

    fn add(&mut self, label: Label) {
        match label {
            Label::Mismatch => self.zero += 1,
            Label::Match => self.one += 1,
        }
    }

    /// Strict majority label; `None` on a tie or an empty bucket.
    pub fn majority(&self) -> Option<Label> {
        use std::cmp::Ordering::*;
        match self.one.cmp(&self.zero) {
            Greater => Some(Label::Match),
            Less => Some(Label::Mismatch),
            Equal => None,
        }
    }

    /// Share of the larger class, in `[0.5, 1]` for non-empty buckets.
    pub fn majority_share(&self) -> f64 {
        if self.total() == 0 {
            return 0.0;
        }
        self.zero.max(self.one) as f64 / self.total() as f64
    }
}

/// Label counts per edit distance.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceHistogram {
    buckets: BTreeMap<usize, LabelCounts>,
}

impl DistanceHistogram {
    pub fn from_observations(obs: impl IntoIterator<Item = (usize, Label)>) -> Self {
        let mut buckets: BTreeMap<usize, LabelCounts> = BTreeMap::new();
        for (d, label) in obs {
            buckets.entry(d).or_default().add(label);
        }
        DistanceHistogram { buckets }
    }

    pub fn buckets(&self) -> &BTreeMap<usize, LabelCounts> {
        &self.buckets
    }

    pub fn get(&self, distance: usize) -> LabelCounts {
        self.buckets.get(&distance).copied().unwrap_or_default()
    }

    pub fn total(&self) -> usize {
        self.buckets.values().map(LabelCounts::total).sum()
    }

    pub fn max_distance(&self) -> Option<usize> {
        self.buckets.keys().next_back().copied()
    }

    /// Counts for one label over distances `0..=max`, zero-filled.
    pub fn aligned_counts(&self, label: Label, max: usize) -> Vec<f64> {
        (0..=max)
            .map(|d| {
                let c = self.get(d);
                (match label {
                    Label::Mismatch => c.zero,
                    Label::Match => c.one,
                }) as f64
            })
            .collect()
    }
}

/// Edit distance of every pair, in index order.
pub fn pair_distances(dataset: &Dataset) -> Vec<usize> {
    dataset.iter().map(|p| levenshtein(&p.text_a, &p.text_b)).collect()
}

pub fn build_histogram(dataset: &Dataset) -> DistanceHistogram {
    DistanceHistogram::from_observations(pair_distances(dataset).into_iter().zip(dataset.iter().map(|p| p.label)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// Only low distances with majority 1 and high distances with majority 0
    /// can qualify.
    #[default]
    Fixed,
    /// Any distance passing the threshold and support tests qualifies.
    Derived,
}

impl FromStr for BoundaryMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fixed" => Ok(BoundaryMode::Fixed),
            "derived" => Ok(BoundaryMode::Derived),
            other => Err(format!("unknown boundary mode {other:?}")),
        }
    }
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryMode::Fixed => "fixed",
            BoundaryMode::Derived => "derived",
        })
    }
}

/// Parameters deciding which distances carry the clue and where the
/// easy/hard evaluation boundaries lie.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CluePolicy {
    /// Majority-label share a bucket needs to qualify; must exceed 0.5.
    pub threshold: f64,
    pub min_support: usize,
    pub low_boundary: usize,
    pub high_boundary: usize,
    pub boundary_mode: BoundaryMode,
}

impl Default for CluePolicy {
    fn default() -> Self {
        CluePolicy {
            threshold: 0.70,
            min_support: 50,
            low_boundary: 3,
            high_boundary: 12,
            boundary_mode: BoundaryMode::Fixed,
        }
    }
}

impl CluePolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.5 && self.threshold <= 1.0) {
            return Err(Error::InvalidPolicy(format!(
                "threshold must exceed 0.5 and be at most 1 (got {})",
                self.threshold
            )));
        }
        if self.min_support == 0 {
            return Err(Error::InvalidPolicy("min_support must be positive".into()));
        }
        if self.low_boundary >= self.high_boundary {
            return Err(Error::InvalidPolicy(format!(
                "low_boundary ({}) must be below high_boundary ({})",
                self.low_boundary, self.high_boundary
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualifyingDistance {
    pub distance: usize,
    pub majority: Label,
    pub share: f64,
    pub support: usize,
}

/// Distances whose label distribution is skewed enough to count as a clue.
pub fn qualifying_distances(histogram: &DistanceHistogram, policy: &CluePolicy) -> Result<Vec<QualifyingDistance>> {
    policy.validate()?;
    let mut out = Vec::new();
    for (&distance, counts) in histogram.buckets() {
        let Some(majority) = counts.majority() else { continue };
        let share = counts.majority_share();
        if counts.total() < policy.min_support || share < policy.threshold {
            continue;
        }
        let direction_ok = match policy.boundary_mode {
            BoundaryMode::Derived => true,
            BoundaryMode::Fixed => {
                (distance <= policy.low_boundary && majority == Label::Match)
                    || (distance >= policy.high_boundary && majority == Label::Mismatch)
            }
        };
        if direction_ok {
            out.push(QualifyingDistance { distance, majority, share, support: counts.total() });
        }
    }
    Ok(out)
}

/// CSC membership over dataset indices.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ClueFlags {
    is_csc: Vec<bool>,
    qualifying: Vec<QualifyingDistance>,
}

impl ClueFlags {
    /// Flags from a raw membership mask, with no qualifying-distance record.
    pub fn from_mask(mask: Vec<bool>) -> Self {
        ClueFlags { is_csc: mask, qualifying: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.is_csc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_csc.is_empty()
    }

    pub fn is_csc(&self, index: usize) -> bool {
        self.is_csc[index]
    }

    pub fn mask(&self) -> &[bool] {
        &self.is_csc
    }

    pub fn count(&self) -> usize {
        self.is_csc.iter().filter(|&&f| f).count()
    }

    pub fn qualifying(&self) -> &[QualifyingDistance] {
        &self.qualifying
    }

    pub fn csc_indices(&self) -> Vec<usize> {
        self.is_csc.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect()
    }

    pub fn other_indices(&self) -> Vec<usize> {
        self.is_csc.iter().enumerate().filter(|(_, &f)| !f).map(|(i, _)| i).collect()
    }
}

/// Flags CSC samples: a pair is CSC iff its distance qualifies under the
/// policy and its label equals that distance's majority label.
pub fn flag_csc(dataset: &Dataset, histogram: &DistanceHistogram, policy: &CluePolicy) -> Result<ClueFlags> {
    if histogram.total() != dataset.len() {
        return Err(Error::InvalidArgument(format!(
            "histogram covers {} pairs but the dataset has {}",
            histogram.total(),
            dataset.len()
        )));
    }
    let distances = pair_distances(dataset);
    let labels = dataset.labels();
    flag_from_distances(&distances, &labels, histogram, policy)
}

/// [`flag_csc`] over precomputed distances.
pub fn flag_from_distances(
    distances: &[usize],
    labels: &[Label],
    histogram: &DistanceHistogram,
    policy: &CluePolicy,
) -> Result<ClueFlags> {
    let qualifying = qualifying_distances(histogram, policy)?;
    let majority: BTreeMap<usize, Label> = qualifying.iter().map(|q| (q.distance, q.majority)).collect();
    let is_csc = distances.iter().zip(labels).map(|(d, l)| majority.get(d) == Some(l)).collect();
    Ok(ClueFlags { is_csc, qualifying })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    EPred,
    HPred,
    Normal,
}

/// Easy when the clue direction agrees with the label, hard when it
/// contradicts it, normal between the boundaries.
pub fn classify(distance: usize, label: Label, policy: &CluePolicy) -> Split {
    let clue = if distance <= policy.low_boundary {
        Label::Match
    } else if distance >= policy.high_boundary {
        Label::Mismatch
    } else {
        return Split::Normal;
    };
    if clue == label {
        Split::EPred
    } else {
        Split::HPred
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPartition {
    pub e_pred: Vec<usize>,
    pub h_pred: Vec<usize>,
    pub normal: Vec<usize>,
}

impl EvalPartition {
    pub fn from_distances(distances: &[usize], labels: &[Label], policy: &CluePolicy) -> Self {
        let mut part = EvalPartition::default();
        for (i, (&d, &l)) in distances.iter().zip(labels).enumerate() {
            match classify(d, l, policy) {
                Split::EPred => part.e_pred.push(i),
                Split::HPred => part.h_pred.push(i),
                Split::Normal => part.normal.push(i),
            }
        }
        part
    }

    pub fn len(&self) -> usize {
        self.e_pred.len() + self.h_pred.len() + self.normal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sizes(&self) -> PartitionSizes {
        PartitionSizes {
            e_pred: self.e_pred.len(),
            h_pred: self.h_pred.len(),
            normal: self.normal.len(),
            total: self.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSizes {
    pub e_pred: usize,
    pub h_pred: usize,
    pub normal: usize,
    pub total: usize,
}

pub fn partition_eval(dataset: &Dataset, policy: &CluePolicy) -> EvalPartition {
    EvalPartition::from_distances(&pair_distances(dataset), &dataset.labels(), policy)
}

/// Pairwise Spearman correlations of per-distance label counts, one matrix
/// per label. `None` marks an entry that is undefined because a count vector
/// is constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpearmanMatrices {
    pub names: Vec<String>,
    pub max_distance: usize,
    pub label0: Vec<Vec<Option<f64>>>,
    pub label1: Vec<Vec<Option<f64>>>,
}

pub fn cross_dataset_spearman(inputs: &[(&str, &DistanceHistogram)]) -> Result<SpearmanMatrices> {
    if inputs.len() < 2 {
        return Err(Error::InvalidArgument("cross-dataset correlation needs at least two datasets".into()));
    }
    let max = inputs.iter().filter_map(|(_, h)| h.max_distance()).max().unwrap_or(0);
    // Need at least two support points to rank anything.
    let max = max.max(1);

    let matrix = |label: Label| -> Vec<Vec<Option<f64>>> {
        let vecs: Vec<Vec<f64>> = inputs.iter().map(|(_, h)| h.aligned_counts(label, max)).collect();
        let k = vecs.len();
        let mut m = vec![vec![None; k]; k];
        for i in 0..k {
            for j in i..k {
                let rho = spearman_rho(&vecs[i], &vecs[j]).ok();
                m[i][j] = rho;
                m[j][i] = rho;
            }
        }
        m
    };

    Ok(SpearmanMatrices {
        names: inputs.iter().map(|(n, _)| n.to_string()).collect(),
        max_distance: max,
        label0: matrix(Label::Mismatch),
        label1: matrix(Label::Match),
    })
}

/// Accuracy on the easy and hard splits and their difference. Accuracies of
/// empty splits are `None` rather than zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub acc_e: Option<f64>,
    pub acc_h: Option<f64>,
    pub acc_normal: Option<f64>,
    pub delta: Option<f64>,
    pub n_e: usize,
    pub n_h: usize,
    pub n_normal: usize,
}

pub fn gap(predictions: &[Label], truth: &[Label], partition: &EvalPartition) -> Result<GapReport> {
    if predictions.len() != truth.len() {
        return Err(Error::InvalidArgument(format!("{} predictions for {} labels", predictions.len(), truth.len())));
    }
    if partition.len() != truth.len() {
        return Err(Error::InvalidArgument("partition does not cover the label sequence".into()));
    }
    let accuracy = |idx: &[usize]| -> Option<f64> {
        if idx.is_empty() {
            return None;
        }
        let hits = idx.iter().filter(|&&i| predictions[i] == truth[i]).count();
        Some(hits as f64 / idx.len() as f64)
    };
    let acc_e = accuracy(&partition.e_pred);
    let acc_h = accuracy(&partition.h_pred);
    Ok(GapReport {
        acc_e,
        acc_h,
        acc_normal: accuracy(&partition.normal),
        delta: acc_e.zip(acc_h).map(|(e, h)| e - h),
        n_e: partition.e_pred.len(),
        n_h: partition.h_pred.len(),
        n_normal: partition.normal.len(),
    })
}

/// One row of the per-distance table written as `histogram.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub distance: usize,
    pub count0: usize,
    pub count1: usize,
    pub majority: Option<Label>,
    pub qualifies: bool,
}

pub fn histogram_rows(histogram: &DistanceHistogram, flags: &ClueFlags) -> Vec<HistogramRow> {
    let qualifying: Vec<usize> = flags.qualifying().iter().map(|q| q.distance).collect();
    histogram
        .buckets()
        .iter()
        .map(|(&distance, c)| HistogramRow {
            distance,
            count0: c.zero,
            count1: c.one,
            majority: c.majority(),
            qualifies: qualifying.contains(&distance),
        })
        .collect()
}

/// Summary written as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub source: String,
    pub total: usize,
    pub csc_count: usize,
    pub other_count: usize,
    pub policy: CluePolicy,
    pub qualifying_distances: Vec<QualifyingDistance>,
    pub majority_table: Vec<HistogramRow>,
}

impl AnalysisReport {
    pub fn new(dataset: &Dataset, histogram: &DistanceHistogram, flags: &ClueFlags, policy: &CluePolicy) -> Self {
        let csc_count = flags.count();
        AnalysisReport {
            source: dataset.source_name().to_owned(),
            total: dataset.len(),
            csc_count,
            other_count: dataset.len() - csc_count,
            policy: *policy,
            qualifying_distances: flags.qualifying().to_vec(),
            majority_table: histogram_rows(histogram, flags),
        }
    }
}
