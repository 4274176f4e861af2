//! A bias-only probe: logistic regression over superficial pair features,
//! trained by per-sample SGD in a caller-supplied order.
//!
//! Features are `[distance / max_len, char_overlap, semantic_marker, 1]`.
//! The marker feature is 1 only when both texts contain
//! [`SEMANTIC_MARKER`](crate::corpus::SEMANTIC_MARKER), which in practice
//! means synthetic corpora.

use std::collections::BTreeMap;
use std::collections::VecDeque;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Label, TextPair, SEMANTIC_MARKER};
use crate::error::{Error, Result};
use crate::metrics::{char_overlap, levenshtein};
use crate::sampler::least_squares;

pub const N_FEATURES: usize = 4;
pub const FEATURE_NAMES: [&str; N_FEATURES] = ["normalized_distance", "char_overlap", "semantic_marker", "bias"];
/// Index of the normalized edit distance in a feature vector.
pub const DISTANCE_FEATURE: usize = 0;

pub type FeatureVector = [f64; N_FEATURES];

pub fn probe_features(pair: &TextPair) -> Result<FeatureVector> {
    let max_len = pair.text_a.chars().count().max(pair.text_b.chars().count());
    let distance = levenshtein(&pair.text_a, &pair.text_b);
    let normalized = if max_len == 0 { 0.0 } else { distance as f64 / max_len as f64 };
    let marker = pair.text_a.contains(SEMANTIC_MARKER) && pair.text_b.contains(SEMANTIC_MARKER);
    Ok([normalized, char_overlap(&pair.text_a, &pair.text_b)?, if marker { 1.0 } else { 0.0 }, 1.0])
}

fn dot(w: &[f64], x: &FeatureVector) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Cross-entropy of one sample, computed as `softplus(z) - y·z`.
pub fn logistic_loss(weights: &[f64], x: &FeatureVector, label: Label) -> f64 {
    let z = dot(weights, x);
    let y = f64::from(label.as_u8());
    let softplus = z.max(0.0) + (-z.abs()).exp().ln_1p();
    softplus - y * z
}

/// Gradient of [`logistic_loss`] with respect to the weights.
pub fn logistic_gradient(weights: &[f64], x: &FeatureVector, label: Label) -> FeatureVector {
    let residual = sigmoid(dot(weights, x)) - f64::from(label.as_u8());
    x.map(|xi| residual * xi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeHyperparams {
    pub learning_rate: f64,
    /// Number of SGD steps; `None` means one pass over the effective order.
    /// Larger values cycle through the order again.
    pub steps: Option<usize>,
    /// Trailing window of the running-mean loss trace.
    pub loss_window: usize,
}

impl Default for ProbeHyperparams {
    fn default() -> Self {
        ProbeHyperparams { learning_rate: 0.1, steps: None, loss_window: 100 }
    }
}

impl ProbeHyperparams {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidArgument(format!("learning rate must be positive, got {}", self.learning_rate)));
        }
        if self.loss_window == 0 {
            return Err(Error::InvalidArgument("loss window must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossPoint {
    pub step: usize,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeModel {
    pub feature_names: Vec<String>,
    pub weights: Vec<f64>,
    #[serde(skip)]
    pub loss_trace: Vec<LossPoint>,
}

impl Default for ProbeModel {
    fn default() -> Self {
        ProbeModel::from_weights([0.0; N_FEATURES])
    }
}

impl ProbeModel {
    pub fn from_weights(weights: FeatureVector) -> Self {
        ProbeModel {
            feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            weights: weights.to_vec(),
            loss_trace: Vec::new(),
        }
    }

    pub fn weight(&self, feature: &str) -> Option<f64> {
        self.feature_names.iter().position(|f| f == feature).map(|i| self.weights[i])
    }

    pub fn probability(&self, x: &FeatureVector) -> f64 {
        sigmoid(dot(&self.weights, x))
    }

    /// Probability exactly 0.5 resolves to label 1.
    pub fn predict(&self, x: &FeatureVector) -> Label {
        Label::from(self.probability(x) >= 0.5)
    }

    pub fn predict_pair(&self, pair: &TextPair) -> Result<Label> {
        Ok(self.predict(&probe_features(pair)?))
    }

    pub fn predict_all(&self, dataset: &Dataset) -> Result<Vec<Label>> {
        dataset.iter().map(|p| self.predict_pair(p)).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: ProbeModel = serde_json::from_str(s)?;
        if model.feature_names != FEATURE_NAMES || model.weights.len() != N_FEATURES {
            return Err(Error::InvalidArgument(format!("model features must be {FEATURE_NAMES:?}")));
        }
        if model.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("model weights must be finite".into()));
        }
        Ok(model)
    }

    /// Loss trace as CSV with columns `step,loss`.
    pub fn write_loss_trace<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for p in &self.loss_trace {
            w.serialize(p)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Trains from zero weights, one gradient step per visited sample, visiting
/// `order` and skipping indices outside `restrict_to` when given. Each trace
/// point is the mean pre-update loss over the trailing `loss_window` steps.
pub fn train(
    dataset: &Dataset,
    order: &[usize],
    hp: &ProbeHyperparams,
    restrict_to: Option<&[usize]>,
) -> Result<ProbeModel> {
    hp.validate()?;
    let mut seen = vec![false; dataset.len()];
    if order.len() != dataset.len() || !order.iter().all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
    {
        return Err(Error::InvalidArgument("order is not a permutation of the dataset indices".into()));
    }

    let effective: Vec<usize> = match restrict_to {
        Some(keep) => {
            let mut mask = vec![false; dataset.len()];
            for &i in keep {
                if i >= mask.len() {
                    return Err(Error::InvalidArgument(format!("restricted index {i} out of range")));
                }
                mask[i] = true;
            }
            order.iter().copied().filter(|&i| mask[i]).collect()
        }
        None => order.to_vec(),
    };
    if effective.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let features: Vec<(FeatureVector, Label)> =
        effective.iter().map(|&i| probe_features(&dataset[i]).map(|x| (x, dataset[i].label))).collect::<Result<_>>()?;

    let steps = hp.steps.unwrap_or(effective.len());
    let mut weights = [0.0; N_FEATURES];
    let mut trace = Vec::with_capacity(steps);
    let mut window: VecDeque<f64> = VecDeque::with_capacity(hp.loss_window);
    let mut window_sum = 0.0;

    for (step, (x, y)) in features.iter().cycle().take(steps).enumerate() {
        let loss = logistic_loss(&weights, x, *y);
        window.push_back(loss);
        window_sum += loss;
        if window.len() > hp.loss_window {
            window_sum -= window.pop_front().unwrap_or(0.0);
        }
        trace.push(LossPoint { step: step + 1, loss: (window_sum / window.len() as f64).max(0.0) });

        let grad = logistic_gradient(&weights, x, *y);
        for (w, g) in weights.iter_mut().zip(grad) {
            *w -= hp.learning_rate * g;
        }
    }

    let mut model = ProbeModel::from_weights(weights);
    model.loss_trace = trace;
    Ok(model)
}

/// Accuracy of thresholded predictions over `indices`.
pub fn evaluate(model: &ProbeModel, dataset: &Dataset, indices: &[usize]) -> Result<f64> {
    if indices.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut hits = 0usize;
    for &i in indices {
        let pair = dataset.get(i).ok_or_else(|| Error::InvalidArgument(format!("index {i} out of range")))?;
        if model.predict_pair(pair)? == pair.label {
            hits += 1;
        }
    }
    Ok(hits as f64 / indices.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TendencyRow {
    pub distance: usize,
    pub count: usize,
    pub mean_p1: f64,
}

/// Mean predicted probability of label 1 at each edit distance present.
pub fn tendency_report(model: &ProbeModel, dataset: &Dataset) -> Result<Vec<TendencyRow>> {
    let mut acc: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for pair in dataset {
        let d = levenshtein(&pair.text_a, &pair.text_b);
        let p = model.probability(&probe_features(pair)?);
        let e = acc.entry(d).or_insert((0, 0.0));
        e.0 += 1;
        e.1 += p;
    }
    Ok(acc
        .into_iter()
        .map(|(distance, (count, sum))| TendencyRow { distance, count, mean_p1: sum / count as f64 })
        .collect())
}

/// Count-weighted mean of `mean_p1` over rows whose distance falls in
/// `lo..=hi`.
pub fn mean_tendency(rows: &[TendencyRow], lo: usize, hi: usize) -> Option<f64> {
    let (n, s) = rows
        .iter()
        .filter(|r| (lo..=hi).contains(&r.distance))
        .fold((0usize, 0.0), |(n, s), r| (n + r.count, s + r.mean_p1 * r.count as f64));
    (n > 0).then(|| s / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossDrop {
    Detected,
    NotDetected,
}

/// Flags a sharp loss drop once the CSC cluster starts.
///
/// The trace is split at `csc_start_fraction` of its length and a
/// least-squares slope is fitted to each side. A drop is detected when the
/// slope after the split is negative and below twice the slope before it.
pub fn loss_drop_detector(trace: &[LossPoint], csc_start_fraction: f64) -> LossDrop {
    let slopes = loss_slopes(trace, csc_start_fraction);
    match slopes {
        Some((before, after)) if after < 0.0 && after < 2.0 * before => LossDrop::Detected,
        _ => LossDrop::NotDetected,
    }
}

/// `(slope_before, slope_after)` used by [`loss_drop_detector`].
pub fn loss_slopes(trace: &[LossPoint], csc_start_fraction: f64) -> Option<(f64, f64)> {
    if !(0.0..1.0).contains(&csc_start_fraction) {
        return None;
    }
    let split = (csc_start_fraction * trace.len() as f64).floor() as usize;
    let pts: Vec<(f64, f64)> = trace.iter().map(|p| (p.step as f64, p.loss)).collect();
    let before = least_squares(&pts[..split])?;
    let after = least_squares(&pts[split..])?;
    Some((before.slope, after.slope))
}
