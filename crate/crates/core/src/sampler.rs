//! Training-order strategies.
//!
//! GLS-CSC draws from the CSC pool with a probability that ramps linearly
//! with the step, `min(1, α·i)`, so clue-bearing samples are spread over the
//! run with growing density toward the end. LLS-CSC puts every CSC sample
//! after every other sample. `random` and `curriculum` ignore the flags.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::ClueFlags;
use crate::corpus::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Random,
    LlsCsc,
    GlsCsc,
    #[serde(rename = "curriculum")]
    CurriculumLength,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Random, Strategy::LlsCsc, Strategy::GlsCsc, Strategy::CurriculumLength];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Random => "random",
            Strategy::LlsCsc => "lls-csc",
            Strategy::GlsCsc => "gls-csc",
            Strategy::CurriculumLength => "curriculum",
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.replace('_', "-").as_str() {
            "random" => Ok(Strategy::Random),
            "lls-csc" => Ok(Strategy::LlsCsc),
            "gls-csc" => Ok(Strategy::GlsCsc),
            "curriculum" | "curriculum-length" => Ok(Strategy::CurriculumLength),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub strategy: Strategy,
    pub seed: u64,
    /// Replaces the derived ramp slope for GLS-CSC.
    pub alpha_override: Option<f64>,
}

impl SamplerConfig {
    pub fn new(strategy: Strategy, seed: u64) -> Self {
        SamplerConfig { strategy, seed, alpha_override: None }
    }

    pub fn validate(&self) -> Result<()> {
        match self.alpha_override {
            Some(a) if !(a.is_finite() && a > 0.0) => {
                Err(Error::InvalidArgument(format!("alpha override must be positive, got {a}")))
            }
            _ => Ok(()),
        }
    }
}

/// Where an emitted index came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    FromCsc,
    FromOther,
    /// Placed without a per-step pool draw: the bulk insert of a pool once
    /// the other one is exhausted, or any flag-agnostic strategy.
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ResampleResult {
    pub order: Vec<usize>,
    pub provenance: Vec<Provenance>,
}

impl ResampleResult {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Position of the first fallback entry, if any.
    pub fn fallback_start(&self) -> Option<usize> {
        self.provenance.iter().position(|p| *p == Provenance::Fallback)
    }

    pub fn count(&self, provenance: Provenance) -> usize {
        self.provenance.iter().filter(|&&p| p == provenance).count()
    }

    /// True when `order` is a bijection on `0..len`.
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.order.len()];
        self.order.iter().all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
    }

    fn push_all(&mut self, indices: impl IntoIterator<Item = usize>, provenance: Provenance) {
        for i in indices {
            self.order.push(i);
            self.provenance.push(provenance);
        }
    }
}

/// Ramp slope `α = 2 / ((n_other / n_csc + 1) · n)`, i.e. `2·n_csc / n²`.
///
/// With this slope the area under `α·i` over `n` steps equals `n_csc`, so
/// both pools are expected to run dry together at the last step.
pub fn compute_alpha(n_csc: usize, n_other: usize) -> Result<f64> {
    if n_csc == 0 {
        return Err(Error::NoCscSamples);
    }
    let n = (n_csc + n_other) as f64;
    Ok(2.0 / ((n_other as f64 / n_csc as f64 + 1.0) * n))
}

/// `Σ_{i=1..n} min(1, α·i)`: the expected number of CSC draws if neither pool
/// ran out early.
pub fn expected_csc_draws(alpha: f64, n: usize) -> f64 {
    (1..=n).map(|i| (alpha * i as f64).min(1.0)).sum()
}

/// Step-by-step GLS-CSC draw. Yields `(index, provenance)` until both pools
/// are drained.
#[derive(Debug, Clone)]
pub struct GlsCscSampler {
    csc: Vec<usize>,
    other: Vec<usize>,
    alpha: f64,
    step: usize,
    rng: ChaCha8Rng,
    fallback: Vec<usize>,
}

impl GlsCscSampler {
    /// Pools are shuffled up front; each draw pops the end of the chosen pool,
    /// which is a uniform draw without replacement.
    pub fn new(flags: &ClueFlags, alpha: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut csc = flags.csc_indices();
        let mut other = flags.other_indices();
        csc.shuffle(&mut rng);
        other.shuffle(&mut rng);
        GlsCscSampler { csc, other, alpha, step: 0, rng, fallback: Vec::new() }
    }

    /// A sampler whose next draw is step `next_step` (1-based) with the given
    /// pool contents.
    pub fn from_pools(csc: Vec<usize>, other: Vec<usize>, alpha: f64, next_step: usize, seed: u64) -> Self {
        GlsCscSampler {
            csc,
            other,
            alpha,
            step: next_step.saturating_sub(1),
            rng: ChaCha8Rng::seed_from_u64(seed),
            fallback: Vec::new(),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Probability of drawing from the CSC pool at 1-based step `i`.
    pub fn csc_probability(&self, i: usize) -> f64 {
        (self.alpha * i as f64).min(1.0)
    }
}

impl Iterator for GlsCscSampler {
    type Item = (usize, Provenance);

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(i) = self.fallback.pop() {
            return Some((i, Provenance::Fallback));
        }
        if self.csc.is_empty() || self.other.is_empty() {
            // Remaining pool goes in as-is; it is already in shuffled order.
            std::mem::swap(&mut self.fallback, if self.csc.is_empty() { &mut self.other } else { &mut self.csc });
            return self.fallback.pop().map(|i| (i, Provenance::Fallback));
        }
        self.step += 1;
        let u: f64 = self.rng.gen();
        if u < self.csc_probability(self.step) {
            self.csc.pop().map(|i| (i, Provenance::FromCsc))
        } else {
            self.other.pop().map(|i| (i, Provenance::FromOther))
        }
    }
}

pub fn gls_csc(flags: &ClueFlags, config: &SamplerConfig) -> Result<ResampleResult> {
    config.validate()?;
    let n_csc = flags.count();
    let alpha = match (config.alpha_override, n_csc) {
        (Some(a), _) => a,
        (None, 0) => 0.0, // pool empty: everything falls back
        (None, _) => compute_alpha(n_csc, flags.len() - n_csc)?,
    };
    let mut out = ResampleResult::default();
    for (i, p) in GlsCscSampler::new(flags, alpha, config.seed) {
        out.order.push(i);
        out.provenance.push(p);
    }
    Ok(out)
}

/// Shuffled non-CSC samples followed by shuffled CSC samples.
pub fn lls_csc(flags: &ClueFlags, seed: u64) -> ResampleResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut other = flags.other_indices();
    let mut csc = flags.csc_indices();
    other.shuffle(&mut rng);
    csc.shuffle(&mut rng);
    let mut out = ResampleResult::default();
    out.push_all(other, Provenance::FromOther);
    out.push_all(csc, Provenance::FromCsc);
    out
}

pub fn random_order(n: usize, seed: u64) -> ResampleResult {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut out = ResampleResult::default();
    out.push_all(order, Provenance::Fallback);
    out
}

/// Shortest pairs first, by total character length; ties keep index order.
pub fn curriculum_length(dataset: &Dataset) -> ResampleResult {
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    let lens: Vec<usize> = dataset.iter().map(|p| p.len_sum()).collect();
    order.sort_by_key(|&i| lens[i]);
    let mut out = ResampleResult::default();
    out.push_all(order, Provenance::Fallback);
    out
}

/// Runs the configured strategy over a dataset and its flags.
pub fn resample(dataset: &Dataset, flags: &ClueFlags, config: &SamplerConfig) -> Result<ResampleResult> {
    if flags.len() != dataset.len() {
        return Err(Error::InvalidArgument(format!("{} flags for {} pairs", flags.len(), dataset.len())));
    }
    match config.strategy {
        Strategy::Random => Ok(random_order(dataset.len(), config.seed)),
        Strategy::LlsCsc => Ok(lls_csc(flags, config.seed)),
        Strategy::GlsCsc => gls_csc(flags, config),
        Strategy::CurriculumLength => Ok(curriculum_length(dataset)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub step: usize,
    pub csc_fraction: f64,
}

/// CSC share of consecutive, non-overlapping windows of an order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionCurve {
    pub window: usize,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl ProportionCurve {
    /// Least-squares line through the points whose window ends at or before
    /// `until_step`. `None` with fewer than two points.
    pub fn linear_fit(&self, until_step: usize) -> Option<LinearFit> {
        let pts: Vec<(f64, f64)> =
            self.points.iter().filter(|p| p.step <= until_step).map(|p| (p.step as f64, p.csc_fraction)).collect();
        least_squares(&pts)
    }
}

pub(crate) fn least_squares(pts: &[(f64, f64)]) -> Option<LinearFit> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in pts {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit { slope, intercept: my - slope * mx, r_squared })
}

pub fn proportion_curve(result: &ResampleResult, flags: &ClueFlags, window: usize) -> Result<ProportionCurve> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    if window > result.len() {
        return Err(Error::InvalidArgument(format!("window {window} exceeds order length {}", result.len())));
    }
    let points = result
        .order
        .chunks_exact(window)
        .enumerate()
        .map(|(k, chunk)| CurvePoint {
            step: (k + 1) * window,
            csc_fraction: chunk.iter().filter(|&&i| flags.is_csc(i)).count() as f64 / window as f64,
        })
        .collect();
    Ok(ProportionCurve { window, points })
}

/// One original index per line.
pub fn write_order<W: Write>(result: &ResampleResult, mut out: W) -> Result<()> {
    for i in &result.order {
        writeln!(out, "{i}")?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ProvenanceLine {
    step: usize,
    index: usize,
    provenance: Provenance,
}

/// JSONL of `{step, index, provenance}` with 1-based steps.
pub fn write_provenance<W: Write>(result: &ResampleResult, mut out: W) -> Result<()> {
    for (k, (&index, &provenance)) in result.order.iter().zip(&result.provenance).enumerate() {
        serde_json::to_writer(&mut out, &ProvenanceLine { step: k + 1, index, provenance })?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads an order file written by [`write_order`] and checks it is a
/// permutation of `0..n`.
pub fn read_order<R: BufRead>(input: R, n: usize) -> Result<Vec<usize>> {
    let mut order = Vec::with_capacity(n);
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let i: usize =
            line.parse().map_err(|_| Error::Parse { line: k + 1, message: format!("invalid index {line:?}") })?;
        order.push(i);
    }
    let check = ResampleResult { order, provenance: Vec::new() };
    if check.order.len() != n || !check.is_permutation() {
        return Err(Error::InvalidArgument(format!("order is not a permutation of 0..{n}")));
    }
    Ok(check.order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Label;
    use proptest::prelude::{any, prop, prop_assert, prop_assert_eq, proptest};

    fn flags(mask: &[bool]) -> ClueFlags {
        ClueFlags::from_mask(mask.to_vec())
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(compute_alpha(25, 75).unwrap(), 0.005);
        assert_eq!(compute_alpha(50, 50).unwrap(), 0.01);
        assert_eq!(compute_alpha(2500, 7500).unwrap(), 5e-5);
        assert!(matches!(compute_alpha(0, 10), Err(Error::NoCscSamples)));
        // all samples CSC: α = 2/n
        assert_eq!(compute_alpha(4, 0).unwrap(), 0.5);
    }

    #[test]
    fn alpha_matches_closed_form() {
        for (c, o) in [(1usize, 1usize), (3, 7), (17, 1000), (999, 1)] {
            let n = (c + o) as f64;
            let closed = 2.0 * c as f64 / (n * n);
            assert!((compute_alpha(c, o).unwrap() - closed).abs() <= 1e-15 * closed);
        }
    }

    #[test]
    fn no_csc_is_shuffle_with_fallback() {
        let f = flags(&[false; 10]);
        let r = gls_csc(&f, &SamplerConfig::new(Strategy::GlsCsc, 3)).unwrap();
        assert!(r.is_permutation());
        assert_eq!(r.len(), 10);
        assert!(r.provenance.iter().all(|&p| p == Provenance::Fallback));
        assert_ne!(r.order, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn all_csc_is_shuffle_with_fallback() {
        let f = flags(&[true; 10]);
        let r = gls_csc(&f, &SamplerConfig::new(Strategy::GlsCsc, 3)).unwrap();
        assert!(r.is_permutation());
        assert_eq!(r.fallback_start(), Some(0));
    }

    #[test]
    fn empty_inputs() {
        let f = ClueFlags::default();
        assert!(gls_csc(&f, &SamplerConfig::new(Strategy::GlsCsc, 0)).unwrap().is_empty());
        assert!(lls_csc(&f, 0).is_empty());
        assert!(random_order(0, 0).is_empty());
        assert!(curriculum_length(&Dataset::default()).is_empty());
    }

    #[test]
    fn provenance_points_at_matching_pool() {
        let mask: Vec<bool> = (0..500).map(|i| i % 3 == 0).collect();
        let f = flags(&mask);
        let r = gls_csc(&f, &SamplerConfig::new(Strategy::GlsCsc, 9)).unwrap();
        for (&i, &p) in r.order.iter().zip(&r.provenance) {
            match p {
                Provenance::FromCsc => assert!(mask[i]),
                Provenance::FromOther => assert!(!mask[i]),
                Provenance::Fallback => {}
            }
        }
        // Fallback only ever forms a suffix.
        if let Some(start) = r.fallback_start() {
            assert!(r.provenance[start..].iter().all(|&p| p == Provenance::Fallback));
        }
    }

    #[test]
    fn alpha_override_is_validated() {
        let f = flags(&[true, false]);
        let cfg = SamplerConfig { alpha_override: Some(0.0), ..SamplerConfig::new(Strategy::GlsCsc, 1) };
        assert!(gls_csc(&f, &cfg).is_err());
        // A huge slope puts all CSC samples first.
        let mask: Vec<bool> = (0..20).map(|i| i < 5).collect();
        let cfg = SamplerConfig { alpha_override: Some(10.0), ..SamplerConfig::new(Strategy::GlsCsc, 1) };
        let r = gls_csc(&flags(&mask), &cfg).unwrap();
        assert!(r.order[..5].iter().all(|&i| i < 5));
    }

    #[test]
    fn lls_examples() {
        let mask = [true, false, true, false, false];
        let r = lls_csc(&flags(&mask), 4);
        assert!(r.order[..3].iter().all(|&i| !mask[i]));
        assert!(r.order[3..].iter().all(|&i| mask[i]));
        assert_eq!(r, lls_csc(&flags(&mask), 4));
        let plain = lls_csc(&flags(&[false; 6]), 4);
        assert!(plain.is_permutation());
    }

    #[test]
    fn curriculum_examples() {
        let ds = Dataset::from_records(
            "t",
            vec![("ab", "cd", Label::Match), ("a", "b", Label::Match), ("abcd", "abcde", Label::Match)],
        )
        .unwrap();
        assert_eq!(curriculum_length(&ds).order, vec![1, 0, 2]);
        let same = Dataset::from_records(
            "t",
            vec![("ab", "c", Label::Match), ("a", "bc", Label::Mismatch), ("x", "yz", Label::Match)],
        )
        .unwrap();
        assert_eq!(curriculum_length(&same).order, vec![0, 1, 2]);
    }

    #[test]
    fn random_examples() {
        assert_eq!(random_order(1, 5).order, vec![0]);
        assert_eq!(random_order(50, 5), random_order(50, 5));
        assert_ne!(random_order(50, 5).order, random_order(50, 6).order);
    }

    #[test]
    fn random_order_is_uniform_on_three() {
        // Each of the 6 permutations should appear 1/6 of the time; with
        // 10_000 trials the sd of each frequency is 0.0037, so ±0.02 is 5σ.
        let mut counts = std::collections::HashMap::new();
        for seed in 0..10_000u64 {
            *counts.entry(random_order(3, seed).order).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        for (perm, c) in counts {
            let f = c as f64 / 10_000.0;
            assert!((f - 1.0 / 6.0).abs() <= 0.02, "{perm:?}: {f}");
        }
    }

    #[test]
    fn curve_examples() {
        let mask: Vec<bool> = (0..100).map(|i| i % 4 == 0).collect();
        let f = flags(&mask);
        let lls = proportion_curve(&lls_csc(&f, 1), &f, 5).unwrap();
        assert_eq!(lls.points.len(), 20);
        assert!(lls.points[..15].iter().all(|p| p.csc_fraction == 0.0));
        assert!(lls.points[15..].iter().all(|p| p.csc_fraction == 1.0));
        assert_eq!(lls.points[0].step, 5);

        assert!(proportion_curve(&lls_csc(&f, 1), &f, 0).is_err());
        assert!(proportion_curve(&lls_csc(&f, 1), &f, 101).is_err());
    }

    #[test]
    fn step_probability_ramp() {
        let s = GlsCscSampler::from_pools(vec![0], vec![1], 0.01, 1, 0);
        assert_eq!(s.csc_probability(50), 0.5);
        assert_eq!(s.csc_probability(100), 1.0);
        assert_eq!(s.csc_probability(500), 1.0);
    }

    #[test]
    fn frozen_pool_draw_frequency() {
        // P(FROM_CSC) at step i = α·i. 4000 trials at p = 0.3: 3σ = 0.0217.
        let alpha = 0.001;
        for (step, p) in [(300usize, 0.3f64), (800, 0.8)] {
            let trials = 4000;
            let hits = (0..trials as u64)
                .filter(|&seed| {
                    let mut s = GlsCscSampler::from_pools(vec![1, 2, 3], vec![4, 5, 6], alpha, step, seed);
                    s.next().unwrap().1 == Provenance::FromCsc
                })
                .count();
            let freq = hits as f64 / trials as f64;
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((freq - p).abs() <= 3.0 * sigma, "step {step}: {freq} vs {p}");
        }
    }

    #[test]
    fn order_round_trip_and_validation() {
        let r = random_order(25, 2);
        let mut buf = Vec::new();
        write_order(&r, &mut buf).unwrap();
        assert_eq!(read_order(buf.as_slice(), 25).unwrap(), r.order);
        assert!(read_order(&b"0\n1\n1\n"[..], 3).is_err());
        assert!(read_order(&b"0\n1\n"[..], 3).is_err());
        assert!(matches!(read_order(&b"0\nx\n"[..], 2), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn provenance_jsonl_shape() {
        let r = lls_csc(&flags(&[true, false]), 0);
        let mut buf = Vec::new();
        write_provenance(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "{\"step\":1,\"index\":1,\"provenance\":\"FROM_OTHER\"}\n{\"step\":2,\"index\":0,\"provenance\":\"FROM_CSC\"}\n");
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("sorted".parse::<Strategy>().is_err());
    }

    fn mask_strategy() -> impl proptest::strategy::Strategy<Value = Vec<bool>> {
        prop::collection::vec(any::<bool>(), 0..200)
    }

    proptest! {
        #[test]
        fn every_strategy_is_a_permutation(mask in mask_strategy(), seed in any::<u64>()) {
            let ds = Dataset::from_records("p", mask.iter().enumerate().map(|(i, _)| ("x".repeat(1 + i % 7), "y", Label::Match))).unwrap();
            let f = flags(&mask);
            for strategy in Strategy::ALL {
                let r = resample(&ds, &f, &SamplerConfig::new(strategy, seed)).unwrap();
                prop_assert!(r.is_permutation());
                prop_assert_eq!(r.len(), mask.len());
                prop_assert_eq!(r.provenance.len(), mask.len());
            }
        }

        #[test]
        fn lls_puts_csc_last(mask in mask_strategy(), seed in any::<u64>()) {
            let r = lls_csc(&flags(&mask), seed);
            let last_other = r.order.iter().rposition(|&i| !mask[i]);
            let first_csc = r.order.iter().position(|&i| mask[i]);
            if let (Some(a), Some(b)) = (last_other, first_csc) {
                prop_assert!(a < b);
            }
        }

        #[test]
        fn gls_is_deterministic(mask in mask_strategy(), seed in any::<u64>()) {
            let cfg = SamplerConfig::new(Strategy::GlsCsc, seed);
            prop_assert_eq!(gls_csc(&flags(&mask), &cfg).unwrap(), gls_csc(&flags(&mask), &cfg).unwrap());
        }
    }

    #[test]
    fn expected_exhaustion_identity() {
        // Σ α·i for i in 1..=n equals n_csc·(n+1)/n when α·n ≤ 1.
        for (c, o) in [(25usize, 75usize), (50, 50), (2500, 7500), (1, 999)] {
            let n = c + o;
            let alpha = compute_alpha(c, o).unwrap();
            let lhs = expected_csc_draws(alpha, n);
            let rhs = c as f64 * (n + 1) as f64 / n as f64;
            assert!((lhs - rhs).abs() <= 1e-9 * rhs, "{c}/{o}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn csc_positions_sit_between_random_and_lls() {
        let mask: Vec<bool> = (0..2000).map(|i| i % 4 == 0).collect();
        let f = flags(&mask);
        let mean_pos = |r: &ResampleResult| -> f64 {
            let pos: Vec<usize> = r.order.iter().enumerate().filter(|(_, &i)| mask[i]).map(|(k, _)| k).collect();
            pos.iter().sum::<usize>() as f64 / pos.len() as f64
        };
        let (mut rnd, mut gls, mut lls) = (0.0, 0.0, 0.0);
        for seed in 0..20 {
            rnd += mean_pos(&random_order(mask.len(), seed));
            gls += mean_pos(&gls_csc(&f, &SamplerConfig::new(Strategy::GlsCsc, seed)).unwrap());
            lls += mean_pos(&lls_csc(&f, seed));
        }
        assert!(rnd < gls && gls < lls, "{rnd} {gls} {lls}");
    }
}
