use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Dataset, Label, TextPair};
use crate::error::{Error, Result};
use crate::metrics::levenshtein;

/// Substring shared by both texts of a pair whose hidden semantic bit is 1.
/// It is inserted at the same offset in both texts, so it leaves the edit
/// distance of the pair unchanged.
pub const SEMANTIC_MARKER: &str = "⟪≡⟫";

const MAX_ATTEMPTS: usize = 64;

/// Inclusive range of edit distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    pub min: usize,
    pub max: usize,
}

impl Band {
    pub fn new(min: usize, max: usize) -> Self {
        Band { min, max }
    }

    pub fn contains(&self, d: usize) -> bool {
        (self.min..=self.max).contains(&d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n: usize,
    /// Probability that a pair is built inside the low or high band.
    pub p_csc: f64,
    /// Probability that a clue-band pair carries the label the clue points at
    /// (low distance → 1, high distance → 0).
    pub clue_fidelity: f64,
    /// Probability that the semantic marker agrees with the label.
    pub semantic_fidelity: f64,
    pub low_band: Band,
    pub high_band: Band,
    /// Length in characters of each text before the marker is inserted.
    pub text_len: usize,
    pub alphabet: Vec<char>,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n: 1000,
            p_csc: 0.3,
            clue_fidelity: 0.95,
            semantic_fidelity: 0.9,
            low_band: Band::new(2, 3),
            high_band: Band::new(12, 13),
            text_len: 16,
            alphabet: default_alphabet(),
            seed: 0,
        }
    }
}

/// 200 consecutive CJK unified ideographs starting at U+4E00.
pub fn default_alphabet() -> Vec<char> {
    (0x4E00u32..0x4EC8).filter_map(char::from_u32).collect()
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        for (name, p) in [
            ("p_csc", self.p_csc),
            ("clue_fidelity", self.clue_fidelity),
            ("semantic_fidelity", self.semantic_fidelity),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        for (name, band) in [("low_band", self.low_band), ("high_band", self.high_band)] {
            if band.min > band.max {
                return bad(format!("{name} is empty ({}..={})", band.min, band.max));
            }
        }
        if self.low_band.max >= self.high_band.min {
            return bad("low_band must lie strictly below high_band".into());
        }
        if self.text_len == 0 {
            return bad("text_len must be positive".into());
        }
        if self.high_band.max > self.text_len {
            return bad(format!(
                "high_band reaches distance {} but texts of length {} support at most {}",
                self.high_band.max, self.text_len, self.text_len
            ));
        }
        let mut distinct = self.alphabet.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() < 2 {
            return bad("alphabet needs at least two distinct characters".into());
        }
        if distinct.iter().any(|c| c.is_whitespace() || SEMANTIC_MARKER.contains(*c)) {
            return bad("alphabet may not contain whitespace or marker characters".into());
        }
        Ok(())
    }

    /// Distance range used for pairs outside the clue bands: the gap between
    /// the bands, or the full span when the bands touch.
    pub fn middle_band(&self) -> Band {
        if self.low_band.max + 1 < self.high_band.min {
            Band::new(self.low_band.max + 1, self.high_band.min - 1)
        } else {
            Band::new(self.low_band.min, self.high_band.max)
        }
    }
}

/// How a synthetic pair was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairOrigin {
    /// Built inside the low or high band.
    pub clue_band: bool,
    /// For clue-band pairs, whether the label follows the clue direction.
    pub clue_agrees: bool,
    /// Whether the texts carry the shared semantic marker.
    pub has_marker: bool,
    /// Measured edit distance of the pair.
    pub distance: usize,
}

pub fn generate_synthetic(config: &SynthConfig) -> Result<Dataset> {
    generate_synthetic_detailed(config).map(|(ds, _)| ds)
}

/// Like [`generate_synthetic`] but also returns the construction record of
/// every pair.
pub fn generate_synthetic_detailed(config: &SynthConfig) -> Result<(Dataset, Vec<PairOrigin>)> {
    config.validate()?;
    let mut alphabet = config.alphabet.clone();
    alphabet.sort_unstable();
    alphabet.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let middle = config.middle_band();
    let mut pairs = Vec::with_capacity(config.n);
    let mut origins = Vec::with_capacity(config.n);

    for index in 0..config.n {
        let clue_band = rng.gen_bool(config.p_csc);
        let (label, band, clue_agrees) = if clue_band {
            let low = rng.gen_bool(0.5);
            let clue_label = Label::from(low);
            let agrees = rng.gen_bool(config.clue_fidelity);
            let label = if agrees { clue_label } else { clue_label.flip() };
            (label, if low { config.low_band } else { config.high_band }, agrees)
        } else {
            (Label::from(rng.gen_bool(0.5)), middle, false)
        };
        let target = rng.gen_range(band.min..=band.max);
        let semantic = if rng.gen_bool(config.semantic_fidelity) { label } else { label.flip() };
        let has_marker = semantic == Label::Match;

        let (text_a, text_b, distance) = build_pair(&mut rng, &alphabet, config.text_len, target, band, has_marker)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "could not construct a pair at distance {target} within {MAX_ATTEMPTS} attempts; \
                     enlarge the alphabet or the text length"
                ))
            })?;

        pairs.push(TextPair { index, text_a, text_b, label });
        origins.push(PairOrigin { clue_band, clue_agrees, has_marker, distance });
    }

    let name = format!("synthetic-seed{}", config.seed);
    Ok((Dataset::from_pairs_unchecked(name, pairs), origins))
}

/// Applies `target` substitutions at distinct positions of a random base text
/// and retries until the measured distance lands in `band`.
fn build_pair(
    rng: &mut ChaCha8Rng,
    alphabet: &[char],
    len: usize,
    target: usize,
    band: Band,
    marker: bool,
) -> Option<(String, String, usize)> {
    for _ in 0..MAX_ATTEMPTS {
        let base: Vec<char> = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        let mut edited = base.clone();
        for pos in sample(rng, len, target).into_iter() {
            // Offset in 1..len guarantees a different character.
            let cur = alphabet.binary_search(&base[pos]).expect("base drawn from alphabet");
            let shift = rng.gen_range(1..alphabet.len());
            edited[pos] = alphabet[(cur + shift) % alphabet.len()];
        }

        let (mut a, mut b): (String, String) = (base.iter().collect(), edited.iter().collect());
        if marker {
            let at = rng.gen_range(0..=len);
            a = splice(&base, at);
            b = splice(&edited, at);
        }
        let d = levenshtein(&a, &b);
        if band.contains(d) {
            return Some((a, b, d));
        }
    }
    None
}

fn splice(chars: &[char], at: usize) -> String {
    let mut s: String = chars[..at].iter().collect();
    s.push_str(SEMANTIC_MARKER);
    s.extend(&chars[at..]);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_pairs_is_empty() {
        let ds = generate_synthetic(&SynthConfig { n: 0, ..Default::default() }).unwrap();
        assert!(ds.is_empty());
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = SynthConfig { n: 200, seed: 11, ..Default::default() };
        assert_eq!(generate_synthetic(&cfg).unwrap(), generate_synthetic(&cfg).unwrap());
        let other = SynthConfig { seed: 12, ..cfg.clone() };
        assert_ne!(generate_synthetic(&cfg).unwrap(), generate_synthetic(&other).unwrap());
    }

    #[test]
    fn clue_band_count_within_binomial_bounds() {
        // Binomial(1000, 0.3): mean 300, sd 14.5.
        let cfg = SynthConfig { n: 1000, p_csc: 0.3, seed: 7, ..Default::default() };
        let (_, origins) = generate_synthetic_detailed(&cfg).unwrap();
        let count = origins.iter().filter(|o| o.clue_band).count();
        assert!((260..=340).contains(&count), "count {count}");
    }

    #[test]
    fn every_pair_lands_in_its_band() {
        let cfg = SynthConfig { n: 2000, seed: 3, ..Default::default() };
        let (ds, origins) = generate_synthetic_detailed(&cfg).unwrap();
        let middle = cfg.middle_band();
        for (p, o) in ds.iter().zip(&origins) {
            let d = levenshtein(&p.text_a, &p.text_b);
            assert_eq!(d, o.distance);
            if o.clue_band {
                assert!(cfg.low_band.contains(d) || cfg.high_band.contains(d), "pair {} at {d}", p.index);
            } else {
                assert!(middle.contains(d));
            }
            assert_eq!(p.text_a.contains(SEMANTIC_MARKER), o.has_marker);
            assert_eq!(p.text_b.contains(SEMANTIC_MARKER), o.has_marker);
        }
    }

    #[test]
    fn perfect_fidelity_follows_clue_direction() {
        let cfg = SynthConfig { n: 500, clue_fidelity: 1.0, semantic_fidelity: 1.0, seed: 5, ..Default::default() };
        let (ds, origins) = generate_synthetic_detailed(&cfg).unwrap();
        for (p, o) in ds.iter().zip(&origins) {
            if o.clue_band {
                let expected = Label::from(cfg.low_band.contains(o.distance));
                assert_eq!(p.label, expected);
            }
            assert_eq!(o.has_marker, p.label == Label::Match);
        }
    }

    #[test]
    fn band_beyond_text_length_is_rejected() {
        let cfg = SynthConfig { text_len: 10, ..Default::default() };
        assert!(matches!(generate_synthetic(&cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn overlapping_bands_rejected() {
        let cfg = SynthConfig { low_band: Band::new(1, 5), high_band: Band::new(5, 8), ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
