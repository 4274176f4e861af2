//! Text-pair corpora: the data model, TSV/JSONL readers and writers, and a
//! synthetic generator with a controllable edit-distance clue.

mod io;
mod synth;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{ingest, read_dataset, write_dataset, Format};
pub use synth::{generate_synthetic, generate_synthetic_detailed, Band, PairOrigin, SynthConfig, SEMANTIC_MARKER};

/// Binary matching label. `Match` is 1, `Mismatch` is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Label {
    Mismatch,
    Match,
}

impl Label {
    pub fn as_u8(self) -> u8 {
        match self {
            Label::Mismatch => 0,
            Label::Match => 1,
        }
    }

    pub fn flip(self) -> Label {
        match self {
            Label::Mismatch => Label::Match,
            Label::Match => Label::Mismatch,
        }
    }
}

impl From<bool> for Label {
    fn from(v: bool) -> Self {
        if v {
            Label::Match
        } else {
            Label::Mismatch
        }
    }
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        l.as_u8()
    }
}

impl TryFrom<u8> for Label {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(Label::Mismatch),
            1 => Ok(Label::Match),
            other => Err(format!("label must be 0 or 1, got {other}")),
        }
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "0" => Ok(Label::Mismatch),
            "1" => Ok(Label::Match),
            other => Err(format!("label must be 0 or 1, got {other:?}")),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// One labeled text pair. `index` is the position in the source dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextPair {
    pub index: usize,
    pub text_a: String,
    pub text_b: String,
    pub label: Label,
}

impl TextPair {
    /// Character length of both texts combined.
    pub fn len_sum(&self) -> usize {
        self.text_a.chars().count() + self.text_b.chars().count()
    }
}

/// Strips surrounding whitespace. No case folding or width conversion is
/// applied, so distances are computed on the raw characters.
pub fn normalize(text: &str) -> &str {
    text.trim()
}

/// An ordered, immutable collection of text pairs with indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dataset {
    pairs: Vec<TextPair>,
    source_name: String,
}

impl Dataset {
    /// Builds a dataset from raw `(text_a, text_b, label)` records. Texts are
    /// normalized and indices are assigned in iteration order.
    pub fn from_records<I, A, B>(source_name: impl Into<String>, records: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B, Label)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut pairs = Vec::new();
        for (index, (a, b, label)) in records.into_iter().enumerate() {
            let text_a = normalize(a.as_ref());
            let text_b = normalize(b.as_ref());
            if text_a.is_empty() || text_b.is_empty() {
                return Err(Error::InvalidArgument(format!("pair {index} has an empty text")));
            }
            pairs.push(TextPair { index, text_a: text_a.to_owned(), text_b: text_b.to_owned(), label });
        }
        Ok(Dataset { pairs, source_name: source_name.into() })
    }

    pub(crate) fn from_pairs_unchecked(source_name: String, pairs: Vec<TextPair>) -> Self {
        debug_assert!(pairs.iter().enumerate().all(|(i, p)| p.index == i));
        Dataset { pairs, source_name }
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[TextPair] {
        &self.pairs
    }

    pub fn get(&self, index: usize) -> Option<&TextPair> {
        self.pairs.get(index)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TextPair> {
        self.pairs.iter()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.pairs.iter().map(|p| p.label).collect()
    }
}

impl std::ops::Index<usize> for Dataset {
    type Output = TextPair;

    fn index(&self, index: usize) -> &TextPair {
        &self.pairs[index]
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a TextPair;
    type IntoIter = std::slice::Iter<'a, TextPair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_are_normalized_and_indexed() {
        let ds =
            Dataset::from_records("t", vec![("  a ", "b", Label::Match), ("c", "\td\n", Label::Mismatch)]).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds[0].text_a, "a");
        assert_eq!(ds[1].text_b, "d");
        assert_eq!(ds[1].index, 1);
    }

    #[test]
    fn whitespace_only_text_is_rejected() {
        let err = Dataset::from_records("t", vec![("  ", "b", Label::Match)]).unwrap_err();
        assert!(err.to_string().contains("empty text"));
    }

    #[test]
    fn label_parsing() {
        assert_eq!("1".parse::<Label>().unwrap(), Label::Match);
        assert_eq!(" 0 ".parse::<Label>().unwrap(), Label::Mismatch);
        assert!("2".parse::<Label>().is_err());
        assert!(Label::try_from(2u8).is_err());
    }

    #[test]
    fn len_sum_counts_characters() {
        let ds = Dataset::from_records("t", vec![("猫喜欢", "ab", Label::Match)]).unwrap();
        assert_eq!(ds[0].len_sum(), 5);
    }
}
