//! Character-level string metrics and rank correlation.
//!
//! All string metrics operate on Unicode scalar values, so one CJK character
//! counts as one unit.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::TextPair;
use crate::error::{Error, Result};

/// Levenshtein distance over Unicode scalar values.
///
/// Runs in `O(|a|·|b|)` time and keeps a single row sized to the shorter
/// input.
pub fn levenshtein(a: &str, b: &str) -> usize {
    if a == b {
        return 0;
    }
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let (short, long) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
    if short.is_empty() {
        return long.len();
    }

    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, lc) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, sc) in short.iter().enumerate() {
            let above = row[j + 1];
            let cost = usize::from(lc != sc);
            row[j + 1] = (diag + cost).min(above + 1).min(row[j] + 1);
            diag = above;
        }
    }
    row[short.len()]
}

/// Jaccard similarity of the character sets of `a` and `b`.
///
/// Stands in for word overlap on unsegmented text. Identical character sets
/// give 1.0 regardless of order, so `"喜欢"` and `"欢喜"` overlap fully.
pub fn char_overlap(a: &str, b: &str) -> Result<f64> {
    let sa: BTreeSet<char> = a.chars().collect();
    let sb: BTreeSet<char> = b.chars().collect();
    let union = sa.union(&sb).count();
    if union == 0 {
        return Err(Error::UndefinedOverlap);
    }
    let inter = sa.intersection(&sb).count();
    Ok(inter as f64 / union as f64)
}

/// 1-based ranks with ties assigned the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's rank correlation with average ranks for ties, computed as the
/// Pearson correlation of the two rank vectors.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!("length mismatch: {} vs {}", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("spearman_rho needs at least two observations".into()));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("spearman_rho input contains NaN".into()));
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);

    let n = rx.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (da, db) = (a - mean, b - mean);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("an input has zero rank variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairFeatures {
    pub edit_distance: usize,
    pub char_overlap: f64,
    /// Character length of both texts combined.
    pub len_sum: usize,
}

pub fn featurize(pair: &TextPair) -> Result<PairFeatures> {
    Ok(PairFeatures {
        edit_distance: levenshtein(&pair.text_a, &pair.text_b),
        char_overlap: char_overlap(&pair.text_a, &pair.text_b)?,
        len_sum: pair.len_sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Label;

    /// Exponential-time recursive definition.
    fn lev_oracle(a: &[char], b: &[char]) -> usize {
        match (a.split_first(), b.split_first()) {
            (None, _) => b.len(),
            (_, None) => a.len(),
            (Some((ha, ta)), Some((hb, tb))) => {
                if ha == hb {
                    lev_oracle(ta, tb)
                } else {
                    1 + lev_oracle(ta, b).min(lev_oracle(a, tb)).min(lev_oracle(ta, tb))
                }
            }
        }
    }

    #[test]
    fn chinese_pairs() {
        assert_eq!(levenshtein("苹果手机通讯录如何删除", "苹果手机电话簿如何删除"), 3);
        assert_eq!(levenshtein("猫喜欢吃什么水果", "牛喜欢吃什么水果"), 1);
        assert_eq!(levenshtein("游戏内无法发送文字消息的原因", "为什么我游戏里面不能发文字呢"), 14);
        assert_eq!(levenshtein("属兔的人适合居住在中国哪个城市？", "中国哪个城市最适合居住？"), 14);
    }

    #[test]
    fn basic_cases() {
        assert_eq!(levenshtein("", ""), 0);
        assert_eq!(levenshtein("abc", ""), 3);
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(levenshtein("flaw", "lawn"), 2);
        assert_eq!(levenshtein("喜欢", "欢喜"), 2);
    }

    #[test]
    fn matches_recursive_oracle_on_small_strings() {
        let samples = ["", "a", "ab", "ba", "abc", "cab", "aabc", "abcabc", "ccb"];
        for a in samples {
            for b in samples {
                let (ca, cb): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
                assert_eq!(levenshtein(a, b), lev_oracle(&ca, &cb), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(char_overlap("喜欢", "欢喜").unwrap(), 1.0);
        assert_eq!(char_overlap("ab", "cd").unwrap(), 0.0);
        assert_eq!(char_overlap("abc", "abd").unwrap(), 0.5);
        assert_eq!(char_overlap("", "ab").unwrap(), 0.0);
        assert!(matches!(char_overlap("", ""), Err(Error::UndefinedOverlap)));
    }

    #[test]
    fn spearman_examples() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!((spearman_rho(&x, &[1.0, 3.0, 2.0, 5.0, 4.0]).unwrap() - 0.8).abs() < 1e-12);
        assert!((spearman_rho(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        let rev: Vec<f64> = x.iter().rev().copied().collect();
        assert!((spearman_rho(&x, &rev).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_errors() {
        assert!(spearman_rho(&[1.0], &[1.0]).is_err());
        assert!(spearman_rho(&[1.0, 2.0], &[1.0]).is_err());
        assert!(matches!(spearman_rho(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(Error::UndefinedCorrelation(_))));
    }

    #[test]
    fn ties_get_average_ranks() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 30.0]), vec![1.5, 3.0, 1.5, 4.0]);
        // scipy.stats.spearmanr([1,2,2,3],[1,3,2,4]) = 0.9486832980505139
        let rho = spearman_rho(&[1.0, 2.0, 2.0, 3.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((rho - 0.948_683_298_050_513_9).abs() < 1e-12);
    }

    #[test]
    fn featurize_examples() {
        let pair = |a: &str, b: &str| TextPair { index: 0, text_a: a.into(), text_b: b.into(), label: Label::Match };
        let f = featurize(&pair("猫喜欢吃什么水果", "牛喜欢吃什么水果")).unwrap();
        assert_eq!(f.edit_distance, 1);
        let f = featurize(&pair("你好世界", "你好世界")).unwrap();
        assert_eq!(f, PairFeatures { edit_distance: 0, char_overlap: 1.0, len_sum: 8 });
        let f = featurize(&pair("abc", "xyz")).unwrap();
        assert_eq!(f, PairFeatures { edit_distance: 3, char_overlap: 0.0, len_sum: 6 });
    }
}
