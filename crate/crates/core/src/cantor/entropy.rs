use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::rational::{rat, Rational};
use crate::seq::FiniteWord;

use super::level::CantorLevel;
use super::words::TailRule;

/// `log₂|B_k| / k` for a set of distinct length-`k` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    pub blocks: usize,
    pub k: usize,
    pub bits: f64,
    /// Exact value when `|B_k|` is a power of two.
    pub exact: Option<Rational>,
}

pub fn entropy_estimate(words: &[FiniteWord], k: usize) -> Result<EntropyEstimate> {
    if words.is_empty() {
        return Err(Error::domain("empty block list"));
    }
    if k == 0 {
        return Err(Error::domain("block length must be positive"));
    }
    if let Some(w) = words.iter().find(|w| w.len() != k) {
        return Err(Error::domain(format!("block {w} does not have length {k}")));
    }
    let distinct: BTreeSet<&[u8]> = words.iter().map(|w| w.digits()).collect();
    let blocks = distinct.len();
    let exact = blocks
        .is_power_of_two()
        .then(|| rat(blocks.trailing_zeros() as i64, k as i64));
    Ok(EntropyEstimate {
        blocks,
        k,
        bits: (blocks as f64).log2() / k as f64,
        exact,
    })
}

/// Binary words of length `k` containing neither `0^N` nor `1^N`.
pub fn tail_factors(run_bound: usize, k: usize) -> Result<Vec<FiniteWord>> {
    if run_bound < 2 || k == 0 {
        return Err(Error::domain("need N >= 2 and k >= 1"));
    }
    let rule = TailRule {
        run_bound,
        first_digit: None,
    };
    rule.enumerate(k, k)
        .pop()
        .unwrap_or_default()
        .into_iter()
        .map(FiniteWord::new)
        .collect()
}

/// Distinct length-`k` factors of the leaf tails of a level.
pub fn level_factors(level: &CantorLevel, k: usize) -> Result<Vec<FiniteWord>> {
    let mut set = BTreeSet::new();
    for leaf in level.leaves() {
        for w in leaf.tail.windows(k) {
            set.insert(w.to_vec());
        }
    }
    set.into_iter().map(FiniteWord::new).collect()
}
