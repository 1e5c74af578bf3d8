use std::fmt;

use crate::error::{Error, Result};
use crate::seq::{check_binary, lex_compare, EventuallyPeriodicWord, FiniteWord};

use super::decompose::CaseDecomposition;

/// Tails that avoid `0^N` and `1^N`, optionally with a forced first digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct TailRule {
    pub run_bound: usize,
    pub first_digit: Option<u8>,
}

impl TailRule {
    /// Tails of length `min_len..=max_len` grouped by length, breadth first and
    /// lexicographic within each length.
    pub fn enumerate(&self, min_len: usize, max_len: usize) -> Vec<Vec<Vec<u8>>> {
        let mut layer: Vec<Vec<u8>> = match self.first_digit {
            Some(d) => vec![vec![d]],
            None => vec![Vec::new()],
        };
        let mut len = layer[0].len();
        let mut out = Vec::new();
        while len <= max_len {
            if len >= min_len {
                out.push(layer.clone());
            }
            let mut next = Vec::with_capacity(layer.len() * 2);
            for t in &layer {
                for b in [0u8, 1] {
                    if self.allows(t, b) {
                        let mut c = t.clone();
                        c.push(b);
                        next.push(c);
                    }
                }
            }
            layer = next;
            len += 1;
        }
        out
    }

    pub fn allows(&self, tail: &[u8], digit: u8) -> bool {
        if tail.is_empty() {
            return self.first_digit.is_none_or(|d| d == digit);
        }
        trailing_run(tail, digit) + 1 < self.run_bound
    }
}

/// Number of trailing copies of `digit` at the end of `word`.
fn trailing_run(word: &[u8], digit: u8) -> usize {
    word.iter().rev().take_while(|&&d| d == digit).count()
}

/// Members of the word set at index `j` with lengths `M+N(j)+1 ..= max_len`,
/// grouped by length.
pub fn enumerate_words(
    dec: &CaseDecomposition,
    j: usize,
    max_len: usize,
) -> Result<Vec<Vec<FiniteWord>>> {
    let n = dec.n(j)?;
    let prefix = dec.prefix_for(j)?;
    let base = prefix.len();
    if max_len <= base {
        return Err(Error::domain(format!(
            "max_len {max_len} must exceed the prefix length {base}"
        )));
    }
    let rule = TailRule {
        run_bound: n,
        first_digit: Some(0),
    };
    rule.enumerate(1, max_len - base)
        .into_iter()
        .map(|layer| {
            layer
                .into_iter()
                .map(|t| {
                    let mut w = prefix.digits().to_vec();
                    w.extend(t);
                    FiniteWord::new(w)
                })
                .collect()
        })
        .collect()
}

/// `[left, right]` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicInterval {
    pub left: EventuallyPeriodicWord,
    pub right: EventuallyPeriodicWord,
}

impl fmt::Display for SymbolicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.left, self.right)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapStatus {
    HasGap,
    OnlyChild1,
    OnlyChild0,
}

fn repeat(d: u8, n: usize) -> impl Iterator<Item = u8> {
    std::iter::repeat_n(d, n)
}

/// Last digit of `tail` and the length of its final run inside the tail,
/// checked against the bound `N`.
fn final_run(tail: &[u8], run_bound: usize) -> Result<(u8, usize)> {
    let last = *tail
        .last()
        .ok_or_else(|| Error::domain("word has no tail digits"))?;
    let k = trailing_run(tail, last);
    if k == 0 || k >= run_bound {
        return Err(Error::domain(format!(
            "final run of length {k} is outside 1..={}",
            run_bound - 1
        )));
    }
    Ok((last, k))
}

fn interval_for_run(word: &[u8], last: u8, k: usize, n: usize) -> Result<SymbolicInterval> {
    let w = word.to_vec();
    let (left, right) = if last == 0 {
        let mut lp = w.clone();
        lp.extend(repeat(0, n - 1 - k));
        let lper: Vec<u8> = std::iter::once(1).chain(repeat(0, n - 1)).collect();
        let rper: Vec<u8> = repeat(1, n - 1).chain(std::iter::once(0)).collect();
        (
            EventuallyPeriodicWord::new(lp, lper)?,
            EventuallyPeriodicWord::new(w, rper)?,
        )
    } else {
        let lper: Vec<u8> = repeat(0, n - 1).chain(std::iter::once(1)).collect();
        let mut rp = w.clone();
        rp.extend(repeat(1, n - 1 - k));
        let rper: Vec<u8> = std::iter::once(0).chain(repeat(1, n - 1)).collect();
        (
            EventuallyPeriodicWord::new(w, lper)?,
            EventuallyPeriodicWord::new(rp, rper)?,
        )
    };
    debug_assert!(lex_compare(&left, &right).is_le());
    Ok(SymbolicInterval { left, right })
}

/// Smallest symbolic interval holding all admissible sequences that begin with
/// `ω`, where `ω` ends with `10^k` or `01^k` and `1 <= k <= N-1`.
pub fn symbolic_interval(word: &FiniteWord, n: usize) -> Result<SymbolicInterval> {
    check_binary(word.digits())?;
    let digits = word.digits();
    let last = word.last();
    let k = trailing_run(digits, last);
    if k == digits.len() {
        return Err(Error::domain(format!(
            "{word} does not end with 10^k or 01^k"
        )));
    }
    if n < 2 || k >= n {
        return Err(Error::domain(format!(
            "{word} ends with a run of length {k}, outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    interval_for_run(digits, last, k, n)
}

/// As [`symbolic_interval`], with the final run measured inside `tail` only.
pub(crate) fn symbolic_interval_tail(
    prefix: &[u8],
    tail: &[u8],
    n: usize,
) -> Result<SymbolicInterval> {
    let (last, k) = final_run(tail, n)?;
    let mut w = prefix.to_vec();
    w.extend_from_slice(tail);
    interval_for_run(&w, last, k, n)
}

/// Whether `ω` splits into two children separated by a gap.
pub fn gap_status(word: &FiniteWord, n: usize) -> Result<GapStatus> {
    symbolic_interval(word, n)?;
    let last = word.last();
    Ok(status_for_run(last, trailing_run(word.digits(), last), n))
}

pub(crate) fn gap_status_tail(tail: &[u8], n: usize) -> Result<GapStatus> {
    let (last, k) = final_run(tail, n)?;
    Ok(status_for_run(last, k, n))
}

fn status_for_run(last: u8, k: usize, n: usize) -> GapStatus {
    match (last, k + 1 == n) {
        (0, true) => GapStatus::OnlyChild1,
        (1, true) => GapStatus::OnlyChild0,
        _ => GapStatus::HasGap,
    }
}
