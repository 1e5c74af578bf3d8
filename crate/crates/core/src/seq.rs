//! Finite and eventually periodic digit sequences.
//!
//! An [`EventuallyPeriodicWord`] is kept in canonical form (primitive period,
//! minimal preperiod) so that structural equality coincides with equality of the
//! infinite sequences.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

fn check_digits(digits: &[u8]) -> Result<()> {
    match digits.iter().find(|&&d| d > 9) {
        Some(&d) => Err(Error::InvalidDigit(d)),
        None => Ok(()),
    }
}

pub(crate) fn check_binary(digits: &[u8]) -> Result<()> {
    match digits.iter().position(|&d| d > 1) {
        Some(index) => Err(Error::NonBinary {
            index,
            digit: digits[index],
        }),
        None => Ok(()),
    }
}

/// A non-empty finite word over the decimal digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord(Vec<u8>);

impl FiniteWord {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::EmptyWord);
        }
        check_digits(&digits)?;
        Ok(FiniteWord(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|&d| d <= 1)
    }

    pub fn last(&self) -> u8 {
        *self.0.last().expect("finite words are non-empty")
    }

    /// Digitwise `1 - d`.
    pub fn complement(&self) -> Result<FiniteWord> {
        check_binary(&self.0)?;
        Ok(FiniteWord(self.0.iter().map(|d| 1 - d).collect()))
    }

    /// The word with its last digit incremented by one.
    pub fn increment_last(&self) -> Result<FiniteWord> {
        let mut digits = self.0.clone();
        let last = digits.last_mut().expect("non-empty");
        if *last >= 9 {
            return Err(Error::InvalidDigit(*last + 1));
        }
        *last += 1;
        Ok(FiniteWord(digits))
    }

    /// `w^∞`.
    pub fn periodic(&self) -> EventuallyPeriodicWord {
        EventuallyPeriodicWord::canonical(Vec::new(), self.0.clone())
    }

    /// `w 0^∞`.
    pub fn zero_tail(&self) -> EventuallyPeriodicWord {
        EventuallyPeriodicWord::canonical(self.0.clone(), vec![0])
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for FiniteWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = parse_digits(s).ok_or_else(|| Error::SequenceLiteral(s.to_string()))?;
        FiniteWord::new(digits)
    }
}

fn parse_digits(s: &str) -> Option<Vec<u8>> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(s.bytes().map(|b| b - b'0').collect())
}

/// `preperiod · period^∞` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicWord {
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl EventuallyPeriodicWord {
    pub fn new(preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyWord);
        }
        check_digits(&preperiod)?;
        check_digits(&period)?;
        Ok(Self::canonical(preperiod, period))
    }

    /// Constant sequence `d^∞`.
    pub fn constant(digit: u8) -> Self {
        Self::canonical(Vec::new(), vec![digit])
    }

    pub(crate) fn canonical(mut preperiod: Vec<u8>, period: Vec<u8>) -> Self {
        debug_assert!(!period.is_empty());
        let mut period = primitive_root(period);
        while let (Some(&p), Some(&q)) = (preperiod.last(), period.last()) {
            if p != q {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        EventuallyPeriodicWord { preperiod, period }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Digit at 0-based index `i`.
    pub fn digit(&self, i: usize) -> u8 {
        let p = self.preperiod.len();
        if i < p {
            self.preperiod[i]
        } else {
            self.period[(i - p) % self.period.len()]
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.digit(i)).collect()
    }

    pub fn is_binary(&self) -> bool {
        self.preperiod.iter().chain(&self.period).all(|&d| d <= 1)
    }

    pub fn max_digit(&self) -> u8 {
        self.preperiod
            .iter()
            .chain(&self.period)
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.preperiod.is_empty() && self.period == [0]
    }

    /// `preperiod length + period length`: every shift `σ^n` with `n` beyond
    /// this repeats one with `n` at most this.
    pub fn orbit_len(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    pub fn shift(&self, n: usize) -> Self {
        shift(self, n)
    }

    pub fn complement(&self) -> Result<Self> {
        complement(self)
    }

    /// `word · self`.
    pub fn prepend(&self, word: &[u8]) -> Self {
        let mut pre = word.to_vec();
        pre.extend_from_slice(&self.preperiod);
        Self::canonical(pre, self.period.clone())
    }

    /// Lexicographic comparison of `self` against a finite word, looking only at
    /// the first `word.len()` digits. `None` when they agree on all of them.
    pub fn compare_prefix(&self, word: &[u8]) -> Option<Ordering> {
        word.iter()
            .enumerate()
            .map(|(i, &d)| self.digit(i).cmp(&d))
            .find(|o| o.is_ne())
    }
}

fn primitive_root(period: Vec<u8>) -> Vec<u8> {
    let len = period.len();
    for d in 1..len {
        if len.is_multiple_of(d) && (d..len).all(|i| period[i] == period[i - d]) {
            return period[..d].to_vec();
        }
    }
    period
}

impl fmt::Display for EventuallyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.preperiod {
            write!(f, "{d}")?;
        }
        f.write_str("(")?;
        for d in &self.period {
            write!(f, "{d}")?;
        }
        f.write_str(")^")
    }
}

/// A parsed sequence literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceLiteral {
    Finite(FiniteWord),
    Periodic(EventuallyPeriodicWord),
}

impl SequenceLiteral {
    /// Grammar: `DIGITS | DIGITS "(" DIGITS ")^" | "(" DIGITS ")^"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::SequenceLiteral(s.to_string());
        match s.find('(') {
            None => Ok(SequenceLiteral::Finite(s.parse()?)),
            Some(open) => {
                let body = s[open + 1..].strip_suffix(")^").ok_or_else(bad)?;
                let period = parse_digits(body).ok_or_else(bad)?;
                let pre = if open == 0 {
                    Vec::new()
                } else {
                    parse_digits(&s[..open]).ok_or_else(bad)?
                };
                Ok(SequenceLiteral::Periodic(EventuallyPeriodicWord::new(
                    pre, period,
                )?))
            }
        }
    }

    /// Finite words are read as `w 0^∞`.
    pub fn into_sequence(self) -> EventuallyPeriodicWord {
        match self {
            SequenceLiteral::Finite(w) => w.zero_tail(),
            SequenceLiteral::Periodic(s) => s,
        }
    }
}

/// Accepts the full literal grammar; a finite literal `w` denotes `w 0^∞`.
impl FromStr for EventuallyPeriodicWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(SequenceLiteral::parse(s)?.into_sequence())
    }
}

/// Lexicographic order of the two infinite sequences.
pub fn lex_compare(a: &EventuallyPeriodicWord, b: &EventuallyPeriodicWord) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    // Past max(preperiod) both are periodic; they agree forever iff they agree
    // on one common period.
    let bound = a.preperiod.len().max(b.preperiod.len()) + a.period.len().lcm(&b.period.len());
    (0..bound)
        .map(|i| a.digit(i).cmp(&b.digit(i)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

impl PartialOrd for EventuallyPeriodicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EventuallyPeriodicWord {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare(self, other)
    }
}

/// `σ^n`.
pub fn shift(a: &EventuallyPeriodicWord, n: usize) -> EventuallyPeriodicWord {
    let p = a.preperiod.len();
    if n <= p {
        return EventuallyPeriodicWord::canonical(a.preperiod[n..].to_vec(), a.period.clone());
    }
    let mut period = a.period.clone();
    let k = (n - p) % period.len();
    period.rotate_left(k);
    EventuallyPeriodicWord::canonical(Vec::new(), period)
}

pub fn complement(a: &EventuallyPeriodicWord) -> Result<EventuallyPeriodicWord> {
    check_binary(&a.preperiod)?;
    check_binary(&a.period)?;
    Ok(EventuallyPeriodicWord::canonical(
        a.preperiod.iter().map(|d| 1 - d).collect(),
        a.period.iter().map(|d| 1 - d).collect(),
    ))
}

/// First `length` digits of the doubling limit `s_1 = w⁺`,
/// `s_{k+1} = s_k · (complement(s_k))⁺`.
///
/// For `w = a_1⋯a_m` the result reads in blocks of `m` as
/// `w⁺, comp(w), comp(w⁺), w⁺, …`.
pub fn devk_generate(w: &FiniteWord, length: usize) -> Result<FiniteWord> {
    check_binary(w.digits())?;
    if w.last() != 0 {
        return Err(Error::domain("seed word must end with 0"));
    }
    let mut s = w.increment_last()?.into_digits();
    while s.len() < length {
        let n = s.len();
        s.reserve(n);
        for i in 0..n {
            let d = 1 - s[i];
            s.push(d);
        }
        // comp(s_k) ends with 0 because s_k ends with 1.
        *s.last_mut().unwrap() += 1;
    }
    s.truncate(length);
    FiniteWord::new(s)
}

/// `(comp w)^∞ ≺ σ^i(w^∞) ≼ w^∞` for every `i`.
pub fn check_admissible(w: &FiniteWord) -> Result<bool> {
    check_binary(w.digits())?;
    if w.len() < 2 || w.last() != 0 {
        return Err(Error::domain(
            "admissibility needs a binary word of length >= 2 ending with 0",
        ));
    }
    let a = w.periodic();
    let low = complement(&a)?;
    Ok((0..w.len()).all(|i| {
        let s = shift(&a, i);
        low < s && s <= a
    }))
}

/// Rule driving a [`DigitStreamGenerator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamRule {
    /// The doubling-with-complement construction on a seed.
    DoublingComplement(FiniteWord),
    /// An eventually periodic sequence presented as a stream.
    Periodic(EventuallyPeriodicWord),
}

/// Deterministic digit source with a prefix-length budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitStreamGenerator {
    pub rule: StreamRule,
    pub budget: usize,
}

pub const DEFAULT_STREAM_BUDGET: usize = 1 << 14;

impl DigitStreamGenerator {
    pub fn devk(seed: FiniteWord) -> Result<Self> {
        check_binary(seed.digits())?;
        if seed.last() != 0 {
            return Err(Error::domain("seed word must end with 0"));
        }
        Ok(DigitStreamGenerator {
            rule: StreamRule::DoublingComplement(seed),
            budget: DEFAULT_STREAM_BUDGET,
        })
    }

    pub fn periodic(seq: EventuallyPeriodicWord) -> Self {
        DigitStreamGenerator {
            rule: StreamRule::Periodic(seq),
            budget: DEFAULT_STREAM_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn max_digit(&self) -> u8 {
        match &self.rule {
            StreamRule::DoublingComplement(_) => 1,
            StreamRule::Periodic(s) => s.max_digit(),
        }
    }

    /// First `len` digits; `len` is clamped to the budget.
    pub fn prefix(&self, len: usize) -> Vec<u8> {
        let len = len.min(self.budget);
        match &self.rule {
            StreamRule::DoublingComplement(seed) => devk_generate(seed, len)
                .expect("seed validated at construction")
                .into_digits(),
            StreamRule::Periodic(s) => s.prefix(len),
        }
    }
}
