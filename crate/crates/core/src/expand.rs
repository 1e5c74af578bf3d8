//! Evaluation of digit sequences in a base `q`, greedy and quasi-greedy
//! expansions, and the lexicographic uniqueness test.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, pow, Interval, Rational};
use crate::seq::{check_binary, complement, shift, EventuallyPeriodicWord, FiniteWord};
use crate::solve::BaseEnclosure;

/// `Σ d_i r^i` for `r = 1/q`, summed by Horner's rule.
fn finite_value(digits: &[u8], q: &Rational) -> Rational {
    let r = q.recip();
    let mut acc = Rational::zero();
    for &d in digits.iter().rev() {
        acc = (acc + int(d as i64)) * &r;
    }
    acc
}

/// `((d_i))_q = Σ d_i / q^i`, in closed form.
pub fn eval_series(d: &EventuallyPeriodicWord, q: &Rational) -> Result<Rational> {
    if *q <= Rational::one() {
        return Err(Error::domain(format!("base {q} must exceed 1")));
    }
    let head = finite_value(d.preperiod(), q);
    let cycle = finite_value(d.period(), q);
    let qp = pow(q, d.preperiod().len());
    let ql = pow(q, d.period().len());
    // q^{-p} · cycle / (1 - q^{-L}) = cycle · q^L / (q^p (q^L - 1))
    Ok(head + cycle * &ql / (qp * (ql - Rational::one())))
}

/// Enclosure of `(prefix · t)_{q*}` over every tail `t` with digits in
/// `0..=tail_max` and every `q*` in `q`.
pub fn eval_enclosure(prefix: &[u8], tail_max: u8, q: &BaseEnclosure) -> Interval {
    let n = prefix.len();
    let lo = finite_value(prefix, q.hi());
    let top = finite_value(prefix, q.lo());
    let tail = int(tail_max as i64) / (pow(q.lo(), n) * (q.lo() - Rational::one()));
    Interval { lo, hi: top + tail }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpansionMode {
    /// Digit 1 whenever `q·r >= 1`.
    Greedy,
    /// Digit 1 only when `q·r > 1`; never ends in `0^∞` for `x > 0`.
    QuasiGreedy,
}

fn digit_rule(t: &Rational, mode: ExpansionMode) -> u8 {
    let one = Rational::one();
    let take = match mode {
        ExpansionMode::Greedy => *t >= one,
        ExpansionMode::QuasiGreedy => *t > one,
    };
    take as u8
}

fn check_base(q: &Rational) -> Result<()> {
    if *q <= Rational::one() || *q > int(2) {
        return Err(Error::domain(format!("base {q} outside (1, 2]")));
    }
    Ok(())
}

fn check_expandable(x: &Rational, q: &Rational) -> Result<()> {
    let top = (q - Rational::one()).recip();
    if *x < Rational::zero() || *x > top {
        return Err(Error::domain(format!(
            "{x} has no expansion in base {q}: outside [0, {top}]"
        )));
    }
    Ok(())
}

/// First `n` digits of the greedy or quasi-greedy `q`-expansion of `x`.
pub fn expansion_digits(
    x: &Rational,
    q: &Rational,
    n: usize,
    mode: ExpansionMode,
) -> Result<FiniteWord> {
    check_base(q)?;
    check_expandable(x, q)?;
    let mut r = x.clone();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let t = &r * q;
        let d = digit_rule(&t, mode);
        r = t - int(d as i64);
        digits.push(d);
    }
    FiniteWord::new(digits)
}

/// Quasi-greedy dyadic expansion of `x ∈ (0, 1]`, found by remainder
/// recurrence.
pub fn dyadic_expansion(x: &Rational) -> Result<EventuallyPeriodicWord> {
    if *x <= Rational::zero() || *x > Rational::one() {
        return Err(Error::domain(format!(
            "dyadic expansion needs x in (0, 1], got {x}"
        )));
    }
    let two = int(2);
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut r = x.clone();
    loop {
        if let Some(&start) = seen.get(&r) {
            let period = digits.split_off(start);
            return EventuallyPeriodicWord::new(digits, period);
        }
        seen.insert(r.clone(), digits.len());
        let t = &r * &two;
        let d = digit_rule(&t, ExpansionMode::QuasiGreedy);
        r = t - int(d as i64);
        digits.push(d);
    }
}

/// Quasi-greedy expansion of 1 in an exact base, to `depth` digits; also the
/// exact sequence when the remainders cycle within the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiGreedyOne {
    pub digits: Vec<u8>,
    pub exact: Option<EventuallyPeriodicWord>,
}

pub fn quasi_greedy_one(q: &Rational, depth: usize) -> Result<QuasiGreedyOne> {
    check_base(q)?;
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut digits = Vec::with_capacity(depth);
    let mut r = Rational::one();
    while digits.len() < depth {
        if let Some(&start) = seen.get(&r) {
            let exact =
                EventuallyPeriodicWord::new(digits[..start].to_vec(), digits[start..].to_vec())?;
            return Ok(QuasiGreedyOne {
                digits: exact.prefix(depth),
                exact: Some(exact),
            });
        }
        seen.insert(r.clone(), digits.len());
        let t = &r * q;
        let d = digit_rule(&t, ExpansionMode::QuasiGreedy);
        r = t - int(d as i64);
        digits.push(d);
    }
    Ok(QuasiGreedyOne {
        digits,
        exact: None,
    })
}

/// Certified information about `α(q*)` for every `q*` in an enclosure.
enum AlphaKnowledge {
    Exact(EventuallyPeriodicWord),
    Prefix(Vec<u8>),
}

impl AlphaKnowledge {
    fn for_enclosure(q: &BaseEnclosure, depth: usize) -> Result<Self> {
        let lo = quasi_greedy_one(q.lo(), depth)?;
        if q.lo() == q.hi() {
            return Ok(match lo.exact {
                Some(e) => AlphaKnowledge::Exact(e),
                None => AlphaKnowledge::Prefix(lo.digits),
            });
        }
        // α is non-decreasing in q, so the common prefix of α(lo) and α(hi)
        // is shared by every α(q*) in between.
        let hi = quasi_greedy_one(q.hi(), depth)?;
        let common = lo
            .digits
            .iter()
            .zip(&hi.digits)
            .take_while(|(a, b)| a == b)
            .map(|(a, _)| *a)
            .collect();
        Ok(AlphaKnowledge::Prefix(common))
    }

    fn compare(&self, s: &EventuallyPeriodicWord) -> Option<Ordering> {
        match self {
            AlphaKnowledge::Exact(alpha) => Some(s.cmp(alpha)),
            AlphaKnowledge::Prefix(p) => s.compare_prefix(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UniquenessVerdict {
    Unique,
    NotUnique,
    /// Inconclusive with `α(q)` known to this many digits.
    Unknown(usize),
}

/// Lexicographic uniqueness criterion: `a` is the unique expansion of its value
/// iff `σ^n(a) ≺ α(q)` whenever `a_n = 0` and `σ^n(ā) ≺ α(q)` whenever
/// `a_n = 1`, for every `n >= 1`.
///
/// For an eventually periodic `a` only `n <= preperiod + period` need checking.
pub fn is_unique_expansion(
    a: &EventuallyPeriodicWord,
    q: &BaseEnclosure,
    depth: usize,
) -> Result<UniquenessVerdict> {
    if !a.is_binary() {
        check_binary(a.preperiod())?;
        check_binary(a.period())?;
    }
    let alpha = AlphaKnowledge::for_enclosure(q, depth)?;
    let abar = complement(a)?;
    let mut undecided = false;
    for n in 1..=a.orbit_len() {
        let tail = if a.digit(n - 1) == 0 {
            shift(a, n)
        } else {
            shift(&abar, n)
        };
        match alpha.compare(&tail) {
            Some(Ordering::Less) => {}
            Some(_) => return Ok(UniquenessVerdict::NotUnique),
            None => undecided = true,
        }
    }
    Ok(if undecided {
        UniquenessVerdict::Unknown(depth)
    } else {
        UniquenessVerdict::Unique
    })
}

pub const DEFAULT_BRANCH_CAP: usize = 1 << 12;

/// Lower bound on the number of `q`-expansions of `x`: the number of length
/// `depth` prefixes that admit a continuation, capped at `cap`.
///
/// Returns `(count, saturated)`.
pub fn count_expansions_bruteforce(
    x: &Rational,
    q: &Rational,
    depth: usize,
) -> Result<(usize, bool)> {
    count_expansions_bruteforce_with_cap(x, q, depth, DEFAULT_BRANCH_CAP)
}

pub fn count_expansions_bruteforce_with_cap(
    x: &Rational,
    q: &Rational,
    depth: usize,
    cap: usize,
) -> Result<(usize, bool)> {
    check_base(q)?;
    check_expandable(x, q)?;
    let top = (q - Rational::one()).recip();
    let zero = Rational::zero();
    let one = Rational::one();
    let mut frontier = vec![x.clone()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for r in &frontier {
            let t = r * q;
            // digit 0 keeps t, digit 1 leaves t - 1; both must stay in [0, 1/(q-1)]
            if t <= top {
                next.push(t.clone());
            }
            let t1 = t - &one;
            if t1 >= zero {
                next.push(t1);
            }
            if next.len() >= cap {
                next.truncate(cap);
                return Ok((cap, true));
            }
        }
        frontier = next;
    }
    Ok((frontier.len(), false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn s(lit: &str) -> EventuallyPeriodicWord {
        lit.parse().unwrap()
    }

    fn word(lit: &str) -> FiniteWord {
        lit.parse().unwrap()
    }

    /// Partial sum of the first `terms` digits plus the 0 / max-digit tail bounds.
    fn partial_sum_bracket(d: &EventuallyPeriodicWord, q: &Rational, terms: usize) -> Interval {
        let mut sum = Rational::zero();
        let mut scale = Rational::one();
        for i in 0..terms {
            scale /= q;
            sum += &scale * int(d.digit(i) as i64);
        }
        let tail = &scale * int(d.max_digit() as i64) / (q - Rational::one());
        Interval {
            lo: sum.clone(),
            hi: sum + tail,
        }
    }

    #[test]
    fn eval_series_examples() {
        assert_eq!(eval_series(&s("1(0)^"), &int(2)).unwrap(), rat(1, 2));
        assert_eq!(eval_series(&s("(1)^"), &int(2)).unwrap(), int(1));
        assert_eq!(eval_series(&s("(10)^"), &rat(3, 2)).unwrap(), rat(6, 5));
        assert!(eval_series(&s("(1)^"), &int(1)).is_err());
    }

    #[test]
    fn eval_series_agrees_with_partial_sum_oracle() {
        let q = rat(3, 2);
        let bracket = partial_sum_bracket(&s("(10)^"), &q, 200);
        assert!(bracket.contains(&rat(6, 5)));
        for lit in ["11(0100)^", "(2)^", "9(01)^", "0(001)^"] {
            let d = s(lit);
            let exact = eval_series(&d, &rat(7, 4)).unwrap();
            assert!(
                partial_sum_bracket(&d, &rat(7, 4), 120).contains(&exact),
                "{lit}"
            );
        }
    }

    #[test]
    fn eval_enclosure_examples() {
        let two = BaseEnclosure::exact(int(2)).unwrap();
        let e = eval_enclosure(&[1], 1, &two);
        assert_eq!((e.lo, e.hi), (rat(1, 2), int(1)));
        let e = eval_enclosure(&[1, 1], 0, &two);
        assert_eq!((e.lo, e.hi), (rat(3, 4), rat(3, 4)));
    }

    #[test]
    fn eval_enclosure_contains_corner_samples() {
        let q = BaseEnclosure::new(rat(7, 4), rat(9, 5)).unwrap();
        let prefix = [1u8, 1, 0, 1];
        let e = eval_enclosure(&prefix, 1, &q);
        // dense sampling of bases and tails
        for k in 0..=10 {
            let qs = rat(7, 4) + (rat(9, 5) - rat(7, 4)) * rat(k, 10);
            for tail in ["(0)^", "(1)^", "(10)^", "(01)^", "(110)^"] {
                let d = s(tail).prepend(&prefix);
                let v = eval_series(&d, &qs).unwrap();
                assert!(e.contains(&v), "q={qs} tail={tail}");
            }
        }
    }

    #[test]
    fn expansion_digit_examples() {
        let qg = ExpansionMode::QuasiGreedy;
        assert_eq!(
            expansion_digits(&int(1), &int(2), 5, qg).unwrap(),
            word("11111")
        );
        assert_eq!(
            expansion_digits(&rat(1, 2), &int(2), 4, qg).unwrap(),
            word("0111")
        );
        assert_eq!(
            expansion_digits(&rat(1, 2), &int(2), 4, ExpansionMode::Greedy).unwrap(),
            word("1000")
        );
        assert_eq!(eval_series(&s("0(1)^"), &int(2)).unwrap(), rat(1, 2));
        assert!(expansion_digits(&int(3), &rat(3, 2), 4, qg).is_err());
        assert!(expansion_digits(&int(-1), &rat(3, 2), 4, qg).is_err());
    }

    #[test]
    fn dyadic_examples() {
        assert_eq!(dyadic_expansion(&int(1)).unwrap(), s("(1)^"));
        assert_eq!(dyadic_expansion(&rat(3, 4)).unwrap(), s("10(1)^"));
        assert_eq!(dyadic_expansion(&rat(2, 3)).unwrap(), s("(10)^"));
        for x in [rat(3, 4), rat(2, 3), rat(5, 7), rat(1, 3), rat(11, 24)] {
            let d = dyadic_expansion(&x).unwrap();
            assert_eq!(eval_series(&d, &int(2)).unwrap(), x);
            assert_ne!(d.period(), &[0]);
        }
        assert!(dyadic_expansion(&int(0)).is_err());
        assert!(dyadic_expansion(&rat(3, 2)).is_err());
    }

    #[test]
    fn quasi_greedy_one_detects_cycles() {
        let a = quasi_greedy_one(&int(2), 10).unwrap();
        assert_eq!(a.exact, Some(s("(1)^")));
        let a = quasi_greedy_one(&rat(8, 5), 6).unwrap();
        assert_eq!(a.exact, None);
        assert_eq!(a.digits.len(), 6);
    }

    #[test]
    fn uniqueness_examples() {
        let two = BaseEnclosure::exact(int(2)).unwrap();
        assert_eq!(
            is_unique_expansion(&s("(1)^"), &two, 50).unwrap(),
            UniquenessVerdict::Unique
        );
        let q = BaseEnclosure::exact(rat(8, 5)).unwrap();
        assert_eq!(
            is_unique_expansion(&s("(10)^"), &q, 50).unwrap(),
            UniquenessVerdict::NotUnique
        );
        let x = eval_series(&s("(10)^"), &rat(8, 5)).unwrap();
        let (count, _) = count_expansions_bruteforce(&x, &rat(8, 5), 25).unwrap();
        assert!(count >= 2);
        // 0 1^∞ and 1 0^∞ both expand 1/2 in base 2
        assert_eq!(
            is_unique_expansion(&s("0(1)^"), &two, 50).unwrap(),
            UniquenessVerdict::NotUnique
        );
        assert!(is_unique_expansion(&s("(12)^"), &two, 5).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(
            count_expansions_bruteforce(&int(1), &int(2), 20).unwrap(),
            (1, false)
        );
        assert_eq!(
            count_expansions_bruteforce(&int(0), &rat(3, 2), 10).unwrap(),
            (1, false)
        );
        let (k, _) = count_expansions_bruteforce(&rat(1, 2), &rat(8, 5), 25).unwrap();
        assert!(k >= 2);
        assert!(count_expansions_bruteforce(&int(5), &rat(3, 2), 10).is_err());
        let (k, saturated) =
            count_expansions_bruteforce_with_cap(&int(1), &rat(3, 2), 30, 16).unwrap();
        assert!(saturated && k == 16);
    }
}
