//! The three-branch map `S_α`, matching detection, the doubling-map criterion
//! and the Cantor sets of non-matching parameters.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::cantor::{
    realize_symbolic, CantorLevel, EndpointMap, LevelMeta, Orientation, SymbolicInterval,
    SymbolicLevel, TailRule,
};
use crate::error::{Error, Result};
use crate::expand::eval_series;
use crate::rational::{int, rat, Interval, Rational};
use crate::seq::{complement, shift, EventuallyPeriodicWord};

/// A parameter `α` in `[1, 2]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlphaParam(Rational);

impl AlphaParam {
    pub fn new(alpha: Rational) -> Result<Self> {
        if alpha < Rational::one() || alpha > int(2) {
            return Err(Error::domain(format!("alpha = {alpha} is outside [1, 2]")));
        }
        Ok(AlphaParam(alpha))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// One step of `S_α`: `2x+α` on `[-1, -1/2)`, `2x` on `[-1/2, 1/2]`,
/// `2x-α` on `(1/2, 1]`.
pub fn s_alpha_step(x: &Rational, alpha: &AlphaParam) -> Result<Rational> {
    let one = Rational::one();
    if *x < -one.clone() || *x > one {
        return Err(Error::domain(format!(
            "S_alpha is defined on [-1, 1], got {x}"
        )));
    }
    let half = rat(1, 2);
    let twice = x * int(2);
    Ok(if *x < -half.clone() {
        twice + alpha.value()
    } else if *x <= half {
        twice
    } else {
        twice - alpha.value()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MatchingVerdict {
    /// The orbits first agree after `step` iterations.
    Matched {
        step: usize,
    },
    /// The orbit state repeats from index `preperiod` with period `cycle_len`
    /// without ever matching.
    NonMatching {
        preperiod: usize,
        cycle_len: usize,
    },
    NoMatchUpTo {
        budget: usize,
    },
}

impl MatchingVerdict {
    pub fn is_matched(&self) -> bool {
        matches!(self, MatchingVerdict::Matched { .. })
    }

    pub fn is_nonmatching(&self) -> bool {
        matches!(self, MatchingVerdict::NonMatching { .. })
    }

    /// Whether two verdicts are certified and opposite.
    pub fn contradicts(&self, other: &MatchingVerdict) -> bool {
        (self.is_matched() && other.is_nonmatching())
            || (self.is_nonmatching() && other.is_matched())
    }
}

/// Orbit prefixes of `1` and `1-α` with the verdict they lead to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingRun {
    pub verdict: MatchingVerdict,
    pub orbit_one: Vec<Rational>,
    pub orbit_other: Vec<Rational>,
}

pub fn matching_run(alpha: &AlphaParam, budget: usize) -> MatchingRun {
    let mut x = Rational::one();
    let mut y = Rational::one() - alpha.value();
    let mut orbit_one = vec![x.clone()];
    let mut orbit_other = vec![y.clone()];
    let mut seen: HashMap<(Rational, Rational), usize> = HashMap::new();
    seen.insert((x.clone(), y.clone()), 0);
    let mut verdict = MatchingVerdict::NoMatchUpTo { budget };
    for step in 1..=budget {
        // both orbits stay in [-1, 1] for α in [1, 2]
        x = s_alpha_step(&x, alpha).expect("orbit stays in [-1, 1]");
        y = s_alpha_step(&y, alpha).expect("orbit stays in [-1, 1]");
        orbit_one.push(x.clone());
        orbit_other.push(y.clone());
        if x == y {
            verdict = MatchingVerdict::Matched { step };
            break;
        }
        if let Some(&first) = seen.get(&(x.clone(), y.clone())) {
            verdict = MatchingVerdict::NonMatching {
                preperiod: first,
                cycle_len: step - first,
            };
            break;
        }
        seen.insert((x.clone(), y.clone()), step);
    }
    MatchingRun {
        verdict,
        orbit_one,
        orbit_other,
    }
}

pub fn detect_matching(alpha: &AlphaParam, budget: usize) -> MatchingVerdict {
    matching_run(alpha, budget).verdict
}

/// Orbit of `1/α` under `y ↦ 2y mod 1`, tested for entry into the open
/// interval `(1/(2α), 1 - 1/(2α))`; `step` of a match is the entry index.
pub fn doubling_criterion(alpha: &AlphaParam, budget: usize) -> Result<MatchingVerdict> {
    let a = alpha.value();
    if *a <= Rational::one() {
        return Err(Error::domain("the doubling criterion needs alpha > 1"));
    }
    let lo = (a * int(2)).recip();
    let hi = Rational::one() - &lo;
    let mut y = a.recip();
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    for n in 0..=budget {
        if lo < y && y < hi {
            return Ok(MatchingVerdict::Matched { step: n });
        }
        if let Some(&first) = seen.get(&y) {
            return Ok(MatchingVerdict::NonMatching {
                preperiod: first,
                cycle_len: n - first,
            });
        }
        seen.insert(y.clone(), n);
        y *= int(2);
        if y >= Rational::one() {
            y -= Rational::one();
        }
    }
    Ok(MatchingVerdict::NoMatchUpTo { budget })
}

/// `σⁿa ≼ a` whenever `a_n = 0` and `σⁿa ≽ ā` whenever `a_n = 1`, for
/// `n = 1..=depth`; indices past one full preperiod-plus-period add nothing.
pub fn check_eq41(a: &EventuallyPeriodicWord, depth: usize) -> Result<bool> {
    let bar = complement(a)?;
    let limit = depth.min(a.orbit_len());
    for n in 1..=limit {
        let s = shift(a, n);
        let ok = if a.digit(n - 1) == 0 {
            s <= *a
        } else {
            s >= bar
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `1 / ((a_i))_2`.
pub fn psi(a: &EventuallyPeriodicWord) -> Result<Rational> {
    let v = eval_series(a, &int(2))?;
    if v.is_zero() {
        return Err(Error::domain("psi is undefined at 0^∞"));
    }
    Ok(v.recip())
}

struct Psi;

impl EndpointMap for Psi {
    fn orientation(&self) -> Orientation {
        Orientation::Decreasing
    }

    fn realize(
        &self,
        seq: &EventuallyPeriodicWord,
        _bracket: &Interval,
        _tol: &Rational,
    ) -> Result<Interval> {
        Ok(Interval::point(psi(seq)?))
    }
}

/// Sequences `1^m t` whose tail `t` avoids `0^m` and `1^m`, for words up to
/// length `depth`, mapped to parameter space by [`psi`].
pub fn build_nm(m: usize, depth: usize) -> Result<CantorLevel> {
    if m < 3 {
        return Err(Error::domain("m must be at least 3"));
    }
    if depth <= m {
        return Err(Error::domain(format!("depth {depth} must exceed m = {m}")));
    }
    let prefix = vec![1u8; m];
    let low: Vec<u8> = std::iter::repeat_n(0, m - 1).chain([1]).collect();
    let high: Vec<u8> = std::iter::repeat_n(1, m - 1).chain([0]).collect();
    let root = SymbolicInterval {
        left: EventuallyPeriodicWord::new(prefix.clone(), low)?,
        right: EventuallyPeriodicWord::new(prefix.clone(), high)?,
    };
    let rule = TailRule {
        run_bound: m,
        first_digit: None,
    };
    let sym = SymbolicLevel::build(prefix, rule, depth - m, Some(root))?;
    let unit = Interval::new(Rational::one(), int(2))?;
    realize_symbolic(
        sym,
        &Psi,
        LevelMeta {
            x: None,
            j: 0,
            m: 0,
            depth,
        },
        &unit,
        &rat(1, 1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{thickness, ThicknessScale};

    fn a(n: i64, d: i64) -> AlphaParam {
        AlphaParam::new(rat(n, d)).unwrap()
    }

    fn e(s: &str) -> EventuallyPeriodicWord {
        s.parse().unwrap()
    }

    #[test]
    fn step_examples() {
        assert_eq!(s_alpha_step(&int(0), &a(3, 2)).unwrap(), int(0));
        assert_eq!(s_alpha_step(&int(1), &a(2, 1)).unwrap(), int(0));
        assert_eq!(s_alpha_step(&int(-1), &a(2, 1)).unwrap(), int(0));
        let x1 = s_alpha_step(&int(1), &a(3, 2)).unwrap();
        assert_eq!(x1, rat(1, 2));
        assert_eq!(s_alpha_step(&x1, &a(3, 2)).unwrap(), int(1));
        assert_eq!(s_alpha_step(&rat(-1, 2), &a(3, 2)).unwrap(), int(-1));
        assert!(s_alpha_step(&int(2), &a(3, 2)).is_err());
        assert!(AlphaParam::new(rat(5, 2)).is_err());
    }

    #[test]
    fn matching_examples() {
        assert_eq!(
            detect_matching(&a(2, 1), 10),
            MatchingVerdict::Matched { step: 1 }
        );
        let run = matching_run(&a(3, 2), 10);
        assert_eq!(
            run.verdict,
            MatchingVerdict::NonMatching {
                preperiod: 0,
                cycle_len: 2
            }
        );
        assert_eq!(run.orbit_one[..3], [int(1), rat(1, 2), int(1)]);
        assert_eq!(run.orbit_other[..3], [rat(-1, 2), int(-1), rat(-1, 2)]);
        assert!(detect_matching(&a(4, 3), 10).is_matched());
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(
            doubling_criterion(&a(2, 1), 10).unwrap(),
            MatchingVerdict::Matched { step: 0 }
        );
        assert!(doubling_criterion(&a(3, 2), 10).unwrap().is_nonmatching());
        assert_eq!(
            doubling_criterion(&a(4, 3), 10).unwrap(),
            MatchingVerdict::Matched { step: 1 }
        );
        assert!(doubling_criterion(&a(1, 1), 10).is_err());
    }

    #[test]
    fn eq41_examples() {
        assert!(check_eq41(&e("(10)^"), 50).unwrap());
        assert!(check_eq41(&e("(1100)^"), 50).unwrap());
        assert!(!check_eq41(&e("110"), 50).unwrap());
        assert!(!check_eq41(&e("(101100)^"), 50).unwrap());
        assert!(check_eq41(&e("111(001)^"), 50).unwrap());
    }

    #[test]
    fn nm_root_endpoints_are_exact() {
        let level = build_nm(3, 6).unwrap();
        let root = level.root().unwrap();
        assert_eq!(
            root.interval.left,
            Interval::point(psi(&e("111(110)^")).unwrap())
        );
        assert_eq!(
            root.interval.right,
            Interval::point(psi(&e("111(001)^")).unwrap())
        );
        assert!(build_nm(2, 6).is_err());
        assert!(build_nm(4, 4).is_err());
    }

    #[test]
    fn nm_small_thickness_is_reported() {
        let level = build_nm(4, 9).unwrap();
        let r = thickness(&level, ThicknessScale::Linear).unwrap();
        assert!(r.tau_lo <= r.tau_hi);
        assert_eq!(r.tau_lo, r.tau_hi);
    }
}
