//! Guaranteed-enclosure inversion of `q ↦ ((d_i))_q`.
//!
//! Every sign test is exact: periodic sequences are turned into an integer
//! polynomial whose sign at a rational base matches `((d_i))_q - x`; streamed
//! sequences are bracketed by their `0`-tail and max-digit-tail completions.
//! Brackets are widened to a dyadic grid matched to their width and bisected
//! at dyadic midpoints, so endpoint bit sizes track `log2(1/tol)` and
//! enclosures computed at different tolerances from the same bracket are
//! nested.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expand::eval_enclosure;
use crate::rational::{dyadic_tol, int, rat, sign_of, Interval, Rational};
use crate::seq::{DigitStreamGenerator, EventuallyPeriodicWord};

/// A rational enclosure `[lo, hi]` of a base, with `1 < lo <= hi <= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseEnclosure(Interval);

impl BaseEnclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo <= Rational::one() || hi > int(2) || lo > hi {
            return Err(Error::domain(format!(
                "base enclosure [{lo}, {hi}] must satisfy 1 < lo <= hi <= 2"
            )));
        }
        Ok(BaseEnclosure(Interval { lo, hi }))
    }

    pub fn exact(q: Rational) -> Result<Self> {
        Self::new(q.clone(), q)
    }

    pub fn lo(&self) -> &Rational {
        &self.0.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.0.hi
    }

    pub fn width(&self) -> Rational {
        self.0.width()
    }

    pub fn midpoint(&self) -> Rational {
        self.0.midpoint()
    }

    pub fn interval(&self) -> &Interval {
        &self.0
    }

    pub fn into_interval(self) -> Interval {
        self.0
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.0.contains(q)
    }

    pub fn is_within(&self, outer: &BaseEnclosure) -> bool {
        outer.0.contains_interval(&self.0)
    }
}

/// Bisection limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Maximum number of bisection steps before reporting `Inconclusive`.
    pub max_iters: usize,
    /// First prefix length tried by the stream solver.
    pub initial_prefix: usize,
}

pub const DEFAULT_MAX_ITERS: usize = 256;
pub const MAX_ITERS_ENV: &str = "UNIVOQUE_MAX_ITERS";

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: DEFAULT_MAX_ITERS,
            initial_prefix: 32,
        }
    }
}

impl SolverConfig {
    /// Default configuration with `UNIVOQUE_MAX_ITERS` applied when set.
    pub fn from_env() -> Self {
        let mut cfg = SolverConfig::default();
        if let Some(n) = std::env::var(MAX_ITERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            cfg.max_iters = n;
        }
        cfg
    }

    /// [`SolverConfig::from_env`] read once per process; used by the plain
    /// solver entry points.
    pub fn process() -> &'static SolverConfig {
        static CFG: OnceLock<SolverConfig> = OnceLock::new();
        CFG.get_or_init(SolverConfig::from_env)
    }
}

/// Enclosure of the golden ratio, the positive root of `q² = q + 1`.
pub fn golden_ratio(tol: &Rational) -> Result<BaseEnclosure> {
    let bracket = BaseEnclosure::new(rat(3, 2), int(2))?;
    bisect(&bracket, tol, DEFAULT_MAX_ITERS, |q| {
        // q² - q - 1 is increasing, so a negative value puts the root above q
        Ok(Some(Rational::zero().cmp(&(q * q - q - Rational::one()))))
    })
}

/// Cached lower bracket `[φ⁻, 2]` used in univoque-base contexts; `φ⁻` is a
/// dyadic lower bound of the golden ratio.
pub fn univoque_bracket() -> &'static BaseEnclosure {
    static BRACKET: OnceLock<BaseEnclosure> = OnceLock::new();
    BRACKET.get_or_init(|| {
        let phi = golden_ratio(&dyadic_tol(10)).expect("golden ratio bracket");
        BaseEnclosure::new(phi.lo().clone(), int(2)).expect("valid bracket")
    })
}

/// `(1 + 2^-32, 2]`, the bracket used when nothing better is known.
pub fn general_bracket() -> BaseEnclosure {
    BaseEnclosure::new(Rational::one() + dyadic_tol(32), int(2)).expect("valid bracket")
}

/// Integer polynomial `G` with `sign G(q) = sign(((d_i))_q - x)` for `q > 1`.
///
/// With `d = u·v^∞`, `|u| = p`, `|v| = L`, `x = r/s`:
/// `G(q) = s·((q^L - 1)·U(q) + V(q)) - r·q^p·(q^L - 1)` where
/// `U(q) = Σ u_i q^{p-i}` and `V(q) = Σ v_i q^{L-i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuePolynomial {
    /// Coefficient of `q^k` at index `k`.
    pub coeffs: Vec<BigInt>,
}

impl ValuePolynomial {
    pub fn new(d: &EventuallyPeriodicWord, x: &Rational) -> Self {
        let u = d.preperiod();
        let v = d.period();
        let (p, l) = (u.len(), v.len());
        let mut c = vec![BigInt::zero(); p + l + 1];
        let s = x.denom();
        let r = x.numer();
        for (i, &ui) in u.iter().enumerate() {
            // u_i q^{p-1-i} · (q^L - 1)
            let k = p - 1 - i;
            c[k + l] += s * BigInt::from(ui);
            c[k] -= s * BigInt::from(ui);
        }
        for (i, &vi) in v.iter().enumerate() {
            c[l - 1 - i] += s * BigInt::from(vi);
        }
        c[p + l] -= r;
        c[p] += r;
        while c.len() > 1 && c.last().is_some_and(|t| t.is_zero()) {
            c.pop();
        }
        ValuePolynomial { coeffs: c }
    }

    /// Exact value at a rational point.
    pub fn eval(&self, q: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + Rational::from_integer(c.clone());
        }
        acc
    }

    /// Sign at `q = a/b` via homogeneous Horner in integers.
    pub fn sign_at(&self, q: &Rational) -> Ordering {
        let a = q.numer();
        let b = q.denom();
        let mut coeffs = self.coeffs.iter().rev();
        let mut acc = coeffs.next().cloned().unwrap_or_default();
        let mut bp = BigInt::one();
        for c in coeffs {
            bp *= b;
            acc = acc * a + c * &bp;
        }
        // b > 0, so the homogenised value has the sign of G(a/b)
        sign_of(&acc)
    }
}

/// Bisection on a decreasing function given through `side(q)`, which returns
/// the order of `x` relative to the value at `q` (`Less` means the root is
/// below `q`), or `None` when it cannot decide yet.
fn bisect<F>(
    bracket: &BaseEnclosure,
    tol: &Rational,
    max_iters: usize,
    mut side: F,
) -> Result<BaseEnclosure>
where
    F: FnMut(&Rational) -> Result<Option<Ordering>>,
{
    if !tol.is_positive() {
        return Err(Error::domain("tolerance must be positive"));
    }
    let mut lo = bracket.lo().clone();
    let mut hi = bracket.hi().clone();
    let check = |q: &Rational, side: &mut F| -> Result<Ordering> {
        side(q)?.ok_or_else(|| {
            Error::inconclusive(
                format!("sign at bracket endpoint {q} undecided"),
                Some(bracket.interval().clone()),
            )
        })
    };
    match check(&lo, &mut side)? {
        Ordering::Equal => return BaseEnclosure::exact(lo),
        Ordering::Less => return Err(Error::NoBracket { lo: Box::new(lo), hi: Box::new(hi) }),
        Ordering::Greater => {}
    }
    match check(&hi, &mut side)? {
        Ordering::Equal => return BaseEnclosure::exact(hi),
        Ordering::Greater => return Err(Error::NoBracket { lo: Box::new(lo), hi: Box::new(hi) }),
        Ordering::Less => {}
    }
    let two = int(2);
    let (orig_lo, orig_hi) = (lo.clone(), hi.clone());
    (lo, hi) = snap_outward(&lo, &hi);
    let mut iters = 0usize;
    while &hi - &lo > *tol {
        if iters >= max_iters {
            return Err(Error::inconclusive(
                format!("bisection cap of {max_iters} iterations reached"),
                Some(Interval { lo, hi }),
            ));
        }
        iters += 1;
        let mid = (&lo + &hi) / &two;
        let decision = if mid < orig_lo {
            Some(Ordering::Greater)
        } else if mid > orig_hi {
            Some(Ordering::Less)
        } else {
            side(&mid)?
        };
        match decision {
            Some(Ordering::Greater) => lo = mid,
            Some(Ordering::Less) => hi = mid,
            Some(Ordering::Equal) => return BaseEnclosure::exact(mid),
            None => {
                return Err(Error::inconclusive(
                    format!("sign at {mid} undecided"),
                    Some(Interval { lo, hi }),
                ))
            }
        }
    }
    BaseEnclosure::new(lo.max(orig_lo), hi.min(orig_hi))
}

/// Widen `[lo, hi]` to endpoints on a dyadic grid a few bits finer than its
/// width, so bisection endpoints stay short regardless of the input bracket.
fn snap_outward(lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let w = hi - lo;
    if w.is_zero() {
        return (lo.clone(), hi.clone());
    }
    let k = (w.denom().bits() as i64 - w.numer().bits() as i64 + 3).max(0) as usize;
    let scale = BigInt::one() << k;
    let down = (lo * Rational::from_integer(scale.clone())).floor();
    let up = (hi * Rational::from_integer(scale.clone())).ceil();
    let den = Rational::from_integer(scale);
    (down / &den, up / &den)
}

fn check_solvable(d: &EventuallyPeriodicWord) -> Result<()> {
    if !d.is_binary() {
        return Err(Error::domain(format!("sequence {d} is not binary")));
    }
    if d.is_zero() {
        return Err(Error::domain("0^∞ has no base solving a positive target"));
    }
    Ok(())
}

/// Enclosure of the base `q` with `((d_i))_q = x`.
pub fn solve_base(
    d: &EventuallyPeriodicWord,
    x: &Rational,
    bracket: &BaseEnclosure,
    tol: &Rational,
) -> Result<BaseEnclosure> {
    solve_base_with(SolverConfig::process(), d, x, bracket, tol)
}

pub fn solve_base_with(
    cfg: &SolverConfig,
    d: &EventuallyPeriodicWord,
    x: &Rational,
    bracket: &BaseEnclosure,
    tol: &Rational,
) -> Result<BaseEnclosure> {
    check_solvable(d)?;
    let poly = ValuePolynomial::new(d, x);
    // value - x has the sign of G; a positive G means the root lies above q
    bisect(bracket, tol, cfg.max_iters, |q| Ok(Some(poly.sign_at(q))))
}

/// Sign decision for a streamed sequence at `q`, widening the prefix until the
/// tail bracket separates from `x`.
fn stream_side(
    g: &DigitStreamGenerator,
    digits: &mut Vec<u8>,
    x: &Rational,
    q: &Rational,
    initial: usize,
) -> Result<Option<Ordering>> {
    let at = BaseEnclosure(Interval::point(q.clone()));
    let max_digit = g.max_digit();
    let mut len = initial.min(g.budget).max(1);
    loop {
        if digits.len() < len {
            *digits = g.prefix(len);
        }
        let range = eval_enclosure(&digits[..len], max_digit, &at);
        // value >= x everywhere: root at or above q; value <= x: at or below
        if range.lo >= *x {
            return Ok(Some(if range.lo == *x && range.hi == *x {
                Ordering::Equal
            } else {
                Ordering::Greater
            }));
        }
        if range.hi <= *x {
            return Ok(Some(Ordering::Less));
        }
        if len >= g.budget {
            return Ok(None);
        }
        len = (len * 2).min(g.budget);
    }
}

/// Enclosure of the base `q` with `((d_i))_q = x` for a streamed sequence.
pub fn solve_base_stream(
    g: &DigitStreamGenerator,
    x: &Rational,
    bracket: &BaseEnclosure,
    tol: &Rational,
) -> Result<BaseEnclosure> {
    solve_base_stream_with(SolverConfig::process(), g, x, bracket, tol)
}

pub fn solve_base_stream_with(
    cfg: &SolverConfig,
    g: &DigitStreamGenerator,
    x: &Rational,
    bracket: &BaseEnclosure,
    tol: &Rational,
) -> Result<BaseEnclosure> {
    let mut digits = Vec::new();
    bisect(bracket, tol, cfg.max_iters, |q| {
        stream_side(g, &mut digits, x, q, cfg.initial_prefix)
    })
    .map_err(|e| match e {
        Error::Inconclusive { reason, best } => Error::Inconclusive {
            reason: format!("{reason} (prefix budget {})", g.budget),
            best,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::eval_series;
    use crate::rational::parse_rational;
    use crate::seq::FiniteWord;

    fn s(lit: &str) -> EventuallyPeriodicWord {
        lit.parse().unwrap()
    }

    fn e6() -> Rational {
        parse_rational("1e-6").unwrap()
    }

    #[test]
    fn polynomial_sign_matches_series() {
        for lit in ["(10)^", "11(0100)^", "(110100)^", "0(1)^", "1(0)^", "(1)^"] {
            let d = s(lit);
            for x in [int(1), rat(1, 2), rat(3, 4)] {
                let p = ValuePolynomial::new(&d, &x);
                for q in [rat(3, 2), rat(8, 5), rat(7, 4), rat(19, 10), int(2)] {
                    let direct = (eval_series(&d, &q).unwrap() - &x).cmp(&Rational::zero());
                    assert_eq!(p.sign_at(&q), direct, "{lit} x={x} q={q}");
                    assert_eq!(p.eval(&q).cmp(&Rational::zero()), direct);
                }
            }
        }
    }

    #[test]
    fn golden_ratio_from_periodic_solver() {
        let bracket = BaseEnclosure::new(rat(3, 2), int(2)).unwrap();
        let tol = parse_rational("1e-12").unwrap();
        let e = solve_base(&s("(10)^"), &int(1), &bracket, &tol).unwrap();
        assert!(e.width() <= tol);
        // φ is the root of q² - q - 1: sign change across the enclosure
        let f = |q: &Rational| q * q - q - Rational::one();
        assert!(f(e.lo()) <= Rational::zero() && f(e.hi()) >= Rational::zero());
        let phi = golden_ratio(&tol).unwrap();
        assert!(phi.interval().intersects(e.interval()));
    }

    #[test]
    fn solve_examples() {
        let e = solve_base(&s("(110100)^"), &int(1), univoque_bracket(), &e6()).unwrap();
        assert!(e.contains(&parse_rational("1.788543").unwrap()) || e.lo() < &rat(178855, 100000));
        assert!(e.lo() > &rat(178853, 100000) && e.hi() < &rat(178855, 100000));
        let two = solve_base(&s("(1)^"), &int(1), univoque_bracket(), &e6()).unwrap();
        assert_eq!(two, BaseEnclosure::exact(int(2)).unwrap());
    }

    #[test]
    fn solve_errors() {
        let b = univoque_bracket();
        assert!(matches!(
            solve_base(&s("(10)^"), &int(5), b, &e6()),
            Err(Error::NoBracket { .. })
        ));
        assert!(solve_base(&s("(10)^"), &int(1), b, &int(0)).is_err());
        assert!(solve_base(&s("(0)^"), &int(1), b, &e6()).is_err());
        assert!(solve_base(&s("(12)^"), &int(1), b, &e6()).is_err());
    }

    #[test]
    fn bisection_cap_reports_best_enclosure() {
        let cfg = SolverConfig {
            max_iters: 3,
            ..SolverConfig::default()
        };
        match solve_base_with(&cfg, &s("(10)^"), &int(1), univoque_bracket(), &e6()) {
            Err(Error::Inconclusive {
                best: Some(best), ..
            }) => {
                assert!(best.width() > e6());
            }
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn stream_examples() {
        let kl = DigitStreamGenerator::devk("10".parse::<FiniteWord>().unwrap()).unwrap();
        let e = solve_base_stream(&kl, &int(1), univoque_bracket(), &e6()).unwrap();
        assert!(e.width() <= e6());
        assert!(e.lo() > &rat(178722, 100000) && e.hi() < &rat(178724, 100000));

        let r = DigitStreamGenerator::devk("110100".parse::<FiniteWord>().unwrap()).unwrap();
        let e = solve_base_stream(&r, &int(1), univoque_bracket(), &e6()).unwrap();
        assert!(e.lo() > &rat(179655, 100000) && e.hi() < &rat(179657, 100000));

        let ones = DigitStreamGenerator::periodic(s("(1)^"));
        let e = solve_base_stream(&ones, &int(1), univoque_bracket(), &e6()).unwrap();
        assert!(e.contains(&int(2)));
    }

    #[test]
    fn periodic_and_stream_solvers_agree() {
        for lit in ["(110100)^", "(10)^", "1(10)^", "(1110)^"] {
            let d = s(lit);
            let b = general_bracket();
            let p = solve_base(&d, &int(1), &b, &e6()).unwrap();
            let st =
                solve_base_stream(&DigitStreamGenerator::periodic(d), &int(1), &b, &e6()).unwrap();
            assert!(p.interval().intersects(st.interval()), "{lit}");
        }
    }

    #[test]
    fn stream_budget_exhaustion_is_inconclusive() {
        let g = DigitStreamGenerator::devk("10".parse::<FiniteWord>().unwrap())
            .unwrap()
            .with_budget(8);
        let tol = dyadic_tol(40);
        assert!(solve_base_stream(&g, &int(1), univoque_bracket(), &tol)
            .unwrap_err()
            .is_inconclusive());
    }
}
