//! Exact rationals, literal parsing, decimal rendering and closed rational
//! intervals with outward-correct arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-bits` as a rational.
pub fn dyadic_tol(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    // powers of a reduced fraction stay reduced
    let e = u32::try_from(exp).expect("exponent fits in u32");
    Rational::new_raw(base.numer().pow(e), base.denom().pow(e))
}

/// Parses `p/q`, a plain integer, an exact decimal (`0.75`, `-1.5`) or an exact
/// scientific literal (`1e-6`, `2.5E3`). No floating point is involved.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::RationalLiteral(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = parse_int(p).ok_or_else(bad)?;
        let q: BigInt = parse_int(q).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Smallest `d` with `10^-d <= tol`.
pub fn digits_for_tolerance(tol: &Rational) -> usize {
    let mut d = 0usize;
    let mut unit = Rational::one();
    let ten = int(10);
    while unit > *tol && d < 10_000 {
        unit /= &ten;
        d += 1;
    }
    d
}

/// Decimal expansion of `value` rounded to `digits` fractional digits, ties
/// away from zero.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let scale = num_traits::pow::pow(BigInt::from(10u32), digits);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let twice = (scaled.numer() * 2u32 + scaled.denom()).div_floor(&(scaled.denom() * 2u32));
    let (whole, frac) = twice.div_rem(&scale);
    let sign = if value.is_negative() && !twice.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    let frac = frac.to_string();
    format!("{sign}{whole}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Closed interval `[lo, hi]` with exact rational endpoints.
///
/// Used both as an enclosure of a single real quantity and as a real interval
/// (bridge or gap) of a Cantor construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(format!("interval [{lo}, {hi}] is reversed")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(value: Rational) -> Self {
        Interval {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.lo <= *value && *value <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `Some(Less)` if every point of `self` is below every point of `other`,
    /// `Some(Greater)` for the mirror case, `None` when the two overlap.
    pub fn certain_cmp(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Interval {
        let a = &self.lo * factor;
        let b = &self.hi * factor;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        Interval { lo, hi }
    }

    /// Reciprocal of a strictly positive interval.
    pub fn recip(&self) -> Result<Interval> {
        if !self.is_positive() {
            return Err(Error::domain("reciprocal of a non-positive interval"));
        }
        Ok(Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        Ok(self.mul(&other.recip()?))
    }

    /// Integer power of a non-negative interval.
    pub fn powi(&self, exp: usize) -> Interval {
        debug_assert!(!self.lo.is_negative());
        Interval {
            lo: pow(&self.lo, exp),
            hi: pow(&self.hi, exp),
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Certified verdict for an inequality evaluated with enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl Verdict {
    /// Verdict for `lhs <= rhs`.
    pub fn le(lhs: &Interval, rhs: &Interval) -> Verdict {
        if lhs.hi <= rhs.lo {
            Verdict::Holds
        } else if lhs.lo > rhs.hi {
            Verdict::Fails
        } else {
            Verdict::Undecided
        }
    }

    /// Verdict for `lhs < rhs`.
    pub fn lt(lhs: &Interval, rhs: &Interval) -> Verdict {
        if lhs.hi < rhs.lo {
            Verdict::Holds
        } else if lhs.lo >= rhs.hi {
            Verdict::Fails
        } else {
            Verdict::Undecided
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

/// Enclosure of `ln(1 + u)` for `0 <= u < 1` via alternating partial sums.
pub fn ln1p_enclosure(u: &Interval) -> Result<Interval> {
    if u.lo.is_negative() || u.hi >= Rational::one() {
        return Err(Error::domain("ln1p enclosure needs 0 <= u < 1"));
    }
    Ok(Interval {
        lo: ln1p_partial(&u.lo, false),
        hi: ln1p_partial(&u.hi, true),
    })
}

// Alternating series u - u^2/2 + u^3/3 - ...; stopping after a positive term
// gives an upper bound, after a negative term a lower bound.
fn ln1p_partial(u: &Rational, upper: bool) -> Rational {
    if u.is_zero() {
        return Rational::zero();
    }
    let cutoff = u * dyadic_tol(48);
    let mut sum = Rational::zero();
    let mut power = Rational::one();
    let mut k = 1usize;
    loop {
        power *= u;
        let term = &power / int(k as i64);
        let positive = k % 2 == 1;
        if positive {
            sum += &term;
        } else {
            sum -= &term;
        }
        let small = term <= cutoff;
        if small && positive == upper && k >= 2 {
            return sum;
        }
        k += 1;
    }
}

pub fn numer_denom_strings(value: &Rational) -> (String, String) {
    (value.numer().to_string(), value.denom().to_string())
}

pub fn sign_of(value: &BigInt) -> Ordering {
    match value.sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}
