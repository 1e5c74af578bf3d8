use std::sync::OnceLock;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::expand::eval_series;
use crate::rational::{dyadic_tol, int, rat, Interval, Rational, Verdict};
use crate::seq::{EventuallyPeriodicWord, FiniteWord};
use crate::solve::golden_ratio;

use super::decompose::decompose;
use super::level::{CantorLevel, GapView, RealInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThicknessScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThicknessReport {
    pub tau_lo: Rational,
    pub tau_hi: Rational,
    /// Word of the gap attaining `tau_lo`.
    pub argmin: FiniteWord,
    pub scale: ThicknessScale,
    pub depth: usize,
    pub gaps: usize,
}

fn lengths(r: &RealInterval, scale: ThicknessScale) -> Result<Interval> {
    match scale {
        ThicknessScale::Linear => Ok(r.length()),
        ThicknessScale::Log => r.log_length(),
    }
}

/// Bounds on `min(|I_lower|, |I_upper|) / |G|` for one gap.
fn gap_ratio(g: &GapView<'_>, scale: ThicknessScale) -> Result<Interval> {
    let gl = lengths(g.gap, scale)?;
    if !gl.lo.is_positive() {
        return Err(Error::inconclusive(
            "gap length is not certified positive",
            Some(g.gap.outer()),
        ));
    }
    let a = lengths(&g.lower.interval, scale)?;
    let b = lengths(&g.upper.interval, scale)?;
    Ok(Interval {
        lo: a.lo.min(b.lo) / &gl.hi,
        hi: a.hi.min(b.hi) / &gl.lo,
    })
}

/// Finite-depth thickness: the minimum bridge-to-gap ratio over all gaps.
pub fn thickness(level: &CantorLevel, scale: ThicknessScale) -> Result<ThicknessReport> {
    let mut best: Option<(Interval, FiniteWord)> = None;
    let mut tau_hi: Option<Rational> = None;
    let gaps = level.gaps();
    for g in &gaps {
        let r = gap_ratio(g, scale)?;
        tau_hi = Some(match tau_hi {
            Some(h) if h <= r.hi => h,
            _ => r.hi.clone(),
        });
        if best.as_ref().is_none_or(|(b, _)| r.lo < b.lo) {
            best = Some((r, level.word(g.parent)));
        }
    }
    let (lo, argmin) = best.ok_or_else(|| Error::domain("level has no gaps"))?;
    Ok(ThicknessReport {
        tau_lo: lo.lo,
        tau_hi: tau_hi.expect("set with best"),
        argmin,
        scale,
        depth: level.depth,
        gaps: gaps.len(),
    })
}

/// Lower bound of the golden ratio used in the threshold conditions.
fn phi_floor() -> &'static Rational {
    static PHI: OnceLock<Rational> = OnceLock::new();
    PHI.get_or_init(|| {
        golden_ratio(&dyadic_tol(24))
            .expect("golden ratio")
            .lo()
            .clone()
    })
}

fn phi_enclosure() -> &'static Interval {
    static PHI: OnceLock<Interval> = OnceLock::new();
    PHI.get_or_init(|| {
        golden_ratio(&dyadic_tol(64))
            .expect("golden ratio")
            .into_interval()
    })
}

fn inv_pow(q: &Interval, k: usize) -> Interval {
    q.powi(k).recip().expect("bases are positive")
}

/// Per-gap verdicts of the gap-length estimates and their consequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapBoundReport {
    pub word: FiniteWord,
    pub n: usize,
    /// `q2 - q1 <= q2^-(n-M-1)`
    pub left_upper: Verdict,
    /// `q2 - q1 >= (φ-1)² / q2^(n+4)`
    pub left_lower: Verdict,
    /// `q4 - q3 <= q4^-(n-M-1)`
    pub right_upper: Verdict,
    /// `q4 - q3 >= (φ-1)² / q3^(n+3)`
    pub right_lower: Verdict,
    /// `q3 - q2 <= 2^(M+4) / q3^(n+N+1)`
    pub gap_upper: Verdict,
    /// `|G| <= |I_ω0|`
    pub gap_le_left: Verdict,
    /// `|G| <= |I_ω1|`
    pub gap_le_right: Verdict,
    /// `q3/q2 <= q2/q1`
    pub log_gap_le_left: Verdict,
    /// `q3/q2 <= q4/q3`
    pub log_gap_le_right: Verdict,
}

impl GapBoundReport {
    pub fn conclusions_hold(&self) -> bool {
        self.gap_le_left.holds() && self.gap_le_right.holds()
    }

    pub fn log_conclusions_hold(&self) -> bool {
        self.log_gap_le_left.holds() && self.log_gap_le_right.holds()
    }

    pub fn all(&self) -> [Verdict; 9] {
        [
            self.left_upper,
            self.left_lower,
            self.right_upper,
            self.right_lower,
            self.gap_upper,
            self.gap_le_left,
            self.gap_le_right,
            self.log_gap_le_left,
            self.log_gap_le_right,
        ]
    }
}

/// Check the gap estimates at every gap of `level`, with `I_ω0 = [q1, q2]`,
/// `I_ω1 = [q3, q4]` in increasing order.
pub fn verify_gap_bounds(
    level: &CantorLevel,
    m: usize,
    n_bound: usize,
) -> Result<Vec<GapBoundReport>> {
    let phi = phi_enclosure();
    let one = Interval::point(Rational::one());
    let phi1 = phi.sub(&one);
    let phi1_sq = phi1.mul(&phi1);
    let mut out = Vec::new();
    for g in level.gaps() {
        let n = level.word_len(g.parent);
        let (q1, q2) = (&g.lower.interval.left, &g.lower.interval.right);
        let (q3, q4) = (&g.upper.interval.left, &g.upper.interval.right);
        let left = q2.sub(q1);
        let right = q4.sub(q3);
        let gap = q3.sub(q2);
        let up_exp = n.saturating_sub(m + 1);
        let two_pow = Interval::point(crate::rational::pow(&int(2), m + 4));
        let r21 = q2.div(q1)?;
        let r32 = q3.div(q2)?;
        let r43 = q4.div(q3)?;
        out.push(GapBoundReport {
            word: level.word(g.parent),
            n,
            left_upper: Verdict::le(&left, &inv_pow(q2, up_exp)),
            left_lower: Verdict::le(&phi1_sq.mul(&inv_pow(q2, n + 4)), &left),
            right_upper: Verdict::le(&right, &inv_pow(q4, up_exp)),
            right_lower: Verdict::le(&phi1_sq.mul(&inv_pow(q3, n + 3)), &right),
            gap_upper: Verdict::le(&gap, &two_pow.mul(&inv_pow(q3, n + n_bound + 1))),
            gap_le_left: Verdict::le(&gap, &left),
            gap_le_right: Verdict::le(&gap, &right),
            log_gap_le_left: Verdict::le(&r32, &r21),
            log_gap_le_right: Verdict::le(&r32, &r43),
        });
    }
    Ok(out)
}

/// Width of the `n` window over which the threshold conditions are checked.
pub const THRESHOLD_WINDOW: usize = 16;

/// Verdicts of the three sufficient conditions on `(M, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdConditions {
    pub m: usize,
    pub n: usize,
    /// `N >= 4` and `(1+φ^-(n-M))^(n+1) < (110^∞)_2 / ((10^(N-1))^∞)_φ`
    pub left_condition: Verdict,
    /// `(1+φ^-(n-M))^(n+2) < ((1^(N-1)0)^∞)_2 / ((10^(N-3)10)^∞)_φ`
    pub right_condition: Verdict,
    /// `2^(M+4) <= (φ-1)² φ^(N-3)`
    pub gap_condition: Verdict,
}

impl ThresholdConditions {
    pub fn all_hold(&self) -> bool {
        self.left_condition.holds() && self.right_condition.holds() && self.gap_condition.holds()
    }
}

fn word_of(parts: &[(u8, usize)]) -> Vec<u8> {
    parts
        .iter()
        .flat_map(|&(d, k)| std::iter::repeat_n(d, k))
        .collect()
}

fn combine(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
        (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
        _ => Verdict::Undecided,
    }
}

/// Evaluate the conditions with `φ` replaced by a rational lower bound; each
/// side is monotone in `φ` in the direction that keeps the check sound.
pub fn threshold_conditions(m: usize, n: usize) -> Result<ThresholdConditions> {
    if n < 3 {
        return Err(Error::domain("run bound N must be at least 3"));
    }
    let phi = phi_floor();
    let one = Rational::one();
    let point = |r: Rational| Interval::point(r);
    let series = |parts: &[(u8, usize)], q: &Rational| -> Result<Rational> {
        eval_series(&EventuallyPeriodicWord::new(Vec::new(), word_of(parts))?, q)
    };
    let left_rhs = rat(3, 4) / series(&[(1, 1), (0, n - 1)], phi)?;
    let right_rhs = series(&[(1, n - 1), (0, 1)], &int(2))?
        / series(&[(1, 1), (0, n - 3), (1, 1), (0, 1)], phi)?;
    let mut left = if n >= 4 {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    let mut right = Verdict::Holds;
    for k in (m + n + 1)..=(m + n + THRESHOLD_WINDOW) {
        let base = &one + crate::rational::pow(phi, k - m).recip();
        let l = crate::rational::pow(&base, k + 1);
        left = combine(left, Verdict::lt(&point(l), &point(left_rhs.clone())));
        let r = crate::rational::pow(&base, k + 2);
        right = combine(right, Verdict::lt(&point(r), &point(right_rhs.clone())));
    }
    let phi1 = phi - &one;
    let gap_rhs = &phi1 * &phi1 * crate::rational::pow(phi, n - 3);
    let gap = Verdict::le(
        &point(crate::rational::pow(&int(2), m + 4)),
        &point(gap_rhs),
    );
    Ok(ThresholdConditions {
        m,
        n,
        left_condition: left,
        right_condition: right,
        gap_condition: gap,
    })
}

/// Smallest `j <= j_max` at which every threshold condition holds.
pub fn find_threshold_j(x: &Rational, j_max: usize) -> Result<usize> {
    if j_max == 0 {
        return Err(Error::domain("j_max must be at least 1"));
    }
    let dec = decompose(x)?;
    for j in 1..=j_max {
        if threshold_conditions(dec.m, dec.n(j)?)?.all_hold() {
            return Ok(j);
        }
    }
    Err(Error::NotFound(format!(
        "no j <= {j_max} satisfies the threshold conditions for x = {x}"
    )))
}
