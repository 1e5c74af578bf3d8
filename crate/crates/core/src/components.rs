//! Components `(q_L, q_R)` of the complement of the closure of the univoque
//! set above q_KL, the smallest univoque base of 1.

use num_traits::{One, Signed};

use crate::cantor::{default_level_tol, leaf_cover, realize_level, sum_cover};
use crate::error::{Error, Result};
use crate::rational::{dyadic_tol, int, Interval, Rational, Verdict};
use crate::seq::{check_admissible, DigitStreamGenerator, FiniteWord};
use crate::solve::{solve_base, solve_base_stream, univoque_bracket, BaseEnclosure};

/// Enclosure of the smallest univoque base of `1`.
pub fn kl_constant(tol: &Rational) -> Result<BaseEnclosure> {
    let seed = FiniteWord::new(vec![1, 0])?;
    solve_base_stream(
        &DigitStreamGenerator::devk(seed)?,
        &Rational::one(),
        univoque_bracket(),
        tol,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentRecord {
    pub word: FiniteWord,
    pub q_l: BaseEnclosure,
    pub q_r: BaseEnclosure,
    pub q_kl: BaseEnclosure,
}

pub fn component_for_word(w: &FiniteWord, tol: &Rational) -> Result<ComponentRecord> {
    if !check_admissible(w)? {
        return Err(Error::domain(format!("{w} is not admissible")));
    }
    let one = Rational::one();
    let q_l = solve_base(&w.periodic(), &one, univoque_bracket(), tol)?;
    let q_r = solve_base_stream(
        &DigitStreamGenerator::devk(w.clone())?,
        &one,
        univoque_bracket(),
        tol,
    )?;
    let q_kl = kl_constant(tol)?;
    Ok(ComponentRecord {
        word: w.clone(),
        q_l,
        q_r,
        q_kl,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop51Report {
    pub record: ComponentRecord,
    /// `q_R - q_L > q_L - q_KL`
    pub sum_gap_ok: bool,
    /// `q_R / q_L > q_L / q_KL`
    pub product_gap_ok: bool,
    pub right_gap: Interval,
    pub left_gap: Interval,
    pub right_ratio: Interval,
    pub left_ratio: Interval,
    /// Enclosure of `(q_R - q_L) - (q_L - q_KL)`.
    pub sum_margin: Interval,
    /// Enclosure of `q_R/q_L - q_L/q_KL`.
    pub product_margin: Interval,
    /// Tolerance at which both comparisons were decided.
    pub tol: Rational,
}

const PROP51_REFINEMENTS: usize = 6;
const PROP51_STEP_BITS: u32 = 16;

fn decide(v: Verdict) -> Option<bool> {
    match v {
        Verdict::Holds => Some(true),
        Verdict::Fails => Some(false),
        Verdict::Undecided => None,
    }
}

/// Certify both component inequalities, tightening the tolerance until each
/// is decided.
pub fn check_prop51(w: &FiniteWord, tol: &Rational) -> Result<Prop51Report> {
    let mut tol = tol.clone();
    for _ in 0..=PROP51_REFINEMENTS {
        let rec = component_for_word(w, &tol)?;
        let (l, r, kl) = (rec.q_l.interval(), rec.q_r.interval(), rec.q_kl.interval());
        let right_gap = r.sub(l);
        let left_gap = l.sub(kl);
        let right_ratio = r.div(l)?;
        let left_ratio = l.div(kl)?;
        let sum = decide(Verdict::lt(&left_gap, &right_gap));
        let product = decide(Verdict::lt(&left_ratio, &right_ratio));
        if let (Some(sum_gap_ok), Some(product_gap_ok)) = (sum, product) {
            return Ok(Prop51Report {
                sum_margin: right_gap.sub(&left_gap),
                product_margin: right_ratio.sub(&left_ratio),
                record: rec,
                sum_gap_ok,
                product_gap_ok,
                right_gap,
                left_gap,
                right_ratio,
                left_ratio,
                tol,
            });
        }
        tol *= dyadic_tol(PROP51_STEP_BITS);
    }
    Err(Error::inconclusive(
        format!("component inequalities for {w} undecided at tolerance {tol}"),
        None,
    ))
}

/// For `A ⊂ [a, b]` with `a, b ∈ A` and `A ∩ (c, d) = ∅`, `A + A` misses
/// `(2c, a + d)` when that interval is non-empty.
pub fn sum_gap_witness(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Result<bool> {
    if !(a <= c && c < d && d <= b) {
        return Err(Error::domain("sum_gap_witness needs a <= c < d <= b"));
    }
    let wide = d - c > c - a;
    debug_assert_eq!(wide, c * int(2) < a + d);
    Ok(wide)
}

/// Connectivity summary of a union of intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub intervals: Vec<Interval>,
    pub components: usize,
    pub hull: Interval,
    pub largest_gap: Option<Rational>,
    pub total_gap: Rational,
}

pub fn cover_report(intervals: Vec<Interval>) -> Result<CoverReport> {
    let first = intervals
        .first()
        .ok_or_else(|| Error::domain("empty cover"))?;
    let hull = Interval {
        lo: first.lo.clone(),
        hi: intervals.last().expect("non-empty").hi.clone(),
    };
    let gaps: Vec<Rational> = intervals.windows(2).map(|w| &w[1].lo - &w[0].hi).collect();
    let total_gap = gaps
        .iter()
        .fold(Rational::from_integer(0.into()), |acc, g| acc + g);
    Ok(CoverReport {
        components: intervals.len(),
        largest_gap: gaps.iter().max().cloned(),
        total_gap,
        hull,
        intervals,
    })
}

/// Cover of `A - A` for a list of disjoint intervals.
pub fn difference_cover(intervals: &[Interval]) -> Result<CoverReport> {
    cover_report(sum_cover(intervals, &int(-1), intervals)?)
}

/// Cover of `U - U` at the given level; descriptive only.
pub fn explore_difference(x: &Rational, j: usize, depth: usize) -> Result<CoverReport> {
    let level = realize_level(x, j, depth, &default_level_tol())?;
    let leaves = leaf_cover(&level)?;
    let report = difference_cover(&leaves)?;
    debug_assert!(!report.hull.lo.is_positive());
    Ok(report)
}
