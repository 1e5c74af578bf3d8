use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{Interval, Rational};

use super::level::CantorLevel;

/// Merge intervals that overlap or touch, returning them in increasing order.
pub fn merge_intervals(mut items: Vec<Interval>) -> Vec<Interval> {
    items.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
    let mut out: Vec<Interval> = Vec::with_capacity(items.len());
    for iv in items {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// Union of all `I + λJ` with `I` from `a` and `J` from `b`, merged.
pub fn sum_cover(a: &[Interval], lambda: &Rational, b: &[Interval]) -> Result<Vec<Interval>> {
    if lambda.is_zero() {
        return Err(Error::domain("lambda must be non-zero"));
    }
    let scaled = merge_intervals(b.iter().map(|j| j.scale(lambda)).collect());
    let a = merge_intervals(a.to_vec());
    // exact integer arithmetic over a common denominator
    let den = a
        .iter()
        .chain(scaled.iter())
        .flat_map(|iv| [iv.lo.denom(), iv.hi.denom()])
        .fold(BigInt::one(), |acc, d| acc.lcm(d));
    let to_int = |r: &Rational| r.numer() * (&den / r.denom());
    let ai: Vec<(BigInt, BigInt)> = a
        .iter()
        .map(|iv| (to_int(&iv.lo), to_int(&iv.hi)))
        .collect();
    let bi: Vec<(BigInt, BigInt)> = scaled
        .iter()
        .map(|iv| (to_int(&iv.lo), to_int(&iv.hi)))
        .collect();
    let mut sums: Vec<(BigInt, BigInt)> = Vec::with_capacity(ai.len() * bi.len());
    for (alo, ahi) in &ai {
        for (blo, bhi) in &bi {
            sums.push((alo + blo, ahi + bhi));
        }
    }
    sums.sort_unstable();
    let mut merged: Vec<(BigInt, BigInt)> = Vec::new();
    for (lo, hi) in sums {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    let back = |n: BigInt| Rational::new(n, den.clone());
    Ok(merged
        .into_iter()
        .map(|(lo, hi)| Interval {
            lo: back(lo),
            hi: back(hi),
        })
        .collect())
}

/// Leaf intervals of a level, shrunk to the part certainly inside each one.
pub fn leaf_cover(level: &CantorLevel) -> Result<Vec<Interval>> {
    level
        .leaves()
        .into_iter()
        .map(|e| {
            e.interval.inner().ok_or_else(|| {
                Error::inconclusive("leaf endpoint enclosures overlap", Some(e.interval.outer()))
            })
        })
        .collect()
}

/// [`sum_cover`] applied to the depth-`depth` leaves of two levels.
pub fn sum_cover_levels(
    a: &CantorLevel,
    lambda: &Rational,
    b: &CantorLevel,
) -> Result<Vec<Interval>> {
    sum_cover(&leaf_cover(a)?, lambda, &leaf_cover(b)?)
}
