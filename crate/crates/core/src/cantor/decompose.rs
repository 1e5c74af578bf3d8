use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expand::dyadic_expansion;
use crate::rational::Rational;
use crate::seq::{EventuallyPeriodicWord, FiniteWord};

/// Shape of the quasi-greedy dyadic expansion `(x_i)` of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpansionCase {
    /// `x_1⋯x_m 0 1^∞`
    A,
    /// `1^∞`
    B,
    /// Starts with `1` and has infinitely many blocks `1^r 0^s`.
    C,
    /// Starts with `0` and has infinitely many blocks `0^r 1^s`.
    D,
}

impl fmt::Display for ExpansionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExpansionCase::A => "A",
            ExpansionCase::B => "B",
            ExpansionCase::C => "C",
            ExpansionCase::D => "D",
        };
        f.write_str(s)
    }
}

/// Offset `M`, run bound schedule `N(j)` and prefixes for a target `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseDecomposition {
    pub x: Rational,
    pub dyadic: EventuallyPeriodicWord,
    pub case: ExpansionCase,
    pub m: usize,
}

/// Lengths of the first `count` maximal runs of `d`.
fn run_lengths(d: &EventuallyPeriodicWord, count: usize) -> Vec<usize> {
    let mut runs = Vec::with_capacity(count);
    let mut i = 0usize;
    while runs.len() < count {
        let digit = d.digit(i);
        let start = i;
        while d.digit(i) == digit {
            i += 1;
        }
        runs.push(i - start);
    }
    runs
}

pub fn decompose(x: &Rational) -> Result<CaseDecomposition> {
    if *x <= Rational::zero() || *x > Rational::one() {
        return Err(Error::domain(format!(
            "decompose needs 0 < x <= 1, got {x}"
        )));
    }
    let dyadic = dyadic_expansion(x)?;
    let (case, m) = if dyadic.period() == [1] {
        if dyadic.preperiod().is_empty() {
            (ExpansionCase::B, 0)
        } else {
            // canonical form: the preperiod is x_1⋯x_m 0
            (ExpansionCase::A, dyadic.preperiod().len())
        }
    } else if dyadic.digit(0) == 1 {
        (ExpansionCase::C, 4)
    } else {
        let r1 = run_lengths(&dyadic, 1)[0];
        (ExpansionCase::D, r1 + 3)
    };
    Ok(CaseDecomposition {
        x: x.clone(),
        dyadic,
        case,
        m,
    })
}

impl CaseDecomposition {
    fn check_j(j: usize) -> Result<()> {
        if j == 0 {
            return Err(Error::domain("j must be at least 1"));
        }
        Ok(())
    }

    /// Forbidden run length `N(j)` of the tails.
    pub fn n(&self, j: usize) -> Result<usize> {
        Self::check_j(j)?;
        Ok(match self.case {
            ExpansionCase::A | ExpansionCase::B => j + 2,
            ExpansionCase::C => run_lengths(&self.dyadic, 2 * (j + 2)).iter().sum::<usize>() - 2,
            ExpansionCase::D => {
                run_lengths(&self.dyadic, 2 * j + 3)[1..]
                    .iter()
                    .sum::<usize>()
                    - 1
            }
        })
    }

    /// Common prefix of all sequences at index `j`; its length is `M + N(j)`.
    pub fn prefix_for(&self, j: usize) -> Result<FiniteWord> {
        Self::check_j(j)?;
        let mut word = Vec::new();
        match self.case {
            ExpansionCase::A => {
                word.extend_from_slice(self.dyadic.preperiod());
                word.extend(std::iter::repeat_n(1, j + 2));
            }
            ExpansionCase::B => word.extend(std::iter::repeat_n(1, j + 2)),
            ExpansionCase::C | ExpansionCase::D => {
                let blocks = match self.case {
                    ExpansionCase::C => 2 * (j + 2),
                    _ => 2 * j + 3,
                };
                let mut digit = self.dyadic.digit(0);
                for r in run_lengths(&self.dyadic, blocks) {
                    word.extend(std::iter::repeat_n(digit, r));
                    digit = 1 - digit;
                }
                word.extend_from_slice(&[0, 1]);
            }
        }
        FiniteWord::new(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn examples() {
        let d = decompose(&int(1)).unwrap();
        assert_eq!((d.case, d.m, d.n(1).unwrap()), (ExpansionCase::B, 0, 3));
        assert_eq!(d.prefix_for(1).unwrap().to_string(), "111");

        let d = decompose(&rat(3, 4)).unwrap();
        assert_eq!((d.case, d.m, d.n(1).unwrap()), (ExpansionCase::A, 2, 3));
        assert_eq!(d.prefix_for(1).unwrap().to_string(), "10111");

        let d = decompose(&rat(2, 3)).unwrap();
        assert_eq!((d.case, d.m, d.n(1).unwrap()), (ExpansionCase::C, 4, 4));
        assert_eq!(d.prefix_for(1).unwrap().to_string(), "10101001");

        let d = decompose(&rat(1, 3)).unwrap();
        assert_eq!(d.case, ExpansionCase::D);
        assert_eq!((d.m, d.n(1).unwrap()), (4, 3));
        assert_eq!(d.prefix_for(1).unwrap().to_string(), "0101001");
    }

    #[test]
    fn prefix_shape() {
        for x in [
            int(1),
            rat(3, 4),
            rat(2, 3),
            rat(1, 3),
            rat(1, 2),
            rat(5, 7),
            rat(3, 11),
            rat(13, 16),
        ] {
            let d = decompose(&x).unwrap();
            let mut last = 2;
            for j in 1..8 {
                let n = d.n(j).unwrap();
                assert!(n >= 3 && n > last, "x={x} j={j}");
                last = n;
                let p = d.prefix_for(j).unwrap();
                assert_eq!(p.len(), d.m + n, "x={x} j={j}");
                assert_eq!(p.last(), 1);
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(decompose(&int(0)).is_err());
        assert!(decompose(&rat(3, 2)).is_err());
        assert!(decompose(&int(1)).unwrap().n(0).is_err());
    }
}
