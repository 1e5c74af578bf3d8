use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dyadic_tol, ln1p_enclosure, Interval, Rational};
use crate::seq::{EventuallyPeriodicWord, FiniteWord};
use crate::solve::{solve_base, univoque_bracket, BaseEnclosure};

use super::decompose::decompose;
use super::words::{
    gap_status_tail, symbolic_interval_tail, GapStatus, SymbolicInterval, TailRule,
};

/// Real interval whose endpoints are known through enclosures.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RealInterval {
    pub left: Interval,
    pub right: Interval,
}

impl RealInterval {
    pub fn exact(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(format!("interval [{lo}, {hi}] is reversed")));
        }
        Ok(RealInterval {
            left: Interval::point(lo),
            right: Interval::point(hi),
        })
    }

    /// Enclosure of `right - left`, clamped at zero.
    pub fn length(&self) -> Interval {
        let mut d = self.right.sub(&self.left);
        if d.lo.is_negative() {
            d.lo = Rational::zero();
        }
        if d.hi.is_negative() {
            d.hi = Rational::zero();
        }
        d
    }

    /// Enclosure of `ln(right) - ln(left)` for positive endpoints.
    pub fn log_length(&self) -> Result<Interval> {
        let ratio = self.right.div(&self.left)?;
        let one = Rational::from_integer(1.into());
        let mut u = Interval {
            lo: &ratio.lo - &one,
            hi: &ratio.hi - &one,
        };
        if u.lo.is_negative() {
            u.lo = Rational::zero();
        }
        if u.hi.is_negative() {
            u.hi = Rational::zero();
        }
        ln1p_enclosure(&u)
    }

    /// Smallest interval certainly containing the true interval.
    pub fn outer(&self) -> Interval {
        Interval {
            lo: self.left.lo.clone(),
            hi: self.right.hi.clone(),
        }
    }

    /// Largest interval certainly contained in the true interval.
    pub fn inner(&self) -> Option<Interval> {
        (self.left.hi <= self.right.lo).then(|| Interval {
            lo: self.left.hi.clone(),
            hi: self.right.lo.clone(),
        })
    }

    /// Whether the interval is certainly non-empty with positive length.
    pub fn is_certain(&self) -> bool {
        self.left.hi < self.right.lo
    }

    pub fn scale(&self, lambda: &Rational) -> RealInterval {
        let (a, b) = (self.left.scale(lambda), self.right.scale(lambda));
        if lambda.is_negative() {
            RealInterval { left: b, right: a }
        } else {
            RealInterval { left: a, right: b }
        }
    }
}

/// Whether the coding is order-preserving (`ω0` below `ω1`) or reversing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelEntry {
    /// Digits after the shared level prefix.
    pub tail: Vec<u8>,
    pub symbolic: Option<SymbolicInterval>,
    pub interval: RealInterval,
    /// The open gap between the two children, when there is one.
    pub gap: Option<RealInterval>,
}

/// A finite-depth snapshot of a Cantor construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorLevel {
    pub x: Option<Rational>,
    pub j: usize,
    /// Offset `M`.
    pub m: usize,
    /// Forbidden run length `N`.
    pub n: usize,
    /// Maximum word length.
    pub depth: usize,
    pub prefix: Vec<u8>,
    pub orientation: Orientation,
    entries: Vec<LevelEntry>,
    index: HashMap<Vec<u8>, usize>,
}

/// A gap with its two adjacent children, in increasing real order.
#[derive(Debug, Clone, Copy)]
pub struct GapView<'a> {
    pub parent: &'a LevelEntry,
    pub gap: &'a RealInterval,
    pub lower: &'a LevelEntry,
    pub upper: &'a LevelEntry,
}

pub struct LevelParts {
    pub x: Option<Rational>,
    pub j: usize,
    pub m: usize,
    pub n: usize,
    pub depth: usize,
    pub prefix: Vec<u8>,
    pub orientation: Orientation,
    pub entries: Vec<LevelEntry>,
}

impl CantorLevel {
    /// Assemble a level from explicit entries; every gap needs both children.
    pub fn from_parts(parts: LevelParts) -> Result<Self> {
        let index: HashMap<Vec<u8>, usize> = parts
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.tail.clone(), i))
            .collect();
        if index.len() != parts.entries.len() {
            return Err(Error::domain("duplicate words in level"));
        }
        for e in &parts.entries {
            if e.gap.is_some() {
                for d in [0u8, 1] {
                    let mut c = e.tail.clone();
                    c.push(d);
                    if !index.contains_key(&c) {
                        return Err(Error::domain("gap without both children"));
                    }
                }
            }
        }
        Ok(CantorLevel {
            x: parts.x,
            j: parts.j,
            m: parts.m,
            n: parts.n,
            depth: parts.depth,
            prefix: parts.prefix,
            orientation: parts.orientation,
            entries: parts.entries,
            index,
        })
    }

    pub fn entries(&self) -> &[LevelEntry] {
        &self.entries
    }

    pub fn entry(&self, tail: &[u8]) -> Option<&LevelEntry> {
        self.index.get(tail).map(|&i| &self.entries[i])
    }

    pub fn word(&self, entry: &LevelEntry) -> FiniteWord {
        let mut v = self.prefix.clone();
        v.extend_from_slice(&entry.tail);
        FiniteWord::new(v).expect("level words are non-empty")
    }

    pub fn word_len(&self, entry: &LevelEntry) -> usize {
        self.prefix.len() + entry.tail.len()
    }

    pub fn root(&self) -> Option<&LevelEntry> {
        self.entries.iter().min_by_key(|e| e.tail.len())
    }

    /// Entries at the maximum depth, in increasing real order.
    pub fn leaves(&self) -> Vec<&LevelEntry> {
        let mut v: Vec<&LevelEntry> = self
            .entries
            .iter()
            .filter(|e| self.word_len(e) == self.depth)
            .collect();
        v.sort_by(|a, b| a.interval.left.lo.cmp(&b.interval.left.lo));
        v
    }

    pub fn children(&self, entry: &LevelEntry) -> Vec<&LevelEntry> {
        [0u8, 1]
            .iter()
            .filter_map(|&d| {
                let mut c = entry.tail.clone();
                c.push(d);
                self.entry(&c)
            })
            .collect()
    }

    pub fn gaps(&self) -> Vec<GapView<'_>> {
        self.entries
            .iter()
            .filter_map(|e| {
                let gap = e.gap.as_ref()?;
                let child = |d: u8| {
                    let mut c = e.tail.clone();
                    c.push(d);
                    self.entry(&c).expect("checked at construction")
                };
                let (c0, c1) = (child(0), child(1));
                let (lower, upper) = match self.orientation {
                    Orientation::Increasing => (c0, c1),
                    Orientation::Decreasing => (c1, c0),
                };
                Some(GapView {
                    parent: e,
                    gap,
                    lower,
                    upper,
                })
            })
            .collect()
    }

    /// The same level with every real endpoint multiplied by `lambda`.
    pub fn scaled(&self, lambda: &Rational) -> Result<CantorLevel> {
        if lambda.is_zero() {
            return Err(Error::domain("scaling factor must be non-zero"));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| LevelEntry {
                tail: e.tail.clone(),
                symbolic: e.symbolic.clone(),
                interval: e.interval.scale(lambda),
                gap: e.gap.as_ref().map(|g| g.scale(lambda)),
            })
            .collect();
        let orientation = match (self.orientation, lambda.is_negative()) {
            (o, false) => o,
            (Orientation::Increasing, true) => Orientation::Decreasing,
            (Orientation::Decreasing, true) => Orientation::Increasing,
        };
        Ok(CantorLevel {
            entries,
            orientation,
            index: self.index.clone(),
            x: self.x.clone(),
            prefix: self.prefix.clone(),
            ..*self
        })
    }
}

pub fn scale_level(level: &CantorLevel, lambda: &Rational) -> Result<CantorLevel> {
    level.scaled(lambda)
}

/// Default endpoint tolerance `2^-64`.
pub fn default_level_tol() -> Rational {
    dyadic_tol(64)
}

const REFINE_ROUNDS: usize = 4;
const REFINE_BITS: u32 = 16;

/// Symbolic structure of a level before its endpoints are realized.
pub(crate) struct SymbolicLevel {
    pub prefix: Vec<u8>,
    pub n: usize,
    pub tails: Vec<Vec<u8>>,
    pub symbolic: Vec<SymbolicInterval>,
    pub has_gap: Vec<bool>,
    pub parent: Vec<Option<usize>>,
}

impl SymbolicLevel {
    /// Tails from `rule` up to `max_tail`; `root` supplies the interval of the
    /// shortest tail when it is not of the generic run form.
    pub fn build(
        prefix: Vec<u8>,
        rule: TailRule,
        max_tail: usize,
        root: Option<SymbolicInterval>,
    ) -> Result<Self> {
        let layers = rule.enumerate(0, max_tail);
        let mut tails = Vec::new();
        let mut symbolic = Vec::new();
        let mut has_gap = Vec::new();
        let mut parent = Vec::new();
        let mut pos: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut root = root;
        for layer in layers {
            for t in layer {
                let (s, gap) = if tails.is_empty() && root.is_some() {
                    (root.take().expect("checked"), true)
                } else {
                    let s = symbolic_interval_tail(&prefix, &t, rule.run_bound)?;
                    let g = gap_status_tail(&t, rule.run_bound)? == GapStatus::HasGap;
                    (s, g)
                };
                let p = if t.is_empty() {
                    None
                } else {
                    pos.get(&t[..t.len() - 1]).copied()
                };
                pos.insert(t.clone(), tails.len());
                tails.push(t);
                symbolic.push(s);
                has_gap.push(gap);
                parent.push(p);
            }
        }
        // only words whose children are inside the level carry a realized gap
        let max_len = tails.iter().map(Vec::len).max().unwrap_or(0);
        for (i, t) in tails.iter().enumerate() {
            if t.len() == max_len {
                has_gap[i] = false;
            }
        }
        Ok(SymbolicLevel {
            prefix,
            n: rule.run_bound,
            tails,
            symbolic,
            has_gap,
            parent,
        })
    }
}

/// Sequence-to-real map used to realize symbolic endpoints.
pub(crate) trait EndpointMap {
    fn orientation(&self) -> Orientation;
    /// Enclosure of the real point coded by `seq`, searched inside `bracket`.
    fn realize(
        &self,
        seq: &EventuallyPeriodicWord,
        bracket: &Interval,
        tol: &Rational,
    ) -> Result<Interval>;
}

struct BaseSolver<'a> {
    x: &'a Rational,
}

impl EndpointMap for BaseSolver<'_> {
    fn orientation(&self) -> Orientation {
        Orientation::Increasing
    }

    fn realize(
        &self,
        seq: &EventuallyPeriodicWord,
        bracket: &Interval,
        tol: &Rational,
    ) -> Result<Interval> {
        let b = BaseEnclosure::new(bracket.lo.clone(), bracket.hi.clone())?;
        Ok(solve_base(seq, self.x, &b, tol)?.into_interval())
    }
}

pub(crate) struct LevelMeta {
    pub x: Option<Rational>,
    pub j: usize,
    pub m: usize,
    pub depth: usize,
}

/// Realize all intervals and gaps of a symbolic level through `map`.
pub(crate) fn realize_symbolic<E: EndpointMap>(
    sym: SymbolicLevel,
    map: &E,
    meta: LevelMeta,
    root_bracket: &Interval,
    tol: &Rational,
) -> Result<CantorLevel> {
    let orientation = map.orientation();
    let mut cache: HashMap<EventuallyPeriodicWord, Interval> = HashMap::new();
    let count = sym.tails.len();
    let mut hulls: Vec<Interval> = Vec::with_capacity(count);
    for i in 0..count {
        let bracket = match sym.parent[i] {
            Some(p) => hulls[p].clone(),
            None => root_bracket.clone(),
        };
        let s = &sym.symbolic[i];
        let mut get = |seq: &EventuallyPeriodicWord| -> Result<Interval> {
            if let Some(v) = cache.get(seq) {
                return Ok(v.clone());
            }
            let v = map.realize(seq, &bracket, tol)?;
            cache.insert(seq.clone(), v.clone());
            Ok(v)
        };
        let a = get(&s.left)?;
        let b = get(&s.right)?;
        let (lo, hi) = match orientation {
            Orientation::Increasing => (a, b),
            Orientation::Decreasing => (b, a),
        };
        hulls.push(Interval {
            lo: lo.lo.clone(),
            hi: hi.hi.clone(),
        });
    }

    let pos: HashMap<&[u8], usize> = sym
        .tails
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let child = |i: usize, d: u8| -> usize {
        let mut c = sym.tails[i].clone();
        c.push(d);
        pos[c.as_slice()]
    };
    // the gap of ω is bounded by the facing endpoints of its children
    let gap_ends = |i: usize| -> (EventuallyPeriodicWord, EventuallyPeriodicWord) {
        let (c0, c1) = (child(i, 0), child(i, 1));
        match orientation {
            Orientation::Increasing => (
                sym.symbolic[c0].right.clone(),
                sym.symbolic[c1].left.clone(),
            ),
            Orientation::Decreasing => (
                sym.symbolic[c1].left.clone(),
                sym.symbolic[c0].right.clone(),
            ),
        }
    };

    // disjointness: each realized gap and each pair of adjacent leaves must
    // separate with certainty; refine the facing endpoints until they do
    let mut pairs: Vec<(EventuallyPeriodicWord, EventuallyPeriodicWord)> = (0..count)
        .filter(|&i| sym.has_gap[i])
        .map(gap_ends)
        .collect();
    let max_len = sym.tails.iter().map(Vec::len).max().unwrap_or(0);
    let mut leaves: Vec<usize> = (0..count)
        .filter(|&i| sym.tails[i].len() == max_len)
        .collect();
    leaves.sort_by(|&a, &b| {
        let ka = &cache[&sym.symbolic[a].left];
        let kb = &cache[&sym.symbolic[b].left];
        ka.lo.cmp(&kb.lo)
    });
    for w in leaves.windows(2) {
        let (a, b) = (&sym.symbolic[w[0]], &sym.symbolic[w[1]]);
        let (ua, lb) = match orientation {
            Orientation::Increasing => (a.right.clone(), b.left.clone()),
            Orientation::Decreasing => (a.left.clone(), b.right.clone()),
        };
        pairs.push((ua, lb));
    }
    let mut round_tol = tol.clone();
    for round in 0..=REFINE_ROUNDS {
        let open: Vec<&(EventuallyPeriodicWord, EventuallyPeriodicWord)> = pairs
            .iter()
            .filter(|(l, r)| cache[l].hi >= cache[r].lo)
            .collect();
        if open.is_empty() {
            break;
        }
        if round == REFINE_ROUNDS {
            let (l, r) = open[0];
            return Err(Error::inconclusive(
                format!("endpoints {l} and {r} still overlap after {REFINE_ROUNDS} refinements"),
                Some(cache[l].hull(&cache[r])),
            ));
        }
        round_tol *= dyadic_tol(REFINE_BITS);
        let targets: Vec<EventuallyPeriodicWord> = open
            .iter()
            .flat_map(|(l, r)| [l.clone(), r.clone()])
            .collect();
        for seq in targets {
            let current = cache[&seq].clone();
            if current.width() <= round_tol {
                continue;
            }
            let v = map.realize(&seq, &current, &round_tol)?;
            cache.insert(seq, v);
        }
    }

    let entries = (0..count)
        .map(|i| {
            let s = &sym.symbolic[i];
            let (a, b) = (cache[&s.left].clone(), cache[&s.right].clone());
            let interval = match orientation {
                Orientation::Increasing => RealInterval { left: a, right: b },
                Orientation::Decreasing => RealInterval { left: b, right: a },
            };
            let gap = sym.has_gap[i].then(|| {
                let (l, r) = gap_ends(i);
                RealInterval {
                    left: cache[&l].clone(),
                    right: cache[&r].clone(),
                }
            });
            LevelEntry {
                tail: sym.tails[i].clone(),
                symbolic: Some(s.clone()),
                interval,
                gap,
            }
        })
        .collect();
    CantorLevel::from_parts(LevelParts {
        x: meta.x,
        j: meta.j,
        m: meta.m,
        n: sym.n,
        depth: meta.depth,
        prefix: sym.prefix,
        orientation,
        entries,
    })
}

/// Realize the depth-`depth` level at index `j` for target `x`.
pub fn realize_level(x: &Rational, j: usize, depth: usize, tol: &Rational) -> Result<CantorLevel> {
    if !tol.is_positive() {
        return Err(Error::domain("tolerance must be positive"));
    }
    let dec = decompose(x)?;
    let n = dec.n(j)?;
    let prefix = dec.prefix_for(j)?.into_digits();
    if depth <= prefix.len() {
        return Err(Error::domain(format!(
            "depth {depth} must exceed M + N(j) = {}",
            prefix.len()
        )));
    }
    let rule = TailRule {
        run_bound: n,
        first_digit: Some(0),
    };
    let sym = SymbolicLevel::build(prefix.clone(), rule, depth - prefix.len(), None)?;
    let bracket = univoque_bracket().interval().clone();
    realize_symbolic(
        sym,
        &BaseSolver { x },
        LevelMeta {
            x: Some(x.clone()),
            j,
            m: dec.m,
            depth,
        },
        &bracket,
        tol,
    )
}
