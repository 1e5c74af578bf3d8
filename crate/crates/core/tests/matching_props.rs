use std::collections::HashSet;

use num_traits::One;
use proptest::prelude::*;
use univoque::matching::{
    build_nm, check_eq41, detect_matching, doubling_criterion, matching_run, psi, s_alpha_step,
    AlphaParam, MatchingVerdict,
};
use univoque::rational::{int, rat};
use univoque::{EventuallyPeriodicWord, Rational};

fn alpha() -> impl Strategy<Value = AlphaParam> {
    (1i64..=400, 1i64..=400)
        .prop_filter("alpha in (1, 2]", |(n, d)| d < n && *n <= 2 * d)
        .prop_map(|(n, d)| AlphaParam::new(rat(n, d)).unwrap())
}

fn has_run(digits: &[u8], n: usize) -> bool {
    digits.windows(n).any(|w| w.iter().all(|&d| d == w[0]))
}

/// A member of the sequence space behind `N_m`: `1^m` followed by an
/// eventually periodic tail avoiding `0^m` and `1^m`.
fn nm_member(m: usize) -> impl Strategy<Value = EventuallyPeriodicWord> {
    (
        prop::collection::vec(0u8..=1, 0..=6),
        prop::collection::vec(0u8..=1, 2..=6),
    )
        .prop_map(move |(pre, period)| {
            EventuallyPeriodicWord::new([vec![1; m], pre].concat(), period).unwrap()
        })
        .prop_filter("tail avoids long runs", move |s| {
            !has_run(&s.prefix(80)[m..], m)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn criteria_never_contradict(a in alpha()) {
        let direct = detect_matching(&a, 60);
        let doubling = doubling_criterion(&a, 60).unwrap();
        prop_assert!(!direct.contradicts(&doubling), "{:?} vs {:?}", direct, doubling);
    }

    #[test]
    fn matched_step_is_the_first_agreement(a in alpha()) {
        if let MatchingVerdict::Matched { step } = detect_matching(&a, 60) {
            let (mut x, mut y) = (Rational::one(), Rational::one() - a.value());
            for i in 1..=step {
                prop_assert_ne!(&x, &y);
                x = s_alpha_step(&x, &a).unwrap();
                y = s_alpha_step(&y, &a).unwrap();
                prop_assert_eq!(x == y, i == step);
            }
        }
    }

    #[test]
    fn certified_nonmatching_recheck(a in alpha()) {
        if let MatchingVerdict::NonMatching { preperiod, cycle_len } = doubling_criterion(&a, 60).unwrap() {
            let lo = (a.value() * int(2)).recip();
            let hi = Rational::one() - &lo;
            let mut y = a.value().recip();
            let mut orbit = Vec::new();
            for _ in 0..preperiod + cycle_len + 1 {
                prop_assert!(!(lo < y && y < hi));
                orbit.push(y.clone());
                y = &y * int(2);
                if y >= Rational::one() {
                    y -= Rational::one();
                }
            }
            prop_assert_eq!(&orbit[preperiod], &orbit[preperiod + cycle_len]);
        }
        let run = matching_run(&a, 60);
        if let MatchingVerdict::NonMatching { preperiod, cycle_len } = run.verdict {
            let i = preperiod + cycle_len;
            prop_assert_eq!(&run.orbit_one[preperiod], &run.orbit_one[i]);
            prop_assert_eq!(&run.orbit_other[preperiod], &run.orbit_other[i]);
            let distinct: HashSet<_> = run.orbit_one.iter().zip(&run.orbit_other).collect();
            prop_assert_eq!(distinct.len(), i);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn psi_reverses_order((a, b) in (3usize..=6).prop_flat_map(|m| (nm_member(m), nm_member(m)))) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(psi(&lo).unwrap() > psi(&hi).unwrap());
        let one_half = rat(1, 2);
        for s in [&lo, &hi] {
            let v = psi(s).unwrap();
            prop_assert!(v > Rational::one() && v <= int(2));
            prop_assert!(v.recip() >= one_half);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn nm_levels_are_ordered_members(m in 3usize..=5, extra in 2usize..=6) {
        let lv = build_nm(m, m + extra).unwrap();
        for e in lv.entries() {
            let sym = e.symbolic.as_ref().unwrap();
            for s in [&sym.left, &sym.right] {
                prop_assert!(check_eq41(s, s.orbit_len()).unwrap());
            }
            prop_assert_eq!(&e.interval.left.lo, &e.interval.left.hi);
            prop_assert!(e.interval.left.lo > Rational::one() && e.interval.right.hi <= int(2));
        }
        let leaves = lv.leaves();
        for w in leaves.windows(2) {
            prop_assert!(w[0].interval.right.hi < w[1].interval.left.lo);
        }
    }
}
