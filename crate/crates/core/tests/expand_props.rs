use num_traits::{One, Zero};
use proptest::prelude::*;
use univoque::expand::{
    count_expansions_bruteforce, dyadic_expansion, eval_enclosure, eval_series, expansion_digits,
    is_unique_expansion, ExpansionMode, UniquenessVerdict,
};
use univoque::rational::{int, pow, rat};
use univoque::{BaseEnclosure, EventuallyPeriodicWord, Rational};

fn digits(max: u8, min: usize, len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=max, min..=len)
}

fn binary_seq() -> impl Strategy<Value = EventuallyPeriodicWord> {
    (digits(1, 0, 5), digits(1, 1, 5)).prop_map(|(p, c)| EventuallyPeriodicWord::new(p, c).unwrap())
}

/// A rational in `(lo, 2]` with denominator below 200.
fn base_above(lo: Rational) -> impl Strategy<Value = Rational> {
    (1i64..200, 0.0f64..1.0).prop_map(move |(den, t)| {
        let span = int(2) - &lo;
        let mut n = ((&lo + span * rat((t * 1e6) as i64, 1_000_000)) * int(den)).floor();
        if n <= &lo * int(den) {
            n += Rational::one();
        }
        let q = n / int(den);
        if q > int(2) {
            int(2)
        } else {
            q
        }
    })
}

fn finite_value(d: &[u8], q: &Rational) -> Rational {
    d.iter()
        .rev()
        .fold(Rational::zero(), |acc, &x| (acc + int(x as i64)) / q)
}

proptest! {
    #[test]
    fn series_matches_bracketed_partial_sum(
        pre in digits(2, 0, 4),
        period in digits(2, 1, 4),
        q in base_above(rat(11, 10)),
    ) {
        let d = EventuallyPeriodicWord::new(pre, period).unwrap();
        let k = 10 * (d.preperiod().len() + d.period().len());
        let partial = finite_value(&d.prefix(k), &q);
        let tail = int(d.max_digit() as i64) / (pow(&q, k) * (&q - Rational::one()));
        let v = eval_series(&d, &q).unwrap();
        prop_assert!(partial <= v && v <= partial + tail);
    }

    #[test]
    fn series_decreases_in_base(d in binary_seq(), q1 in base_above(rat(21, 20)), q2 in base_above(rat(21, 20))) {
        prop_assume!(!d.is_zero() && q1 != q2);
        let (lo, hi) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
        prop_assert!(eval_series(&d, &lo).unwrap() > eval_series(&d, &hi).unwrap());
    }

    #[test]
    fn enclosure_contains_sampled_tails(
        prefix in digits(1, 1, 8),
        tail in binary_seq(),
        a in base_above(rat(3, 2)),
        b in base_above(rat(3, 2)),
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let enc = BaseEnclosure::new(lo.clone(), hi.clone()).unwrap();
        let range = eval_enclosure(&prefix, 1, &enc);
        let full = tail.prepend(&prefix);
        for q in [&lo, &hi, &((&lo + &hi) / int(2))] {
            prop_assert!(range.contains(&eval_series(&full, q).unwrap()));
        }
    }

    #[test]
    fn expansions_bracket_their_value(q in base_above(rat(21, 20)), t in 0i64..=1000, n in 1usize..40) {
        let x = (&q - Rational::one()).recip() * rat(t, 1000);
        for mode in [ExpansionMode::Greedy, ExpansionMode::QuasiGreedy] {
            let w = expansion_digits(&x, &q, n, mode).unwrap();
            let v = finite_value(w.digits(), &q);
            let slack = (pow(&q, n) * (&q - Rational::one())).recip();
            prop_assert!(v <= x && x <= &v + slack);
        }
    }

    #[test]
    fn quasi_greedy_is_monotone_in_base(
        a in base_above(rat(21, 20)),
        b in base_above(rat(21, 20)),
        t in 1i64..=1000,
        n in 1usize..30,
    ) {
        prop_assume!(a != b);
        let (p, q) = if a < b { (a, b) } else { (b, a) };
        let x = (&q - Rational::one()).recip() * rat(t, 1000);
        let lo = expansion_digits(&x, &p, n, ExpansionMode::QuasiGreedy).unwrap();
        let hi = expansion_digits(&x, &q, n, ExpansionMode::QuasiGreedy).unwrap();
        prop_assert!(lo.digits() <= hi.digits());
    }

    #[test]
    fn dyadic_expansion_is_exact(num in 1i64..500, den in 1i64..500) {
        prop_assume!(num <= den);
        let x = rat(num, den);
        let d = dyadic_expansion(&x).unwrap();
        prop_assert_eq!(eval_series(&d, &int(2)).unwrap(), x);
        prop_assert!(d.period() != [0]);
    }

    #[test]
    fn uniqueness_agrees_with_bruteforce(a in binary_seq(), q in base_above(rat(163, 100))) {
        let x = eval_series(&a, &q).unwrap();
        let depth = 30;
        prop_assume!(a.orbit_len() <= depth);
        let verdict = is_unique_expansion(&a, &BaseEnclosure::exact(q.clone()).unwrap(), depth).unwrap();
        let (count, saturated) = count_expansions_bruteforce(&x, &q, depth).unwrap();
        match verdict {
            UniquenessVerdict::Unique => prop_assert!(count == 1 || saturated),
            UniquenessVerdict::NotUnique => prop_assert!(count >= 2),
            UniquenessVerdict::Unknown(_) => {}
        }
    }
}
