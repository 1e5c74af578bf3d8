use proptest::prelude::*;
use univoque::components::{check_prop51, component_for_word, kl_constant};
use univoque::rational::{dyadic_tol, parse_rational};
use univoque::seq::check_admissible;
use univoque::FiniteWord;

fn admissible_words() -> Vec<FiniteWord> {
    let mut out = Vec::new();
    for len in 2..=9usize {
        for bits in 0u32..(1 << (len - 1)) {
            let mut d: Vec<u8> = (0..len - 1)
                .rev()
                .map(|i| ((bits >> i) & 1) as u8)
                .collect();
            d.push(0);
            let w = FiniteWord::new(d).unwrap();
            if check_admissible(&w).unwrap() {
                out.push(w);
            }
        }
    }
    out
}

fn admissible() -> impl Strategy<Value = FiniteWord> {
    let words = admissible_words();
    assert!(
        words.len() >= 10,
        "too few admissible words: {}",
        words.len()
    );
    prop::sample::select(words)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn components_sit_above_the_constant(w in admissible()) {
        let rec = component_for_word(&w, &dyadic_tol(40)).unwrap();
        prop_assert!(rec.q_kl.hi() < rec.q_l.lo());
        prop_assert!(rec.q_l.hi() < rec.q_r.lo());
    }

    #[test]
    fn decided_verdicts_survive_refinement(w in admissible(), bits in 14u32..24) {
        let coarse = check_prop51(&w, &dyadic_tol(bits));
        let fine = check_prop51(&w, &dyadic_tol(bits + 12));
        match (coarse, fine) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.sum_gap_ok, b.sum_gap_ok);
                prop_assert_eq!(a.product_gap_ok, b.product_gap_ok);
            }
            (Err(e), _) | (_, Err(e)) => prop_assert!(e.is_inconclusive(), "{}", e),
        }
    }
}

#[test]
fn constant_refines_into_nested_enclosures() {
    let coarse = kl_constant(&parse_rational("1e-2").unwrap()).unwrap();
    let fine = kl_constant(&parse_rational("1e-6").unwrap()).unwrap();
    assert!(fine.is_within(&coarse));
}
