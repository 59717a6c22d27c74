mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qform::reps::{
    rep_equal_up_to, representations_up_to, representations_with_witnesses, vectors_of_value, Missing,
};
use qform::IntForm;

use common::{naive_reps, naive_vectors, poly_value, positive_definite, gram, random_unimodular};

#[test]
fn short_vectors_match_box_for_all_small_ternary_forms() {
    let mut checked = 0;
    let r = -2..=2i64;
    for a in 1..=2 {
        for b in 1..=2 {
            for c in 1..=2 {
                for p12 in r.clone() {
                    for p13 in r.clone() {
                        for p23 in r.clone() {
                            let f = IntForm::ternary([a, b, c, p12, p13, p23]);
                            if !positive_definite(&gram(&f)) {
                                continue;
                            }
                            let got: BTreeSet<u64> = representations_up_to(&f, 50).unwrap().values().collect();
                            assert_eq!(got, naive_reps(&f, 50), "{f}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 300, "{checked}");
}

#[test]
fn vectors_of_value_are_all_solutions() {
    let f = IntForm::ternary([2, 3, 5, -2, 0, 0]);
    for value in [2u64, 3, 7, 12] {
        let mut expected: Vec<Vec<i64>> = naive_vectors(&f, value)
            .into_iter()
            .filter(|(x, v)| *v == value as i128 && x.iter().rev().find(|&&t| t != 0).unwrap() > &0)
            .map(|(x, _)| x)
            .collect();
        expected.sort();
        assert_eq!(vectors_of_value(&f, value).unwrap(), expected, "value {value}");
    }
}

#[test]
fn witnesses_evaluate_correctly_and_are_lexicographically_least() {
    let f = IntForm::ternary([1, 2, 5, 0, 0, -2]);
    let reps = representations_with_witnesses(&f, 60).unwrap();
    let vecs = naive_vectors(&f, 60);
    for v in reps.values() {
        let w = reps.witness(v).unwrap();
        assert_eq!(poly_value(&f, w), v as i128);
        let least = vecs
            .iter()
            .filter(|(x, val)| *val == v as i128 && x.iter().rev().find(|&&t| t != 0).unwrap() > &0)
            .map(|(x, _)| x.clone())
            .min()
            .unwrap();
        assert_eq!(w, least.as_slice());
    }
}

#[test]
fn documented_examples() {
    let cube = IntForm::ternary([1, 1, 1, 0, 0, 0]);
    let vals: Vec<u64> = representations_up_to(&cube, 10).unwrap().values().collect();
    assert_eq!(vals, vec![1, 2, 3, 4, 5, 6, 8, 9, 10]);
    let c = rep_equal_up_to(&cube, &IntForm::ternary([1, 1, 2, 0, 0, 0]), 10).unwrap();
    assert_eq!(c.discrepancy, Some((7, Missing::First)));
    let hex5 = IntForm::binary(1, 1, -1).direct_sum(&IntForm::from_i64(1, &[5]).unwrap()).unwrap();
    let sq5 = IntForm::binary(1, 3, 0).direct_sum(&IntForm::from_i64(1, &[5]).unwrap()).unwrap();
    assert!(rep_equal_up_to(&hex5, &sq5, 10_000).unwrap().equal());
    assert!(rep_equal_up_to(&cube, &cube, 500).unwrap().equal());
}

#[test]
fn enumeration_rejects_non_positive_forms() {
    assert!(representations_up_to(&IntForm::binary(1, -1, 0), 10).is_err());
    assert!(representations_up_to(&IntForm::binary(1, 1, 2), 10).is_err());
}

fn small_form(n: usize) -> impl Strategy<Value = IntForm> {
    let k = n * (n + 1) / 2;
    prop::collection::vec(-3i64..=3, k)
        .prop_map(move |mut c| {
            for v in c.iter_mut().take(n) {
                *v = v.abs() + 1;
            }
            IntForm::from_i64(n, &c).unwrap()
        })
        .prop_filter("positive-definite", |f| positive_definite(&gram(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reps_invariant_under_unimodular_change(f in small_form(3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_unimodular(&mut rng, 3, 6);
        let g = f.transform(&w).unwrap();
        let a: Vec<u64> = representations_up_to(&f, 120).unwrap().values().collect();
        let b: Vec<u64> = representations_up_to(&g, 120).unwrap().values().collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn direct_sum_reps_are_sums(f in small_form(2), g in small_form(1), bound in 10u64..120) {
        let fg = f.direct_sum(&g).unwrap();
        let got: BTreeSet<u64> = representations_up_to(&fg, bound).unwrap().values().collect();
        let with_zero = |h: &IntForm| -> BTreeSet<u64> {
            let mut s: BTreeSet<u64> = representations_up_to(h, bound).unwrap().values().collect();
            s.insert(0);
            s
        };
        let (rf, rg) = (with_zero(&f), with_zero(&g));
        let mut expected = BTreeSet::new();
        for a in &rf {
            for b in &rg {
                if a + b > 0 && a + b <= bound {
                    expected.insert(a + b);
                }
            }
        }
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn quaternary_matches_box(f in small_form(4)) {
        let got: BTreeSet<u64> = representations_up_to(&f, 30).unwrap().values().collect();
        prop_assert_eq!(got, naive_reps(&f, 30));
    }
}
