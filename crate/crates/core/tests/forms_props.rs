mod common;

use common::{close, pair};
use grassmetric_core::forms::increasing_tuples;
use grassmetric_core::linalg::{determinant_oracle, Matrix};
use grassmetric_core::sample::{random_spd, rng};
use grassmetric_core::{form_inner, generalized_delta, n_inner, wedge_of_tuple, GramNForm, NForm};
use itertools::Itertools;
use proptest::prelude::*;

/// Sparse random form: each basis coefficient present with probability 0.3.
fn sparse_form(m: usize, n: usize) -> impl Strategy<Value = NForm> {
    let count = increasing_tuples(m, n).count();
    prop::collection::vec((0.0..1.0f64, -1.0..1.0f64), count).prop_map(move |draws| {
        let mut f = NForm::zero(m, n).unwrap();
        for (idx, (keep, c)) in increasing_tuples(m, n).zip(draws) {
            if keep < 0.3 {
                f.add_term(idx.as_slice(), c).unwrap();
            }
        }
        f
    })
}

fn three_forms() -> impl Strategy<Value = (NForm, NForm, NForm)> {
    common::shape(5)
        .prop_flat_map(|(m, n)| (sparse_form(m, n), sparse_form(m, n), sparse_form(m, n)))
}

proptest! {
    #[test]
    fn symmetric_and_bilinear((u, v, w) in three_forms(), alpha in -3.0..3.0f64, seed in any::<u64>()) {
        let g = GramNForm::new(random_spd(&mut rng(seed, 0), u.dim())).unwrap();
        let uv = form_inner(&g, &u, &v).unwrap();
        prop_assert!(close(uv, form_inner(&g, &v, &u).unwrap(), 1e-12));
        let combo = u.scaled(alpha).add(&v).unwrap();
        let lhs = form_inner(&g, &combo, &w).unwrap();
        let rhs = alpha * form_inner(&g, &u, &w).unwrap() + form_inner(&g, &v, &w).unwrap();
        prop_assert!(close(lhs, rhs, 1e-9));
    }

    #[test]
    fn standard_form_inner_is_sum_of_squares((u, _, _) in three_forms()) {
        let g = GramNForm::standard(u.dim());
        let uu = form_inner(&g, &u, &u).unwrap();
        let squares: f64 = u.iter().map(|(_, c)| c * c).sum();
        prop_assert!(uu >= -1e-12);
        prop_assert!(close(uu, squares, 1e-12));
        prop_assert_eq!(uu.abs() < 1e-18, u.is_zero());
    }

    #[test]
    fn spd_form_inner_is_positive((u, _, _) in three_forms(), seed in any::<u64>()) {
        let g = GramNForm::new(random_spd(&mut rng(seed, 0), u.dim())).unwrap();
        let uu = form_inner(&g, &u, &u).unwrap();
        prop_assert!(uu >= -1e-12);
        if !u.is_zero() {
            prop_assert!(uu > 0.0);
        }
    }

    #[test]
    fn wedges_reproduce_n_inner((a, b) in pair(5), seed in any::<u64>()) {
        let g = GramNForm::new(random_spd(&mut rng(seed, 0), a.dim())).unwrap();
        let wa = wedge_of_tuple(&a).unwrap();
        let wb = wedge_of_tuple(&b).unwrap();
        prop_assert!(close(form_inner(&g, &wa, &wb).unwrap(), n_inner(&g, &a, &b).unwrap(), 1e-9));
    }
}

fn incidence_det(i: &[usize], j: &[usize]) -> f64 {
    let n = i.len();
    let entries = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| if i[a] == j[b] { 1.0 } else { 0.0 })
        .collect();
    determinant_oracle(&Matrix::new(n, n, entries).unwrap()).unwrap()
}

#[test]
fn delta_matches_incidence_determinant() {
    for m in 1..=5 {
        for n in 1..=3.min(m) {
            let tuples: Vec<Vec<usize>> = (0..m).permutations(n).collect();
            for i in &tuples {
                for j in &tuples {
                    assert_eq!(
                        generalized_delta(i, j) as f64,
                        incidence_det(i, j),
                        "{i:?} {j:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn delta_vanishes_on_repeated_indices() {
    assert_eq!(generalized_delta(&[0, 0], &[0, 1]), 0);
    assert_eq!(generalized_delta(&[1, 2], &[2, 2]), 0);
}
