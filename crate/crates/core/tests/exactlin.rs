mod common;

use common::oracle::{self, Dense};
use num_traits::{One, Zero};
use prolie_core::exactlin::{
    char_poly, exp_nilpotent, int, is_nilpotent, kernel_basis, lie_closure, rank, solve, Matrix, Scalar, SparseVector,
    Subspace,
};
use proptest::prelude::*;

fn small_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], c), r)
    })
}

fn to_matrix(rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>())
}

fn dense(rows: &[Vec<i64>]) -> Dense {
    rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

fn strictly_upper(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |raw| {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, int(raw[i * n + j]));
            }
        }
        m
    })
}

proptest! {
    #[test]
    fn kernel_matches_dense_oracle(rows in small_matrix(7)) {
        let m = to_matrix(&rows);
        let k = kernel_basis(&m);
        let cols = m.cols();
        prop_assert_eq!(k.len(), oracle::nullspace(&dense(&rows), cols).len());
        prop_assert_eq!(rank(&m) + k.len(), cols);
        prop_assert_eq!(rank(&m), oracle::rank(&dense(&rows)));
        for v in &k {
            prop_assert!(m.apply(v).is_zero());
        }
        let span = Subspace::span(cols, &k);
        prop_assert_eq!(span.dim(), k.len());
    }

    #[test]
    fn solve_finds_a_preimage(rows in small_matrix(6), x in prop::collection::vec(-4i64..=4, 6)) {
        let m = to_matrix(&rows);
        let x = SparseVector::from_pairs((0..m.cols()).map(|i| (i, int(x[i]))));
        let b = m.apply(&x);
        let y = solve(&m, &b).expect("consistent by construction");
        prop_assert_eq!(m.apply(&y), b);
    }

    #[test]
    fn dimension_formula_for_sum_and_intersection(a in small_matrix(5), b in small_matrix(5)) {
        let n = 5;
        let pad = |rows: &[Vec<i64>]| -> Vec<SparseVector> {
            rows.iter().map(|r| SparseVector::from_pairs(r.iter().enumerate().map(|(i, &x)| (i, int(x))))).collect()
        };
        let (va, vb) = (pad(&a), pad(&b));
        let sa = Subspace::span(n, &va);
        let sb = Subspace::span(n, &vb);
        let sum = sa.sum(&sb);
        let cap = sa.intersection(&sb);
        prop_assert_eq!(sum.dim() + cap.dim(), sa.dim() + sb.dim());
        prop_assert!(sa.contains_subspace(&cap) && sb.contains_subspace(&cap));
        prop_assert!(sum.contains_subspace(&sa) && sum.contains_subspace(&sb));
    }

    #[test]
    fn nilpotency_agrees_with_characteristic_polynomial(rows in small_matrix(5)) {
        let n = rows.len().min(rows[0].len());
        let sq: Vec<Vec<i64>> = rows.iter().take(n).map(|r| r[..n].to_vec()).collect();
        let m = to_matrix(&sq);
        let cp = char_poly(&m);
        let monomial = cp[..n].iter().all(Zero::is_zero) && cp[n].is_one();
        prop_assert_eq!(is_nilpotent(&m), monomial);
    }

    #[test]
    fn exp_of_nilpotent_is_invertible_and_multiplicative(a in strictly_upper(5)) {
        let e = exp_nilpotent(&a).unwrap();
        let inv = exp_nilpotent(&a.scaled(&int(-1))).unwrap();
        prop_assert_eq!(e.mul(&inv), Matrix::identity(5));
        let double = exp_nilpotent(&a.scaled(&int(2))).unwrap();
        prop_assert_eq!(e.mul(&e), double);
    }

    #[test]
    fn lie_closure_is_closed(a in strictly_upper(4), b in strictly_upper(4)) {
        let span = lie_closure(&[a, b]);
        let sub = Subspace::span(16, span.iter().map(|m| m.flatten()).collect::<Vec<_>>().iter());
        prop_assert_eq!(sub.dim(), span.len());
        for x in &span {
            for y in &span {
                prop_assert!(sub.contains(&x.commutator(y).flatten()));
            }
        }
    }
}

#[test]
fn char_poly_of_companion_matrix() {
    // x^3 - 2x^2 + 3x - 5
    let m = Matrix::from_i64_rows(&[&[0, 0, 5], &[1, 0, -3], &[0, 1, 2]]);
    assert_eq!(char_poly(&m), vec![int(-5), int(3), int(-2), int(1)]);
}

#[test]
fn exp_refuses_non_nilpotent() {
    assert!(exp_nilpotent(&Matrix::identity(2)).is_none());
    let d = Matrix::diagonal(&[Scalar::one(), Scalar::zero()]);
    assert!(!is_nilpotent(&d));
}
