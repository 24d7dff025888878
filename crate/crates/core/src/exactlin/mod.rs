//! Exact rational linear algebra.

mod matrix;
pub mod poly;
mod subspace;
mod vector;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use matrix::Matrix;
pub use subspace::{kernel_basis, rank, solve, Subspace};
pub use vector::SparseVector;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Scalar = num_rational::BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// `m^n = 0` where `n` is the side length.
pub fn is_nilpotent(m: &Matrix) -> bool {
    assert!(m.is_square(), "nilpotency needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return true;
    }
    let mut p = m.clone();
    for _ in 1..n {
        if p.is_zero() {
            return true;
        }
        p = p.mul(m);
    }
    p.is_zero()
}

/// Spans the Lie algebra generated by `ms` under the commutator.
pub fn lie_closure(ms: &[Matrix]) -> Vec<Matrix> {
    let Some(first) = ms.first() else {
        return Vec::new();
    };
    let (r, c) = (first.rows(), first.cols());
    let cap = r * c;
    let mut span = Subspace::zero(cap);
    let mut elems: Vec<Matrix> = Vec::new();
    for m in ms {
        assert_eq!((m.rows(), m.cols()), (r, c), "family of mixed sizes");
        if span.insert(m.flatten()) {
            elems.push(m.clone());
        }
    }
    let mut next = 0;
    while next < elems.len() {
        let a = elems[next].clone();
        for j in 0..next {
            let comm = a.commutator(&elems[j]);
            if span.insert(comm.flatten()) {
                elems.push(comm);
                assert!(elems.len() <= cap, "Lie closure exceeded the side² cap");
            }
        }
        next += 1;
    }
    elems
}

/// Whether the matrix Lie algebra generated by `ms` is solvable.
pub fn is_solvable_family(ms: &[Matrix]) -> bool {
    let mut term = lie_closure(ms);
    if term.is_empty() {
        return true;
    }
    let cap = term[0].rows() * term[0].cols();
    loop {
        let mut span = Subspace::zero(cap);
        let mut next = Vec::new();
        for (i, a) in term.iter().enumerate() {
            for b in &term[i + 1..] {
                let comm = a.commutator(b);
                if span.insert(comm.flatten()) {
                    next.push(comm);
                }
            }
        }
        if next.is_empty() {
            return true;
        }
        if next.len() == term.len() {
            return false;
        }
        term = next;
    }
}

/// Coefficients `[c_0, …, c_n]` of `det(λI − m)` with `c_n = 1`, by Faddeev–LeVerrier.
pub fn char_poly(m: &Matrix) -> Vec<Scalar> {
    assert!(m.is_square());
    let n = m.rows();
    let mut coeffs = alloc::vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        for i in 0..n {
            next.add_to(i, i, &coeffs[n - k + 1]);
        }
        coeffs[n - k] = -(m.mul(&next).trace()) / int(k as i64);
        mk = next;
    }
    coeffs
}

pub fn exp_nilpotent(m: &Matrix) -> Option<Matrix> {
    if !is_nilpotent(m) {
        return None;
    }
    let n = m.rows();
    let mut acc = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=n {
        term = term.mul(m).scaled(&ratio(1, k as i64));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    Some(acc)
}
