//! Multivariate polynomials over the rationals, just enough for symbolic
//! characteristic polynomials of matrix pencils `Σ c_k B_k`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{int, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, k: usize, c: Scalar) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }
}

/// Characteristic polynomial coefficients of `Σ c_k basis[k]` as polynomials in `c`.
///
/// Returns `[p_0, …, p_n]` with `p_n = 1`.
pub fn symbolic_char_poly(basis: &[Matrix]) -> Vec<MPoly> {
    let nvars = basis.len();
    let n = basis.first().map_or(0, Matrix::rows);
    let mut a = vec![vec![MPoly::zero(); n]; n];
    for (k, b) in basis.iter().enumerate() {
        for (i, row) in a.iter_mut().enumerate() {
            for (&j, c) in b.row(i) {
                row[j] = row[j].add(&MPoly::var(nvars, k, c.clone()));
            }
        }
    }
    let matmul = |x: &Vec<Vec<MPoly>>, y: &Vec<Vec<MPoly>>| -> Vec<Vec<MPoly>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(MPoly::zero(), |acc, k| acc.add(&x[i][k].mul(&y[k][j])))
                    })
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![MPoly::zero(); n + 1];
    coeffs[n] = MPoly::constant(nvars, int(1));
    let mut mk = vec![vec![MPoly::zero(); n]; n];
    for k in 1..=n {
        let mut next = matmul(&a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].add(&coeffs[n - k + 1]);
        }
        let am = matmul(&a, &next);
        let tr = (0..n).fold(MPoly::zero(), |acc, i| acc.add(&am[i][i]));
        coeffs[n - k] = tr.scaled(&(-Scalar::from_integer((k as i64).into()).recip()));
        mk = next;
    }
    coeffs
}
