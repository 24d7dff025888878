//! Dense brute-force reference implementations. Deliberately naive and
//! independent of the sparse engine: plain `Vec<Vec<Scalar>>` and
//! Gauss-Jordan elimination.

#![allow(dead_code, clippy::needless_range_loop)]

use num_traits::{One, Zero};
use prolie_core::exactlin::{int, Matrix, Scalar, SparseVector};
use prolie_core::filtration::FiniteQuotient;

pub type Dense = Vec<Vec<Scalar>>;

pub fn zeros(r: usize, c: usize) -> Dense {
    vec![vec![Scalar::zero(); c]; r]
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Dense) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Scalar::one() / &m[row][col];
        for x in m[row].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = m[row].clone();
        let support: Vec<usize> = (0..cols).filter(|&c| !pivot_row[c].is_zero()).collect();
        for (r, target) in m.iter_mut().enumerate() {
            if r == row || target[col].is_zero() {
                continue;
            }
            let f = target[col].clone();
            for &c in &support {
                target[c] = &target[c] - &pivot_row[c] * &f;
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(m: &Dense) -> usize {
    rref(&mut m.clone()).len()
}

/// Basis of `{x : m x = 0}` for an `r × cols` matrix.
pub fn nullspace(m: &Dense, cols: usize) -> Vec<Vec<Scalar>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn mat_vec(m: &Dense, v: &[Scalar]) -> Vec<Scalar> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
        .collect()
}

pub fn from_matrix(m: &Matrix) -> Dense {
    m.to_dense()
}

pub fn from_sparse(v: &SparseVector, n: usize) -> Vec<Scalar> {
    (0..n).map(|i| v.coeff(&i)).collect()
}

/// Structure constants `c[i][j][k]` of `[b_i, b_j] = Σ c[i][j][k] b_k`.
#[derive(Clone, Debug)]
pub struct Table {
    pub n: usize,
    pub c: Vec<Vec<Vec<Scalar>>>,
}

impl Table {
    pub fn of(q: &FiniteQuotient) -> Self {
        let n = q.dim();
        let c = (0..n)
            .map(|i| (0..n).map(|j| from_sparse(q.bracket_basis(i, j), n)).collect())
            .collect();
        Table { n, c }
    }

    pub fn to_quotient(&self, name: &str) -> FiniteQuotient {
        let labels: Vec<String> = (1..=self.n).map(|i| format!("b{i}")).collect();
        let mut entries = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let v = SparseVector::from_pairs(
                    self.c[i][j].iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())),
                );
                if !v.is_zero() {
                    entries.push(((i, j), v));
                }
            }
        }
        FiniteQuotient::from_table(name, &labels, &entries)
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.n];
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for (o, c) in out.iter_mut().zip(&self.c[i][j]) {
                    if !c.is_zero() {
                        *o += &f * c;
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.n];
        v[i] = Scalar::one();
        v
    }

    pub fn jacobi(&self) -> bool {
        let n = self.n;
        let c = &self.c;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for t in 0..n {
                        let mut s = Scalar::zero();
                        for m in 0..n {
                            s += &c[j][k][m] * &c[i][m][t] + &c[k][i][m] * &c[j][m][t] + &c[i][j][m] * &c[k][m][t];
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Leibniz system over unknowns `d[k][i]` (coefficient of `b_k` in `d(b_i)`), pairs `i < j`.
    pub fn leibniz(&self) -> Dense {
        let n = self.n;
        let var = |k: usize, i: usize| k * n + i;
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for m in 0..n {
                    let mut row = vec![Scalar::zero(); n * n];
                    for p in 0..n {
                        row[var(m, p)] = row[var(m, p)].clone() + self.c[i][j][p].clone();
                    }
                    for k in 0..n {
                        row[var(k, i)] = row[var(k, i)].clone() - self.c[k][j][m].clone();
                        row[var(k, j)] = row[var(k, j)].clone() - self.c[i][k][m].clone();
                    }
                    rows.push(row);
                }
            }
        }
        rows
    }

    pub fn derivation_dim(&self) -> usize {
        self.n * self.n - rank(&self.leibniz())
    }

    /// `d[b_i, b_j] = [d b_i, b_j] + [b_i, d b_j]` coefficient by coefficient.
    pub fn is_derivation(&self, d: &Dense) -> bool {
        let (n, c) = (self.n, &self.c);
        for i in 0..n {
            for j in i + 1..n {
                for m in 0..n {
                    let mut s = Scalar::zero();
                    for p in 0..n {
                        if !c[i][j][p].is_zero() {
                            s += &d[m][p] * &c[i][j][p];
                        }
                        if !d[p][i].is_zero() {
                            s -= &d[p][i] * &c[p][j][m];
                        }
                        if !d[p][j].is_zero() {
                            s -= &d[p][j] * &c[i][p][m];
                        }
                    }
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn span_dim(&self, vs: &[Vec<Scalar>]) -> usize {
        if vs.is_empty() {
            0
        } else {
            rank(&vs.to_vec())
        }
    }

    fn reduced(&self, vs: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
        if vs.is_empty() {
            return vs;
        }
        let mut m = vs;
        let r = rref(&mut m).len();
        m.truncate(r);
        m
    }

    fn chain(&self, next: impl Fn(&[Vec<Scalar>]) -> Vec<Vec<Scalar>>) -> Vec<usize> {
        let mut term: Vec<Vec<Scalar>> = (0..self.n).map(|i| self.unit(i)).collect();
        let mut dims = vec![self.n];
        loop {
            let t = self.reduced(next(&term));
            let d = self.span_dim(&t);
            let last = *dims.last().unwrap();
            dims.push(d);
            if d == 0 || d == last {
                return dims;
            }
            term = t;
        }
    }

    pub fn lcs_dims(&self) -> Vec<usize> {
        let all: Vec<Vec<Scalar>> = (0..self.n).map(|i| self.unit(i)).collect();
        self.chain(|t| t.iter().flat_map(|u| all.iter().map(|x| self.bracket(u, x))).collect())
    }

    pub fn derived_dims(&self) -> Vec<usize> {
        self.chain(|t| t.iter().flat_map(|u| t.iter().map(|x| self.bracket(u, x))).collect())
    }

    pub fn center_dim(&self) -> usize {
        let n = self.n;
        let rows: Dense = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| (0..n).map(|i| self.c[i][j][k].clone()).collect())
            .collect();
        n - rank(&rows)
    }
}

/// A solvable matrix Lie algebra: the span generated by a few random upper
/// triangular `k × k` integer matrices, with structure constants read off in
/// the reduced basis. Jacobi holds by construction.
pub fn matrix_algebra(gens: &[Dense], max_dim: usize) -> Option<Table> {
    let k = gens.first()?.len();
    let flat = |m: &Dense| -> Vec<Scalar> { m.iter().flatten().cloned().collect() };
    let unflat = |v: &[Scalar]| -> Dense { v.chunks(k).map(|r| r.to_vec()).collect() };
    let mul = |a: &Dense, b: &Dense| -> Dense {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).fold(Scalar::zero(), |s, t| s + a[i][t].clone() * b[t][j].clone()))
                    .collect()
            })
            .collect()
    };
    let comm = |a: &Dense, b: &Dense| -> Dense {
        let (x, y) = (mul(a, b), mul(b, a));
        (0..k).map(|i| (0..k).map(|j| x[i][j].clone() - y[i][j].clone()).collect()).collect()
    };
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    let add = |basis: &mut Vec<Vec<Scalar>>, v: Vec<Scalar>| -> bool {
        let mut t = basis.clone();
        t.push(v.clone());
        if rank(&t) > basis.len() {
            basis.push(v);
            true
        } else {
            false
        }
    };
    for g in gens {
        add(&mut basis, flat(g));
    }
    let mut i = 0;
    while i < basis.len() {
        for j in 0..i {
            let c = comm(&unflat(&basis[j]), &unflat(&basis[i]));
            add(&mut basis, flat(&c));
            if basis.len() > max_dim {
                return None;
            }
        }
        i += 1;
    }
    let n = basis.len();
    if n == 0 {
        return None;
    }
    // Coordinates by solving against the basis columns.
    let coords = |v: &[Scalar]| -> Vec<Scalar> {
        let kk = v.len();
        let mut aug: Dense = (0..kk)
            .map(|r| {
                let mut row: Vec<Scalar> = basis.iter().map(|b| b[r].clone()).collect();
                row.push(v[r].clone());
                row
            })
            .collect();
        let piv = rref(&mut aug);
        let mut x = vec![Scalar::zero(); n];
        for (r, &p) in piv.iter().enumerate() {
            assert!(p < n, "commutator left the span");
            x[p] = aug[r][n].clone();
        }
        x
    };
    let mut c = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            c[i][j] = coords(&flat(&comm(&unflat(&basis[i]), &unflat(&basis[j]))));
        }
    }
    Some(Table { n, c })
}

/// Upper triangular integer matrix from raw entries in `-2..=2`; `strict` zeroes the diagonal.
pub fn upper(k: usize, raw: &[i64], strict: bool) -> Dense {
    let mut m = zeros(k, k);
    let mut it = raw.iter().cycle();
    for i in 0..k {
        for j in i..k {
            let x = *it.next().unwrap();
            if !(strict && i == j) {
                m[i][j] = int(x);
            }
        }
    }
    m
}
