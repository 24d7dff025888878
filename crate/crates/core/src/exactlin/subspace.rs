use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{Matrix, Scalar, SparseVector};

/// A subspace of `Q^n` held as a reduced row echelon basis.
///
/// Pivots are the leading (smallest) keys of the basis vectors, ascending.
/// Every pivot column is zero in all other basis vectors, so the basis is a
/// canonical form: two subspaces are equal iff their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVector>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            rows: (0..ambient).map(SparseVector::unit).collect(),
        }
    }

    pub fn span<'a, I: IntoIterator<Item = &'a SparseVector>>(ambient: usize, vectors: I) -> Self {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn into_basis(self) -> Vec<SparseVector> {
        self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(pivot_of).collect()
    }

    /// Ambient coordinates that are not pivots; their unit vectors span a complement.
    pub fn free_positions(&self) -> Vec<usize> {
        let pivots = self.pivots();
        (0..self.ambient).filter(|c| pivots.binary_search(c).is_err()).collect()
    }

    /// Remainder of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &SparseVector) -> SparseVector {
        let mut v = v.clone();
        for r in &self.rows {
            let p = pivot_of(r);
            if let Some(c) = v.get(&p).cloned() {
                v.axpy(&-c, r);
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, or `None` when `v` is outside.
    pub fn coordinates(&self, v: &SparseVector) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.rows.iter().map(|r| v.coeff(&pivot_of(r))).collect())
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVector) -> bool {
        debug_assert!(v.keys().all(|&k| k < self.ambient));
        let mut v = self.reduce(&v);
        let (p, lead) = match v.leading() {
            None => return false,
            Some((&p, c)) => (p, c.clone()),
        };
        if !lead.is_one() {
            v = v.scaled(&(Scalar::one() / lead));
        }
        for r in self.rows.iter_mut() {
            if let Some(c) = r.get(&p).cloned() {
                r.axpy(&-c, &v);
            }
        }
        let pos = self.rows.partition_point(|r| pivot_of(r) < p);
        self.rows.insert(pos, v);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v.clone());
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        let a = self.dim();
        let mut columns: Vec<SparseVector> = self.rows.clone();
        columns.extend(other.rows.iter().map(SparseVector::neg));
        let m = Matrix::from_columns(self.ambient, &columns);
        let mut out = Subspace::zero(self.ambient);
        for k in kernel_basis(&m) {
            let mut v = SparseVector::new();
            for (&i, c) in &k {
                if i < a {
                    v.axpy(c, &self.rows[i]);
                }
            }
            out.insert(v);
        }
        out
    }
}

fn pivot_of(v: &SparseVector) -> usize {
    *v.leading().expect("echelon rows are nonzero").0
}

/// Basis of the exact null space of `m`, one vector per free column.
///
/// Pivots are chosen leftmost-first, so the output is deterministic: the
/// vector for free column `f` has a 1 at `f`, zeros at every other free
/// column, and the negated echelon entries at pivot columns.
pub fn kernel_basis(m: &Matrix) -> Vec<SparseVector> {
    let echelon = Subspace::span(m.cols(), m.row_vectors());
    let rows = echelon.basis();
    echelon
        .free_positions()
        .into_iter()
        .map(|f| {
            let mut v = SparseVector::unit(f);
            for r in rows {
                if let Some(c) = r.get(&f) {
                    v.set(pivot_of(r), -c.clone());
                }
            }
            v
        })
        .collect()
}

pub fn rank(m: &Matrix) -> usize {
    Subspace::span(m.cols(), m.row_vectors()).dim()
}

/// Some solution of `m x = b`, free variables set to zero; `None` if inconsistent.
pub fn solve(m: &Matrix, b: &SparseVector) -> Option<SparseVector> {
    let n = m.cols();
    let mut aug = Subspace::zero(n + 1);
    for (i, r) in m.row_vectors().iter().enumerate() {
        let mut row = r.clone();
        if let Some(c) = b.get(&i) {
            row.set(n, c.clone());
        }
        aug.insert(row);
    }
    let mut x = SparseVector::new();
    for r in aug.basis() {
        let p = pivot_of(r);
        if p == n {
            return None;
        }
        let c = r.coeff(&n);
        if !c.is_zero() {
            x.set(p, c);
        }
    }
    Some(x)
}
