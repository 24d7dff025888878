use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::{Scalar, SparseVector};

/// Sparse rational matrix stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVector>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: (0..rows).map(|_| SparseVector::new()).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn diagonal(values: &[Scalar]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Builds a matrix from dense rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_integer(x.into())).collect())
            .collect();
        Self::from_rows(&dense)
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (&i, v) in col {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_sparse_rows(cols: usize, rows: Vec<SparseVector>) -> Self {
        debug_assert!(rows.iter().all(|r| r.keys().all(|&k| k < cols)));
        Self {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[SparseVector] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].coeff(&j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i].set(j, value);
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i].add_term(j, value);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SparseVector::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVector::len).sum()
    }

    /// Column `j` as a sparse vector.
    pub fn column(&self, j: usize) -> SparseVector {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.get(&j).map(|v| (i, v.clone())))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (&j, v) in r {
                t.data[j].set(i, v.clone());
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (i, r) in self.data.iter().enumerate() {
            let d = r.dot(v);
            if !d.is_zero() {
                out.set(i, d);
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc = SparseVector::new();
                for (&k, v) in r {
                    acc.axpy(v, &other.data[k]);
                }
                acc
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.combine(other, &Scalar::one())
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.combine(other, &-Scalar::one())
    }

    /// `self + c * other`
    pub fn combine(&self, other: &Matrix, c: &Scalar) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (r, o) in out.data.iter_mut().zip(&other.data) {
            r.axpy(c, o);
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.scaled(c)).collect(),
        }
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols))
            .filter_map(|i| self.data[i].get(&i).cloned())
            .fold(Scalar::zero(), |a, b| a + b)
    }

    pub fn pow(&self, n: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_diagonal(&self) -> bool {
        self.data
            .iter()
            .enumerate()
            .all(|(i, r)| r.keys().all(|&j| j == i))
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.data
            .iter()
            .enumerate()
            .all(|(i, r)| r.keys().all(|&j| j >= i))
    }

    pub fn diagonal_entries(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// Row-major flattening, used to treat matrices as vectors of length `rows * cols`.
    pub fn flatten(&self) -> SparseVector {
        let mut out = SparseVector::new();
        for (i, r) in self.data.iter().enumerate() {
            for (&j, v) in r {
                out.set(i * self.cols + j, v.clone());
            }
        }
        out
    }

    pub fn unflatten(rows: usize, cols: usize, v: &SparseVector) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for (&k, c) in v {
            m.set(k / cols, k % cols, c.clone());
        }
        m
    }

    /// Submatrix on the given row and column positions, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if let Some(v) = self.data[i].get(&j) {
                    m.set(a, b, v.clone());
                }
            }
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>6}", alloc::format!("{}", self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
