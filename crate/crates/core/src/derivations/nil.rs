use alloc::vec::Vec;

use num_traits::Zero;

use super::combine;
use crate::exactlin::poly::symbolic_char_poly;
use crate::exactlin::{int, is_nilpotent, kernel_basis, Matrix, Scalar, SparseVector, Subspace};
use crate::RandomCheck;

const SYMBOLIC_SIDE: usize = 4;
const SYMBOLIC_PARAMS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub enum NilMethod {
    /// No parameters at all.
    Trivial,
    /// Characteristic polynomial of the generic combination, exactly.
    Symbolic,
    /// Commuting blocks: exact linear description of the nilpotent combinations.
    Commuting,
    /// Random combinations; `miss_bound` bounds the chance of a false "nil".
    Sampled { samples: usize, miss_bound: f64 },
}

impl Eq for NilMethod {}

impl NilMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            NilMethod::Trivial => "trivial",
            NilMethod::Symbolic => "symbolic",
            NilMethod::Commuting => "commuting",
            NilMethod::Sampled { .. } => "sampled",
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, NilMethod::Sampled { .. })
    }
}

/// Decides whether every element of `span(blocks)` is nilpotent.
#[derive(Clone, Debug, PartialEq)]
pub struct NilCheck {
    pub nil: bool,
    pub method: NilMethod,
    /// Coefficients of a non-nilpotent combination when `nil` is false.
    pub counterexample: Option<Vec<Scalar>>,
}

impl NilCheck {
    pub fn run(blocks: &[Matrix], check: &RandomCheck) -> Self {
        if blocks.is_empty() {
            return Self {
                nil: true,
                method: NilMethod::Trivial,
                counterexample: None,
            };
        }
        let side = blocks[0].rows();
        let k = blocks.len();
        if side <= SYMBOLIC_SIDE && k <= SYMBOLIC_PARAMS {
            let coeffs = symbolic_char_poly(blocks);
            let nonzero: Vec<_> = coeffs[..side].iter().filter(|p| !p.is_zero()).collect();
            let counterexample = (!nonzero.is_empty()).then(|| {
                let mut rng = check.rng();
                let mut points = (0..k).map(|i| unit_point(k, i)).collect::<Vec<_>>().into_iter();
                loop {
                    let c = points.next().unwrap_or_else(|| check.draw(&mut rng, k));
                    if nonzero.iter().any(|p| !p.eval(&c).is_zero()) {
                        break c;
                    }
                }
            });
            return Self {
                nil: counterexample.is_none(),
                method: NilMethod::Symbolic,
                counterexample,
            };
        }
        if let Some(nil) = nil_subspace_commuting(blocks) {
            let counterexample = (nil.dim() < k).then(|| {
                (0..k)
                    .map(|i| unit_point(k, i))
                    .find(|c| !nil.contains(&to_sparse(c)))
                    .expect("a unit vector escapes a proper subspace")
            });
            return Self {
                nil: counterexample.is_none(),
                method: NilMethod::Commuting,
                counterexample,
            };
        }
        let mut rng = check.rng();
        for _ in 0..check.samples {
            let c = check.draw(&mut rng, k);
            if !is_nilpotent(&combine(blocks, &c)) {
                return Self {
                    nil: false,
                    method: NilMethod::Sampled {
                        samples: check.samples,
                        miss_bound: check.miss_probability(side as u32),
                    },
                    counterexample: Some(c),
                };
            }
        }
        Self {
            nil: true,
            method: NilMethod::Sampled {
                samples: check.samples,
                miss_bound: check.miss_probability(side as u32),
            },
            counterexample: None,
        }
    }
}

fn unit_point(k: usize, i: usize) -> Vec<Scalar> {
    (0..k).map(|j| if i == j { int(1) } else { Scalar::zero() }).collect()
}

fn to_sparse(c: &[Scalar]) -> SparseVector {
    c.iter().enumerate().map(|(k, x)| (k, x.clone())).collect()
}

/// For pairwise commuting square matrices, the subspace of coefficient vectors
/// `c` with `Σ c_k B_k` nilpotent; `None` if some pair does not commute.
///
/// Commuting matrices are simultaneously triangularizable over the algebraic
/// closure, so `Σ c_k B_k` is nilpotent iff its trace against every element of
/// the unital associative algebra they generate vanishes. Those traces are
/// linear in `c`.
pub fn nil_subspace_commuting(blocks: &[Matrix]) -> Option<Subspace> {
    let k = blocks.len();
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            if !a.commutator(b).is_zero() {
                return None;
            }
        }
    }
    let Some(first) = blocks.first() else {
        return Some(Subspace::zero(0));
    };
    let n = first.rows();
    let mut span = Subspace::zero(n * n);
    let mut words = alloc::vec![Matrix::identity(n)];
    span.insert(words[0].flatten());
    let mut next = 0;
    while next < words.len() {
        let w = words[next].clone();
        for b in blocks {
            let p = w.mul(b);
            if span.insert(p.flatten()) {
                words.push(p);
            }
        }
        next += 1;
    }
    let rows: Vec<SparseVector> = words
        .iter()
        .map(|w| (0..k).map(|j| (j, blocks[j].mul(w).trace())).collect())
        .collect();
    let kernel = kernel_basis(&Matrix::from_sparse_rows(k, rows));
    Some(Subspace::span(k, &kernel))
}
