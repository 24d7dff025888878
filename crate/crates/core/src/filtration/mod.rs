//! Finite windows of presentations, lower central and derived series,
//! closures, natural bases and depth-parametrized profiles.

mod profile;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use crate::exactlin::{Matrix, Scalar, SparseVector, Subspace};
use crate::presentation::{
    classify_weighting, format_combination, window_kind, Elem, ElemVector, Presentation, Weighting, WindowKind,
};
use crate::{Error, Result};

pub use profile::{nilpotency_profile, solvability_profile, Profile, WindowSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientElem {
    pub elem: Elem,
    pub label: String,
    /// `None` for complement elements outside the filtration.
    pub weight: Option<i64>,
}

/// Finite-dimensional algebra standing in for a presentation at one weight window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotient {
    name: String,
    window: i64,
    kind: WindowKind,
    weighting: Weighting,
    basis: Vec<QuotientElem>,
    index: BTreeMap<Elem, usize>,
    table: Vec<Vec<SparseVector>>,
}

/// Truncates `p` to the elements of weight at most `window`.
pub fn truncate(p: &Presentation, window: i64) -> Result<FiniteQuotient> {
    let kind = window_kind(p, window)?;
    let weighting = classify_weighting(p, window)?;
    let entries = p.enumerate(window)?;
    let basis: Vec<QuotientElem> = entries
        .into_iter()
        .map(|b| QuotientElem {
            label: p.format_elem(&b.elem),
            elem: b.elem,
            weight: b.weight,
        })
        .collect();
    let index: BTreeMap<Elem, usize> = basis.iter().enumerate().map(|(i, b)| (b.elem.clone(), i)).collect();
    let n = basis.len();
    let mut table = alloc::vec![alloc::vec![SparseVector::new(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = p.bracket_elems(&basis[i].elem, &basis[j].elem)?;
            let mut w = SparseVector::new();
            for (e, c) in &v {
                match index.get(e) {
                    Some(&k) => w.set(k, c.clone()),
                    None => {
                        if kind == WindowKind::Subalgebra || p.weight(e)?.is_none_or(|x| x <= window) {
                            return Err(Error::InvalidWeighting(format!(
                                "[{}, {}] leaves the window {window}",
                                basis[i].label, basis[j].label
                            )));
                        }
                    }
                }
            }
            table[j][i] = w.neg();
            table[i][j] = w;
        }
    }
    Ok(FiniteQuotient {
        name: p.name.clone(),
        window,
        kind,
        weighting,
        basis,
        index,
        table,
    })
}

impl FiniteQuotient {
    /// Builds a finite algebra directly from structure constants `[b_i, b_j]` for `i < j`.
    ///
    /// Pairs not listed bracket to zero; the table is not checked for Jacobi.
    pub fn from_table(name: &str, labels: &[String], entries: &[((usize, usize), SparseVector)]) -> Self {
        let n = labels.len();
        let basis: Vec<QuotientElem> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| QuotientElem {
                elem: Elem::new(0, alloc::vec![i as i64]),
                label: l.clone(),
                weight: Some(1),
            })
            .collect();
        let index = basis.iter().enumerate().map(|(i, b)| (b.elem.clone(), i)).collect();
        let mut table = alloc::vec![alloc::vec![SparseVector::new(); n]; n];
        for ((i, j), v) in entries {
            assert!(i != j && *i < n && *j < n, "bad table entry");
            table[*i][*j] = v.clone();
            table[*j][*i] = v.neg();
        }
        Self {
            name: name.into(),
            window: 0,
            kind: WindowKind::Subalgebra,
            weighting: Weighting::Invalid,
            basis,
            index,
            table,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QuotientElem] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|b| b.label.clone()).collect()
    }

    pub fn position(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn position_of_label(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    /// Unit vector of the basis element with the given label; panics if absent.
    pub fn unit(&self, label: &str) -> SparseVector {
        SparseVector::unit(
            self.position_of_label(label)
                .unwrap_or_else(|| panic!("{label} not in the window")),
        )
    }

    pub fn is_complement(&self, i: usize) -> bool {
        self.basis[i].weight.is_none()
    }

    /// Positions of filtration (non-complement) elements.
    pub fn filtration_positions(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.is_complement(i)).collect()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVector {
        &self.table[i][j]
    }

    pub fn bracket(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (&i, a) in x {
            for (&j, b) in y {
                if i != j {
                    out.axpy(&(a * b), &self.table[i][j]);
                }
            }
        }
        out
    }

    /// Matrix of `ad_x`, whose column `j` is `[x, b_j]`.
    pub fn ad(&self, x: &SparseVector) -> Matrix {
        let n = self.dim();
        let cols: Vec<SparseVector> = (0..n)
            .map(|j| {
                let mut out = SparseVector::new();
                for (&i, a) in x {
                    out.axpy(a, &self.table[i][j]);
                }
                out
            })
            .collect();
        Matrix::from_columns(n, &cols)
    }

    /// Nonzero structure constants `(i, j, k, c)` with `i < j` and `[b_i, b_j] ∋ c·b_k`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                for (&k, c) in &self.table[i][j] {
                    out.push((i, j, k, c.clone()));
                }
            }
        }
        out
    }

    pub fn to_elems(&self, v: &SparseVector) -> ElemVector {
        v.map_keys(|&i| self.basis[i].elem.clone())
    }

    /// Coordinates of an element vector; components outside the window are dropped.
    pub fn from_elems(&self, v: &ElemVector) -> SparseVector {
        v.iter()
            .filter_map(|(e, c)| self.index.get(e).map(|&i| (i, c.clone())))
            .collect()
    }

    pub fn format_vector(&self, v: &SparseVector) -> String {
        format_combination(v.iter().map(|(&i, c)| (self.basis[i].label.clone(), c)))
    }

    pub fn format_subspace(&self, s: &Subspace) -> String {
        let parts: Vec<String> = s.basis().iter().map(|v| self.format_vector(v)).collect();
        format!("span{{{}}}", parts.join(", "))
    }

    /// Span of `[a, b]` over spanning sets of `a` and `b`.
    pub fn bracket_spaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut out = Subspace::zero(self.dim());
        for x in a.basis() {
            for y in b.basis() {
                out.insert(self.bracket(x, y));
            }
        }
        out
    }

    /// Checks Jacobi on every basis triple of the finite table.
    pub fn jacobi_holds(&self) -> bool {
        let n = self.dim();
        let one = Scalar::one();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut r = self.bracket(&self.table[i][j], &SparseVector::unit(k));
                    r.axpy(&one, &self.bracket(&self.table[k][i], &SparseVector::unit(j)));
                    r.axpy(&one, &self.bracket(&self.table[j][k], &SparseVector::unit(i)));
                    if !r.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    LowerCentral,
    Derived,
}

impl SeriesKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesKind::LowerCentral => "lcs",
            SeriesKind::Derived => "derived",
        }
    }
}

/// `terms[0]` is the whole algebra. The chain ends with the zero space or
/// with a repeated nonzero term, in which case `stabilized` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesChain {
    pub kind: SeriesKind,
    pub terms: Vec<Subspace>,
    pub stabilized: bool,
}

impl SeriesChain {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    /// `dim(term_i / term_{i+1})` for consecutive terms.
    pub fn layer_dims(&self) -> Vec<usize> {
        self.terms.windows(2).map(|w| w[0].dim() - w[1].dim()).collect()
    }

    pub fn reaches_zero(&self) -> bool {
        self.terms.last().is_some_and(Subspace::is_zero)
    }

    /// Last term before the chain hits zero or repeats.
    pub fn last_nonzero(&self) -> Option<&Subspace> {
        self.terms.iter().rev().find(|t| !t.is_zero())
    }
}

pub fn series(q: &FiniteQuotient, kind: SeriesKind) -> SeriesChain {
    let full = Subspace::full(q.dim());
    let mut terms = alloc::vec![full.clone()];
    loop {
        let last = terms.last().unwrap();
        if last.is_zero() {
            return SeriesChain {
                kind,
                terms,
                stabilized: false,
            };
        }
        let next = match kind {
            SeriesKind::LowerCentral => q.bracket_spaces(last, &full),
            SeriesKind::Derived => q.bracket_spaces(last, last),
        };
        let repeat = next == *last;
        terms.push(next);
        if repeat {
            return SeriesChain {
                kind,
                terms,
                stabilized: true,
            };
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureMode {
    Subalgebra,
    Ideal,
}

/// Smallest subalgebra or ideal containing `generators`, as an echelon basis.
pub fn span_closure(q: &FiniteQuotient, generators: &[SparseVector], mode: ClosureMode) -> Subspace {
    let mut span = Subspace::zero(q.dim());
    let mut queue: Vec<SparseVector> = Vec::new();
    for g in generators {
        if span.insert(g.clone()) {
            queue.push(g.clone());
        }
    }
    let mut done: Vec<SparseVector> = Vec::new();
    while let Some(v) = queue.pop() {
        let partners: Vec<SparseVector> = match mode {
            ClosureMode::Ideal => (0..q.dim()).map(SparseVector::unit).collect(),
            ClosureMode::Subalgebra => {
                let mut p = done.clone();
                p.push(v.clone());
                p
            }
        };
        for w in &partners {
            let b = q.bracket(&v, w);
            if span.insert(b.clone()) {
                queue.push(b);
            }
        }
        done.push(v);
    }
    span
}

/// Layered basis `B_1, B_2, …` with `B_{i+1}` made of brackets `[b, g]`, `b ∈ B_i`, `g ∈ B_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalBasis {
    pub layers: Vec<Vec<SparseVector>>,
    /// Bracket words matching `layers`, e.g. `[e(2), e(1)]`.
    pub words: Vec<Vec<String>>,
}

impl NaturalBasis {
    pub fn flatten(&self) -> Vec<SparseVector> {
        self.layers.iter().flatten().cloned().collect()
    }
}

/// Greedy natural basis of a window quotient.
///
/// Products are tried with the generator factor `g` outermost and the
/// previous-layer factor `b` innermost, both in layer order.
pub fn natural_basis(q: &FiniteQuotient) -> Result<NaturalBasis> {
    let chain = series(q, SeriesKind::LowerCentral);
    if chain.stabilized {
        return Err(Error::LayerDeficient(chain.terms.len() - 1));
    }
    let terms = &chain.terms;
    let mut layers: Vec<Vec<SparseVector>> = Vec::new();
    let mut words: Vec<Vec<String>> = Vec::new();
    let mut s = terms.get(1).cloned().unwrap_or_else(|| Subspace::zero(q.dim()));
    let mut first = Vec::new();
    let mut first_words = Vec::new();
    for i in 0..q.dim() {
        let u = SparseVector::unit(i);
        if s.insert(u.clone()) {
            first.push(u);
            first_words.push(q.label(i).into());
        }
    }
    layers.push(first);
    words.push(first_words);
    for k in 1..terms.len() - 1 {
        let want = terms[k].dim() - terms[k + 1].dim();
        let mut s = terms[k + 1].clone();
        let mut layer = Vec::new();
        let mut layer_words = Vec::new();
        'fill: for (g, gw) in layers[0].iter().zip(&words[0]) {
            for (b, bw) in layers[k - 1].iter().zip(&words[k - 1]) {
                if layer.len() == want {
                    break 'fill;
                }
                let v = q.bracket(b, g);
                if s.insert(v.clone()) {
                    layer.push(v);
                    layer_words.push(format!("[{bw}, {gw}]"));
                }
            }
        }
        if layer.len() < want {
            return Err(Error::LayerDeficient(k + 1));
        }
        layers.push(layer);
        words.push(layer_words);
    }
    Ok(NaturalBasis { layers, words })
}

/// Rewrites the structure constants of `q` in a new basis given by the columns `basis`.
pub fn change_basis(q: &FiniteQuotient, basis: &[SparseVector], labels: &[String]) -> Option<FiniteQuotient> {
    let n = q.dim();
    if basis.len() != n {
        return None;
    }
    let span = Subspace::span(n, basis);
    if span.dim() != n {
        return None;
    }
    let p = Matrix::from_columns(n, basis);
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = q.bracket(&basis[i], &basis[j]);
            let c = crate::exactlin::solve(&p, &v)?;
            if !c.is_zero() {
                entries.push(((i, j), c));
            }
        }
    }
    Some(FiniteQuotient::from_table(q.name(), labels, &entries))
}
