//! Derivations of finite windows: Leibniz solutions, layer-one blocks,
//! maximal tori through the system `α_i + α_j = α_p`, roots and centers.

mod nil;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use crate::exactlin::{int, kernel_basis, Matrix, Scalar, SparseVector, Subspace};
use crate::filtration::{series, truncate, FiniteQuotient, SeriesKind};
use crate::presentation::{format_combination, Elem, Presentation};
use crate::{Error, RandomCheck, Result, Verdict};

pub use nil::{nil_subspace_commuting, NilCheck, NilMethod};

/// Leibniz equations `d[e_i,e_j] = [d e_i, e_j] + [e_i, d e_j]` over the unknowns
/// `D[k][i]` at position `k * n + i`.
fn leibniz_rows(q: &FiniteQuotient) -> Vec<SparseVector> {
    let n = q.dim();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut per_m: Vec<SparseVector> = alloc::vec![SparseVector::new(); n];
            for (&p, c) in q.bracket_basis(i, j) {
                for (m, row) in per_m.iter_mut().enumerate() {
                    row.add_term(m * n + p, c);
                }
            }
            for k in 0..n {
                for (&m, c) in q.bracket_basis(k, j) {
                    per_m[m].add_term(k * n + i, &-c.clone());
                }
                for (&m, c) in q.bracket_basis(i, k) {
                    per_m[m].add_term(k * n + j, &-c.clone());
                }
            }
            rows.extend(per_m.into_iter().filter(|r| !r.is_zero()));
        }
    }
    rows
}

/// Basis of `Der(q)` as matrices whose column `i` is the image of `b_i`.
pub fn derivation_space(q: &FiniteQuotient) -> Vec<Matrix> {
    let n = q.dim();
    let m = Matrix::from_sparse_rows(n * n, leibniz_rows(q));
    kernel_basis(&m)
        .iter()
        .map(|v| {
            let mut d = Matrix::zeros(n, n);
            for (&u, c) in v {
                d.set(u / n, u % n, c.clone());
            }
            d
        })
        .collect()
}

pub fn is_derivation(q: &FiniteQuotient, d: &Matrix) -> bool {
    let n = q.dim();
    if d.rows() != n || d.cols() != n {
        return false;
    }
    let cols: Vec<SparseVector> = (0..n).map(|i| d.column(i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = d.apply(q.bracket_basis(i, j));
            let mut rhs = q.bracket(&cols[i], &SparseVector::unit(j));
            rhs.axpy(&Scalar::one(), &q.bracket(&SparseVector::unit(i), &cols[j]));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// `L^2` of the quotient and the positions whose unit vectors span a complement to it.
pub fn layer_one(q: &FiniteQuotient) -> (Subspace, Vec<usize>) {
    let chain = series(q, SeriesKind::LowerCentral);
    let l2 = chain.terms.get(1).cloned().unwrap_or_else(|| Subspace::zero(q.dim()));
    let free = l2.free_positions();
    (l2, free)
}

/// Block `D_11`: the map induced by `d` on `L/L^2`.
pub fn d11(q: &FiniteQuotient, d: &Matrix) -> Matrix {
    let (l2, free) = layer_one(q);
    d11_with(&l2, &free, d)
}

pub(crate) fn d11_with(l2: &Subspace, free: &[usize], d: &Matrix) -> Matrix {
    let l = free.len();
    let mut out = Matrix::zeros(l, l);
    for (b, &pb) in free.iter().enumerate() {
        let image = l2.reduce(&d.column(pb));
        for (a, &pa) in free.iter().enumerate() {
            if let Some(c) = image.get(&pa) {
                out.set(a, b, c.clone());
            }
        }
    }
    out
}

pub fn is_strictly_triangularizable(q: &FiniteQuotient, d: &Matrix) -> bool {
    crate::exactlin::is_nilpotent(&d11(q, d))
}

/// Maximal torus of one window: fundamental diagonal solutions of `α_i + α_j = α_p`.
///
/// `values[k][i]` is the eigenvalue of `t_k` on basis element `i`. Solutions
/// are normalized so `t_k` is 1 on the `k`-th free position and 0 on the others;
/// free positions are the earliest basis elements the system leaves undetermined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusDescription {
    pub window: i64,
    pub labels: Vec<String>,
    pub elems: Vec<Elem>,
    pub values: Vec<Vec<Scalar>>,
    pub free_positions: Vec<usize>,
    /// Equations `(i, j, p)` meaning `α_i + α_j = α_p`.
    pub equations: Vec<(usize, usize, usize)>,
}

impl TorusDescription {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn matrix(&self, k: usize) -> Matrix {
        Matrix::diagonal(&self.values[k])
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        (0..self.dim()).map(|k| self.matrix(k)).collect()
    }

    /// Eigenvalue vector `(t_1(e), …, t_s(e))` of basis position `i`.
    pub fn root_of(&self, i: usize) -> Vec<Scalar> {
        self.values.iter().map(|t| t[i].clone()).collect()
    }
}

pub fn torus_of_quotient(q: &FiniteQuotient) -> TorusDescription {
    let n = q.dim();
    let rev = |i: usize| n - 1 - i;
    let mut equations = Vec::new();
    let mut rows = Vec::new();
    let mut seen = alloc::collections::BTreeSet::new();
    for (i, j, p, _) in q.structure_constants() {
        if !seen.insert((i, j, p)) {
            continue;
        }
        equations.push((i, j, p));
        let mut row = SparseVector::new();
        row.add_term(rev(i), &int(1));
        row.add_term(rev(j), &int(1));
        row.add_term(rev(p), &int(-1));
        rows.push(row);
    }
    let system = Matrix::from_sparse_rows(n, rows);
    let free_rev = Subspace::span(n, system.row_vectors()).free_positions();
    let kernel = kernel_basis(&system);
    let mut sols: Vec<(usize, Vec<Scalar>)> = kernel
        .iter()
        .zip(&free_rev)
        .map(|(v, &f)| (rev(f), (0..n).map(|i| v.coeff(&rev(i))).collect()))
        .collect();
    sols.sort_by_key(|(f, _)| *f);
    TorusDescription {
        window: q.window(),
        labels: q.labels(),
        elems: q.basis().iter().map(|b| b.elem.clone()).collect(),
        free_positions: sols.iter().map(|(f, _)| *f).collect(),
        values: sols.into_iter().map(|(_, v)| v).collect(),
        equations,
    }
}

/// Emits and solves the torus system of `p` on one window.
pub fn torus_system(p: &Presentation, window: i64) -> Result<TorusDescription> {
    Ok(torus_of_quotient(&truncate(p, window)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub per_window: Vec<(i64, usize)>,
    pub rank: Option<usize>,
    /// `dim L/L^2` on the largest window.
    pub layer_one_dim: usize,
    pub maximal_rank: bool,
    pub bound_respected: bool,
    pub verdict: Verdict,
}

pub fn rank(p: &Presentation, windows: &[i64]) -> Result<RankReport> {
    if windows.len() < 2 || windows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Malformed("rank needs at least two increasing windows".into()));
    }
    let mut per_window = Vec::new();
    let mut bound_respected = true;
    let mut layer_one_dim = 0;
    for &m in windows {
        let q = truncate(p, m)?;
        let t = torus_of_quotient(&q);
        let (_, free) = layer_one(&q);
        bound_respected &= t.dim() <= free.len();
        layer_one_dim = free.len();
        per_window.push((m, t.dim()));
    }
    let n = per_window.len();
    let (a, b) = (per_window[n - 2], per_window[n - 1]);
    let trace = per_window.iter().map(|&(m, d)| (m, alloc::vec![d])).collect();
    let (rank, verdict) = if a.1 == b.1 {
        (Some(b.1), Verdict::holds("rank", a.0))
    } else {
        (None, Verdict::inconclusive("rank", a.0))
    };
    Ok(RankReport {
        maximal_rank: rank == Some(layer_one_dim),
        per_window,
        rank,
        layer_one_dim,
        bound_respected,
        verdict: verdict.with_trace(trace),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDecomposition {
    /// Distinct roots in order of first appearance, each with its basis positions.
    pub roots: Vec<(Vec<Scalar>, Vec<usize>)>,
    /// Roots of the free positions, dual to the torus basis.
    pub primitive: Vec<Vec<Scalar>>,
    /// Roots that are not integer combinations of the primitive ones.
    pub non_integral: Vec<Vec<Scalar>>,
}

pub fn root_decomposition(t: &TorusDescription) -> RootDecomposition {
    let mut roots: Vec<(Vec<Scalar>, Vec<usize>)> = Vec::new();
    for i in 0..t.labels.len() {
        let r = t.root_of(i);
        match roots.iter_mut().find(|(x, _)| *x == r) {
            Some((_, v)) => v.push(i),
            None => roots.push((r, alloc::vec![i])),
        }
    }
    let primitive: Vec<Vec<Scalar>> = t.free_positions.iter().map(|&f| t.root_of(f)).collect();
    let s = primitive.len();
    let cols: Vec<SparseVector> = primitive
        .iter()
        .map(|r| r.iter().enumerate().map(|(k, c)| (k, c.clone())).collect())
        .collect();
    let basis = Matrix::from_columns(s, &cols);
    let non_integral = roots
        .iter()
        .filter(|(r, _)| {
            let target: SparseVector = r.iter().enumerate().map(|(k, c)| (k, c.clone())).collect();
            match crate::exactlin::solve(&basis, &target) {
                Some(x) => x.iter().any(|(_, c)| !c.is_integer()),
                None => true,
            }
        })
        .map(|(r, _)| r.clone())
        .collect();
    RootDecomposition {
        roots,
        primitive,
        non_integral,
    }
}

pub fn format_root(r: &[Scalar]) -> String {
    let parts: Vec<String> = r.iter().map(|c| format!("{c}")).collect();
    format!("({})", parts.join(","))
}

/// Center, inner derivation dimension, and whether every derivation is inner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterReport {
    pub center: Subspace,
    pub inner_dim: usize,
    pub derivation_dim: usize,
    pub der_equals_inner: bool,
}

pub fn center(q: &FiniteQuotient) -> Subspace {
    let n = q.dim();
    let mut rows: Vec<SparseVector> = alloc::vec![SparseVector::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            for (&m, c) in q.bracket_basis(i, j) {
                rows[j * n + m].add_term(i, c);
            }
        }
    }
    rows.retain(|r| !r.is_zero());
    let k = kernel_basis(&Matrix::from_sparse_rows(n, rows));
    Subspace::span(n, &k)
}

pub fn center_and_inner(q: &FiniteQuotient) -> CenterReport {
    let center = center(q);
    let inner_dim = q.dim() - center.dim();
    let derivation_dim = derivation_space(q).len();
    CenterReport {
        der_equals_inner: inner_dim == derivation_dim,
        center,
        inner_dim,
        derivation_dim,
    }
}

/// Describes `d` by its action on the layer-one positions.
pub fn describe_on_layer_one(q: &FiniteQuotient, d: &Matrix) -> String {
    let (_, free) = layer_one(q);
    let parts: Vec<String> = free
        .iter()
        .map(|&p| format!("d({}) = {}", q.label(p), q.format_vector(&d.column(p))))
        .collect();
    parts.join("; ")
}

/// ST-independence of derivations of one quotient.
///
/// Commuting layer-one blocks are decided exactly; otherwise combinations
/// with all coefficients nonzero are sampled.
pub fn st_independent(q: &FiniteQuotient, ds: &[Matrix], check: &RandomCheck) -> Result<Verdict> {
    if ds.iter().any(|d| d.rows() != q.dim() || d.cols() != q.dim()) {
        return Err(Error::MixedQuotients);
    }
    let window = q.window();
    if ds.is_empty() {
        return Ok(Verdict::holds("st_independent", window));
    }
    let (l2, free) = layer_one(q);
    let blocks: Vec<Matrix> = ds.iter().map(|d| d11_with(&l2, &free, d)).collect();
    let witness = |c: &[Scalar]| {
        let terms = c.iter().enumerate().map(|(k, x)| (format!("d{}", k + 1), x));
        format!("{} has nilpotent D11", format_combination(terms))
    };
    if let Some(nil) = nil_subspace_commuting(&blocks) {
        return Ok(match full_support_vector(&nil, ds.len()) {
            Some(c) => Verdict::fails("st_independent", window, witness(&c)),
            None => Verdict::holds("st_independent", window),
        });
    }
    let mut rng = check.rng();
    for _ in 0..check.samples {
        let c = check.draw(&mut rng, ds.len());
        if crate::exactlin::is_nilpotent(&combine(&blocks, &c)) {
            return Ok(Verdict::fails("st_independent", window, witness(&c)));
        }
    }
    Ok(Verdict::holds("st_independent", window).with_witness(format!(
        "sampled {} combinations with coefficients in [-{h}, {h}] \\ {{0}}",
        check.samples,
        h = check.height
    )))
}

pub(crate) fn combine(ms: &[Matrix], c: &[Scalar]) -> Matrix {
    let mut acc = Matrix::zeros(ms[0].rows(), ms[0].cols());
    for (m, x) in ms.iter().zip(c) {
        acc = acc.combine(m, x);
    }
    acc
}

/// A vector of `space` with every one of the `n` coordinates nonzero, if one exists.
pub(crate) fn full_support_vector(space: &Subspace, n: usize) -> Option<Vec<Scalar>> {
    if (0..n).any(|k| space.basis().iter().all(|v| v.get(&k).is_none())) {
        return None;
    }
    // A generic combination works; try a deterministic sequence of weights.
    for base in 2i64.. {
        let mut v = SparseVector::new();
        let mut w = int(1);
        for b in space.basis() {
            v.axpy(&w, b);
            w *= int(base);
        }
        if (0..n).all(|k| v.get(&k).is_some()) {
            return Some((0..n).map(|k| v.coeff(&k)).collect());
        }
    }
    unreachable!()
}

/// Result of the characteristic pro-nilpotency check on one window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowNil {
    pub window: i64,
    pub block_side: usize,
    pub parameters: usize,
    pub method: NilMethod,
    pub nil: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharReport {
    pub per_window: Vec<WindowNil>,
    pub verdict: Verdict,
}

pub fn characteristically_pronilpotent(p: &Presentation, windows: &[i64], check: &RandomCheck) -> Result<CharReport> {
    if windows.is_empty() || windows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Malformed("windows must be increasing".into()));
    }
    let mut per_window = Vec::new();
    for &m in windows {
        let q = truncate(p, m)?;
        per_window.push(window_nil(&q, check));
    }
    let trace: Vec<(i64, Vec<usize>)> = per_window
        .iter()
        .map(|w| (w.window, alloc::vec![w.block_side, w.parameters]))
        .collect();
    let verdict = if let Some(bad) = per_window.iter().find(|w| !w.nil) {
        Verdict::fails(
            "characteristically_pro_nilpotent",
            bad.window,
            bad.witness.clone().unwrap_or_default(),
        )
    } else if per_window.len() < 2 {
        Verdict::inconclusive("characteristically_pro_nilpotent", windows[0])
    } else {
        Verdict::holds("characteristically_pro_nilpotent", per_window[per_window.len() - 2].window)
    };
    Ok(CharReport {
        per_window,
        verdict: verdict.with_trace(trace),
    })
}

fn window_nil(q: &FiniteQuotient, check: &RandomCheck) -> WindowNil {
    let ders = derivation_space(q);
    let (l2, free) = layer_one(q);
    let l = free.len();
    let blocks_all: Vec<Matrix> = ders.iter().map(|d| d11_with(&l2, &free, d)).collect();
    let span = Subspace::span(l * l, blocks_all.iter().map(Matrix::flatten).collect::<Vec<_>>().iter());
    let blocks: Vec<Matrix> = span.basis().iter().map(|v| Matrix::unflatten(l, l, v)).collect();
    let outcome = NilCheck::run(&blocks, check);
    let witness = if outcome.nil {
        None
    } else {
        Some(find_witness(q, &ders, &l2, &free, outcome.counterexample.as_deref(), &blocks))
    };
    WindowNil {
        window: q.window(),
        block_side: l,
        parameters: blocks.len(),
        method: outcome.method,
        nil: outcome.nil,
        witness,
    }
}

fn find_witness(
    q: &FiniteQuotient,
    ders: &[Matrix],
    l2: &Subspace,
    free: &[usize],
    counterexample: Option<&[Scalar]>,
    blocks: &[Matrix],
) -> String {
    let bad = |d: &Matrix| !crate::exactlin::is_nilpotent(&d11_with(l2, free, d));
    let id = Matrix::identity(q.dim());
    if is_derivation(q, &id) && bad(&id) {
        return format!("identity derivation: {}", describe_on_layer_one(q, &id));
    }
    let t = torus_of_quotient(q);
    for k in 0..t.dim() {
        let m = t.matrix(k);
        if bad(&m) {
            return format!("torus element t{} (diagonal): {}", k + 1, describe_on_layer_one(q, &m));
        }
    }
    for (k, d) in ders.iter().enumerate() {
        if bad(d) {
            return format!("derivation #{}: {}", k + 1, describe_on_layer_one(q, d));
        }
    }
    match counterexample {
        Some(c) => {
            let m = combine(blocks, c);
            format!("layer-one block combination with non-nilpotent matrix {}", format_matrix(&m))
        }
        None => String::from("non-nilpotent combination of layer-one blocks"),
    }
}

pub fn format_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .to_dense()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|c| format!("{c}")).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}
