use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::const_idx;
use crate::derivations::center;
use crate::exactlin::{kernel_basis, solve, Matrix, SparseVector, Subspace};
use crate::filtration::{truncate, FiniteQuotient};
use crate::presentation::{
    check_jacobi, format_combination, Addend, BracketRule, Coeff, Elem, ElemVector, Guard, IntExpr, Presentation,
    Term,
};
use crate::{Error, Result, Verdict};

/// `θ(left, right) = Σ coeff·z_k` whenever the guard holds; one orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleClause {
    pub left: Term,
    pub right: Term,
    pub value: Vec<(Coeff, usize)>,
    pub guard: Guard,
}

/// Alternating bilinear map from a presentation into a finite space `V`.
///
/// Terms refer to generators of the base presentation by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleRule {
    pub name: String,
    pub space: Vec<String>,
    /// Weight of each basis vector of `V`; `None` picks the largest
    /// `w(x) + w(y)` over the pairs it appears on.
    pub weights: Vec<Option<i64>>,
    pub clauses: Vec<CocycleClause>,
}

impl CocycleRule {
    pub fn new(name: &str, space: &[&str]) -> Self {
        Self {
            name: name.into(),
            space: space.iter().map(|s| String::from(*s)).collect(),
            weights: alloc::vec![None; space.len()],
            clauses: Vec::new(),
        }
    }

    /// Finite table `θ(a, b) = v`, with `v` in coordinates of `V`.
    pub fn from_table(name: &str, space: &[&str], entries: &[(Elem, Elem, SparseVector)]) -> Self {
        let mut c = Self::new(name, space);
        for (a, b, v) in entries {
            c.clauses.push(CocycleClause {
                left: Term {
                    gen: a.gen,
                    idx: const_idx(&a.idx),
                },
                right: Term {
                    gen: b.gen,
                    idx: const_idx(&b.idx),
                },
                value: v.iter().map(|(&k, x)| (Coeff::constant(x.clone()), k)).collect(),
                guard: Guard::new(),
            });
        }
        c
    }

    /// `θ(x, y) = ν([x, y])` on every pair of the window, with `ν` given on basis elements.
    pub fn coboundary(
        name: &str,
        space: &[&str],
        p: &Presentation,
        window: i64,
        nu: &[(Elem, SparseVector)],
    ) -> Result<Self> {
        let basis: Vec<Elem> = p
            .enumerate(window)?
            .into_iter()
            .filter(|b| b.weight.is_some())
            .map(|b| b.elem)
            .collect();
        let nu: BTreeMap<&Elem, &SparseVector> = nu.iter().map(|(e, v)| (e, v)).collect();
        let mut entries = Vec::new();
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                let mut v = SparseVector::new();
                for (e, c) in &p.bracket_elems(a, b)? {
                    if let Some(n) = nu.get(e) {
                        v.axpy(c, n);
                    }
                }
                if !v.is_zero() {
                    entries.push((a.clone(), b.clone(), v));
                }
            }
        }
        Ok(Self::from_table(name, space, &entries))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralWindow {
    pub window: i64,
    /// `ν` with `ν([x, y]) = θ(x, y)` on the window, as (element, value) labels.
    pub coboundary: Option<Vec<(String, String)>>,
    pub theta_perp: String,
    pub theta_perp_dim: usize,
    pub center_dim: usize,
    /// `Center(N_θ) = (θ^⊥ ∩ Center(N)) + V`; `None` if part of `V` lies above the window.
    pub center_formula: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralReport {
    pub weights: Vec<(String, i64)>,
    pub windows: Vec<CentralWindow>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralExtension {
    pub presentation: Presentation,
    pub report: CentralReport,
}

fn assemble(p: &Presentation, c: &CocycleRule, weights: &[i64]) -> Presentation {
    let mut out = p.clone();
    out.name = format!("{}_{}", p.name, c.name);
    let zs: Vec<usize> = c
        .space
        .iter()
        .zip(weights)
        .map(|(z, &w)| {
            let g = out.add_generator(z, &[], Guard::new());
            out.weights.push(crate::presentation::WeightClause {
                gen: g,
                pattern: Vec::new(),
                value: IntExpr::Const(w),
                guard: Guard::new(),
            });
            g
        })
        .collect();
    for cl in &c.clauses {
        out.rules.push(BracketRule {
            left: cl.left.clone(),
            right: cl.right.clone(),
            result: cl
                .value
                .iter()
                .map(|(coeff, k)| Addend {
                    coeff: coeff.clone(),
                    term: Term {
                        gen: zs[*k],
                        idx: Vec::new(),
                    },
                })
                .collect(),
            guard: cl.guard.clone(),
            additive: true,
        });
    }
    out
}

fn alternating(e: Error) -> Error {
    match e {
        Error::AmbiguousRule(s) => Error::NotAlternating(s),
        other => other,
    }
}

/// `θ` on a pair as a vector over `V`.
fn theta(nt: &Presentation, z0: usize, a: &Elem, b: &Elem) -> Result<SparseVector> {
    let v = nt.bracket_elems(a, b).map_err(alternating)?;
    Ok(v.iter().filter(|(e, _)| e.gen >= z0).map(|(e, c)| (e.gen - z0, c.clone())).collect())
}

/// Builds `N_θ = N ⊕ V` with `V` central and validates it on every window.
///
/// The report covers the cocycle identity, whether `θ` is a coboundary on the
/// window, `θ^⊥`, and the center formula.
pub fn central_extension(p: &Presentation, c: &CocycleRule, windows: &[i64]) -> Result<CentralExtension> {
    let Some(&top) = windows.iter().max() else {
        return Err(Error::Malformed("no windows given".into()));
    };
    if c.weights.len() != c.space.len() {
        return Err(Error::Malformed("one weight slot per basis vector of V".into()));
    }
    let mut seen = BTreeSet::new();
    for z in &c.space {
        if !seen.insert(z) || p.gen_index(z).is_some() {
            return Err(Error::Malformed(format!("name `{z}` is already in use")));
        }
    }
    for cl in &c.clauses {
        for (_, k) in &cl.value {
            if *k >= c.space.len() {
                return Err(Error::Malformed(format!("cocycle value refers to V[{k}]")));
            }
        }
    }
    for &m in windows {
        let j = check_jacobi(p, m)?;
        if j.is_fails() {
            return Err(Error::JacobiFailure(j.witness.unwrap_or_default()));
        }
    }
    let z0 = p.generators.len();
    let provisional = assemble(p, c, &alloc::vec![1; c.space.len()]);
    let entries = p.enumerate(top)?;
    let elems: Vec<(Elem, i64)> = entries
        .iter()
        .filter_map(|b| b.weight.map(|w| (b.elem.clone(), w)))
        .collect();
    for (a, _) in &elems {
        for rule in &provisional.rules[p.rules.len()..] {
            if let Some(v) = provisional.apply_rule(rule, a, a)? {
                if !v.is_zero() {
                    return Err(Error::NotAlternating(format!("θ({0}, {0}) = {1}", p.format_elem(a), provisional.format_vector(&v))));
                }
            }
        }
    }
    let mut support_weight: Vec<Option<i64>> = alloc::vec![None; c.space.len()];
    for (i, (a, wa)) in elems.iter().enumerate() {
        for (b, wb) in &elems[i + 1..] {
            for (&k, _) in &theta(&provisional, z0, a, b)? {
                let w = wa + wb;
                support_weight[k] = Some(support_weight[k].map_or(w, |x| x.max(w)));
            }
        }
    }
    let weights: Vec<i64> = c
        .weights
        .iter()
        .zip(&support_weight)
        .map(|(given, seen)| given.or(*seen).unwrap_or(1))
        .collect();
    let nt = assemble(p, c, &weights);
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    for &m in windows {
        let j = check_jacobi(&nt, m).map_err(alternating)?;
        if j.is_fails() {
            return Err(Error::NotCocycle(j.witness.unwrap_or_default()));
        }
        let qn = truncate(p, m)?;
        let qt = truncate(&nt, m).map_err(alternating)?;
        rows.push(window_report(p, &nt, z0, c, &qn, &qt, &mut warnings)?);
    }
    let mut verdicts = alloc::vec![Verdict::holds("cocycle", top)];
    if rows.iter().any(|r| r.center_formula.is_some()) {
        let bad = rows.iter().find(|r| r.center_formula == Some(false));
        verdicts.push(match bad {
            None => Verdict::holds("center_formula", top),
            Some(r) => Verdict::fails(
                "center_formula",
                r.window,
                "Center(N_θ) differs from (θ^⊥ ∩ Center(N)) + V".into(),
            ),
        });
    }
    Ok(CentralExtension {
        presentation: nt,
        report: CentralReport {
            weights: c.space.iter().cloned().zip(weights).collect(),
            windows: rows,
            verdicts,
            warnings,
        },
    })
}

fn window_report(
    p: &Presentation,
    nt: &Presentation,
    z0: usize,
    c: &CocycleRule,
    qn: &FiniteQuotient,
    qt: &FiniteQuotient,
    warnings: &mut Vec<String>,
) -> Result<CentralWindow> {
    let m = qn.window();
    let n = qn.dim();
    let elems: Vec<Elem> = qn.basis().iter().map(|b| b.elem.clone()).collect();
    let mut table = alloc::vec![alloc::vec![SparseVector::new(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let t = theta(nt, z0, &elems[i], &elems[j])?;
            table[j][i] = t.neg();
            table[i][j] = t;
        }
    }

    // ν([x, y]) = θ(x, y), unknowns ν_k(e) for every e met in a bracket.
    let mut cols: BTreeMap<(usize, Elem), usize> = BTreeMap::new();
    let mut eq_rows = Vec::new();
    let mut rhs = SparseVector::new();
    for i in 0..n {
        for j in i + 1..n {
            let br: ElemVector = p.bracket_elems(&elems[i], &elems[j])?;
            for k in 0..c.space.len() {
                let target = table[i][j].coeff(&k);
                if br.is_zero() && target.is_zero() {
                    continue;
                }
                let mut row = SparseVector::new();
                for (e, x) in &br {
                    let next = cols.len();
                    let col = *cols.entry((k, e.clone())).or_insert(next);
                    row.add_term(col, x);
                }
                if !target.is_zero() {
                    rhs.set(eq_rows.len(), target);
                }
                eq_rows.push(row);
            }
        }
    }
    let system = Matrix::from_sparse_rows(cols.len(), eq_rows);
    let coboundary = solve(&system, &rhs).map(|x| {
        let mut nu: BTreeMap<&Elem, SparseVector> = BTreeMap::new();
        for ((k, e), &col) in &cols {
            let v = x.coeff(&col);
            if !v.is_zero() {
                nu.entry(e).or_default().set(*k, v);
            }
        }
        nu.into_iter()
            .map(|(e, v)| {
                let value = format_combination(v.iter().map(|(&k, x)| (c.space[k].clone(), x)));
                (p.format_elem(e), value)
            })
            .collect()
    });

    // θ^⊥ = {x : θ(x, y) = 0 for all y in the window}.
    let mut perp_rows = Vec::new();
    for y in 0..n {
        for k in 0..c.space.len() {
            let row: SparseVector = table
                .iter()
                .enumerate()
                .filter_map(|(x, tx)| {
                    let v = tx[y].coeff(&k);
                    (!v.is_zero()).then_some((x, v))
                })
                .collect();
            if !row.is_zero() {
                perp_rows.push(row);
            }
        }
    }
    let perp = Subspace::span(n, &kernel_basis(&Matrix::from_sparse_rows(n, perp_rows)));

    let zpos: Vec<Option<usize>> = (0..c.space.len())
        .map(|k| qt.position(&Elem::new(z0 + k, Vec::new())))
        .collect();
    let center_t = center(qt);
    let center_formula = if zpos.iter().all(Option::is_some) {
        let inner = perp.intersection(&center(qn));
        let mut gens: Vec<SparseVector> = inner.basis().iter().map(|v| qt.from_elems(&qn.to_elems(v))).collect();
        gens.extend(zpos.iter().map(|z| SparseVector::unit(z.unwrap())));
        let rhs_space = Subspace::span(qt.dim(), &gens);
        Some(rhs_space.contains_subspace(&center_t) && center_t.contains_subspace(&rhs_space))
    } else {
        warnings.push(format!("window {m}: part of V lies above the window; center formula not compared"));
        None
    };
    Ok(CentralWindow {
        window: m,
        coboundary,
        theta_perp: qn.format_subspace(&perp),
        theta_perp_dim: perp.dim(),
        center_dim: center_t.dim(),
        center_formula,
    })
}
