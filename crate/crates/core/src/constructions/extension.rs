use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{const_idx, Construction};
use crate::derivations::{center_and_inner, d11_with, layer_one, nil_subspace_commuting, torus_of_quotient, torus_system, TorusDescription};
use crate::exactlin::{is_nilpotent, solve, Matrix, Scalar, SparseVector, Subspace};
use crate::filtration::{series, truncate, FiniteQuotient, SeriesChain, SeriesKind};
use crate::presentation::{
    check_jacobi, format_combination, Addend, BracketRule, CmpOp, Coeff, Elem, ElemVector, Guard, IntExpr,
    Presentation, Term,
};
use crate::{Error, Result, Verdict};

const MAX_FIT_DEGREE: u32 = 2;
const MAX_SHIFT: i64 = 3;

fn check_window(p: &Presentation, t: &TorusDescription) -> Result<()> {
    let q = truncate(p, t.window)?;
    let elems: Vec<&Elem> = q.basis().iter().map(|b| &b.elem).collect();
    if elems.len() != t.elems.len() || elems.iter().zip(&t.elems).any(|(a, b)| *a != b) {
        return Err(Error::WindowMismatch(format!(
            "basis of {} at window {} differs from the torus basis",
            p.name, t.window
        )));
    }
    Ok(())
}

fn complement_names(p: &Presentation, s: usize) -> Vec<String> {
    let mut stem = String::from("x");
    loop {
        let names: Vec<String> = (1..=s).map(|k| format!("{stem}{k}")).collect();
        if names.iter().all(|n| p.gen_index(n).is_none()) {
            return names;
        }
        stem.push('x');
    }
}

/// Adjoins one complement element per torus generator with `[e, x_k] = t_k(e)`.
///
/// Torus values are known on the window only; they are extended to whole
/// generator families by fitting polynomials in the indices, with finitely
/// many exceptional low indices. Families that resist fitting are extended by
/// zero outside the window, with a warning.
pub fn semidirect_torus(p: &Presentation, t: &TorusDescription) -> Result<Construction> {
    check_window(p, t)?;
    let mut out = p.clone();
    let mut warnings = Vec::new();
    if t.dim() > 0 {
        out.name = format!("{}_ext", p.name);
    }
    for (k, name) in complement_names(p, t.dim()).iter().enumerate() {
        let x = out.add_complement(name);
        let rules = torus_rules(p, t, k, x, &mut warnings)?;
        out.rules.extend(rules);
    }
    Ok(Construction {
        presentation: out,
        warnings,
    })
}

fn scale_rule(gen: usize, idx: Vec<IntExpr>, x: usize, coeff: Coeff, guard: Guard) -> BracketRule {
    let term = Term { gen, idx };
    BracketRule {
        left: term.clone(),
        right: Term { gen: x, idx: Vec::new() },
        result: vec![Addend { coeff, term }],
        guard,
        additive: false,
    }
}

fn torus_rules(
    p: &Presentation,
    t: &TorusDescription,
    k: usize,
    x: usize,
    warnings: &mut Vec<String>,
) -> Result<Vec<BracketRule>> {
    let mut by_gen: BTreeMap<usize, Vec<(Vec<i64>, Scalar)>> = BTreeMap::new();
    for (i, e) in t.elems.iter().enumerate() {
        by_gen.entry(e.gen).or_default().push((e.idx.clone(), t.values[k][i].clone()));
    }
    let mut rules = Vec::new();
    for (gen, g) in p.generators.iter().enumerate() {
        let points = by_gen.remove(&gen).unwrap_or_default();
        let constant_rules = |pts: &[(Vec<i64>, Scalar)], rules: &mut Vec<BracketRule>| {
            for (idx, v) in pts {
                if !v.is_zero() {
                    rules.push(scale_rule(gen, const_idx(idx), x, Coeff::constant(v.clone()), Guard::new()));
                }
            }
        };
        if g.arity() == 0 {
            if points.is_empty() {
                warnings.push(format!("{} is outside window {}; x{} acts on it by 0", g.name, t.window, k + 1));
            }
            constant_rules(&points, &mut rules);
            continue;
        }
        if points.is_empty() {
            warnings.push(format!(
                "no element of `{}` lies in window {}; x{} acts on it by 0",
                g.name,
                t.window,
                k + 1
            ));
            continue;
        }
        let lower = if g.arity() == 1 { g.domain.lower_bound(&g.vars[0]) } else { None };
        let shifts = if lower.is_some() { MAX_SHIFT } else { 0 };
        let vars: Vec<IntExpr> = g.vars.iter().map(|v| IntExpr::var(v)).collect();
        let mut done = false;
        'fit: for degree in 0..=MAX_FIT_DEGREE {
            for delta in 0..=shifts {
                let (region, excluded): (Vec<_>, Vec<_>) = points
                    .iter()
                    .cloned()
                    .partition(|(idx, _)| lower.is_none_or(|lb| idx[0] >= lb + delta));
                let mut missing = false;
                if let Some(lb) = lower {
                    for i in lb..lb + delta {
                        missing |= p.in_domain(&Elem::new(gen, vec![i]))? && !excluded.iter().any(|(idx, _)| idx[0] == i);
                    }
                }
                if missing {
                    continue;
                }
                let Some(coeff) = fit_polynomial(&g.vars, &region, degree) else {
                    continue;
                };
                if let Some(coeff) = coeff {
                    let guard = match lower {
                        Some(lb) if delta > 0 => Guard::new().ge(vars[0].clone(), lb + delta),
                        _ => Guard::new(),
                    };
                    rules.push(scale_rule(gen, vars.clone(), x, coeff, guard));
                }
                constant_rules(&excluded, &mut rules);
                done = true;
                break 'fit;
            }
        }
        if !done {
            warnings.push(format!(
                "torus values on `{}` follow no polynomial of degree at most {MAX_FIT_DEGREE}; x{} is defined on window {} only",
                g.name,
                k + 1,
                t.window
            ));
            constant_rules(&points, &mut rules);
        }
    }
    Ok(rules)
}

/// Exponent vectors of total degree at most `degree` in `r` variables.
fn monomials(r: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; r]];
    for _ in 0..degree {
        let mut next = Vec::new();
        for m in &out {
            for v in 0..r {
                let mut m2 = m.clone();
                m2[v] += 1;
                if !out.contains(&m2) && !next.contains(&m2) {
                    next.push(m2);
                }
            }
        }
        out.extend(next);
    }
    out
}

/// Polynomial of degree at most `degree` through all `points`, as a coefficient.
///
/// `None` if no such polynomial exists or there are too few points to confirm
/// one; `Some(None)` for the zero polynomial.
fn fit_polynomial(vars: &[String], points: &[(Vec<i64>, Scalar)], degree: u32) -> Option<Option<Coeff>> {
    let monos = monomials(vars.len(), degree);
    let needed = if degree == 0 { 1 } else { monos.len() + 1 };
    if points.len() < needed {
        return None;
    }
    let rows: Vec<SparseVector> = points
        .iter()
        .map(|(idx, _)| {
            monos
                .iter()
                .enumerate()
                .map(|(c, m)| {
                    let v: i128 = m.iter().zip(idx).map(|(&e, &i)| (i as i128).pow(e)).product();
                    (c, Scalar::from_integer(v.into()))
                })
                .collect()
        })
        .collect();
    let rhs: SparseVector = points.iter().enumerate().map(|(r, (_, v))| (r, v.clone())).collect();
    let sol = solve(&Matrix::from_sparse_rows(monos.len(), rows), &rhs)?;
    if sol.is_zero() {
        return Some(None);
    }
    if sol.iter().all(|(&c, _)| monos[c].iter().all(|&e| e == 0)) {
        return Some(Some(Coeff::constant(sol.coeff(&0))));
    }
    let mut denom = num_bigint::BigInt::one();
    for (_, c) in &sol {
        denom = denom.lcm(c.denom());
    }
    let mut expr: Option<IntExpr> = None;
    let terms: Vec<_> = sol.iter().collect();
    for &(&c, v) in terms.iter().rev() {
        let n = (v * Scalar::from_integer(denom.clone())).to_integer().to_i64()?;
        let mut factor: Option<IntExpr> = None;
        for (v, &e) in vars.iter().zip(&monos[c]) {
            for _ in 0..e {
                factor = Some(match factor {
                    None => IntExpr::var(v),
                    Some(f) => f * IntExpr::var(v),
                });
            }
        }
        let mag = n.abs();
        let term = match factor {
            None => IntExpr::Const(mag),
            Some(f) if mag == 1 => f,
            Some(f) => IntExpr::Const(mag) * f,
        };
        expr = Some(match expr {
            None if n < 0 => -term,
            None => term,
            Some(acc) if n < 0 => acc - term,
            Some(acc) => acc + term,
        });
    }
    Some(Some(Coeff {
        scale: Scalar::one() / Scalar::from_integer(denom),
        poly: expr,
    }))
}

/// How one complement element acts on the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    /// The `k`-th generator of the maximal torus computed on the largest window.
    Torus(usize),
    /// `scale · ad_elem`.
    Inner { elem: Elem, scale: Scalar },
}

/// Data for `R = N ⊕ Q` with `Q` spanned by one complement element per action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    pub base: Presentation,
    pub actions: Vec<Action>,
    /// `[x_i, x_j] = v` with `v` in the base; unlisted pairs bracket to 0.
    pub complement_brackets: Vec<(usize, usize, ElemVector)>,
}

impl ExtensionSpec {
    /// One complement element per generator of the maximal torus at `window`.
    pub fn full_torus(base: Presentation, window: i64) -> Result<Self> {
        let s = torus_system(&base, window)?.dim();
        Ok(Self {
            base,
            actions: (0..s).map(Action::Torus).collect(),
            complement_brackets: Vec::new(),
        })
    }
}

/// Per-window results of the extension checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionWindow {
    pub window: i64,
    pub dim: usize,
    pub codim: usize,
    pub layer_one_dim: usize,
    pub rank: usize,
    pub square_in_radical: bool,
    pub derived_containment: bool,
    pub codim_equals_rank: Option<bool>,
    pub center_dim: usize,
    pub der_equals_inner: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    pub windows: Vec<ExtensionWindow>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub presentation: Presentation,
    pub report: ExtensionReport,
}

/// Assembles `R` from the spec and validates it on every window.
///
/// A Jacobi failure, a complement combination acting nilpotently on `N/N^2`,
/// or more complement elements than `dim N/N^2` abort with an error; the
/// remaining checks are reported as verdicts.
pub fn build_extension(spec: &ExtensionSpec, windows: &[i64]) -> Result<Extension> {
    let Some(&top) = windows.iter().max() else {
        return Err(Error::Malformed("no windows given".into()));
    };
    let base = &spec.base;
    let uses_torus = spec.actions.iter().any(|a| matches!(a, Action::Torus(_)));
    let torus = if uses_torus { Some(torus_system(base, top)?) } else { None };
    let s = spec.actions.len();
    let full_torus = torus.as_ref().is_some_and(|t| {
        t.dim() == s && (0..s).all(|k| spec.actions.iter().filter(|a| **a == Action::Torus(k)).count() == 1)
    });
    let names = complement_names(base, s);
    let mut r = base.clone();
    let mut warnings = Vec::new();
    if s > 0 {
        r.name = format!("{}_ext", base.name);
    }
    let xs: Vec<usize> = names.iter().map(|n| r.add_complement(n)).collect();
    for (a, &x) in spec.actions.iter().zip(&xs) {
        let rules = match a {
            Action::Torus(k) => {
                let t = torus.as_ref().expect("torus computed");
                if *k >= t.dim() {
                    return Err(Error::Malformed(format!("torus has dimension {}, no generator {}", t.dim(), k + 1)));
                }
                torus_rules(base, t, *k, x, &mut warnings)?
            }
            Action::Inner { elem, scale } => inner_rules(base, elem, scale, x)?,
        };
        r.rules.extend(rules);
    }
    for (i, j, v) in &spec.complement_brackets {
        if i == j || *i >= s || *j >= s {
            return Err(Error::Malformed(format!("bad complement pair ({}, {})", i + 1, j + 1)));
        }
        let result = v
            .iter()
            .map(|(e, c)| Addend {
                coeff: Coeff::constant(c.clone()),
                term: Term {
                    gen: e.gen,
                    idx: const_idx(&e.idx),
                },
            })
            .collect();
        r.add_rule(
            Term { gen: xs[*i], idx: Vec::new() },
            Term { gen: xs[*j], idx: Vec::new() },
            result,
            Guard::new(),
        );
    }
    let mut rows = Vec::new();
    for &m in windows {
        rows.push(validate_window(base, &r, &names, m, full_torus, &mut warnings)?);
    }
    let all = |f: &dyn Fn(&ExtensionWindow) -> bool| rows.iter().all(f);
    let verdict = |name: &str, ok: bool, witness: &str| {
        if ok {
            Verdict::holds(name, top)
        } else {
            let bad = rows.iter().map(|w| w.window).next().unwrap_or(top);
            Verdict::fails(name, bad, witness.into())
        }
    };
    let mut verdicts = vec![
        Verdict::holds("jacobi", top),
        verdict("square_in_radical", all(&|w| w.square_in_radical), "[R, R] has a complement component"),
        Verdict::holds("non_nilpotent_action", top),
        Verdict::holds("codim_bound", top),
    ];
    if full_torus {
        verdicts.push(verdict(
            "codim_equals_rank",
            all(&|w| w.codim_equals_rank == Some(true)),
            "codim N differs from the rank of N",
        ));
    }
    verdicts.push(verdict(
        "derived_containment",
        all(&|w| w.derived_containment),
        "R^[i+1] is not inside N^(2^(i-1))",
    ));
    Ok(Extension {
        presentation: r,
        report: ExtensionReport {
            windows: rows,
            verdicts,
            warnings,
        },
    })
}

/// Rules `[e, x] = scale·[y, e]` obtained by specializing the base rules at `y`.
fn inner_rules(p: &Presentation, y: &Elem, scale: &Scalar, x: usize) -> Result<Vec<BracketRule>> {
    if !p.in_domain(y)? || p.is_complement(y) {
        return Err(Error::IndexOutOfDomain(p.format_elem(y)));
    }
    let xt = Term { gen: x, idx: Vec::new() };
    let mut out = Vec::new();
    for rule in &p.rules {
        let l = unify(p, &rule.left, y);
        let r = unify(p, &rule.right, y);
        if rule.additive && l.is_some() && r.is_some() {
            return Err(Error::Unsupported(format!(
                "additive rule [{}, …] matches {} on both sides",
                p.generators[rule.left.gen].name,
                p.format_elem(y)
            )));
        }
        for (m, other, sign) in [(l, &rule.right, 1), (r, &rule.left, -1)] {
            let Some((binds, extra)) = m else {
                continue;
            };
            let mut sub = |e: &IntExpr| {
                e.map_vars(&mut |v| binds.iter().find(|(n, _)| n == v).map(|&(_, c)| IntExpr::Const(c)))
            };
            let left = Term {
                gen: other.gen,
                idx: other.idx.iter().map(&mut sub).collect(),
            };
            let c = scale * Scalar::from_integer(sign.into());
            let result = rule
                .result
                .iter()
                .map(|a| Addend {
                    coeff: a.coeff.map_exprs(&mut sub).scaled(&c),
                    term: Term {
                        gen: a.term.gen,
                        idx: a.term.idx.iter().map(&mut sub).collect(),
                    },
                })
                .collect();
            let mut guard = rule.guard.map_exprs(&mut sub);
            for (e, v) in &extra {
                guard = guard.cmp(sub(e), CmpOp::Eq, *v);
            }
            out.push(BracketRule {
                left,
                right: xt.clone(),
                result,
                guard,
                additive: rule.additive,
            });
        }
    }
    Ok(out)
}

type Unifier = (Vec<(String, i64)>, Vec<(IntExpr, i64)>);

/// Matches a rule term against a concrete element: variable bindings plus
/// equations for non-variable index positions.
fn unify(p: &Presentation, t: &Term, y: &Elem) -> Option<Unifier> {
    if t.gen != y.gen || t.idx.len() != y.idx.len() {
        return None;
    }
    let env = p.env();
    let mut binds: Vec<(String, i64)> = Vec::new();
    let mut extra = Vec::new();
    for (e, &v) in t.idx.iter().zip(&y.idx) {
        match e.as_var() {
            Some(name) if !env.is_param(name) => match binds.iter().find(|(n, _)| n == name) {
                Some(&(_, b)) if b != v => return None,
                Some(_) => {}
                None => binds.push((name.into(), v)),
            },
            _ => match e.eval(&env) {
                Ok(c) if c != v => return None,
                Ok(_) => {}
                Err(_) => extra.push((e.clone(), v)),
            },
        }
    }
    Some((binds, extra))
}

/// `N^k` (one-based) from a lower central chain.
fn lcs_term(c: &SeriesChain, k: usize) -> Subspace {
    match c.terms.get(k - 1) {
        Some(t) => t.clone(),
        None if c.stabilized => c.terms.last().cloned().expect("nonempty chain"),
        None => Subspace::zero(c.terms[0].ambient()),
    }
}

fn lift(from: &FiniteQuotient, to: &FiniteQuotient, s: &Subspace) -> Subspace {
    let vs: Vec<SparseVector> = s.basis().iter().map(|v| to.from_elems(&from.to_elems(v))).collect();
    Subspace::span(to.dim(), &vs)
}

fn validate_window(
    base: &Presentation,
    r: &Presentation,
    names: &[String],
    m: i64,
    full_torus: bool,
    warnings: &mut Vec<String>,
) -> Result<ExtensionWindow> {
    let jac = check_jacobi(r, m)?;
    if jac.is_fails() {
        return Err(Error::JacobiFailure(jac.witness.unwrap_or_default()));
    }
    let qn = truncate(base, m)?;
    let qr = truncate(r, m)?;
    let s = names.len();
    let cpos: Vec<usize> = (0..qr.dim()).filter(|&i| qr.is_complement(i)).collect();
    debug_assert_eq!(cpos.len(), s);
    let npos: Vec<usize> = qn
        .basis()
        .iter()
        .map(|b| qr.position(&b.elem).expect("base element in the extension window"))
        .collect();

    let mut square_in_radical = true;
    for i in 0..qr.dim() {
        for j in i + 1..qr.dim() {
            if qr.bracket_basis(i, j).keys().any(|k| qr.is_complement(*k)) {
                square_in_radical = false;
            }
        }
    }

    let (l2, free) = layer_one(&qn);
    let blocks: Vec<Matrix> = cpos
        .iter()
        .map(|&x| {
            let cols: Vec<SparseVector> = npos
                .iter()
                .map(|&j| qn.from_elems(&qr.to_elems(qr.bracket_basis(j, x))))
                .collect();
            d11_with(&l2, &free, &Matrix::from_columns(qn.dim(), &cols))
        })
        .collect();
    match nil_subspace_commuting(&blocks) {
        Some(nil) if !nil.is_zero() => {
            let c = &nil.basis()[0];
            let combo = format_combination(c.iter().map(|(&k, v)| (names[k].clone(), v)));
            return Err(Error::RadicalViolation(format!("{combo} acts nilpotently on N/N^2 at window {m}")));
        }
        Some(_) => {}
        None => {
            if let Some(k) = blocks.iter().position(is_nilpotent) {
                return Err(Error::RadicalViolation(format!(
                    "{} acts nilpotently on N/N^2 at window {m}",
                    names[k]
                )));
            }
            warnings.push(format!(
                "window {m}: complement actions on N/N^2 do not commute; only single generators were tested"
            ));
        }
    }

    if s > free.len() {
        return Err(Error::CodimBound {
            codim: s,
            bound: free.len(),
        });
    }
    let rank = torus_of_quotient(&qn).dim();

    let dr = series(&qr, SeriesKind::Derived);
    let cn = series(&qn, SeriesKind::LowerCentral);
    let mut derived_containment = true;
    for i in 1..dr.terms.len() {
        let k = 1usize.checked_shl(i as u32 - 1).unwrap_or(usize::MAX).min(cn.terms.len() + 1);
        let nk = lift(&qn, &qr, &lcs_term(&cn, k));
        if !nk.contains_subspace(&dr.terms[i]) {
            derived_containment = false;
        }
    }

    let centre = center_and_inner(&qr);
    Ok(ExtensionWindow {
        window: m,
        dim: qr.dim(),
        codim: s,
        layer_one_dim: free.len(),
        rank,
        square_in_radical,
        derived_containment,
        codim_equals_rank: full_torus.then_some(s == rank),
        center_dim: centre.center.dim(),
        der_equals_inner: centre.der_equals_inner,
    })
}
