//! New presentations from old: torus and general extensions, central
//! extensions, current algebras, direct sums, derivation-pair brackets, and
//! exponentials of derivations on windows.

mod central;
mod extension;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::exactlin::{exp_nilpotent, int, Matrix};
use crate::filtration::FiniteQuotient;
use crate::presentation::{Addend, BracketRule, Coeff, Guard, IntExpr, Presentation, Term};
use crate::{Error, Result, Verdict};

pub use central::{central_extension, CentralExtension, CentralReport, CentralWindow, CocycleClause, CocycleRule};
pub use extension::{
    build_extension, semidirect_torus, Action, Extension, ExtensionReport, ExtensionSpec, ExtensionWindow,
};

/// A constructed presentation plus anything the caller should be told about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub presentation: Presentation,
    pub warnings: Vec<String>,
}

fn const_idx(idx: &[i64]) -> Vec<IntExpr> {
    idx.iter().map(|&i| IntExpr::Const(i)).collect()
}

/// Every variable and parameter name appearing anywhere in `p`.
fn used_names(p: &Presentation) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = p.params.iter().map(|(n, _)| n.clone()).collect();
    for g in &p.generators {
        out.extend(g.vars.iter().cloned());
    }
    let _ = p.map_exprs(&mut |x| {
        x.collect_vars(&mut out);
        x.clone()
    });
    out
}

fn fresh(used: &BTreeSet<String>, stem: &str) -> String {
    if !used.contains(stem) {
        return stem.to_string();
    }
    (1..).map(|k| format!("{stem}{k}")).find(|c| !used.contains(c)).unwrap()
}

/// `L ⊗ tC[t]`: every generator gains a degree index `n ≥ 1`, weights add the
/// degree and brackets add degrees.
///
/// `degree_max` is recorded as a parameter; truncation still happens by weight.
pub fn current_algebra(p: &Presentation, degree_max: i64) -> Result<Presentation> {
    if degree_max < 1 {
        return Err(Error::Malformed("degree_max must be at least 1".into()));
    }
    if p.has_complement() {
        return Err(Error::Unsupported("current algebra of a presentation with complement elements".into()));
    }
    let used = used_names(p);
    let n = fresh(&used, "n");
    let mut used2 = used.clone();
    used2.insert(n.clone());
    let m = fresh(&used2, "m");
    let (vn, vm) = (IntExpr::var(&n), IntExpr::var(&m));
    let mut out = p.clone();
    out.name = format!("{}_current", p.name);
    for g in &mut out.generators {
        g.vars.push(n.clone());
        g.domain = g.domain.clone().ge(vn.clone(), 1);
    }
    for w in &mut out.weights {
        w.pattern.push(vn.clone());
        w.value = w.value.clone() + vn.clone();
    }
    for r in &mut out.rules {
        r.left.idx.push(vn.clone());
        r.right.idx.push(vm.clone());
        for a in &mut r.result {
            a.term.idx.push(vn.clone() + vm.clone());
        }
    }
    out.set_param("degree_max", degree_max);
    Ok(out)
}

fn identifier(s: &str) -> String {
    let t: String = s
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if t.starts_with(|c: char| c.is_ascii_alphabetic()) {
        t
    } else {
        format!("p_{t}")
    }
}

/// Disjoint union of bases with component-wise brackets; mixed pairs bracket to 0.
///
/// Parameters are inlined first. Generators of `p2` whose names clash with
/// `p1` are renamed with a prefix, and each renaming is reported.
pub fn direct_sum(p1: &Presentation, p2: &Presentation) -> Construction {
    let a = p1.inline_params();
    let b = p2.inline_params();
    let offset = a.generators.len();
    let mut taken: BTreeSet<String> = a.generators.iter().map(|g| g.name.clone()).collect();
    let prefix = identifier(&b.name);
    let mut warnings = Vec::new();
    let mut out = a.clone();
    out.name = format!("{}_plus_{}", identifier(&a.name), prefix);
    for g in &b.generators {
        let mut g = g.clone();
        if taken.contains(&g.name) {
            let base = format!("{prefix}_{}", g.name);
            let name = if taken.contains(&base) {
                (2..).map(|k| format!("{base}{k}")).find(|c| !taken.contains(c)).unwrap()
            } else {
                base
            };
            warnings.push(format!("generator `{}` of {} renamed to `{name}`", g.name, b.name));
            g.name = name;
        }
        taken.insert(g.name.clone());
        out.generators.push(g);
    }
    let shift = |t: &Term| Term {
        gen: t.gen + offset,
        idx: t.idx.clone(),
    };
    for w in &b.weights {
        let mut w = w.clone();
        w.gen += offset;
        out.weights.push(w);
    }
    for r in &b.rules {
        out.rules.push(BracketRule {
            left: shift(&r.left),
            right: shift(&r.right),
            result: r
                .result
                .iter()
                .map(|x| Addend {
                    coeff: x.coeff.clone(),
                    term: shift(&x.term),
                })
                .collect(),
            guard: r.guard.clone(),
            additive: r.additive,
        });
    }
    Construction {
        presentation: out,
        warnings,
    }
}

/// One of the two partial derivatives on `C[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partial {
    X,
    Y,
}

/// The bracket `d1(f)d2(g) - d1(g)d2(f)` on the monomials `x^a y^b`, `a ≥ r1`, `b ≥ r2`.
///
/// The generator `m(a,b)` stands for `x^a y^b`; its weight is `a + b` shifted
/// so the smallest weight is positive.
pub fn derivation_pair_bracket(r1: i64, r2: i64, d1: Partial, d2: Partial) -> Result<Presentation> {
    if r1 < 0 || r2 < 0 {
        return Err(Error::DomainEscape(format!(
            "exponents start at ({r1}, {r2}); the bracket lowers both by one"
        )));
    }
    let mut p = Presentation::new("derivation_pair");
    let (a, b, c, d) = (IntExpr::var("a"), IntExpr::var("b"), IntExpr::var("c"), IntExpr::var("d"));
    p.add_generator("m", &["a", "b"], Guard::new().ge("a", r1).ge("b", r2));
    let offset = (r1 + r2 - 1).min(2);
    p.add_weight("m", alloc::vec![a.clone(), b.clone()], a.clone() + b.clone() - offset, Guard::new());
    let coeff = match (d1, d2) {
        (Partial::X, Partial::Y) => Some(a.clone() * d.clone() - b.clone() * c.clone()),
        (Partial::Y, Partial::X) => Some(b.clone() * c.clone() - a.clone() * d.clone()),
        _ => None,
    };
    if let Some(poly) = coeff {
        let left = p.term("m", alloc::vec![a.clone(), b.clone()]);
        let right = p.term("m", alloc::vec![c.clone(), d.clone()]);
        let target = p.term("m", alloc::vec![a + c - 1, b + d - 1]);
        p.add_rule(
            left,
            right,
            alloc::vec![Addend {
                coeff: Coeff::poly(poly),
                term: target,
            }],
            Guard::new(),
        );
    }
    Ok(p)
}

/// `exp(d)` on a window with its automorphism certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exponential {
    pub matrix: Matrix,
    pub verdict: Verdict,
}

/// Sums `Σ d^n/n!` on the quotient; refused unless `d` is nilpotent there.
///
/// The verdict checks `E[b_i,b_j] = [E b_i, E b_j]` on all basis pairs and
/// `E·exp(-d) = 1`, exactly.
pub fn exp_derivation(q: &FiniteQuotient, d: &Matrix) -> Result<Exponential> {
    let n = q.dim();
    if d.rows() != n || d.cols() != n {
        return Err(Error::Malformed(format!("derivation is {}x{}, window has dimension {n}", d.rows(), d.cols())));
    }
    let e = exp_nilpotent(d).ok_or(Error::NonTerminating)?;
    let inv = exp_nilpotent(&d.scaled(&int(-1))).ok_or(Error::NonTerminating)?;
    let cols: Vec<_> = (0..n).map(|j| e.column(j)).collect();
    let mut witness = None;
    'pairs: for i in 0..n {
        for j in i + 1..n {
            let lhs = e.apply(q.bracket_basis(i, j));
            let rhs = q.bracket(&cols[i], &cols[j]);
            if lhs != rhs {
                witness = Some(format!(
                    "E[{a}, {b}] = {} but [E {a}, E {b}] = {}",
                    q.format_vector(&lhs),
                    q.format_vector(&rhs),
                    a = q.label(i),
                    b = q.label(j)
                ));
                break 'pairs;
            }
        }
    }
    if witness.is_none() && e.mul(&inv) != Matrix::identity(n) {
        witness = Some("E·exp(-d) is not the identity".into());
    }
    let verdict = match witness {
        None => Verdict::holds("automorphism", q.window()),
        Some(w) => Verdict::fails("automorphism", q.window(), w),
    };
    Ok(Exponential { matrix: e, verdict })
}
