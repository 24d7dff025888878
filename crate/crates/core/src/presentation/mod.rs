//! Countably-based Lie algebras given by guarded bracket rules.

mod check;
mod expr;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_traits::{One, Signed, Zero};

use crate::exactlin::{Scalar, SparseVector};
use crate::{Error, Result};

pub use check::{check_jacobi, classify_weighting, window_kind, Weighting, WindowKind};
pub use expr::{Atom, CmpOp, Coeff, Env, Guard, IntExpr};

/// A basis element: generator position plus concrete indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub gen: usize,
    pub idx: Vec<i64>,
}

impl Elem {
    pub fn new(gen: usize, idx: Vec<i64>) -> Self {
        Self { gen, idx }
    }
}

/// Linear combination of basis elements of a presentation.
pub type ElemVector = SparseVector<Elem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// Index variables; the arity is their count.
    pub vars: Vec<String>,
    pub domain: Guard,
    /// Complement generators sit outside the weight filtration and are never truncated.
    pub complement: bool,
}

impl Generator {
    pub fn arity(&self) -> usize {
        self.vars.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub gen: usize,
    pub idx: Vec<IntExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Addend {
    pub coeff: Coeff,
    pub term: Term,
}

/// `[left, right] = Σ coeff·term` whenever the guard holds.
///
/// Variables are bound by bare-variable index positions of `left` and
/// `right`. Exclusive rules may overlap only where they agree; additive
/// rules are summed on top of whatever the exclusive rules give.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BracketRule {
    pub left: Term,
    pub right: Term,
    pub result: Vec<Addend>,
    pub guard: Guard,
    pub additive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightClause {
    pub gen: usize,
    /// Each position is a variable or a constant.
    pub pattern: Vec<IntExpr>,
    pub value: IntExpr,
    pub guard: Guard,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Presentation {
    pub name: String,
    pub params: Vec<(String, i64)>,
    pub generators: Vec<Generator>,
    pub weights: Vec<WeightClause>,
    pub rules: Vec<BracketRule>,
}

/// Basis element of a window together with its weight (`None` for complements).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisEntry {
    pub elem: Elem,
    pub weight: Option<i64>,
}

const PROBE_LO: i64 = -3;
const PROBE_HI: i64 = 10;
const SCAN_POINT_CAP: u64 = 4_000_000;

impl Presentation {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn param(&self, name: &str) -> Option<i64> {
        self.params.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn set_param(&mut self, name: &str, value: i64) {
        match self.params.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = value,
            None => self.params.push((name.into(), value)),
        }
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn add_generator(&mut self, name: &str, vars: &[&str], domain: Guard) -> usize {
        self.generators.push(Generator {
            name: name.into(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            domain,
            complement: false,
        });
        self.generators.len() - 1
    }

    pub fn add_complement(&mut self, name: &str) -> usize {
        self.generators.push(Generator {
            name: name.into(),
            vars: Vec::new(),
            domain: Guard::new(),
            complement: true,
        });
        self.generators.len() - 1
    }

    /// Term for generator `name`; panics on an unknown name (builder convenience).
    pub fn term(&self, name: &str, idx: Vec<IntExpr>) -> Term {
        let gen = self
            .gen_index(name)
            .unwrap_or_else(|| panic!("unknown generator {name}"));
        Term { gen, idx }
    }

    pub fn add_weight(&mut self, name: &str, pattern: Vec<IntExpr>, value: IntExpr, guard: Guard) {
        let gen = self.term(name, Vec::new()).gen;
        self.weights.push(WeightClause {
            gen,
            pattern,
            value,
            guard,
        });
    }

    pub fn add_rule(&mut self, left: Term, right: Term, result: Vec<Addend>, guard: Guard) {
        self.rules.push(BracketRule {
            left,
            right,
            result,
            guard,
            additive: false,
        });
    }

    pub fn add_additive_rule(&mut self, left: Term, right: Term, result: Vec<Addend>, guard: Guard) {
        self.rules.push(BracketRule {
            left,
            right,
            result,
            guard,
            additive: true,
        });
    }

    pub fn env(&self) -> Env<'_> {
        Env::new(&self.params)
    }

    pub fn elem(&self, name: &str, idx: &[i64]) -> Elem {
        Elem::new(self.term(name, Vec::new()).gen, idx.to_vec())
    }

    pub fn unit(&self, name: &str, idx: &[i64]) -> ElemVector {
        ElemVector::unit(self.elem(name, idx))
    }

    pub fn format_elem(&self, e: &Elem) -> String {
        let name = &self.generators[e.gen].name;
        if e.idx.is_empty() {
            return name.clone();
        }
        let mut s = format!("{name}(");
        for (k, i) in e.idx.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            let _ = write!(s, "{i}");
        }
        s.push(')');
        s
    }

    pub fn format_vector(&self, v: &ElemVector) -> String {
        format_combination(v.iter().map(|(e, c)| (self.format_elem(e), c)))
    }

    pub fn is_complement(&self, e: &Elem) -> bool {
        self.generators[e.gen].complement
    }

    pub fn has_complement(&self) -> bool {
        self.generators.iter().any(|g| g.complement)
    }

    pub fn in_domain(&self, e: &Elem) -> Result<bool> {
        let g = self
            .generators
            .get(e.gen)
            .ok_or_else(|| Error::UnknownName(format!("generator #{}", e.gen)))?;
        if g.arity() != e.idx.len() {
            return Ok(false);
        }
        let mut env = self.env();
        for (v, &i) in g.vars.iter().zip(&e.idx) {
            env.bind(v, i);
        }
        g.domain.eval(&env)
    }

    fn require_domain(&self, e: &Elem) -> Result<()> {
        if self.in_domain(e)? {
            Ok(())
        } else {
            Err(Error::IndexOutOfDomain(self.format_elem(e)))
        }
    }

    /// Weight of a non-complement element from the first matching clause.
    pub fn weight(&self, e: &Elem) -> Result<Option<i64>> {
        if self.is_complement(e) {
            return Ok(None);
        }
        for clause in self.weights.iter().filter(|c| c.gen == e.gen) {
            if clause.pattern.len() != e.idx.len() {
                continue;
            }
            let mut env = self.env();
            let mut ok = true;
            for (p, &i) in clause.pattern.iter().zip(&e.idx) {
                match p.as_var() {
                    Some(v) if !env.is_param(v) && !env.is_bound(v) => env.bind(v, i),
                    _ => {}
                }
                if p.eval(&env)? != i {
                    ok = false;
                    break;
                }
            }
            if ok && clause.guard.eval(&env)? {
                return Ok(Some(clause.value.eval(&env)?));
            }
        }
        Err(Error::Malformed(format!("no weight clause covers {}", self.format_elem(e))))
    }

    fn bind_terms<'a>(&'a self, terms: [(&'a Term, &Elem); 2]) -> Result<Option<Env<'a>>> {
        let mut env = self.env();
        for (t, e) in terms {
            if t.gen != e.gen || t.idx.len() != e.idx.len() {
                return Ok(None);
            }
            for (x, &i) in t.idx.iter().zip(&e.idx) {
                if let Some(v) = x.as_var() {
                    if !env.is_param(v) && !env.is_bound(v) {
                        env.bind(v, i);
                    }
                }
            }
        }
        for (t, e) in terms {
            for (x, &i) in t.idx.iter().zip(&e.idx) {
                if x.eval(&env)? != i {
                    return Ok(None);
                }
            }
        }
        Ok(Some(env))
    }

    pub(crate) fn apply_rule(&self, rule: &BracketRule, a: &Elem, b: &Elem) -> Result<Option<ElemVector>> {
        let Some(env) = self.bind_terms([(&rule.left, a), (&rule.right, b)])? else {
            return Ok(None);
        };
        if !rule.guard.eval(&env)? {
            return Ok(None);
        }
        let mut out = ElemVector::new();
        for add in &rule.result {
            let c = add.coeff.eval(&env)?;
            if c.is_zero() {
                continue;
            }
            let idx = add
                .term
                .idx
                .iter()
                .map(|x| x.eval(&env))
                .collect::<Result<Vec<_>>>()?;
            out.add_term(Elem::new(add.term.gen, idx), &c);
        }
        Ok(Some(out))
    }

    /// Value of one rule on the ordered pair, trying both orientations.
    fn rule_value(&self, rule: &BracketRule, a: &Elem, b: &Elem) -> Result<Option<ElemVector>> {
        let fwd = self.apply_rule(rule, a, b)?;
        let rev = self.apply_rule(rule, b, a)?.map(|v| v.neg());
        match (fwd, rev) {
            (Some(f), Some(r)) if f != r => Err(Error::AmbiguousRule(self.pair_label(a, b))),
            (Some(f), _) => Ok(Some(f)),
            (None, r) => Ok(r),
        }
    }

    fn pair_label(&self, a: &Elem, b: &Elem) -> String {
        format!("[{}, {}]", self.format_elem(a), self.format_elem(b))
    }

    /// Bracket of two basis elements, before any truncation.
    pub fn bracket_elems(&self, a: &Elem, b: &Elem) -> Result<ElemVector> {
        self.require_domain(a)?;
        self.require_domain(b)?;
        if a == b {
            return Ok(ElemVector::new());
        }
        let mut exclusive: Option<ElemVector> = None;
        let mut extra = ElemVector::new();
        for rule in &self.rules {
            let Some(v) = self.rule_value(rule, a, b)? else {
                continue;
            };
            if rule.additive {
                extra.axpy(&Scalar::one(), &v);
            } else if let Some(prev) = &exclusive {
                if *prev != v {
                    return Err(Error::AmbiguousRule(self.pair_label(a, b)));
                }
            } else {
                exclusive = Some(v);
            }
        }
        let mut out = exclusive.unwrap_or_default();
        out.axpy(&Scalar::one(), &extra);
        for e in out.keys() {
            self.require_domain(e)?;
        }
        Ok(out)
    }

    pub fn bracket(&self, x: &ElemVector, y: &ElemVector) -> Result<ElemVector> {
        let mut out = ElemVector::new();
        for (a, ca) in x {
            for (b, cb) in y {
                if a == b {
                    continue;
                }
                let v = self.bracket_elems(a, b)?;
                out.axpy(&(ca * cb), &v);
            }
        }
        Ok(out)
    }

    /// Structural checks: names, arities, and variable binding.
    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for g in &self.generators {
            if !names.insert(g.name.as_str()) {
                return Err(Error::Malformed(format!("generator `{}` declared twice", g.name)));
            }
            if g.complement && g.arity() > 0 {
                return Err(Error::Malformed(format!("complement `{}` must be a single element", g.name)));
            }
            let mut used = BTreeSet::new();
            g.domain.collect_vars(&mut used);
            self.check_bound(&used, &g.vars, &g.name)?;
        }
        for w in &self.weights {
            let g = self.generator(w.gen)?;
            if g.complement {
                return Err(Error::Malformed(format!("complement `{}` has no weight", g.name)));
            }
            if w.pattern.len() != g.arity() {
                return Err(Error::Malformed(format!("weight pattern arity for `{}`", g.name)));
            }
            let mut bound = Vec::new();
            for p in &w.pattern {
                match p {
                    IntExpr::Var(v) => bound.push(v.clone()),
                    IntExpr::Const(_) => {}
                    _ => return Err(Error::Malformed(format!("weight pattern for `{}` must use variables or constants", g.name))),
                }
            }
            let mut used = BTreeSet::new();
            w.value.collect_vars(&mut used);
            w.guard.collect_vars(&mut used);
            self.check_bound(&used, &bound, &g.name)?;
        }
        for r in &self.rules {
            let mut bound = Vec::new();
            for t in [&r.left, &r.right] {
                self.check_term(t)?;
                bound.extend(t.idx.iter().filter_map(|x| x.as_var().map(String::from)));
            }
            let mut used = BTreeSet::new();
            for t in [&r.left, &r.right] {
                for x in &t.idx {
                    x.collect_vars(&mut used);
                }
            }
            r.guard.collect_vars(&mut used);
            for a in &r.result {
                self.check_term(&a.term)?;
                if let Some(p) = &a.coeff.poly {
                    p.collect_vars(&mut used);
                }
                for x in &a.term.idx {
                    x.collect_vars(&mut used);
                }
            }
            self.check_bound(&used, &bound, "bracket rule")?;
        }
        Ok(())
    }

    fn generator(&self, gen: usize) -> Result<&Generator> {
        self.generators
            .get(gen)
            .ok_or_else(|| Error::UnknownName(format!("generator #{gen}")))
    }

    fn check_term(&self, t: &Term) -> Result<()> {
        let g = self.generator(t.gen)?;
        if g.arity() != t.idx.len() {
            return Err(Error::Malformed(format!(
                "`{}` takes {} indices, got {}",
                g.name,
                g.arity(),
                t.idx.len()
            )));
        }
        Ok(())
    }

    fn check_bound(&self, used: &BTreeSet<String>, bound: &[String], what: &str) -> Result<()> {
        for v in used {
            if self.param(v).is_none() && !bound.contains(v) {
                return Err(Error::UnknownName(format!("{v} (in {what})")));
            }
        }
        Ok(())
    }

    /// Elements of one generator inside the probe box used for overlap detection.
    fn probe_elems(&self, gen: usize) -> Result<Vec<Elem>> {
        let arity = self.generators[gen].arity();
        let mut out = Vec::new();
        let mut idx = vec![PROBE_LO; arity];
        loop {
            let e = Elem::new(gen, idx.clone());
            if self.in_domain(&e)? {
                out.push(e);
            }
            if !advance(&mut idx, &vec![PROBE_LO; arity], &vec![PROBE_HI; arity]) {
                break;
            }
        }
        Ok(out)
    }

    /// Rejects exclusive rules that disagree somewhere on the probe box.
    pub fn check_overlaps(&self) -> Result<()> {
        let mut pairs = BTreeSet::new();
        for r in self.rules.iter().filter(|r| !r.additive) {
            let key = (r.left.gen.min(r.right.gen), r.left.gen.max(r.right.gen));
            if !pairs.insert(key) {
                continue;
            }
            let count = self
                .rules
                .iter()
                .filter(|s| !s.additive)
                .filter(|s| (s.left.gen.min(s.right.gen), s.left.gen.max(s.right.gen)) == key)
                .count();
            if count < 2 {
                continue;
            }
            let xs = self.probe_elems(key.0)?;
            let ys = if key.0 == key.1 { xs.clone() } else { self.probe_elems(key.1)? };
            for a in &xs {
                for b in &ys {
                    match self.bracket_elems(a, b) {
                        Err(Error::AmbiguousRule(p)) => return Err(Error::Overlap(p)),
                        _ => continue,
                    }
                }
            }
        }
        Ok(())
    }

    /// Every element of weight at most `window`, sorted by (weight, generator, index),
    /// followed by all complement elements.
    pub fn enumerate(&self, window: i64) -> Result<Vec<BasisEntry>> {
        let mut out = Vec::new();
        for (gen, g) in self.generators.iter().enumerate() {
            if g.complement {
                continue;
            }
            for (e, w) in self.scan_generator(gen, window)? {
                out.push(BasisEntry { elem: e, weight: Some(w) });
            }
        }
        out.sort_by(|a, b| (a.weight, &a.elem).cmp(&(b.weight, &b.elem)));
        for (gen, g) in self.generators.iter().enumerate() {
            if g.complement {
                out.push(BasisEntry {
                    elem: Elem::new(gen, Vec::new()),
                    weight: None,
                });
            }
        }
        Ok(out)
    }

    fn scan_generator(&self, gen: usize, window: i64) -> Result<Vec<(Elem, i64)>> {
        let g = &self.generators[gen];
        let lower: Vec<Option<i64>> = g.vars.iter().map(|v| g.domain.lower_bound(v)).collect();
        let mut reach = window.max(1).saturating_add(16);
        loop {
            let lo: Vec<i64> = lower.iter().map(|b| b.unwrap_or(-reach)).collect();
            let hi: Vec<i64> = lo
                .iter()
                .zip(&lower)
                .map(|(&l, b)| if b.is_some() { l.saturating_add(reach) } else { reach })
                .collect();
            let points: u64 = lo
                .iter()
                .zip(&hi)
                .map(|(&l, &h)| (h - l + 1) as u64)
                .try_fold(1u64, |acc, n| acc.checked_mul(n))
                .unwrap_or(u64::MAX);
            if points > SCAN_POINT_CAP {
                return Err(Error::WindowUnbounded(g.name.clone()));
            }
            let mut found = Vec::new();
            let mut escaped = false;
            let mut idx = lo.clone();
            loop {
                let e = Elem::new(gen, idx.clone());
                if self.in_domain(&e)? {
                    let w = self.weight(&e)?.expect("non-complement");
                    if w <= window {
                        let on_shell = idx
                            .iter()
                            .enumerate()
                            .any(|(k, &i)| i == hi[k] || (lower[k].is_none() && i == lo[k]));
                        escaped |= on_shell;
                        found.push((e, w));
                    }
                }
                if !advance(&mut idx, &lo, &hi) {
                    break;
                }
            }
            if !escaped {
                return Ok(found);
            }
            reach = reach.saturating_mul(2);
        }
    }

    /// Replaces parameters by their values everywhere and drops them.
    pub fn inline_params(&self) -> Presentation {
        let params = self.params.clone();
        let mut f = |x: &IntExpr| {
            x.map_vars(&mut |v| params.iter().find(|(n, _)| n == v).map(|&(_, c)| IntExpr::Const(c)))
        };
        let mut p = self.map_exprs(&mut f);
        p.params.clear();
        p
    }

    /// Applies `f` to every index expression, guard expression and coefficient polynomial.
    pub fn map_exprs(&self, f: &mut dyn FnMut(&IntExpr) -> IntExpr) -> Presentation {
        let term = |t: &Term, f: &mut dyn FnMut(&IntExpr) -> IntExpr| Term {
            gen: t.gen,
            idx: t.idx.iter().map(f).collect(),
        };
        Presentation {
            name: self.name.clone(),
            params: self.params.clone(),
            generators: self
                .generators
                .iter()
                .map(|g| Generator {
                    domain: g.domain.map_exprs(f),
                    ..g.clone()
                })
                .collect(),
            weights: self
                .weights
                .iter()
                .map(|w| WeightClause {
                    gen: w.gen,
                    pattern: w.pattern.clone(),
                    value: f(&w.value),
                    guard: w.guard.map_exprs(f),
                })
                .collect(),
            rules: self
                .rules
                .iter()
                .map(|r| BracketRule {
                    left: term(&r.left, f),
                    right: term(&r.right, f),
                    result: r
                        .result
                        .iter()
                        .map(|a| Addend {
                            coeff: a.coeff.map_exprs(f),
                            term: term(&a.term, f),
                        })
                        .collect(),
                    guard: r.guard.map_exprs(f),
                    additive: r.additive,
                })
                .collect(),
        }
    }
}

/// Odometer increment over the box `lo..=hi`; false once exhausted.
pub(crate) fn advance(idx: &mut [i64], lo: &[i64], hi: &[i64]) -> bool {
    for k in (0..idx.len()).rev() {
        if idx[k] < hi[k] {
            idx[k] += 1;
            return true;
        }
        idx[k] = lo[k];
    }
    false
}

/// Renders `Σ c·label` as `e(2) + e(3) + 1/2*e(4) - x1`; zero renders as `0`.
pub fn format_combination<'a, I: IntoIterator<Item = (String, &'a Scalar)>>(terms: I) -> String {
    let mut s = String::new();
    for (label, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            let _ = write!(s, "{mag}*");
        }
        s.push_str(&label);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}
