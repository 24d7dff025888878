use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops;

use num_traits::{One, Zero};

use crate::exactlin::{int, Scalar};
use crate::{Error, Result};

/// Integer polynomial expression in index variables and parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntExpr {
    Const(i64),
    Var(String),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    Neg(Box<IntExpr>),
}

/// Variable bindings for one rule instance, falling back to presentation parameters.
#[derive(Clone, Debug)]
pub struct Env<'a> {
    params: &'a [(String, i64)],
    vars: Vec<(&'a str, i64)>,
}

impl<'a> Env<'a> {
    pub fn new(params: &'a [(String, i64)]) -> Self {
        Self {
            params,
            vars: Vec::new(),
        }
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.vars
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|&(_, v)| v)
            .or_else(|| self.params.iter().find(|(n, _)| n == name).map(|&(_, v)| v))
    }

    pub fn bind(&mut self, name: &'a str, value: i64) {
        self.vars.push((name, value));
    }

    pub fn is_bound(&self, name: &str) -> bool {
        self.vars.iter().any(|(n, _)| *n == name)
    }

    pub fn is_param(&self, name: &str) -> bool {
        self.params.iter().any(|(n, _)| n == name)
    }
}

impl IntExpr {
    pub fn var(name: &str) -> Self {
        IntExpr::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            IntExpr::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<i64> {
        match self {
            IntExpr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn eval(&self, env: &Env<'_>) -> Result<i64> {
        let overflow = || Error::Overflow(self.to_string());
        Ok(match self {
            IntExpr::Const(c) => *c,
            IntExpr::Var(v) => env.get(v).ok_or_else(|| Error::UnknownName(v.clone()))?,
            IntExpr::Add(a, b) => a.eval(env)?.checked_add(b.eval(env)?).ok_or_else(overflow)?,
            IntExpr::Sub(a, b) => a.eval(env)?.checked_sub(b.eval(env)?).ok_or_else(overflow)?,
            IntExpr::Mul(a, b) => a.eval(env)?.checked_mul(b.eval(env)?).ok_or_else(overflow)?,
            IntExpr::Neg(a) => a.eval(env)?.checked_neg().ok_or_else(overflow)?,
        })
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            IntExpr::Const(_) => {}
            IntExpr::Var(v) => {
                out.insert(v.clone());
            }
            IntExpr::Add(a, b) | IntExpr::Sub(a, b) | IntExpr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            IntExpr::Neg(a) => a.collect_vars(out),
        }
    }

    /// Replaces every occurrence of variable `name` by `value`.
    pub fn substitute(&self, name: &str, value: &IntExpr) -> IntExpr {
        self.map_vars(&mut |v| (v == name).then(|| value.clone()))
    }

    pub fn rename(&self, from: &str, to: &str) -> IntExpr {
        self.substitute(from, &IntExpr::var(to))
    }

    pub fn map_vars(&self, f: &mut dyn FnMut(&str) -> Option<IntExpr>) -> IntExpr {
        match self {
            IntExpr::Const(c) => IntExpr::Const(*c),
            IntExpr::Var(v) => f(v).unwrap_or_else(|| IntExpr::Var(v.clone())),
            IntExpr::Add(a, b) => IntExpr::Add(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            IntExpr::Sub(a, b) => IntExpr::Sub(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            IntExpr::Mul(a, b) => IntExpr::Mul(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            IntExpr::Neg(a) => IntExpr::Neg(Box::new(a.map_vars(f))),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            IntExpr::Add(..) | IntExpr::Sub(..) => 1,
            IntExpr::Mul(..) => 2,
            IntExpr::Neg(..) => 3,
            IntExpr::Const(c) if *c < 0 => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            IntExpr::Const(c) => write!(f, "{c}")?,
            IntExpr::Var(v) => f.write_str(v)?,
            IntExpr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 2)?;
            }
            IntExpr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" - ")?;
                b.fmt_prec(f, 2)?;
            }
            IntExpr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str("*")?;
                b.fmt_prec(f, 3)?;
            }
            IntExpr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_prec(f, 4)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }

    /// Formats as an operand that binds tighter than `*`.
    pub fn atom_string(&self) -> String {
        if self.prec() >= 4 {
            self.to_string()
        } else {
            format!("({self})")
        }
    }
}

impl fmt::Display for IntExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl From<i64> for IntExpr {
    fn from(c: i64) -> Self {
        IntExpr::Const(c)
    }
}

impl From<&str> for IntExpr {
    fn from(v: &str) -> Self {
        IntExpr::var(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl<T: Into<IntExpr>> ops::$trait<T> for IntExpr {
            type Output = IntExpr;
            fn $method(self, rhs: T) -> IntExpr {
                IntExpr::$variant(Box::new(self), Box::new(rhs.into()))
            }
        }
    };
}
binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);

impl ops::Neg for IntExpr {
    type Output = IntExpr;
    fn neg(self) -> IntExpr {
        IntExpr::Neg(Box::new(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "==",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    fn test(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Cmp(IntExpr, CmpOp, IntExpr),
    /// `expr mod modulus == residue`, with the residue taken in `0..modulus`.
    Congruence {
        expr: IntExpr,
        modulus: i64,
        residue: i64,
    },
}

impl Atom {
    pub fn eval(&self, env: &Env<'_>) -> Result<bool> {
        match self {
            Atom::Cmp(a, op, b) => Ok(op.test(a.eval(env)?, b.eval(env)?)),
            Atom::Congruence {
                expr,
                modulus,
                residue,
            } => Ok(expr.eval(env)?.rem_euclid(*modulus) == residue.rem_euclid(*modulus)),
        }
    }

    pub fn map_exprs(&self, f: &mut dyn FnMut(&IntExpr) -> IntExpr) -> Atom {
        match self {
            Atom::Cmp(a, op, b) => Atom::Cmp(f(a), *op, f(b)),
            Atom::Congruence {
                expr,
                modulus,
                residue,
            } => Atom::Congruence {
                expr: f(expr),
                modulus: *modulus,
                residue: *residue,
            },
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Atom::Cmp(a, _, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Atom::Congruence { expr, .. } => expr.collect_vars(out),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Cmp(a, op, b) => write!(f, "{a} {} {b}", op.symbol()),
            Atom::Congruence {
                expr,
                modulus,
                residue,
            } => write!(f, "{} % {modulus} == {residue}", expr.atom_string()),
        }
    }
}

/// Conjunction of atoms; the empty guard always holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Guard {
    pub atoms: Vec<Atom>,
}

impl Guard {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn cmp(mut self, a: impl Into<IntExpr>, op: CmpOp, b: impl Into<IntExpr>) -> Self {
        self.atoms.push(Atom::Cmp(a.into(), op, b.into()));
        self
    }

    pub fn ge(self, a: impl Into<IntExpr>, b: impl Into<IntExpr>) -> Self {
        self.cmp(a, CmpOp::Ge, b)
    }

    pub fn le(self, a: impl Into<IntExpr>, b: impl Into<IntExpr>) -> Self {
        self.cmp(a, CmpOp::Le, b)
    }

    pub fn congruent(mut self, expr: impl Into<IntExpr>, modulus: i64, residue: i64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        self.atoms.push(Atom::Congruence {
            expr: expr.into(),
            modulus,
            residue,
        });
        self
    }

    pub fn and(mut self, other: &Guard) -> Self {
        self.atoms.extend(other.atoms.iter().cloned());
        self
    }

    pub fn eval(&self, env: &Env<'_>) -> Result<bool> {
        for a in &self.atoms {
            if !a.eval(env)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn map_exprs(&self, f: &mut dyn FnMut(&IntExpr) -> IntExpr) -> Guard {
        Guard {
            atoms: self.atoms.iter().map(|a| a.map_exprs(f)).collect(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for a in &self.atoms {
            a.collect_vars(out);
        }
    }

    /// Largest constant lower bound on `var` stated directly by an atom.
    pub fn lower_bound(&self, var: &str) -> Option<i64> {
        let mut best: Option<i64> = None;
        for a in &self.atoms {
            let bound = match a {
                Atom::Cmp(IntExpr::Var(v), op, IntExpr::Const(c)) if v == var => match op {
                    CmpOp::Ge | CmpOp::Eq => Some(*c),
                    CmpOp::Gt => c.checked_add(1),
                    _ => None,
                },
                Atom::Cmp(IntExpr::Const(c), op, IntExpr::Var(v)) if v == var => match op {
                    CmpOp::Le | CmpOp::Eq => Some(*c),
                    CmpOp::Lt => c.checked_add(1),
                    _ => None,
                },
                _ => None,
            };
            if let Some(b) = bound {
                best = Some(best.map_or(b, |x: i64| x.max(b)));
            }
        }
        best
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.atoms.iter().enumerate() {
            if k > 0 {
                f.write_str(" and ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Coefficient `scale * poly(indices)`; an absent polynomial means 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub scale: Scalar,
    pub poly: Option<IntExpr>,
}

impl Coeff {
    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(scale: Scalar) -> Self {
        Self { scale, poly: None }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn poly(poly: IntExpr) -> Self {
        Self {
            scale: Scalar::one(),
            poly: Some(poly),
        }
    }

    pub fn eval(&self, env: &Env<'_>) -> Result<Scalar> {
        match &self.poly {
            None => Ok(self.scale.clone()),
            Some(p) => Ok(&self.scale * int(p.eval(env)?)),
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            scale: -self.scale.clone(),
            poly: self.poly.clone(),
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        Self {
            scale: &self.scale * c,
            poly: self.poly.clone(),
        }
    }

    pub fn map_exprs(&self, f: &mut dyn FnMut(&IntExpr) -> IntExpr) -> Coeff {
        Coeff {
            scale: self.scale.clone(),
            poly: self.poly.as_ref().map(f),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero() || self.poly == Some(IntExpr::Const(0))
    }
}
