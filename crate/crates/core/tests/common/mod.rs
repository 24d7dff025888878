#![allow(dead_code)]

pub mod oracle;

use prolie_core::presentation::{Addend, Coeff, Guard, IntExpr, Presentation, Term};

pub fn v(name: &str) -> IntExpr {
    IntExpr::var(name)
}

pub fn c(k: i64) -> IntExpr {
    IntExpr::Const(k)
}

pub fn e(p: &Presentation, idx: IntExpr) -> Term {
    p.term("e", vec![idx])
}

pub fn one(t: Term) -> Addend {
    Addend { coeff: Coeff::one(), term: t }
}

pub fn times(poly: IntExpr, t: Term) -> Addend {
    Addend { coeff: Coeff::poly(poly), term: t }
}

pub fn ge(var: &str, k: i64) -> Guard {
    Guard::new().ge(var, k)
}

fn single(name: &str, lower: i64) -> Presentation {
    let mut p = Presentation::new(name);
    p.add_generator("e", &["i"], ge("i", lower));
    p
}

pub fn m1() -> Presentation {
    let mut p = single("m1", 1);
    p.add_weight("e", vec![c(1)], c(1), Guard::new());
    p.add_weight("e", vec![v("i")], v("i") - 1, ge("i", 2));
    let (l, r, t) = (e(&p, c(1)), e(&p, v("i")), e(&p, v("i") + 1));
    p.add_rule(l, r, vec![one(t)], ge("i", 2));
    p
}

pub fn m2() -> Presentation {
    let mut p = single("m2", 1);
    p.add_weight("e", vec![v("i")], v("i"), Guard::new());
    let (l, r, t) = (e(&p, v("i")), e(&p, c(1)), e(&p, v("i") + 1));
    p.add_rule(l, r, vec![one(t)], ge("i", 2));
    let (l, r, t) = (e(&p, c(2)), e(&p, v("j")), e(&p, v("j") + 2));
    p.add_rule(l, r, vec![one(t)], ge("j", 3));
    p
}

/// `[e_i, e_j] = (j - i) e_{i+j+s}` on `i, j ≥ 1`.
pub fn witt(s: i64) -> Presentation {
    let mut p = single("W", 1);
    p.set_param("s", s);
    p.add_weight("e", vec![v("i")], v("i") + v("s"), Guard::new());
    let (l, r, t) = (e(&p, v("i")), e(&p, v("j")), e(&p, v("i") + v("j") + v("s")));
    p.add_rule(l, r, vec![times(v("j") - v("i"), t)], Guard::new());
    p
}

pub fn witt_pos() -> Presentation {
    let mut p = witt(0);
    p.name = "witt_pos".into();
    p
}

pub fn witt_nonneg() -> Presentation {
    let mut p = single("witt_nonneg", 0);
    p.add_weight("e", vec![c(0)], c(1), Guard::new());
    p.add_weight("e", vec![v("i")], v("i"), ge("i", 1));
    let (l, r, t) = (e(&p, v("i")), e(&p, v("j")), e(&p, v("i") + v("j")));
    p.add_rule(l, r, vec![times(v("j") - v("i"), t)], Guard::new());
    p
}

pub fn a_inf() -> Presentation {
    let mut p = single("a_inf", 0);
    p.add_weight("e", vec![c(0)], c(1), Guard::new());
    p.add_weight("e", vec![v("i")], v("i"), ge("i", 1));
    let (l, r, t) = (e(&p, c(0)), e(&p, v("i")), e(&p, v("i") - 1));
    p.add_rule(l, r, vec![one(t)], ge("i", 3));
    p
}

pub fn n1() -> Presentation {
    let mut p = single("n1", 1);
    p.add_weight("e", vec![v("i")], v("i"), Guard::new());
    for (residue, sign) in [(1, 1), (2, -1)] {
        let (l, r, t) = (e(&p, v("i")), e(&p, v("j")), e(&p, v("i") + v("j")));
        p.add_rule(
            l,
            r,
            vec![Addend { coeff: Coeff::int(sign), term: t }],
            Guard::new().congruent(v("i") - v("j"), 3, residue),
        );
    }
    p
}

pub fn char_nil() -> Presentation {
    let mut p = single("char_nil", 1);
    p.add_weight("e", vec![c(1)], c(1), Guard::new());
    p.add_weight("e", vec![v("i")], v("i") - 1, ge("i", 2));
    let (l, r, t) = (e(&p, v("i")), e(&p, c(1)), e(&p, v("i") + 1));
    p.add_rule(l, r, vec![one(t)], ge("i", 2));
    let (l, r) = (e(&p, v("i")), e(&p, c(2)));
    let res = vec![one(e(&p, v("i") + 2)), one(e(&p, v("i") + 3))];
    p.add_rule(l, r, res, ge("i", 3));
    p
}

pub fn catalog() -> Vec<Presentation> {
    vec![m1(), m2(), witt_pos(), witt_nonneg(), witt(1), witt(2), n1(), char_nil(), a_inf()]
}
