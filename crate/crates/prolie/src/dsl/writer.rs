use std::fmt::Write;

use num_traits::{One, Signed};
use prolie_core::constructions::CocycleRule;
use prolie_core::presentation::{Addend, Coeff, Presentation, Term};

fn term(p: &Presentation, t: &Term) -> String {
    let name = &p.generators[t.gen].name;
    if t.idx.is_empty() {
        return name.clone();
    }
    let parts: Vec<String> = t.idx.iter().map(|x| x.to_string()).collect();
    format!("{name}({})", parts.join(", "))
}

fn sum<'a>(items: impl Iterator<Item = (&'a Coeff, String)>) -> String {
    let mut s = String::new();
    for (c, label) in items {
        let neg = c.scale.is_negative();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.scale.abs();
        if !mag.is_one() {
            let _ = write!(s, "{mag}*");
        }
        if let Some(poly) = &c.poly {
            let _ = write!(s, "({poly})*");
        }
        s.push_str(&label);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn addends(p: &Presentation, xs: &[Addend]) -> String {
    sum(xs.iter().map(|a| (&a.coeff, term(p, &a.term))))
}

fn guard_suffix(g: &prolie_core::presentation::Guard) -> String {
    if g.is_trivial() {
        String::new()
    } else {
        format!(" for {g}")
    }
}

/// Canonical `.lie` text; parsing it back gives the same windows.
pub fn to_dsl(p: &Presentation) -> String {
    let mut out = format!("algebra {}\n", p.name);
    for (n, v) in &p.params {
        let _ = writeln!(out, "param {n} = {v}");
    }
    for g in &p.generators {
        if g.complement {
            let _ = writeln!(out, "complement {}", g.name);
        } else if g.vars.is_empty() {
            let _ = writeln!(out, "basis {}", g.name);
        } else {
            let _ = writeln!(out, "basis {}({}){}", g.name, g.vars.join(", "), guard_suffix(&g.domain));
        }
    }
    for w in &p.weights {
        let name = &p.generators[w.gen].name;
        let pat = if w.pattern.is_empty() {
            String::new()
        } else {
            let parts: Vec<String> = w.pattern.iter().map(|x| x.to_string()).collect();
            format!("({})", parts.join(", "))
        };
        let _ = writeln!(out, "weight {name}{pat} = {}{}", w.value, guard_suffix(&w.guard));
    }
    for r in &p.rules {
        let _ = writeln!(
            out,
            "bracket [{}, {}] {} {}{}",
            term(p, &r.left),
            term(p, &r.right),
            if r.additive { "+=" } else { "=" },
            addends(p, &r.result),
            guard_suffix(&r.guard)
        );
    }
    out
}

/// Canonical cocycle text relative to its base presentation.
pub fn cocycle_to_dsl(c: &CocycleRule, base: &Presentation) -> String {
    let mut out = format!("cocycle {}\n", c.name);
    if !c.space.is_empty() {
        let _ = writeln!(out, "space {}", c.space.join(", "));
    }
    for (z, w) in c.space.iter().zip(&c.weights) {
        if let Some(w) = w {
            let _ = writeln!(out, "weight {z} = {w}");
        }
    }
    for cl in &c.clauses {
        let value = sum(cl.value.iter().map(|(coeff, k)| (coeff, c.space[*k].clone())));
        let _ = writeln!(
            out,
            "value [{}, {}] += {}{}",
            term(base, &cl.left),
            term(base, &cl.right),
            value,
            guard_suffix(&cl.guard)
        );
    }
    out
}
