use alloc::format;
use alloc::vec::Vec;

use super::{BasisEntry, ElemVector, Presentation};
use crate::exactlin::Scalar;
use crate::{Error, Result, Verdict};

use num_traits::One;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weighting {
    /// Every bracket lands exactly in weight `u + v`.
    Graded,
    /// Every bracket lands in weight at least `u + v`.
    Filtered,
    Invalid,
}

impl Weighting {
    pub fn as_str(self) -> &'static str {
        match self {
            Weighting::Graded => "graded",
            Weighting::Filtered => "filtered",
            Weighting::Invalid => "invalid",
        }
    }
}

/// How a weight window becomes a finite algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowKind {
    /// Elements above the window span an ideal; the window is the quotient by it.
    Quotient,
    /// The window itself is closed under brackets; it is used as a subalgebra.
    Subalgebra,
}

impl WindowKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WindowKind::Quotient => "quotient",
            WindowKind::Subalgebra => "subalgebra",
        }
    }
}

fn filtered_pairs(basis: &[BasisEntry]) -> impl Iterator<Item = (&BasisEntry, &BasisEntry)> {
    basis.iter().enumerate().flat_map(move |(i, a)| {
        basis[i + 1..]
            .iter()
            .filter(move |b| a.weight.is_some() && b.weight.is_some())
            .map(move |b| (a, b))
    })
}

pub fn classify_weighting(p: &Presentation, window: i64) -> Result<Weighting> {
    let basis = p.enumerate(window)?;
    if basis.iter().any(|b| b.weight.is_some_and(|w| w < 1)) {
        return Ok(Weighting::Invalid);
    }
    let mut graded = true;
    for (a, b) in filtered_pairs(&basis) {
        let (u, v) = (a.weight.unwrap(), b.weight.unwrap());
        for t in p.bracket_elems(&a.elem, &b.elem)?.keys() {
            let Some(w) = p.weight(t)? else { continue };
            if w < 1 || w < u + v {
                return Ok(Weighting::Invalid);
            }
            graded &= w == u + v;
        }
    }
    Ok(if graded {
        Weighting::Graded
    } else {
        Weighting::Filtered
    })
}

/// Decides how `window` is realized as a finite algebra.
///
/// Graded and filtered weightings give quotients. So does any weighting in
/// which brackets never drop below the larger input weight (probed two
/// weights beyond the window). Failing that, a window closed under brackets
/// is used as a subalgebra.
pub fn window_kind(p: &Presentation, window: i64) -> Result<WindowKind> {
    if classify_weighting(p, window)? != Weighting::Invalid {
        return Ok(WindowKind::Quotient);
    }
    let probe = p.enumerate(window + 2)?;
    if probe.iter().any(|b| b.weight.is_some_and(|w| w < 1)) {
        return Err(Error::InvalidWeighting("weights below 1".into()));
    }
    let mut monotone = true;
    'outer: for (a, b) in filtered_pairs(&probe) {
        let floor = a.weight.unwrap().max(b.weight.unwrap());
        for t in p.bracket_elems(&a.elem, &b.elem)?.keys() {
            if p.weight(t)?.is_some_and(|w| w < floor) {
                monotone = false;
                break 'outer;
            }
        }
    }
    if monotone {
        return Ok(WindowKind::Quotient);
    }
    let basis = p.enumerate(window)?;
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            for t in p.bracket_elems(&a.elem, &b.elem)?.keys() {
                if p.weight(t)?.is_some_and(|w| w > window) {
                    return Err(Error::InvalidWeighting(format!(
                        "[{}, {}] lowers weight and the window {window} is not closed",
                        p.format_elem(&a.elem),
                        p.format_elem(&b.elem)
                    )));
                }
            }
        }
    }
    Ok(WindowKind::Subalgebra)
}

/// Jacobiator `[[a,b],c] + [[c,a],b] + [[b,c],a]`, untruncated.
pub fn jacobiator(p: &Presentation, a: &ElemVector, b: &ElemVector, c: &ElemVector) -> Result<ElemVector> {
    let one = Scalar::one();
    let mut j = p.bracket(&p.bracket(a, b)?, c)?;
    j.axpy(&one, &p.bracket(&p.bracket(c, a)?, b)?);
    j.axpy(&one, &p.bracket(&p.bracket(b, c)?, a)?);
    Ok(j)
}

/// Evaluates the Jacobi identity on every basis triple of total weight at most `window`.
///
/// Complement elements count as weight 0.
pub fn check_jacobi(p: &Presentation, window: i64) -> Result<Verdict> {
    let basis = p.enumerate(window)?;
    let w: Vec<i64> = basis.iter().map(|b| b.weight.unwrap_or(0)).collect();
    let units: Vec<ElemVector> = basis.iter().map(|b| ElemVector::unit(b.elem.clone())).collect();
    let n = basis.len();
    let mut checked = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if w[i] + w[j] + w[k] > window {
                    continue;
                }
                checked += 1;
                let r = jacobiator(p, &units[i], &units[j], &units[k])?;
                if !r.is_zero() {
                    let witness = format!(
                        "({}, {}, {}) residual {}",
                        p.format_elem(&basis[i].elem),
                        p.format_elem(&basis[j].elem),
                        p.format_elem(&basis[k].elem),
                        p.format_vector(&r)
                    );
                    return Ok(Verdict::fails("jacobi", window, witness));
                }
            }
        }
    }
    Ok(Verdict::holds("jacobi", window).with_trace(alloc::vec![(window, alloc::vec![n, checked])]))
}
