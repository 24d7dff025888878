use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{series, truncate, FiniteQuotient, SeriesChain, SeriesKind};
use crate::exactlin::{SparseVector, Subspace};
use crate::presentation::{Presentation, Weighting, WindowKind};
use crate::{Error, Result, Verdict};

/// One window's series data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSeries {
    pub window: i64,
    pub kind: WindowKind,
    pub weighting: Weighting,
    pub dim: usize,
    pub term_dims: Vec<usize>,
    pub layer_dims: Vec<usize>,
    pub stabilized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub kind: SeriesKind,
    pub windows: Vec<WindowSeries>,
    /// Leading layer dimensions on which the two largest windows agree.
    pub stable_layers: Vec<usize>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl Profile {
    pub fn verdict(&self, property: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.property == property)
    }
}

struct Sweep {
    quotients: Vec<FiniteQuotient>,
    chains: Vec<SeriesChain>,
    rows: Vec<WindowSeries>,
}

fn sweep(p: &Presentation, windows: &[i64], kind: SeriesKind) -> Result<Sweep> {
    if windows.len() < 2 || windows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Malformed("profiles need at least two increasing windows".into()));
    }
    let mut quotients = Vec::new();
    let mut chains = Vec::new();
    let mut rows = Vec::new();
    for &m in windows {
        let q = truncate(p, m)?;
        let c = series(&q, kind);
        rows.push(WindowSeries {
            window: m,
            kind: q.kind(),
            weighting: q.weighting(),
            dim: q.dim(),
            term_dims: c.dims(),
            layer_dims: c.layer_dims(),
            stabilized: c.stabilized,
        });
        quotients.push(q);
        chains.push(c);
    }
    Ok(Sweep {
        quotients,
        chains,
        rows,
    })
}

fn trace(rows: &[WindowSeries]) -> Vec<(i64, Vec<usize>)> {
    rows.iter().map(|r| (r.window, r.term_dims.clone())).collect()
}

fn stable_prefix(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).take_while(|(x, y)| x == y).map(|(x, _)| *x).collect()
}

/// Layers agree on the two largest windows wherever the larger one certifies
/// the smaller: layer `k` of a quotient is exact once everything the smaller
/// window cut away lies in the `(k+1)`-st term.
fn layers_agree(sw: &Sweep) -> bool {
    let n = sw.rows.len();
    let (a, b) = (&sw.rows[n - 2], &sw.rows[n - 1]);
    let (la, lb) = (&a.layer_dims, &b.layer_dims);
    if la.is_empty() || lb.is_empty() {
        return la == lb;
    }
    if la[0] != lb[0] || la.len() > lb.len() {
        return false;
    }
    if a.kind == WindowKind::Subalgebra || b.kind == WindowKind::Subalgebra {
        let keep = if la == lb { la.len() } else { la.len() - 1 };
        return la[..keep] == lb[..keep];
    }
    let big = &sw.quotients[n - 1];
    let cut: Vec<SparseVector> = (0..big.dim())
        .filter(|&i| big.basis()[i].weight.is_some_and(|w| w > a.window))
        .map(SparseVector::unit)
        .collect();
    let terms = &sw.chains[n - 1].terms;
    let certified = (1..terms.len())
        .take_while(|&k| cut.iter().all(|v| terms[k].contains(v)))
        .count()
        .min(la.len());
    certified >= 1 && la[..certified] == lb[..certified]
}

fn stable_term_witness(sw: &Sweep, symbol: &str) -> String {
    let q = &sw.quotients[0];
    let c = &sw.chains[0];
    let k = c.terms.len() - 1;
    let term = &c.terms[k];
    format!(
        "{symbol}{k} = {symbol}{} = {} (dim {}) at window {}",
        k + 1,
        q.format_subspace(term),
        term.dim(),
        q.window()
    )
}

fn same_stabilization(sw: &Sweep) -> bool {
    sw.rows.iter().all(|r| r.stabilized) && sw.rows.windows(2).all(|w| w[0].term_dims.len() == w[1].term_dims.len())
}

/// Intersection of the last nonzero terms, in the coordinates of the largest window,
/// when their depth grows strictly with the window.
fn persistent_tail(sw: &Sweep) -> Option<Subspace> {
    let big = sw.quotients.last()?;
    let steps: Vec<usize> = sw.chains.iter().map(|c| c.terms.len()).collect();
    if steps.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    let mut acc: Option<Subspace> = None;
    for (q, c) in sw.quotients.iter().zip(&sw.chains) {
        let last = c.last_nonzero()?;
        let lifted: Vec<_> = last.basis().iter().map(|v| big.from_elems(&q.to_elems(v))).collect();
        let s = Subspace::span(big.dim(), &lifted);
        acc = Some(match acc {
            None => s,
            Some(a) => a.intersection(&s),
        });
    }
    acc.filter(|s| !s.is_zero())
}

/// Lower central series over several windows, with pro-nilpotency verdicts.
pub fn nilpotency_profile(p: &Presentation, windows: &[i64]) -> Result<Profile> {
    let sw = sweep(p, windows, SeriesKind::LowerCentral)?;
    let n = sw.rows.len();
    let (a, b) = (&sw.rows[n - 2], &sw.rows[n - 1]);
    let tr = trace(&sw.rows);
    let first = sw.rows[0].window;
    let mut notes = Vec::new();
    if sw.rows.iter().any(|r| r.weighting == Weighting::Filtered) {
        notes.push("filtered weighting: layer dimensions are trusted only where stable".into());
    }
    let (pro, res) = if same_stabilization(&sw) {
        let w = stable_term_witness(&sw, "L^");
        (
            Verdict::fails("pro_nilpotent", first, format!("not residually nilpotent: {w}")),
            Verdict::fails("residually_nilpotent", first, w),
        )
    } else if let Some(tail) = sw
        .rows
        .iter()
        .all(|r| r.kind == WindowKind::Subalgebra)
        .then(|| persistent_tail(&sw))
        .flatten()
    {
        let big = sw.quotients.last().unwrap();
        let w = format!(
            "{} stays in the last nonzero term L^k while k grows with the window ({})",
            big.format_subspace(&tail),
            sw.chains.iter().map(|c| format!("{}", c.terms.len() - 1)).collect::<Vec<_>>().join(", ")
        );
        (
            Verdict::fails("pro_nilpotent", first, format!("not residually nilpotent: {w}")),
            Verdict::fails("residually_nilpotent", first, w),
        )
    } else if sw.rows.iter().any(|r| r.stabilized) || !layers_agree(&sw) {
        (
            Verdict::inconclusive("pro_nilpotent", a.window),
            Verdict::inconclusive("residually_nilpotent", a.window),
        )
    } else {
        (
            Verdict::holds("pro_nilpotent", a.window),
            Verdict::holds("residually_nilpotent", a.window),
        )
    };
    Ok(Profile {
        kind: SeriesKind::LowerCentral,
        stable_layers: stable_prefix(&a.layer_dims, &b.layer_dims),
        verdicts: alloc::vec![pro.with_trace(tr.clone()), res.with_trace(tr)],
        windows: sw.rows,
        notes,
    })
}

/// Derived series over several windows, with pro-solvability verdicts.
pub fn solvability_profile(p: &Presentation, windows: &[i64]) -> Result<Profile> {
    let sw = sweep(p, windows, SeriesKind::Derived)?;
    let n = sw.rows.len();
    let (a, b) = (&sw.rows[n - 2], &sw.rows[n - 1]);
    let tr = trace(&sw.rows);
    let first = sw.rows[0].window;
    let mut notes = Vec::new();
    let zero_step = sw.rows[0].term_dims.len();
    let same_zero = sw.chains.iter().all(SeriesChain::reaches_zero)
        && sw.rows.iter().all(|r| r.term_dims.len() == zero_step);
    let (pro, res) = if same_stabilization(&sw) {
        let w = stable_term_witness(&sw, "L^[");
        (
            Verdict::fails("pro_solvable", first, format!("not residually solvable: {w}")),
            Verdict::fails("residually_solvable", first, w),
        )
    } else if same_zero && genuinely_abelian(p, &sw)? {
        let s = zero_step;
        let infinite = sw.rows.windows(2).all(|w| w[0].dim < w[1].dim);
        let res = Verdict::holds("residually_solvable", b.window);
        if infinite {
            let dims: Vec<String> = sw.rows.iter().map(|r| format!("{}", r.dim)).collect();
            notes.push(format!("derived series is exactly zero at step {s}"));
            (
                Verdict::fails(
                    "pro_solvable",
                    first,
                    format!(
                        "L^[{s}] = 0 while the basis is infinite, so dim L/L^[{s}] grows without bound ({})",
                        dims.join(", ")
                    ),
                ),
                res,
            )
        } else {
            (Verdict::holds("pro_solvable", b.window), res)
        }
    } else if sw.rows.iter().any(|r| r.stabilized) || !layers_agree(&sw) {
        (
            Verdict::inconclusive("pro_solvable", a.window),
            Verdict::inconclusive("residually_solvable", a.window),
        )
    } else {
        (
            Verdict::holds("pro_solvable", a.window),
            Verdict::holds("residually_solvable", a.window),
        )
    };
    Ok(Profile {
        kind: SeriesKind::Derived,
        stable_layers: stable_prefix(&a.layer_dims, &b.layer_dims),
        verdicts: alloc::vec![pro.with_trace(tr.clone()), res.with_trace(tr)],
        windows: sw.rows,
        notes,
    })
}

/// Whether the last nonzero derived term of every window is abelian before truncation.
fn genuinely_abelian(p: &Presentation, sw: &Sweep) -> Result<bool> {
    for (q, c) in sw.quotients.iter().zip(&sw.chains) {
        let Some(last) = c.last_nonzero() else {
            continue;
        };
        let vs: Vec<_> = last.basis().iter().map(|v| q.to_elems(v)).collect();
        for (i, x) in vs.iter().enumerate() {
            for y in &vs[i + 1..] {
                if !p.bracket(x, y)?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
