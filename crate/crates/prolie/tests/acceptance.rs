//! Acceptance run: one line per criterion, then a summary. Exits nonzero if a
//! criterion fails that is not listed in `KNOWN_FAILURES`.

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::panic::{self, AssertUnwindSafe};

use oracle::Table;
use prolie::catalog;
use prolie::cli::run;
use prolie_core::constructions::{build_extension, central_extension, exp_derivation, Action, CocycleRule, ExtensionSpec};
use prolie_core::derivations::{
    characteristically_pronilpotent, derivation_space, rank, root_decomposition, torus_system,
};
use prolie_core::exactlin::{int, kernel_basis, Matrix, Scalar, SparseVector, Subspace};
use prolie_core::filtration::{
    nilpotency_profile, series, solvability_profile, span_closure, truncate, ClosureMode, FiniteQuotient, SeriesKind,
};
use prolie_core::presentation::{Elem, Presentation};
use prolie_core::{Error, RandomCheck, Status};
use proptest::prelude::Rng;
use proptest::test_runner::{RngAlgorithm, TestRng};

/// Criteria that cannot be met as stated, with the reason printed next to them.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    2,
    "W(2) has only two torus equations below weight 12, so its window-8 torus is 4-dimensional",
)];

type Outcome = Result<String, String>;

fn load(name: &str) -> Presentation {
    catalog::load(name).expect("catalog entry").expect("catalog parses")
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn status(p: &Presentation, property: &str) -> (Status, i64, Option<String>) {
    let nil = nilpotency_profile(p, &[8, 12]).unwrap();
    let sol = solvability_profile(p, &[8, 12]).unwrap();
    let v = nil.verdict(property).or_else(|| sol.verdict(property)).unwrap();
    (v.status, v.depth, v.witness.clone())
}

fn criterion_1() -> Outcome {
    use Status::*;
    let wp = load("witt_pos");
    for prop in ["pro_nilpotent", "pro_solvable"] {
        let (s, d, _) = status(&wp, prop);
        ensure(s == HoldsToDepth && d >= 8, format!("witt_pos {prop}: {s:?} at {d}"))?;
    }
    let wn = load("witt_nonneg");
    ensure(status(&wn, "pro_solvable").0 == HoldsToDepth, "witt_nonneg pro_solvable")?;
    let (s, _, w) = status(&wn, "residually_nilpotent");
    ensure(s == FailsAtDepth, "witt_nonneg residually_nilpotent")?;
    ensure(w.as_deref().is_some_and(|w| w.contains("L^2 = L^3")), "no stabilization witness")?;
    for name in ["m1", "m2"] {
        let p = load(name);
        ensure(status(&p, "pro_nilpotent").0 == HoldsToDepth, format!("{name} pro_nilpotent"))?;
        ensure(status(&p, "residually_solvable").0 == HoldsToDepth, format!("{name} residually_solvable"))?;
        let (s, _, w) = status(&p, "pro_solvable");
        ensure(s == FailsAtDepth, format!("{name} pro_solvable"))?;
        ensure(
            w.as_deref().is_some_and(|w| w.contains("L^[3] = 0") && w.contains("infinite")),
            format!("{name} witness {w:?}"),
        )?;
    }
    let a = load("a_inf");
    ensure(status(&a, "pro_solvable").0 == FailsAtDepth, "a_inf pro_solvable")?;
    ensure(status(&a, "residually_nilpotent").0 == FailsAtDepth, "a_inf residually_nilpotent")?;
    Ok("witt_pos, witt_nonneg, m1, m2, a_inf verdicts on windows 8,12".into())
}

fn criterion_2() -> Outcome {
    let cases = [("m1", 2, true), ("W(0)", 1, false), ("W(1)", 1, false), ("W(2)", 1, false), ("char_nil", 0, false), ("n1", 2, true)];
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for (name, r, maximal) in cases {
        let rep = rank(&load(name), &[8, 12, 16]).unwrap();
        let ranks: Vec<usize> = rep.per_window.iter().map(|x| x.1).collect();
        seen.push(format!("{name} {ranks:?}"));
        if ranks.iter().any(|&k| k != r) || (maximal && !rep.maximal_rank) {
            bad.push(format!("{name}: ranks {ranks:?} on 8,12,16, expected {r}"));
        }
    }
    if bad.is_empty() {
        Ok(seen.join("; "))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_3() -> Outcome {
    let t = torus_system(&load("m1"), 12).unwrap();
    for (i, e) in t.elems.iter().enumerate() {
        let k = e.idx[0];
        let expected = if k == 1 { vec![int(1), int(0)] } else { vec![int(k - 2), int(1)] };
        ensure(t.root_of(i) == expected, format!("root of {}", t.labels[i]))?;
    }
    let d = root_decomposition(&t);
    ensure(d.non_integral.is_empty(), "non-integral roots")?;
    ensure(d.primitive == vec![vec![int(1), int(0)], vec![int(0), int(1)]], "primitive roots")?;
    Ok(format!("{} roots on window 12", d.roots.len()))
}

fn criterion_4() -> Outcome {
    let check = RandomCheck::new(0x5eed);
    let ex = characteristically_pronilpotent(&load("char_nil"), &[8, 12], &check).unwrap();
    ensure(ex.verdict.status == Status::HoldsToDepth, "char_nil not characteristically pro-nilpotent")?;
    let m = characteristically_pronilpotent(&load("m1"), &[8, 12], &check).unwrap();
    ensure(m.verdict.status == Status::FailsAtDepth, "m1 passes")?;
    let w = m.verdict.witness.clone().unwrap_or_default();
    ensure(w.contains("diagonal"), format!("witness {w}"))?;
    let exact = ex.per_window.iter().chain(&m.per_window).all(|w| w.method.is_exact());
    ensure(exact, "fell back to sampling")?;
    Ok(format!("m1 witness: {w}"))
}

fn criterion_5() -> Outcome {
    let spec = ExtensionSpec::full_torus(load("m1"), 10).unwrap();
    let ext = build_extension(&spec, &[6, 8, 10]).map_err(|e| e.to_string())?;
    ensure(ext.report.verdicts.len() == 6, "expected six validations")?;
    for v in &ext.report.verdicts {
        ensure(v.is_holds(), format!("{} fails: {:?}", v.property, v.witness))?;
    }
    for w in &ext.report.windows {
        ensure(w.center_dim == 0 && w.der_equals_inner, format!("window {}", w.window))?;
    }
    Ok("six validations; centerless with Der = ad on windows 6, 8, 10".into())
}

fn criterion_6() -> Outcome {
    let p = load("m1");
    let spec = ExtensionSpec {
        actions: vec![Action::Inner { elem: p.elem("e", &[1]), scale: int(1) }],
        base: p,
        complement_brackets: vec![],
    };
    match build_extension(&spec, &[6, 8, 10]) {
        Err(Error::RadicalViolation(m)) => Ok(m),
        other => Err(format!("{:?}", other.map(|_| ()))),
    }
}

fn power(q: &FiniteQuotient, i: &Subspace, k: usize) -> Subspace {
    (1..k).fold(i.clone(), |t, _| q.bracket_spaces(&t, i))
}

fn derived(q: &FiniteQuotient, i: &Subspace, k: usize) -> Subspace {
    (1..k).fold(i.clone(), |t, _| q.bracket_spaces(&t, &t))
}

fn criterion_7() -> Outcome {
    let q = truncate(&load("m1"), 12).unwrap();
    let i = span_closure(&q, &[SparseVector::unit(0)], ClosureMode::Ideal);
    let j = span_closure(&q, &[SparseVector::unit(1)], ClosureMode::Ideal);
    let s = i.sum(&j);
    for k in 1..=4 {
        let rhs = power(&q, &i, k).sum(&power(&q, &j, k));
        ensure(rhs.contains_subspace(&power(&q, &s, 2 * k - 1)), format!("lower central, i = {k}"))?;
    }
    for k in 1..=3 {
        let rhs = derived(&q, &i, k).sum(&derived(&q, &j, k));
        ensure(rhs.contains_subspace(&derived(&q, &s, 2 * k)), format!("derived, i = {k}"))?;
    }
    Ok(format!("dim I = {}, dim J = {} on window 12", i.dim(), j.dim()))
}

fn criterion_8() -> Outcome {
    let r = load("witt_nonneg");
    for w in [8, 12] {
        let q = truncate(&r, w).unwrap();
        let r2 = series(&q, SeriesKind::Derived).terms[1].clone();
        let positive: Vec<SparseVector> = (0..q.dim())
            .filter(|&i| q.basis()[i].elem.idx[0] >= 1)
            .map(SparseVector::unit)
            .collect();
        ensure(r2 == Subspace::span(q.dim(), &positive), format!("R^[2] differs at window {w}"))?;
        let mut t = r2.clone();
        for _ in 0..q.dim() {
            t = q.bracket_spaces(&t, &r2);
        }
        ensure(t.is_zero(), format!("R^[2] not nilpotent at window {w}"))?;
    }
    let nil = nilpotency_profile(&load("witt_pos"), &[8, 12]).unwrap();
    ensure(nil.verdict("pro_nilpotent").unwrap().is_holds(), "positive part profile")?;
    Ok("R^[2] = span{e(k) : k >= 1} on windows 8 and 12".into())
}

fn criterion_9() -> Outcome {
    let p = load("m1");
    let theta = CocycleRule::from_table("theta", &["z"], &[(p.elem("e", &[2]), p.elem("e", &[3]), SparseVector::unit(0))]);
    let ce = central_extension(&p, &theta, &[10]).map_err(|e| e.to_string())?;
    ensure(ce.report.verdicts.iter().all(|v| v.is_holds()), "theta(e2, e3) verdicts")?;
    let w = &ce.report.windows[0];
    ensure(w.coboundary.is_none(), "theta(e2, e3) is a coboundary")?;
    ensure(w.center_formula == Some(true), "center formula")?;
    let mut rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[9; 32]);
    for trial in 0..20 {
        let nu: Vec<(Elem, SparseVector)> = (1..=10)
            .map(|k| (p.elem("e", &[k]), SparseVector::unit(0).scaled(&int(rng.next_u32() as i64 % 7 - 3))))
            .collect();
        let c = CocycleRule::coboundary("dnu", &["z"], &p, 10, &nu).unwrap();
        let ce = central_extension(&p, &c, &[10]).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(ce.report.verdicts.iter().all(|v| v.is_holds()), format!("trial {trial}"))?;
    }
    Ok("theta(e2, e3) nontrivial; 20 coboundaries; center formula on window 10".into())
}

fn criterion_10() -> Outcome {
    let p = load("m1");
    for w in 5..=10 {
        let q = truncate(&p, w).unwrap();
        let e = exp_derivation(&q, &q.ad(&SparseVector::unit(0))).map_err(|e| e.to_string())?;
        ensure(e.verdict.is_holds(), format!("window {w}: {:?}", e.verdict.witness))?;
    }
    Ok("exp(ad e1) is an automorphism on windows 5 to 10".into())
}

fn random_table(rng: &mut TestRng) -> Table {
    loop {
        let k = 2 + (rng.next_u32() % 3) as usize;
        let count = 1 + (rng.next_u32() % 3) as usize;
        let strict = rng.next_u32().is_multiple_of(2);
        let gens: Vec<oracle::Dense> = (0..count)
            .map(|_| {
                let raw: Vec<i64> = (0..k * k)
                    .map(|_| if rng.next_u32().is_multiple_of(2) { 0 } else { (rng.next_u32() % 5) as i64 - 2 })
                    .collect();
                oracle::upper(k, &raw, strict)
            })
            .collect();
        if let Some(t) = oracle::matrix_algebra(&gens, 8).filter(|t| t.n >= 2) {
            return t;
        }
    }
}

fn same_span(a: &[Vec<Scalar>], b: &[SparseVector], n: usize) -> bool {
    let sa: Vec<SparseVector> = a
        .iter()
        .map(|v| SparseVector::from_pairs(v.iter().cloned().enumerate()))
        .collect();
    let (x, y) = (Subspace::span(n, &sa), Subspace::span(n, b));
    x == y
}

fn compare(q: &FiniteQuotient, t: &Table) -> Result<(), String> {
    let n = q.dim();
    let ders = derivation_space(q);
    ensure(ders.len() == t.derivation_dim(), format!("Der dim {} vs {}", ders.len(), t.derivation_dim()))?;
    ensure(ders.iter().all(|d| t.is_derivation(&d.to_dense())), "non-derivation returned")?;
    let leibniz = t.leibniz();
    let m = if leibniz.is_empty() { Matrix::zeros(0, n * n) } else { Matrix::from_rows(&leibniz) };
    ensure(same_span(&oracle::nullspace(&leibniz, n * n), &kernel_basis(&m), n * n), "Leibniz kernel")?;
    for i in 0..n {
        let ad = q.ad(&SparseVector::unit(i));
        let dense = ad.to_dense();
        ensure(same_span(&oracle::nullspace(&dense, n), &kernel_basis(&ad), n), "ad kernel")?;
    }
    ensure(series(q, SeriesKind::LowerCentral).dims() == t.lcs_dims(), "lower central series")?;
    ensure(series(q, SeriesKind::Derived).dims() == t.derived_dims(), "derived series")?;
    Ok(())
}

fn criterion_11() -> Outcome {
    let mut rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[11; 32]);
    let mut tested = 0;
    let mut dims = [0usize; 9];
    while tested < 1000 {
        let t = random_table(&mut rng);
        let q = t.to_quotient("random");
        if !q.jacobi_holds() || !t.jacobi() {
            return Err("generator produced a non-Lie table".into());
        }
        compare(&q, &t).map_err(|e| format!("table {tested}: {e}"))?;
        dims[t.n] += 1;
        tested += 1;
    }
    let mut catalog_quotients = 0;
    for e in catalog::ENTRIES {
        let p = load(e.name);
        for w in 1..=12 {
            let q = truncate(&p, w).unwrap();
            if q.dim() > 8 {
                break;
            }
            compare(&q, &Table::of(&q)).map_err(|err| format!("{} window {w}: {err}", e.name))?;
            catalog_quotients += 1;
        }
    }
    Ok(format!("1000 random tables (dims 2..8: {:?}) and {catalog_quotients} catalog quotients", &dims[2..]))
}

fn criterion_12() -> Outcome {
    let mut runs = 0;
    let mut invocations: Vec<Vec<String>> = vec![vec!["catalog".into()]];
    for e in catalog::ENTRIES {
        let f = format!("catalog:{}", e.name);
        let cmds: Vec<Vec<&str>> = vec![
            vec!["check", &f, "--window", "8"],
            vec!["series", &f, "--window", "8", "--kind", "derived"],
            vec!["profile", &f, "--windows", "6,8"],
            vec!["torus", &f, "--window", "8"],
            vec!["rank", &f, "--windows", "6,8"],
            vec!["roots", &f, "--window", "8"],
            vec!["derivations", &f, "--window", "6"],
            vec!["char-pronilpotent", &f, "--windows", "6,8"],
            vec!["extend", &f, "--windows", "6,8"],
            vec!["current", &f, "--window", "6"],
            vec!["sum", &f, "catalog:m1", "--window", "6"],
            vec!["exp", &f, "--derivation", "zero", "--window", "6"],
            vec!["catalog", e.name],
        ];
        invocations.extend(cmds.into_iter().map(|c| c.into_iter().map(String::from).collect()));
    }
    for inv in &invocations {
        let mut args = vec!["prolie".to_string()];
        args.extend(inv.iter().cloned());
        args.extend(["--format".into(), "json".into()]);
        let (a, b) = (run(&args, None), run(&args, None));
        ensure(a == b, format!("`{}` differs between runs", inv.join(" ")))?;
        if a.code <= 1 {
            serde_json::from_str::<serde_json::Value>(&a.stdout).map_err(|e| format!("{}: {e}", inv.join(" ")))?;
        }
        runs += 1;
    }
    Ok(format!("{runs} invocations byte-identical"))
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        (1, "catalog verdict matrix", criterion_1),
        (2, "ranks stable on windows 8, 12, 16", criterion_2),
        (3, "m1 root decomposition", criterion_3),
        (4, "characteristic pro-nilpotency", criterion_4),
        (5, "torus extension of m1", criterion_5),
        (6, "inner action rejected", criterion_6),
        (7, "powers of sums of ideals", criterion_7),
        (8, "derived ideal of witt_nonneg", criterion_8),
        (9, "central extensions of m1", criterion_9),
        (10, "exponential automorphism", criterion_10),
        (11, "dense oracle equivalence", criterion_11),
        (12, "report determinism", criterion_12),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        let start = std::time::Instant::now();
        let res = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let res = res.map(|d| format!("{d} [{secs:.1}s]")).map_err(|d| format!("{d} [{secs:.1}s]"));
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        match (&res, known) {
            (Ok(detail), None) => println!("criterion {id:>2} PASS  {name} (tolerance: exact) | {detail}"),
            (Ok(detail), Some(_)) => {
                unexpected += 1;
                println!("criterion {id:>2} PASS  {name} (tolerance: exact) | listed as a known failure | {detail}");
            }
            (Err(why), Some((_, reason))) => {
                println!("criterion {id:>2} FAIL  {name} (tolerance: exact) | {why} | known: {reason}")
            }
            (Err(why), None) => {
                unexpected += 1;
                println!("criterion {id:>2} FAIL  {name} (tolerance: exact) | {why}");
            }
        }
    }
    let _ = panic::take_hook();
    if unexpected > 0 {
        println!("{unexpected} criterion result(s) differ from expectations");
        std::process::exit(1);
    }
}
