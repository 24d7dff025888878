mod common;

use common::oracle::Table;
use common::*;
use prolie_core::exactlin::{int, SparseVector, Subspace};
use prolie_core::filtration::{
    natural_basis, nilpotency_profile, series, solvability_profile, span_closure, truncate, ClosureMode,
    FiniteQuotient, SeriesKind,
};
use prolie_core::Status;
use proptest::prelude::*;

fn quotients() -> Vec<FiniteQuotient> {
    let mut out = Vec::new();
    for p in catalog() {
        for w in [6, 9] {
            out.push(truncate(&p, w).unwrap());
        }
    }
    out
}

fn is_ideal(q: &FiniteQuotient, s: &Subspace) -> bool {
    s.contains_subspace(&q.bracket_spaces(s, &Subspace::full(q.dim())))
}

#[test]
fn series_terms_are_ideals() {
    for q in quotients() {
        for kind in [SeriesKind::LowerCentral, SeriesKind::Derived] {
            for t in &series(&q, kind).terms {
                assert!(is_ideal(&q, t), "{} {:?}", q.name(), kind);
            }
        }
    }
}

#[test]
fn derived_terms_sit_inside_lower_central_terms() {
    for q in quotients() {
        let lcs = series(&q, SeriesKind::LowerCentral);
        let der = series(&q, SeriesKind::Derived);
        let lcs_term = |k: usize| lcs.terms.get(k).unwrap_or(lcs.terms.last().unwrap()).clone();
        for (k, t) in der.terms.iter().enumerate() {
            // L^[k+1] ⊆ L^(2^k)
            let idx = (1usize << k.min(16)) - 1;
            assert!(lcs_term(idx).contains_subspace(t), "{} step {k}", q.name());
        }
    }
}

#[test]
fn series_dimensions_match_dense_oracle() {
    for q in quotients() {
        let t = Table::of(&q);
        assert_eq!(series(&q, SeriesKind::LowerCentral).dims(), t.lcs_dims(), "{}", q.name());
        assert_eq!(series(&q, SeriesKind::Derived).dims(), t.derived_dims(), "{}", q.name());
    }
}

#[test]
fn ad_is_a_homomorphism_on_catalog_windows() {
    for q in quotients() {
        let n = q.dim();
        for i in 0..n.min(4) {
            for j in 0..n {
                let (x, y) = (SparseVector::unit(i), SparseVector::unit(j));
                let lhs = q.ad(&q.bracket(&x, &y));
                assert_eq!(lhs, q.ad(&x).commutator(&q.ad(&y)), "{} ({i},{j})", q.name());
            }
        }
    }
}

#[test]
fn natural_basis_layers_match_lower_central_layers() {
    for p in [m1(), m2(), witt_pos(), n1()] {
        let q = truncate(&p, 9).unwrap();
        let nb = natural_basis(&q).unwrap();
        let layers: Vec<usize> = nb.layers.iter().map(Vec::len).collect();
        let lcs = series(&q, SeriesKind::LowerCentral).layer_dims();
        assert_eq!(layers, lcs, "{}", p.name);
        assert_eq!(Subspace::span(q.dim(), &nb.flatten()).dim(), q.dim());
    }
}

#[test]
fn m1_profile() {
    let p = m1();
    let nil = nilpotency_profile(&p, &[8, 12]).unwrap();
    let sol = solvability_profile(&p, &[8, 12]).unwrap();
    assert_eq!(nil.verdict("pro_nilpotent").unwrap().status, Status::HoldsToDepth);
    assert_eq!(sol.verdict("residually_solvable").unwrap().status, Status::HoldsToDepth);
    let pro = sol.verdict("pro_solvable").unwrap();
    assert_eq!(pro.status, Status::FailsAtDepth);
    assert!(pro.witness.as_deref().unwrap().contains("L^[3] = 0"));
}

#[test]
fn witt_nonneg_is_not_residually_nilpotent() {
    let nil = nilpotency_profile(&witt_nonneg(), &[8, 12]).unwrap();
    let v = nil.verdict("residually_nilpotent").unwrap();
    assert_eq!(v.status, Status::FailsAtDepth);
    assert!(v.witness.as_deref().unwrap().contains("L^2 = L^3"));
}

fn ideal_power(q: &FiniteQuotient, i: &Subspace, k: usize) -> Subspace {
    let mut t = i.clone();
    for _ in 1..k {
        t = q.bracket_spaces(&t, i);
    }
    t
}

fn ideal_derived(q: &FiniteQuotient, i: &Subspace, k: usize) -> Subspace {
    let mut t = i.clone();
    for _ in 1..k {
        t = q.bracket_spaces(&t, &t);
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Sums of two ideals: `(I+J)^(2i-1) ⊆ I^i + J^i` and `(I+J)^[2i] ⊆ I^[i] + J^[i]`.
    #[test]
    fn powers_of_ideal_sums(
        pick in 0usize..4,
        a in prop::collection::vec(-2i64..=2, 4),
        b in prop::collection::vec(-2i64..=2, 4),
    ) {
        let p = [m1(), m2(), witt_pos(), n1()][pick].clone();
        let q = truncate(&p, 10).unwrap();
        let gen = |c: &[i64]| SparseVector::from_pairs(c.iter().enumerate().map(|(k, &x)| (k, int(x))));
        let i = span_closure(&q, &[gen(&a)], ClosureMode::Ideal);
        let j = span_closure(&q, &[gen(&b)], ClosureMode::Ideal);
        let s = i.sum(&j);
        for k in 1..=4 {
            let lhs = ideal_power(&q, &s, 2 * k - 1);
            prop_assert!(ideal_power(&q, &i, k).sum(&ideal_power(&q, &j, k)).contains_subspace(&lhs));
        }
        for k in 1..=3 {
            let lhs = ideal_derived(&q, &s, 2 * k);
            prop_assert!(ideal_derived(&q, &i, k).sum(&ideal_derived(&q, &j, k)).contains_subspace(&lhs));
        }
    }
}
