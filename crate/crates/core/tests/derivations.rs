mod common;

use common::oracle::{self, Table};
use common::*;
use prolie_core::derivations::{
    center_and_inner, characteristically_pronilpotent, d11, derivation_space, format_root, is_derivation,
    is_strictly_triangularizable, rank, root_decomposition, st_independent, torus_of_quotient, torus_system,
};
use prolie_core::exactlin::{int, Matrix, SparseVector, Subspace};
use prolie_core::filtration::truncate;
use prolie_core::{RandomCheck, Status};

#[test]
fn ranks_of_the_catalog() {
    let cases = [
        (m1(), vec![8, 12, 16], 2, true),
        (witt(0), vec![8, 12, 16], 1, false),
        (witt(1), vec![8, 12, 16], 1, false),
        (witt(2), vec![12, 16, 20], 1, false),
        (char_nil(), vec![8, 12, 16], 0, false),
        (n1(), vec![8, 12, 16], 2, true),
    ];
    for (p, ws, r, maximal) in cases {
        let rep = rank(&p, &ws).unwrap();
        assert_eq!(rep.rank, Some(r), "{}: {:?}", p.name, rep.per_window);
        assert_eq!(rep.maximal_rank, maximal, "{}", p.name);
        assert!(rep.bound_respected);
        assert_eq!(rep.verdict.status, Status::HoldsToDepth);
    }
}

#[test]
fn small_window_overstates_the_rank_of_w2() {
    // Below weight 12 the brackets of W(2) have not yet tied the generators together.
    assert!(torus_system(&witt(2), 8).unwrap().dim() > 1);
    assert_eq!(torus_system(&witt(2), 12).unwrap().dim(), 1);
}

#[test]
fn m1_roots_are_integral_in_two_primitive_roots() {
    let t = torus_system(&m1(), 10).unwrap();
    for (i, label) in t.labels.iter().enumerate() {
        let k: i64 = label[2..label.len() - 1].parse().unwrap();
        let expected = if k == 1 { vec![int(1), int(0)] } else { vec![int(k - 2), int(1)] };
        assert_eq!(t.root_of(i), expected, "{label}");
    }
    let d = root_decomposition(&t);
    assert!(d.non_integral.is_empty());
    assert_eq!(d.primitive, vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
    assert_eq!(format_root(&t.root_of(3)), "(2,1)");
}

#[test]
fn torus_elements_are_commuting_derivations() {
    for p in catalog() {
        let q = truncate(&p, 8).unwrap();
        let t = torus_of_quotient(&q);
        let ms = t.matrices();
        for m in &ms {
            assert!(is_derivation(&q, m), "{}", p.name);
            for n in &ms {
                assert!(m.commutator(n).is_zero());
            }
        }
    }
}

#[test]
fn derivation_space_matches_dense_oracle_on_catalog() {
    for p in catalog() {
        let q = truncate(&p, 6).unwrap();
        let t = Table::of(&q);
        let ders = derivation_space(&q);
        assert_eq!(ders.len(), t.derivation_dim(), "{}", p.name);
        for d in &ders {
            assert!(t.is_derivation(&oracle::from_matrix(d)));
        }
        let flat: Vec<SparseVector> = ders.iter().map(Matrix::flatten).collect();
        assert_eq!(Subspace::span(q.dim() * q.dim(), &flat).dim(), ders.len());
    }
}

#[test]
fn center_and_inner_derivations() {
    for p in catalog() {
        let q = truncate(&p, 7).unwrap();
        let c = center_and_inner(&q);
        assert_eq!(c.inner_dim + c.center.dim(), q.dim(), "{}", p.name);
        assert_eq!(c.center.dim(), Table::of(&q).center_dim());
        assert!(c.inner_dim <= c.derivation_dim);
    }
}

#[test]
fn strict_triangularizability() {
    let q = truncate(&m1(), 8).unwrap();
    let ad_e1 = q.ad(&SparseVector::unit(0));
    assert!(is_strictly_triangularizable(&q, &ad_e1));
    let t = torus_of_quotient(&q);
    assert!(!is_strictly_triangularizable(&q, &t.matrix(0)));
    assert!(d11(&q, &t.matrix(0)).is_diagonal());
    let v = st_independent(&q, &t.matrices(), &RandomCheck::new(7)).unwrap();
    assert!(v.is_holds());
}

#[test]
fn characteristic_pro_nilpotency() {
    let check = RandomCheck::new(11);
    let ex = characteristically_pronilpotent(&char_nil(), &[8, 12], &check).unwrap();
    assert_eq!(ex.verdict.status, Status::HoldsToDepth);
    let m = characteristically_pronilpotent(&m1(), &[8, 12], &check).unwrap();
    assert_eq!(m.verdict.status, Status::FailsAtDepth);
    assert!(m.verdict.witness.unwrap().contains("diagonal"));
}
