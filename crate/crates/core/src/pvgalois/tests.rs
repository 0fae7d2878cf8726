use super::*;
use crate::idmodule::{from_derivation_matrix, radicand, LocalCoverData};
use crate::idring::{BaseElem, IdRing};
use crate::poly::Poly;
use crate::ring::RingElem;

fn q() -> FieldSpec {
    FieldSpec::rationals()
}

fn exp_module(k: usize) -> IdModuleSpec {
    let base = IdRing::poly(q());
    from_derivation_matrix(&base, &vec![vec![base.one()]], k).unwrap()
}

fn radicand_module(m: u64, k: usize) -> IdModuleSpec {
    let base = IdRing::localized(q(), vec![Poly::t(q())]).unwrap();
    radicand(&base, m, &Poly::t(q()), k).unwrap()
}

fn sym(s: &str, names: &[&str]) -> SymPoly<Poly> {
    SymPoly::parse(s, names, q()).unwrap()
}

#[test]
fn exponential_relations() {
    let m = exp_module(16);
    let p = pv_generators(&m, None, &q().zero(), 16).unwrap();
    let rs = mine_relations(&p, 2, 1).unwrap();
    assert_eq!(rs.render(), vec!["g0*g1 - 1"]);
    for r in &rs.relations {
        assert!(evaluate(r, &p).is_zero());
    }
    assert!(check_id_stable_ideal(&rs, &m, &p, 4).unwrap().passed());
    let mut bogus = rs.clone();
    bogus.relations = vec![sym("g1 - 1", &["g0", "g1"])];
    let rep = check_id_stable_ideal(&bogus, &m, &p, 4).unwrap();
    assert!(!rep.passed());
    assert_eq!(rep.violations[0].indices, vec![0, 1]);
    let g = stabilizer_equations(&rs, &p, 3).unwrap();
    assert!(g.render().is_empty());
    assert_eq!(g.diagonal_order().unwrap(), 0);
}

#[test]
fn trivial_module_relations() {
    let m = IdModuleSpec::identity(IdRing::poly(q()), 1, 16);
    let p = pv_generators(&m, None, &q().zero(), 16).unwrap();
    let rs = mine_relations(&p, 2, 1).unwrap();
    assert_eq!(rs.render(), vec!["g1 - 1", "g0 - 1"]);
    let g = stabilizer_equations(&rs, &p, 3).unwrap();
    assert_eq!(g.render(), vec!["z - 1"]);
    let tc = tensor_constants_check(&m, &p, &rs, 2, 4).unwrap();
    assert_eq!((tc.dimension, tc.expected), (1, 1));
}

#[test]
fn radicand_relations() {
    let m = radicand_module(3, 24);
    let p = pv_generators(&m, None, &q().one(), 24).unwrap();
    let rs = mine_relations(&p, 3, 1).unwrap();
    let names = ["g0", "g1"];
    assert!(rs.contains(&sym("g1^3 - t", &names)));
    assert!(rs.contains(&sym("g0*g1 - 1", &names)));
    assert!(!rs.contains(&sym("g1 - 1", &names)));
    assert!(check_id_stable_ideal(&rs, &m, &p, 4).unwrap().passed());
    let g = stabilizer_equations(&rs, &p, 3).unwrap();
    assert_eq!(g.render(), vec!["z^3 - 1"]);
    assert_eq!(g.diagonal_order().unwrap(), 3);
}

#[test]
fn not_enough_order() {
    let m = exp_module(6);
    let p = pv_generators(&m, None, &q().zero(), 6).unwrap();
    assert!(matches!(mine_relations(&p, 2, 1), Err(Error::InsufficientOrder { .. })));
}

#[test]
fn tensor_constants() {
    let m = exp_module(30);
    let p = pv_generators(&m, None, &q().zero(), 30).unwrap();
    let rs = mine_relations(&p, 2, 1).unwrap();
    let tc = tensor_constants_check(&m, &p, &rs, 2, 4).unwrap();
    assert_eq!(tc.dimension, 5, "{tc:?}");
    assert!(tc.passed());

    let m = radicand_module(3, 30);
    let p = pv_generators(&m, None, &q().one(), 30).unwrap();
    let rs = mine_relations(&p, 3, 1).unwrap();
    let tc = tensor_constants_check(&m, &p, &rs, 3, 4).unwrap();
    assert_eq!(tc.dimension, 3, "{tc:?}");
    assert!(tc.passed());
}

#[test]
fn invariants() {
    let m = radicand_module(6, 40);
    let p = pv_generators(&m, None, &q().one(), 40).unwrap();
    let rs = mine_relations(&p, 3, 1).unwrap();
    let g = stabilizer_equations(&rs, &p, 3).unwrap();
    assert_eq!(g.diagonal_order().unwrap(), 6);
    let inv = diagonal_invariants(&rs, &m, &p, &g, Some(3)).unwrap();
    assert_eq!(inv.generators, vec!["g1^3", "g0^3"]);
    let hs = inv.relation_set.as_ref().unwrap();
    assert!(hs.contains(&sym("h0^2 - t", &["h0", "h1"])), "{inv:?}");
    assert!(!hs.contains(&sym("h0 - 1", &["h0", "h1"])));
    let inv = diagonal_invariants(&rs, &m, &p, &g, Some(1)).unwrap();
    assert_eq!(inv.generators, vec!["g1", "g0"]);

    let m = radicand_module(3, 30);
    let p = pv_generators(&m, None, &q().one(), 30).unwrap();
    let rs = mine_relations(&p, 3, 1).unwrap();
    let g = stabilizer_equations(&rs, &p, 3).unwrap();
    let inv = diagonal_invariants(&rs, &m, &p, &g, None).unwrap();
    assert!(inv.generators.is_empty(), "{inv:?}");
    assert!(!inv.base_elements.is_empty());
}

#[test]
fn cover_round_trip() {
    let base = IdRing::poly(q());
    let m = exp_module(12);
    let x = vec![Poly::t(q()), Poly::parse("t - 1", q()).unwrap()];
    let a = vec![BaseElem::Poly(Poly::constant(q().one())), BaseElem::Poly(Poly::constant(-q().one()))];
    let c = LocalCoverData::new(&base, 1, x, vec![1, 1], a, None, None).unwrap();
    let pc = pv_generators(&m, Some(&c), &q().from_i64(2), 12).unwrap();
    assert!(!pc.is_free());
    assert_eq!(pc.symbols.len(), 4);
    let glued = pc.glued_free().unwrap();
    let free = pv_generators(&m, None, &q().from_i64(2), 12).unwrap();
    for (g, f) in glued.images.iter().zip(&free.images) {
        assert!(g.agrees_to(f, glued.order.min(free.order)));
    }

    let trivial = LocalCoverData::new(
        &base,
        1,
        vec![Poly::constant(q().one())],
        vec![0],
        vec![BaseElem::Poly(Poly::constant(q().one()))],
        None,
        None,
    )
    .unwrap();
    assert_eq!(pv_generators(&m, Some(&trivial), &q().zero(), 12).unwrap(), pv_generators(&m, None, &q().zero(), 12).unwrap());
}
