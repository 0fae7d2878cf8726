//! Property tests for ID-modules, fundamental matrices and the Wronskian.

use idpv::idmodule::{check_cocycle, check_module_iteration, from_derivation_matrix, radicand, IdModuleSpec};
use idpv::idring::{BaseElem, IdRing};
use idpv::solver::{fundamental_matrix, hasse_wronskian, verify_constant_basis, Wronskian};
use idpv::{FieldSpec, Poly, RingElem, Scalar, TruncSeries};
use proptest::prelude::*;

fn q() -> FieldSpec {
    FieldSpec::rationals()
}

/// Square matrices of small integer polynomials, as coefficient lists.
fn derivation_matrix(max_rank: usize) -> impl Strategy<Value = Vec<Vec<Vec<i64>>>> {
    (1..=max_rank).prop_flat_map(|r| {
        prop::collection::vec(prop::collection::vec(prop::collection::vec(-4i64..=4, 1..=3), r), r)
    })
}

fn build(field: FieldSpec, d: &[Vec<Vec<i64>>], k: usize) -> IdModuleSpec {
    let base = IdRing::poly(field);
    let m: Vec<Vec<BaseElem>> = d
        .iter()
        .map(|row| row.iter().map(|c| base.from_poly(Poly::from_ints(field, c)).unwrap()).collect())
        .collect();
    from_derivation_matrix(&base, &m, k).unwrap()
}

/// Perturb one coefficient of `A`; position chosen by the caller.
fn perturb(m: &IdModuleSpec, i: usize, j: usize, n: usize) -> IdModuleSpec {
    let mut a = m.matrix().clone();
    let mut c = a[i][j].coeffs().to_vec();
    c[n] = c[n].add(&m.base().one());
    a[i][j] = TruncSeries::new(c);
    IdModuleSpec::new(m.base().clone(), a, m.is_polynomial_in_t()).unwrap()
}

/// Coefficients of `exp(a t)` through `t^order`.
fn exp_series(a: i64, order: usize) -> TruncSeries<Scalar> {
    let mut c = vec![q().one()];
    for n in 1..=order {
        let next = c[n - 1].mul(&q().ratio(a, n as i64).unwrap());
        c.push(next);
    }
    TruncSeries::new(c)
}

#[test]
fn derivation_matrix_needs_char_zero() {
    let f = FieldSpec::prime(5).unwrap();
    let base = IdRing::poly(f);
    let err = from_derivation_matrix(&base, &vec![vec![base.one()]], 4).unwrap_err();
    assert!(matches!(err, idpv::Error::CharNotZero(5)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn derivation_matrix_gives_a_cocycle(d in derivation_matrix(3)) {
        let m = build(q(), &d, 8);
        let rep = check_cocycle(&m, 4, 4).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.violations.first());
    }

    /// Radicand modules in characteristic `p` with `p ∤ m` satisfy both laws.
    #[test]
    fn radicand_cocycle_in_char_p(p in prop::sample::select(vec![5u64, 7, 11]), m in 2u64..=4, c in prop::collection::vec(1i64..=4, 1..=3)) {
        prop_assume!(m % p != 0);
        let field = FieldSpec::prime(p).unwrap();
        let mut f = Poly::from_ints(field, &c);
        if f.coeff(0).is_zero() {
            f = f.add(&Poly::constant(field.one()));
        }
        prop_assume!(!f.coeff(0).is_zero());
        let local = IdRing::localized(field, vec![f.clone()]).unwrap();
        let module = radicand(&local, m, &f, 2 * p as usize).unwrap();
        prop_assert!(check_cocycle(&module, p as usize, p as usize).unwrap().passed());
        prop_assert!(check_module_iteration(&module, 2 * p as usize).unwrap().passed());
    }

    #[test]
    fn cocycle_iff_iteration(d in derivation_matrix(2), corrupt in prop::bool::ANY, n in 1usize..=5, pos in (0usize..2, 0usize..2)) {
        let m = build(q(), &d, 8);
        let r = m.rank();
        let inst = if corrupt { perturb(&m, pos.0 % r, pos.1 % r, n) } else { m };
        let co = check_cocycle(&inst, 3, 3).unwrap().passed();
        let it = check_module_iteration(&inst, 6).unwrap().passed();
        prop_assert_eq!(co, it);
        prop_assert_eq!(co, !corrupt);
    }

    #[test]
    fn fundamental_matrix_trivializes(d in derivation_matrix(2), pt in -2i64..=2) {
        let m = build(q(), &d, 10);
        let f = fundamental_matrix(&m, &q().from_i64(pt), 10).unwrap();
        let rep = verify_constant_basis(&m, &f, 5).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.violations.first());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Exponentials with distinct rates are independent; a repeated rate
    /// yields the difference of the two copies.
    #[test]
    fn wronskian_of_exponentials(rates in prop::collection::btree_set(-5i64..=5, 1..=4), dup in prop::bool::ANY) {
        let order = 16;
        let mut rates: Vec<i64> = rates.into_iter().collect();
        if dup {
            rates.push(rates[0]);
        }
        let u: Vec<_> = rates.iter().map(|&a| exp_series(a, order)).collect();
        match hasse_wronskian(&u, order) {
            Wronskian::Independent { indices, det } => {
                prop_assert!(!dup);
                prop_assert_eq!(indices, (0..rates.len()).collect::<Vec<_>>());
                prop_assert!(det[0] != "0");
            }
            Wronskian::Dependent { combination } => {
                prop_assert!(dup);
                let nonzero: Vec<usize> = (0..combination.len()).filter(|&i| combination[i] != "0").collect();
                prop_assert_eq!(nonzero, vec![0, rates.len() - 1]);
            }
            Wronskian::Inconclusive => prop_assert!(false, "inconclusive for {rates:?}"),
        }
    }
}
