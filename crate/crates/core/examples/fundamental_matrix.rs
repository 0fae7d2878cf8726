//! Trivialization over the formal completion: `F = A(t,-t)`, its exact
//! verification, Hasse–Wronskians and a bounded linear-relation search.

use idpv::idmodule::{from_derivation_matrix, radicand};
use idpv::idring::IdRing;
use idpv::solver::{find_linear_id_relation, fundamental_matrix, hasse_wronskian, verify_constant_basis};
use idpv::{FieldSpec, Poly, Result, RingElem};

fn main() -> Result<()> {
    let q = FieldSpec::rationals();
    let base = IdRing::poly(q);
    let exp = from_derivation_matrix(&base, &vec![vec![base.one()]], 12)?;
    let f = fundamental_matrix(&exp, &q.zero(), 12)?;
    println!("exp module: F = {:?}", f.f[0][0].coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    let rep = verify_constant_basis(&exp, &f, 6)?;
    println!("  A(t,T) F(t+T) = F(t) through T^6: {} ({} identities)", rep.passed(), rep.checked);

    let local = IdRing::localized(q, vec![Poly::t(q)])?;
    let cube = radicand(&local, 3, &Poly::t(q), 12)?;
    let f = fundamental_matrix(&cube, &q.one(), 12)?;
    println!("t^(1/3) module at t = 1: F = {:?}", f.f[0][0].coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    match fundamental_matrix(&cube, &q.zero(), 12) {
        Err(e) => println!("  at t = 0: {e}"),
        Ok(_) => println!("  at t = 0: unexpectedly fine"),
    }

    // exp(t), exp(-t) and their sum
    let e_plus = f_series(&base, 1, 14)?;
    let e_minus = f_series(&base, -1, 14)?;
    println!("Wronskian of (exp(-t), exp(t)): {:?}", hasse_wronskian(&[e_plus.clone(), e_minus.clone()], 6));
    let sum = e_plus.add(&e_minus);
    println!("Wronskian of (exp(-t), exp(t), sum): {:?}", hasse_wronskian(&[e_plus.clone(), e_minus, sum], 6));

    let rel = find_linear_id_relation(&e_plus, &base, 1, 1)?;
    match rel {
        Some(r) => println!(
            "linear relation for exp(-t): {:?}, certified to order {}",
            r.coefficients.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            r.certified_order
        ),
        None => println!("no linear relation within bounds"),
    }
    Ok(())
}

fn f_series(base: &IdRing, rate: i64, n: usize) -> Result<idpv::TruncSeries<idpv::Scalar>> {
    let q = base.field();
    let d = vec![vec![base.from_poly(Poly::constant(q.from_i64(rate)))?]];
    let m = from_derivation_matrix(base, &d, n)?;
    Ok(fundamental_matrix(&m, &q.zero(), n)?.f[0][0].clone())
}
