//! Picard–Vessiot presentations: generator images, mined relations certified
//! to a truncation order, and the θ-stability of the relation ideal.

use idpv::idmodule::{from_derivation_matrix, radicand, IdModuleSpec};
use idpv::idring::IdRing;
use idpv::pvgalois::{check_id_stable_ideal, mine_relations, pv_generators};
use idpv::{FieldSpec, Poly, Result, Scalar};

fn main() -> Result<()> {
    let q = FieldSpec::rationals();
    let base = IdRing::poly(q);
    let exp = from_derivation_matrix(&base, &vec![vec![base.one()]], 16)?;
    show("exp", &exp, &q.zero(), 16, 2, 1)?;

    let local = IdRing::localized(q, vec![Poly::t(q)])?;
    let cube = radicand(&local, 3, &Poly::t(q), 24)?;
    show("t^(1/3)", &cube, &q.one(), 24, 3, 1)?;

    let f5 = FieldSpec::prime(5)?;
    let local5 = IdRing::localized(f5, vec![Poly::t(f5)])?;
    let cube5 = radicand(&local5, 3, &Poly::t(f5), 24)?;
    show("t^(1/3) over F_5", &cube5, &f5.one(), 24, 3, 1)?;
    Ok(())
}

fn show(name: &str, m: &IdModuleSpec, c: &Scalar, n: usize, d: u32, e: usize) -> Result<()> {
    let p = pv_generators(m, None, c, n)?;
    println!("{name}: symbols {:?} at t = {c}", p.symbols);
    for (s, img) in p.symbols.iter().zip(&p.images) {
        let head: Vec<String> = img.coeffs().iter().take(6).map(|x| x.to_string()).collect();
        println!("  {s} ↦ {} + …", head.join(", "));
    }
    let rs = mine_relations(&p, d, e)?;
    println!("  relations at (d, e) = ({d}, {e}), certified to order {}:", rs.certified_order);
    for r in rs.render() {
        println!("    {r}");
    }
    let stable = check_id_stable_ideal(&rs, m, &p, 4)?;
    println!("  θ-stable through T^4: {} ({} memberships)", stable.passed(), stable.checked);
    Ok(())
}
