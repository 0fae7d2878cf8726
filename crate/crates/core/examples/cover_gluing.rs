//! A module presented on the cover `{t, t - 1}` of the affine line: local
//! generators, gluing back to a free presentation, and agreement of the
//! mined relations with those of the free presentation.

use idpv::idmodule::{from_derivation_matrix, validate_cover, LocalCoverData};
use idpv::idring::{BaseElem, IdRing};
use idpv::pvgalois::{mine_relations, pv_generators};
use idpv::{FieldSpec, Poly, Result};

fn main() -> Result<()> {
    let q = FieldSpec::rationals();
    let base = IdRing::poly(q);
    let m = from_derivation_matrix(&base, &vec![vec![base.one()]], 40)?;
    let x = vec![Poly::t(q), Poly::parse("t - 1", q)?];
    let a = vec![BaseElem::Poly(Poly::constant(q.one())), BaseElem::Poly(Poly::constant(-q.one()))];
    let cover = LocalCoverData::new(&base, 1, x, vec![1, 1], a, None, None)?;
    let rep = validate_cover(&cover, &m);
    println!("cover {{t, t - 1}} with 1·t - 1·(t - 1) = 1: valid = {}", rep.passed());

    let c = q.from_i64(2);
    let local = pv_generators(&m, Some(&cover), &c, 40)?;
    println!("local symbols: {:?}", local.symbols);
    let glued = local.glued_free()?;
    let free = pv_generators(&m, None, &c, 40)?;
    let agree = glued.images.iter().zip(&free.images).all(|(g, f)| g.agrees_to(f, glued.order.min(free.order)));
    println!("glued images agree with the free presentation: {agree}");

    let (d, e) = (2, 1);
    let rs_free = mine_relations(&free, d, e)?;
    let rs_glued = mine_relations(&glued, d, e)?;
    let same = rs_glued.relations.iter().all(|r| rs_free.contains(r)) && rs_free.relations.iter().all(|r| rs_glued.contains(r));
    println!("free relations {:?}; glued relations span the same space: {same}", rs_free.render());
    Ok(())
}
