//! Galois groups at bounded degree: stabilizer equations for `F ↦ F·Z`, the
//! constants of `R ⊗ R`, and invariants of diagonal subgroups.

use idpv::idmodule::{from_derivation_matrix, radicand, IdModuleSpec};
use idpv::idring::IdRing;
use idpv::pvgalois::{diagonal_invariants, mine_relations, pv_generators, stabilizer_equations, tensor_constants_check};
use idpv::{FieldSpec, Poly, Result, Scalar};

fn main() -> Result<()> {
    let q = FieldSpec::rationals();
    let base = IdRing::poly(q);
    let exp = from_derivation_matrix(&base, &vec![vec![base.one()]], 16)?;
    group("exp", &exp, &q.zero(), 16, 2, 1, None)?;

    let local = IdRing::localized(q, vec![Poly::t(q)])?;
    for (m, n, sub) in [(3, 24, Some(3)), (6, 40, Some(3))] {
        let module = radicand(&local, m, &Poly::t(q), n)?;
        group(&format!("t^(1/{m})"), &module, &q.one(), n, 3, 1, sub)?;
    }
    Ok(())
}

fn group(name: &str, m: &IdModuleSpec, c: &Scalar, n: usize, d: u32, e: usize, sub: Option<u64>) -> Result<()> {
    let p = pv_generators(m, None, c, n)?;
    let rs = mine_relations(&p, d, e)?;
    let g = stabilizer_equations(&rs, &p, 3)?;
    let eqs = g.render();
    if eqs.is_empty() {
        println!("{name}: no equations on z up to degree 3 (consistent with the full torus)");
    } else {
        println!("{name}: stabilizer cut out by {}", eqs.join(", "));
    }
    let tc = tensor_constants_check(m, &p, &rs, d, 4)?;
    println!("  constants of R⊗R in bidegree ({d},{d}): dimension {}, powers of Z span {}", tc.dimension, tc.expected);
    if let Some(k) = sub {
        let inv = diagonal_invariants(&rs, m, &p, &g, Some(k))?;
        println!("  invariants of μ_{k}: generators {:?}, base elements {:?}", inv.generators, inv.base_elements);
        println!("    relations among them: {:?}", inv.relations);
    }
    Ok(())
}
