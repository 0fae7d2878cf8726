//! ID-modules from a derivation matrix and from a radicand, with the cocycle
//! condition and the module iteration rule checked side by side, including
//! on a deliberately corrupted matrix.

use idpv::idmodule::{check_cocycle, check_module_iteration, from_derivation_matrix, radicand, IdModuleSpec};
use idpv::idring::{BaseElem, IdRing};
use idpv::{FieldSpec, Poly, Result, RingElem, TruncSeries};

fn main() -> Result<()> {
    let q = FieldSpec::rationals();
    let base = IdRing::poly(q);
    let t = base.from_poly(Poly::t(q))?;
    // ∂ + D with D = [[0, 1], [t, 0]] (Airy-type)
    let d = vec![vec![base.zero(), base.one()], vec![t.clone(), base.zero()]];
    let airy = from_derivation_matrix(&base, &d, 8)?;
    report("Airy module", &airy)?;
    for n in 0..3 {
        let a = airy.coeff(n)?;
        let cells: Vec<String> = a.iter().flatten().map(|x| base.format(x)).collect();
        println!("  A_{n} = {cells:?}");
    }

    let local = IdRing::localized(q, vec![Poly::t(q)])?;
    let cube = radicand(&local, 3, &Poly::t(q), 8)?;
    report("t^(1/3) module", &cube)?;

    // perturb one coefficient: both checkers must now reject
    let mut a = airy.matrix().clone();
    let mut c: Vec<BaseElem> = a[0][1].coeffs().to_vec();
    c[3] = c[3].add(&base.one());
    a[0][1] = TruncSeries::new(c);
    let broken = IdModuleSpec::new(base.clone(), a, false)?;
    report("corrupted Airy module", &broken)?;
    Ok(())
}

fn report(name: &str, m: &IdModuleSpec) -> Result<()> {
    let co = check_cocycle(m, 4, 4)?;
    let it = check_module_iteration(m, 8)?;
    println!(
        "{name}: cocycle {} ({} cells), module iteration {} ({} identities)",
        if co.passed() { "holds" } else { "fails" },
        co.checked,
        if it.passed() { "holds" } else { "fails" },
        it.checked
    );
    if let Some(v) = co.violations.first() {
        println!("  first cocycle violation at {:?}: {} vs {}", v.indices, v.lhs, v.rhs);
    }
    Ok(())
}
