//! The iteration rule `θ^(i)∘θ^(j) = C(i+j,i) θ^(i+j)` and the homomorphism
//! laws, checked exactly on polynomial, localized and tensor-product rings.

use idpv::idring::{check_homomorphism, check_iteration_rule, constants_of_span, IdRing, IterativeDerivation};
use idpv::{FieldSpec, Poly, Result};

fn main() -> Result<()> {
    for field in [FieldSpec::rationals(), FieldSpec::prime(5)?] {
        let ring = IdRing::poly(field);
        let samples = ["t", "t^5 + 2*t", "3*t^8 - t^3 + 1"]
            .iter()
            .map(|s| ring.from_poly(Poly::parse(s, field)?))
            .collect::<Result<Vec<_>>>()?;
        let rep = check_iteration_rule(&ring, &samples, 12);
        println!("{field}[t]: iteration rule {} ({} identities)", verdict(rep.passed()), rep.checked);
        let t5 = &samples[1];
        let parts: Vec<String> = (0..=5).map(|n| ring.format(&ring.theta_n(t5, n))).collect();
        println!("  θ^(n)(t^5 + 2t), n = 0..5: {}", parts.join(", "));
    }

    let q = FieldSpec::rationals();
    let local = IdRing::localized(q, vec![Poly::t(q), Poly::parse("t - 1", q)?])?;
    let x = local.inverse_of_generator(0)?;
    let y = local.inverse_of_generator(1)?;
    let rep = check_homomorphism(&local, &x, &y, 8);
    println!("ℚ[t, 1/t, 1/(t-1)]: homomorphism {} ({} identities)", verdict(rep.passed()), rep.checked);
    let terms: Vec<String> = (0..4).map(|n| format!("[{}]·T^{n}", local.format(&local.theta_n(&x, n)))).collect();
    println!("  θ(1/t) = {} + …", terms.join(" + "));

    // constants of (ℚ[t], θ_t) ⊗ ℚ[z]: exactly the elements 1 ⊗ z^k
    let tensor = IdRing::tensor(IdRing::poly(q), IdRing::trivial(q, vec!["z".into()]))?;
    let t = IdRing::poly(q).from_poly(Poly::t(q))?;
    let one = IdRing::poly(q).one();
    let z = IdRing::trivial(q, vec!["z".into()]).monomial(vec![1])?;
    let basis = vec![
        tensor.elementary_tensor(&one, &z)?,
        tensor.elementary_tensor(&t, &z)?,
        tensor.elementary_tensor(&one, &IdRing::trivial(q, vec!["z".into()]).one())?,
    ];
    let consts = constants_of_span(&tensor, &basis, 6)?;
    println!("constants of span{{1⊗z, t⊗z, 1⊗1}}: {} independent combinations", consts.len());
    for c in consts {
        println!("  {:?}", c.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "FAILS"
    }
}
