//! Truncated power series: exponentials, m-th roots in characteristic 0 and p,
//! and binomial coefficients modulo p by Lucas' theorem.

use idpv::{binomial, generalized_binomial, FieldSpec, Result, RingElem, TruncSeries};

fn main() -> Result<()> {
    let q = FieldSpec::rationals();
    let e = TruncSeries::exp(q, 8, &q.one())?;
    println!("exp(t) = {:?}", strings(&e));

    let one_plus_t = TruncSeries::from_ints(q, &[1, 1, 0, 0, 0, 0, 0, 0, 0]);
    let cube_root = one_plus_t.mth_root(3)?;
    println!("(1+t)^(1/3) = {:?}", strings(&cube_root));
    let third = q.ratio(1, 3)?;
    let oracle: Vec<String> = (0..=8).map(|n| generalized_binomial(&third, n).map(|c| c.to_string())).collect::<Result<_>>()?;
    println!("  binomial-series oracle agrees: {}", strings(&cube_root) == oracle);

    let f5 = FieldSpec::prime(5)?;
    let mut coeffs = vec![0i64; 31];
    coeffs[0] = 1;
    coeffs[1] = 1;
    let s = TruncSeries::from_ints(f5, &coeffs).mth_root(3)?;
    println!("over 𝔽_5, s = (1+t)^(1/3) to order 30; s^3 = 1 + t: {}", s.pow(3) == TruncSeries::from_ints(f5, &coeffs));
    match TruncSeries::from_ints(f5, &coeffs).mth_root(5) {
        Err(err) => println!("fifth root over 𝔽_5: {err}"),
        Ok(_) => println!("fifth root over 𝔽_5 unexpectedly exists"),
    }

    let row: Vec<String> = (0..=10).map(|k| binomial(10, k, f5).to_string()).collect();
    println!("C(10, k) mod 5 = {}", row.join(" "));
    Ok(())
}

fn strings(s: &TruncSeries<idpv::Scalar>) -> Vec<String> {
    s.coeffs().iter().map(|c| c.to_string()).collect()
}
