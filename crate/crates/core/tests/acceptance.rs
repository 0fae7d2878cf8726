//! Acceptance suite: every criterion is checked with exact equality and
//! reported on its own line. Exits nonzero if any criterion fails.

use std::time::Instant;

use idpv::cli::{run_path, Command, Format};
use idpv::idmodule::{
    check_cocycle, check_module_iteration, from_derivation_matrix, radicand, tensor_product, validate_cover,
    IdModuleSpec, LocalCoverData,
};
use idpv::idring::{
    check_iteration_rule, constants_of_span, simplicity_certificate, taylor_embed, BaseElem, IdRing,
    IterativeDerivation,
};
use idpv::manifest::Overrides;
use idpv::pvgalois::{
    diagonal_invariants, mine_relations, pv_generators, required_order, stabilizer_equations, tensor_constants_check,
    PvPresentation, SymPoly,
};
use idpv::solver::{fundamental_matrix, verify_constant_basis};
use idpv::{FieldSpec, Poly, RingElem, Scalar, TruncSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q() -> FieldSpec {
    FieldSpec::rationals()
}

fn f5() -> FieldSpec {
    FieldSpec::prime(5).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, field: FieldSpec, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
    Poly::from_ints(field, &coeffs)
}

fn random_nonzero_poly(rng: &mut ChaCha8Rng, field: FieldSpec, max_deg: usize) -> Poly {
    loop {
        let p = random_poly(rng, field, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

fn sym(text: &str, names: &[&str], field: FieldSpec) -> SymPoly<Poly> {
    SymPoly::parse(text, names, field).expect("test relation parses")
}

/// Rebuild the presentation at a larger order until mining at `(d, e)` is certified.
fn presentation(m_at: impl Fn(usize) -> IdModuleSpec, cover: Option<&LocalCoverData>, c: &Scalar, d: u32, e: usize) -> PvPresentation {
    let mut n = 16;
    loop {
        let p = pv_generators(&m_at(n), cover, c, n).unwrap();
        let need = required_order(&p, d, e);
        if p.order >= need {
            return p;
        }
        n = need + (n - p.order);
    }
}

fn c1_iteration_rule() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut total = 0;
    for field in [q(), f5()] {
        let ring = IdRing::poly(field);
        let samples: Vec<BaseElem> = (0..100)
            .map(|_| ring.from_poly(random_poly(&mut rng, field, 8)).unwrap())
            .collect();
        let rep = check_iteration_rule(&ring, &samples, 12);
        ensure(rep.passed(), || format!("{field}: {:?}", rep.violations.first()))?;
        total += rep.checked;
    }
    Ok(format!("{total} identities over Q and F_5"))
}

fn c2_simplicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..50 {
        let field = if i % 2 == 0 { q() } else { f5() };
        let f = random_nonzero_poly(&mut rng, field, 10);
        let (n, u) = simplicity_certificate(&f).map_err(|e| e.to_string())?;
        let ring = IdRing::poly(field);
        let top = ring.theta_n(&ring.from_poly(f.clone()).unwrap(), n);
        ensure(n == f.degree().unwrap(), || format!("degree of {f}"))?;
        ensure(Some(&u) == f.leading_coeff(), || format!("certificate of {f} is {u}"))?;
        ensure(top == ring.from_scalar(u.clone()), || format!("θ^({n})({f}) = {top}"))?;
    }
    Ok("50 certificates equal the leading coefficient".into())
}

fn c3_trivialization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let base = IdRing::poly(q());
    let mut identities = 0;
    for _ in 0..20 {
        let r = rng.gen_range(1..=3);
        let d: Vec<Vec<BaseElem>> = (0..r)
            .map(|_| (0..r).map(|_| base.from_poly(random_poly(&mut rng, q(), 2)).unwrap()).collect())
            .collect();
        let m = from_derivation_matrix(&base, &d, 12).map_err(|e| e.to_string())?;
        let f = fundamental_matrix(&m, &q().zero(), 12).map_err(|e| e.to_string())?;
        let rep = verify_constant_basis(&m, &f, 6).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || format!("rank {r}: {:?}", rep.violations.first()))?;
        identities += rep.checked;
    }
    Ok(format!("20 modules, {identities} identities"))
}

fn corrupted(m: &IdModuleSpec, n: usize) -> IdModuleSpec {
    let mut a = m.matrix().clone();
    let mut c = a[0][0].coeffs().to_vec();
    c[n] = c[n].add(&m.base().one());
    a[0][0] = TruncSeries::new(c);
    IdModuleSpec::new(m.base().clone(), a, m.is_polynomial_in_t()).unwrap()
}

fn c4_cocycle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let base = IdRing::poly(q());
    let local = IdRing::localized(q(), vec![Poly::t(q())]).unwrap();
    let local5 = IdRing::localized(f5(), vec![Poly::t(f5())]).unwrap();
    let t = base.from_poly(Poly::t(q())).unwrap();
    let mut valid = vec![
        from_derivation_matrix(&base, &vec![vec![base.one()]], 8).unwrap(),
        from_derivation_matrix(&base, &vec![vec![base.zero(), base.one()], vec![t, base.zero()]], 8).unwrap(),
        radicand(&local, 2, &Poly::t(q()), 8).unwrap(),
        radicand(&local, 3, &Poly::t(q()), 8).unwrap(),
        radicand(&local5, 3, &Poly::t(f5()), 8).unwrap(),
        IdModuleSpec::identity(base.clone(), 2, 8),
    ];
    valid.push(tensor_product(&valid[0], &valid[1]).unwrap());
    for _ in 0..5 {
        let r = rng.gen_range(1..=2);
        let d: Vec<Vec<BaseElem>> = (0..r)
            .map(|_| (0..r).map(|_| base.from_poly(random_poly(&mut rng, q(), 2)).unwrap()).collect())
            .collect();
        valid.push(from_derivation_matrix(&base, &d, 8).unwrap());
    }
    let mut count = 0;
    for (i, m) in valid.iter().enumerate() {
        for (label, inst, expect) in [("valid", m.clone(), true), ("corrupted", corrupted(m, 3), false)] {
            let co = check_cocycle(&inst, 3, 3).map_err(|e| e.to_string())?.passed();
            let it = check_module_iteration(&inst, 6).map_err(|e| e.to_string())?.passed();
            ensure(co == it && co == expect, || {
                format!("instance {i} ({label}): cocycle {co}, iteration {it}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} instances, checkers agree"))
}

fn exp_module(n: usize) -> IdModuleSpec {
    let base = IdRing::poly(q());
    from_derivation_matrix(&base, &vec![vec![base.one()]], n).unwrap()
}

fn c5_exponential() -> Outcome {
    let m = exp_module(16);
    let f = fundamental_matrix(&m, &q().zero(), 16).map_err(|e| e.to_string())?;
    let mut fact = 1i64;
    for n in 0..=12usize {
        if n > 0 {
            fact *= n as i64;
        }
        let want = q().ratio(if n % 2 == 0 { 1 } else { -1 }, fact).unwrap();
        ensure(f.f[0][0].coeff(n) == want, || format!("F_{n} = {}", f.f[0][0].coeff(n)))?;
    }
    let p = pv_generators(&m, None, &q().zero(), 16).map_err(|e| e.to_string())?;
    let rs = mine_relations(&p, 2, 1).map_err(|e| e.to_string())?;
    ensure(rs.render() == ["g0*g1 - 1"], || format!("relations {:?}", rs.render()))?;
    let g = stabilizer_equations(&rs, &p, 3).map_err(|e| e.to_string())?;
    ensure(g.render().is_empty(), || format!("stabilizer {:?}", g.render()))?;
    Ok("F = exp(-t) through t^12, relations {g0*g1 - 1}, no equations at d_z = 3".into())
}

fn radicand_pipeline(field: FieldSpec, m: u64, n: usize) -> Result<(PvPresentation, IdModuleSpec), String> {
    let local = IdRing::localized(field, vec![Poly::t(field)]).map_err(|e| e.to_string())?;
    let module = radicand(&local, m, &Poly::t(field), n).map_err(|e| e.to_string())?;
    let p = pv_generators(&module, None, &field.one(), n).map_err(|e| e.to_string())?;
    Ok((p, module))
}

fn c6_radicand() -> Outcome {
    let (p, m) = radicand_pipeline(q(), 3, 24)?;
    let rs = mine_relations(&p, 3, 1).map_err(|e| e.to_string())?;
    let names = ["g0", "g1"];
    for rel in ["g1^3 - t", "g0*g1 - 1"] {
        ensure(rs.contains(&sym(rel, &names, q())), || format!("{rel} not in {:?}", rs.render()))?;
    }
    ensure(rs.certified_order == 24, || format!("certified to {}", rs.certified_order))?;
    let g = stabilizer_equations(&rs, &p, 3).map_err(|e| e.to_string())?;
    ensure(g.render() == ["z^3 - 1"], || format!("stabilizer {:?}", g.render()))?;
    let tc = tensor_constants_check(&m, &p, &rs, 3, 4).map_err(|e| e.to_string())?;
    ensure(tc.passed() && tc.dimension == 3, || format!("{tc:?}"))?;
    let inv = diagonal_invariants(&rs, &m, &p, &g, Some(3)).map_err(|e| e.to_string())?;
    ensure(inv.generators.is_empty() && !inv.base_elements.is_empty(), || format!("{inv:?}"))?;
    Ok("z^3 - 1, tensor constants of dimension 3, invariants are base elements".into())
}

fn c7_char5() -> Outcome {
    let mut coeffs = vec![0i64; 31];
    coeffs[0] = 1;
    coeffs[1] = 1;
    let x = TruncSeries::from_ints(f5(), &coeffs);
    let s = x.mth_root(3).map_err(|e| e.to_string())?;
    ensure(s.order() == 30 && s.pow(3) == x, || "s^3 != 1 + x".into())?;
    let (p, m) = radicand_pipeline(f5(), 3, 24)?;
    let rs = mine_relations(&p, 3, 1).map_err(|e| e.to_string())?;
    let g = stabilizer_equations(&rs, &p, 3).map_err(|e| e.to_string())?;
    let want = Poly::parse("t^3 - 1", f5()).unwrap();
    ensure(g.diagonal.as_ref() == Some(&want), || format!("stabilizer {:?}", g.render()))?;
    let tc = tensor_constants_check(&m, &p, &rs, 3, 4).map_err(|e| e.to_string())?;
    ensure(tc.passed() && tc.dimension == 3, || format!("{tc:?}"))?;
    Ok("cube root exact to order 30, z^3 - 1 over F_5".into())
}

fn c8_constants() -> Outcome {
    let poly = IdRing::poly(q());
    let triv = IdRing::trivial(q(), vec!["z".into()]);
    let tensor = IdRing::tensor(poly.clone(), triv.clone()).map_err(|e| e.to_string())?;
    let mut basis = Vec::new();
    let mut z_only = Vec::new();
    for a in 0..3u32 {
        for b in 0..3u32 {
            let ta = poly.from_poly(Poly::monomial(q().one(), a as usize)).unwrap();
            let zb = triv.monomial(vec![b]).unwrap();
            z_only.push(a == 0);
            basis.push(tensor.elementary_tensor(&ta, &zb).unwrap());
        }
    }
    let consts = constants_of_span(&tensor, &basis, 4).map_err(|e| e.to_string())?;
    let want: Vec<Vec<Scalar>> = z_only
        .iter()
        .enumerate()
        .filter(|(_, &z)| z)
        .map(|(i, _)| (0..basis.len()).map(|j| if i == j { q().one() } else { q().zero() }).collect())
        .collect();
    ensure(consts == want, || format!("constants {consts:?}"))?;

    let ring5 = IdRing::poly(f5());
    let powers: Vec<BaseElem> = (0..=6).map(|k| ring5.from_poly(Poly::monomial(f5().one(), k)).unwrap()).collect();
    let consts5 = constants_of_span(&ring5, &powers, 6).map_err(|e| e.to_string())?;
    let one: Vec<Scalar> = (0..=6).map(|k| if k == 0 { f5().one() } else { f5().zero() }).collect();
    ensure(consts5 == vec![one], || format!("F_5 constants {consts5:?}"))?;
    Ok("constants are 1⊗z^b, and span{1} over F_5".into())
}

fn c9_taylor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let local = IdRing::localized(q(), vec![Poly::t(q()), Poly::parse("t - 1", q()).unwrap()]).unwrap();
    let order = 10;
    let random_elem = |rng: &mut ChaCha8Rng| {
        let mut x = local.from_poly(random_nonzero_poly(rng, q(), 4)).unwrap();
        for i in 0..2 {
            for _ in 0..rng.gen_range(0..=2) {
                x = x.mul(&local.inverse_of_generator(i).unwrap());
            }
        }
        x
    };
    let points = [q().from_i64(2), q().from_i64(-1), q().ratio(1, 2).unwrap(), q().from_i64(3)];
    for i in 0..100 {
        let c = &points[i % points.len()];
        let x = random_elem(&mut rng);
        let y = random_elem(&mut rng);
        let ex = taylor_embed(&local, &x, c, order).map_err(|e| e.to_string())?;
        let ey = taylor_embed(&local, &y, c, order).map_err(|e| e.to_string())?;
        let exy = taylor_embed(&local, &x.mul(&y), c, order).map_err(|e| e.to_string())?;
        ensure(exy == ex.mul(&ey), || format!("embed(xy) at sample {i}"))?;
        for n in 0..=4 {
            let lhs = taylor_embed(&local, &local.theta_n(&x, n), c, order - n).map_err(|e| e.to_string())?;
            let rhs = ex.hasse_derivative(n).unwrap();
            ensure(lhs == rhs, || format!("embed∘θ^({n}) at sample {i}"))?;
        }
    }
    Ok("100 localized samples, multiplicative and θ-equivariant".into())
}

fn c10_cover() -> Outcome {
    let base = IdRing::poly(q());
    let x = vec![Poly::t(q()), Poly::parse("t - 1", q()).unwrap()];
    let a = vec![base.one(), base.one().neg()];
    let cover = LocalCoverData::new(&base, 1, x, vec![1, 1], a, None, None).map_err(|e| e.to_string())?;
    let c = q().from_i64(2);
    let (d, e) = (3, 2);
    ensure(validate_cover(&cover, &exp_module(4)).passed(), || "cover invalid".into())?;
    let local = presentation(exp_module, Some(&cover), &c, d, e);
    let glued = local.glued_free().map_err(|e| e.to_string())?;
    let free = presentation(exp_module, None, &c, d, e);
    let rs_glued = mine_relations(&glued, d, e).map_err(|e| e.to_string())?;
    let rs_free = mine_relations(&free, d, e).map_err(|e| e.to_string())?;
    let sub = |a: &idpv::pvgalois::RelationSet, b: &idpv::pvgalois::RelationSet| a.relations.iter().all(|r| b.contains(r));
    ensure(sub(&rs_glued, &rs_free) && sub(&rs_free, &rs_glued), || {
        format!("glued {:?} vs free {:?}", rs_glued.render(), rs_free.render())
    })?;
    let rs_local = mine_relations(&local, d, e).map_err(|e| e.to_string())?;
    Ok(format!(
        "spans agree at (3, 2): {:?}; {} local relations",
        rs_free.render(),
        rs_local.relations.len()
    ))
}

fn c11_invariants() -> Outcome {
    let (p, m) = radicand_pipeline(q(), 6, 40)?;
    let rs = mine_relations(&p, 3, 1).map_err(|e| e.to_string())?;
    let g = stabilizer_equations(&rs, &p, 3).map_err(|e| e.to_string())?;
    let inv = diagonal_invariants(&rs, &m, &p, &g, Some(3)).map_err(|e| e.to_string())?;
    ensure(inv.generators == ["g1^3", "g0^3"], || format!("generators {:?}", inv.generators))?;
    let hs = inv.relation_set.as_ref().ok_or("no relation set")?;
    ensure(hs.contains(&sym("h0^2 - t", &["h0", "h1"], q())), || format!("{:?}", inv.relations))?;
    Ok("μ_3 invariants g1^3, g0^3 with (g1^3)^2 = t".into())
}

fn all_reports() -> Vec<String> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/manifests");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .expect("manifest directory")
        .map(|e| e.unwrap().path().display().to_string())
        .collect();
    names.sort();
    let mut out = Vec::new();
    for path in &names {
        for cmd in [Command::Check, Command::Solve, Command::Pv, Command::Galois] {
            let o = run_path(cmd, path, &Overrides::default());
            out.push(o.render(Format::Structured));
            out.push(o.render(Format::Text));
        }
    }
    out
}

fn c12_determinism() -> Outcome {
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let first = pool(1).install(all_reports);
    let second = pool(4).install(all_reports);
    let third = pool(1).install(all_reports);
    ensure(first == second, || "reports differ between 1 and 4 threads".into())?;
    ensure(first == third, || "reports differ between runs".into())?;
    Ok(format!("{} reports byte-identical across runs and thread counts", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("iteration rule", c1_iteration_rule),
        ("simplicity certificates", c2_simplicity),
        ("trivialization", c3_trivialization),
        ("cocycle and iteration agree", c4_cocycle_agreement),
        ("exponential oracle", c5_exponential),
        ("radicand mu_3", c6_radicand),
        ("radicand in char 5", c7_char5),
        ("constants of tensor spans", c8_constants),
        ("Taylor embedding", c9_taylor),
        ("cover gluing", c10_cover),
        ("intermediate invariants", c11_invariants),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
