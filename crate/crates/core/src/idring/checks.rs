use std::collections::BTreeMap;

use super::{BaseElem, BasisKey, IdRing, IterativeDerivation, RingKind};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::poly::Poly;
use crate::report::CheckReport;
use crate::ring::RingElem;
use crate::scalars::{binomial, FieldSpec, Scalar};
use crate::series::{BiSeries, TruncSeries};

/// Check the iteration rule for each sample, both indexwise for `i + j ≤ k`
/// and in the substitution form `θ_U ∘ θ_T = θ_{T+U}` on a two-variable grid.
pub fn check_iteration_rule<D: IterativeDerivation + ?Sized>(
    ring: &D,
    samples: &[BaseElem],
    k: usize,
) -> CheckReport {
    let field = ring.field();
    let mut report = CheckReport::new();
    for x in samples {
        let name = ring.describe(x);
        let thetas: Vec<BaseElem> = (0..=k).map(|n| ring.theta_n(x, n)).collect();
        // composite[j][i] = θ^{(i)}(θ^{(j)}(x))
        let composite: Vec<Vec<BaseElem>> = (0..=k)
            .map(|j| (0..=k - j).map(|i| ring.theta_n(&thetas[j], i)).collect())
            .collect();
        for j in 0..=k {
            for i in 0..=k - j {
                let lhs = &composite[j][i];
                let rhs = thetas[i + j].scale(&binomial((i + j) as u64, i as u64, field));
                report.compare("iteration", &name, &[i, j], *lhs == rhs, || ring.describe(lhs), || {
                    ring.describe(&rhs)
                });
            }
        }

        let (kt, ku) = (k / 2, k - k / 2);
        let grid: Vec<Vec<BaseElem>> = (0..=kt)
            .map(|i| (0..=ku).map(|j| composite[j][i].clone()).collect())
            .collect();
        let lhs = BiSeries::from_grid(grid);
        let rhs = TruncSeries::new(thetas.clone())
            .split_sum(kt, ku)
            .expect("kt + ku equals the order");
        let bad = lhs.diff_cells(&rhs);
        report.checked += 1;
        for (i, j) in bad {
            report.violations.push(crate::report::ReportEntry {
                law: "iteration (T+U substitution)".into(),
                sample: name.clone(),
                indices: vec![i, j],
                lhs: ring.describe(lhs.cell(i, j)),
                rhs: ring.describe(rhs.cell(i, j)),
            });
        }
    }
    report
}

/// Check additivity and multiplicativity of `θ` through `T^k`.
pub fn check_homomorphism<D: IterativeDerivation + ?Sized>(
    ring: &D,
    x: &BaseElem,
    y: &BaseElem,
    k: usize,
) -> CheckReport {
    let mut report = CheckReport::new();
    let name = format!("x = {}, y = {}", ring.describe(x), ring.describe(y));
    let tx = ring.theta(x, k);
    let ty = ring.theta(y, k);
    let sum = ring.theta(&x.add(y), k);
    let prod = ring.theta(&x.mul(y), k);
    let tprod = tx.mul(&ty);
    for n in 0..=k {
        let rs = tx.coeff(n).add(&ty.coeff(n));
        let ls = sum.coeff(n);
        report.compare("additivity", &name, &[n], ls == rs, || ring.describe(&ls), || {
            ring.describe(&rs)
        });
        let lp = prod.coeff(n);
        let rp = tprod.coeff(n);
        report.compare("multiplicativity", &name, &[n], lp == rp, || ring.describe(&lp), || {
            ring.describe(&rp)
        });
    }
    report
}

/// Coordinates of a group of elements in a shared monomial basis. Series are
/// compared through the smallest order present; localized elements are put
/// over a common denominator.
fn linearize(group: &[BaseElem], field: FieldSpec) -> Result<Vec<Vec<Scalar>>> {
    let maps: Vec<BTreeMap<BasisKey, Scalar>> = match group.first() {
        None => return Ok(vec![]),
        Some(BaseElem::Local(_)) => {
            let locals: Vec<_> = group
                .iter()
                .map(|e| match e {
                    BaseElem::Local(l) => Ok(l),
                    _ => Err(Error::BaseMismatch("mixed element kinds".into())),
                })
                .collect::<Result<_>>()?;
            let mut target = vec![0u32; locals[0].exponents().len()];
            for l in &locals {
                for (t, e) in target.iter_mut().zip(l.exponents()) {
                    *t = (*t).max(*e);
                }
            }
            locals
                .iter()
                .map(|l| poly_keys(&l.numerator_over(&target)))
                .collect()
        }
        Some(BaseElem::Series(_)) => {
            let mut order = usize::MAX;
            for e in group {
                match e {
                    BaseElem::Series(s) => order = order.min(s.order()),
                    _ => return Err(Error::BaseMismatch("mixed element kinds".into())),
                }
            }
            group
                .iter()
                .map(|e| {
                    let s = e.as_series().expect("checked above");
                    (0..=order)
                        .filter(|&i| !s.coeff(i).is_zero())
                        .map(|i| (BasisKey::Pow(i as u32), s.coeff(i)))
                        .collect()
                })
                .collect()
        }
        Some(_) => group
            .iter()
            .map(|e| match e {
                BaseElem::Poly(p) => Ok(poly_keys(p)),
                BaseElem::Trivial(m) => Ok(m
                    .terms()
                    .iter()
                    .map(|(k, v)| (BasisKey::Mono(k.clone()), v.clone()))
                    .collect()),
                BaseElem::Tensor(t) => Ok(t.terms().clone()),
                _ => Err(Error::BaseMismatch("mixed element kinds".into())),
            })
            .collect::<Result<_>>()?,
    };
    let mut index: BTreeMap<BasisKey, usize> = BTreeMap::new();
    for m in &maps {
        for k in m.keys() {
            let n = index.len();
            index.entry(k.clone()).or_insert(n);
        }
    }
    Ok(maps
        .iter()
        .map(|m| {
            let mut v = vec![field.zero(); index.len()];
            for (k, c) in m {
                v[index[k]] = c.clone();
            }
            v
        })
        .collect())
}

fn poly_keys(p: &Poly) -> BTreeMap<BasisKey, Scalar> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (BasisKey::Pow(i as u32), c.clone()))
        .collect()
}

/// Constants inside `span(basis)`: coefficient vectors `λ` with
/// `θ^{(n)}(Σ λ_j b_j) = 0` for `1 ≤ n ≤ k`, returned in reduced echelon form.
pub fn constants_of_span<D: IterativeDerivation + ?Sized>(
    ring: &D,
    basis: &[BaseElem],
    k: usize,
) -> Result<Vec<Vec<Scalar>>> {
    let field = ring.field();
    let nb = basis.len();
    if nb == 0 {
        return Ok(vec![]);
    }
    let mut stacked: Vec<Vec<Scalar>> = Vec::new();
    for n in 1..=k {
        let mut group = basis.to_vec();
        group.extend(basis.iter().map(|b| ring.theta_n(b, n)));
        let coords = linearize(&group, field)?;
        let span = Echelon::new(field, coords[0].len(), &coords[..nb]);
        for (j, c) in coords[nb..].iter().enumerate() {
            if !span.contains(c) {
                return Err(Error::SpanNotClosed(format!(
                    "θ^({n}) of {} is {}",
                    ring.describe(&basis[j]),
                    ring.describe(&group[nb + j])
                )));
            }
        }
        let dim = coords[0].len();
        for r in 0..dim {
            stacked.push((0..nb).map(|j| coords[nb + j][r].clone()).collect());
        }
    }
    let kernel = Echelon::new(field, nb, &stacked).kernel();
    Ok(Echelon::new(field, nb, &kernel).rows().to_vec())
}

/// `Σ_{n ≤ order} θ^{(n)}(x)(c) t^n`: the expansion of `x` around `t = c`.
pub fn taylor_embed(ring: &IdRing, x: &BaseElem, c: &Scalar, order: usize) -> Result<TruncSeries<Scalar>> {
    match ring.kind() {
        RingKind::Poly => {}
        RingKind::Localized { inverted } => {
            if let Some(d) = inverted.iter().find(|d| d.eval(c).is_zero()) {
                return Err(Error::BadPoint(format!("inverted polynomial {d} vanishes at {c}")));
            }
        }
        _ => {
            return Err(Error::Semantic(
                "Taylor embedding needs a polynomial or localized base".into(),
            ))
        }
    }
    let th = ring.theta(x, order);
    let coeffs = th
        .coeffs()
        .iter()
        .map(|e| match e {
            BaseElem::Poly(p) => Ok(p.eval(c)),
            BaseElem::Local(l) => l
                .eval(c)
                .ok_or_else(|| Error::BadPoint(format!("denominator vanishes at {c}"))),
            _ => Err(Error::BaseMismatch("element does not belong to the ring".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncSeries::new(coeffs))
}

/// `(deg f, θ^{(deg f)}(f))`: the top Hasse derivative is the leading
/// coefficient, a unit, so `f` generates the unit ID-ideal.
pub fn simplicity_certificate(f: &Poly) -> Result<(usize, Scalar)> {
    let n = f.degree().ok_or(Error::ZeroInput)?;
    let u = f.hasse_derivative(n).coeff(0);
    debug_assert_eq!(Some(&u), f.leading_coeff());
    Ok((n, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idring::testing::AdHocFamily;
    use crate::idring::MPoly;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn p(s: &str, f: FieldSpec) -> BaseElem {
        BaseElem::Poly(Poly::parse(s, f).unwrap())
    }

    #[test]
    fn iteration_rule_holds_for_theta_t() {
        let r = IdRing::poly(q());
        let rep = check_iteration_rule(&r, &[p("t", q()), p("t^3 - 2*t", q())], 6);
        assert!(rep.passed(), "{}", rep.render_text());
    }

    #[test]
    fn trivial_ring_passes() {
        let r = IdRing::trivial(q(), vec!["z".into(), "w".into()]);
        let x = BaseElem::Trivial(MPoly::monomial(q(), vec![2, 1]));
        assert!(check_iteration_rule(&r, &[x.clone()], 5).passed());
        assert!(check_homomorphism(&r, &x, &x, 5).passed());
    }

    #[test]
    fn derivative_only_family_fails_at_one_one() {
        let fam = AdHocFamily::derivative_only(q());
        let rep = check_iteration_rule(&fam, &[p("t^2", q())], 2);
        let v = rep
            .violations
            .iter()
            .find(|v| v.law == "iteration" && v.indices == vec![1, 1])
            .expect("(1,1) violated");
        assert_eq!(v.lhs, "2");
        assert_eq!(v.rhs, "0");

        let hom = check_homomorphism(&fam, &p("t", q()), &p("t", q()), 2);
        assert!(hom
            .violations
            .iter()
            .any(|v| v.law == "multiplicativity" && v.indices == vec![2]));
    }

    #[test]
    fn homomorphism_examples() {
        let r = IdRing::poly(q());
        assert!(check_homomorphism(&r, &p("t", q()), &p("t^2", q()), 6).passed());
        assert!(check_homomorphism(&r, &p("0", q()), &p("t^3 + 1", q()), 6).passed());
    }

    #[test]
    fn constants_examples() {
        let r = IdRing::poly(q());
        let basis = vec![p("1", q()), p("t", q()), p("t^2", q())];
        let c = constants_of_span(&r, &basis, 4).unwrap();
        assert_eq!(c, vec![vec![q().one(), q().zero(), q().zero()]]);

        let f5 = FieldSpec::prime(5).unwrap();
        let r5 = IdRing::poly(f5);
        let basis: Vec<_> = (0..=6).map(|i| p(&format!("t^{i}"), f5)).collect();
        let c = constants_of_span(&r5, &basis, 6).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0][0].is_one() && c[0][1..].iter().all(|x| x.is_zero()));

        let tr = IdRing::tensor(IdRing::poly(q()), IdRing::trivial(q(), vec!["z".into()])).unwrap();
        let mut basis = Vec::new();
        for i in 0..=2 {
            for j in 0..=2 {
                let a = p(&format!("t^{i}"), q());
                let z = BaseElem::Trivial(MPoly::monomial(q(), vec![j]));
                basis.push(tr.elementary_tensor(&a, &z).unwrap());
            }
        }
        let c = constants_of_span(&tr, &basis, 4).unwrap();
        // positions of t^0 z^j are 0, 1, 2
        assert_eq!(c.len(), 3);
        for (row, j) in c.iter().zip(0..) {
            for (col, x) in row.iter().enumerate() {
                assert_eq!(x.is_one(), col == j);
                assert_eq!(x.is_zero(), col != j);
            }
        }
    }

    #[test]
    fn span_not_closed() {
        let r = IdRing::poly(q());
        let err = constants_of_span(&r, &[p("t^2", q())], 2).unwrap_err();
        assert!(matches!(err, Error::SpanNotClosed(_)));
    }

    #[test]
    fn embedding_examples() {
        let r = IdRing::poly(q());
        let e = taylor_embed(&r, &p("t", q()), &q().zero(), 3).unwrap();
        assert_eq!(e, TruncSeries::from_ints(q(), &[0, 1, 0, 0]));
        let e = taylor_embed(&r, &p("t^2", q()), &q().one(), 2).unwrap();
        assert_eq!(e, TruncSeries::from_ints(q(), &[1, 2, 1]));

        let l = IdRing::localized(q(), vec![Poly::t(q())]).unwrap();
        let x = l.inverse_of_generator(0).unwrap();
        let e = taylor_embed(&l, &x, &q().one(), 3).unwrap();
        assert_eq!(e, TruncSeries::from_ints(q(), &[1, -1, 1, -1]));
        assert!(matches!(taylor_embed(&l, &x, &q().zero(), 3), Err(Error::BadPoint(_))));
    }

    #[test]
    fn certificates() {
        let (n, u) = simplicity_certificate(&Poly::parse("3*t^2 + 1", q()).unwrap()).unwrap();
        assert_eq!((n, u), (2, q().from_i64(3)));
        let (n, u) = simplicity_certificate(&Poly::parse("5", q()).unwrap()).unwrap();
        assert_eq!((n, u), (0, q().from_i64(5)));
        let f7 = FieldSpec::prime(7).unwrap();
        let (n, u) = simplicity_certificate(&Poly::parse("t^3", f7).unwrap()).unwrap();
        assert_eq!((n, u), (3, f7.one()));
        assert_eq!(simplicity_certificate(&Poly::zero(q())), Err(Error::ZeroInput));
    }
}
