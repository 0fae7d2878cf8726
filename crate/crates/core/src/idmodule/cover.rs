use std::collections::BTreeMap;

use super::IdModuleSpec;
use crate::error::{Error, Result};
use crate::idring::{BaseElem, IdRing};
use crate::poly::Poly;
use crate::report::CheckReport;
use crate::ring::{adjugate, determinant, identity_like, mat_mul, Matrix, RingElem};

/// Data for a module that is free on each piece of a cover `x_1, …, x_l` of
/// the base: `Σ a_i x_i^{n_i} = 1`, and `b_j = b·B_j` is a basis after
/// inverting `x_j`. Transitions satisfy `B_j·T_ij = x_j^{n_j}·B_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCoverData {
    pub x: Vec<Poly>,
    pub n: Vec<u32>,
    pub a: Vec<BaseElem>,
    pub bases: Vec<Matrix<BaseElem>>,
    pub transitions: BTreeMap<(usize, usize), Matrix<BaseElem>>,
}

fn exact_div(x: &BaseElem, d: &BaseElem) -> Option<BaseElem> {
    if let Some(u) = d.unit_inverse() {
        return Some(x.mul(&u));
    }
    match (x, d) {
        (BaseElem::Poly(p), BaseElem::Poly(q)) => p.div_exact(q).map(BaseElem::Poly),
        _ => None,
    }
}

impl LocalCoverData {
    /// Missing local bases default to the identity; missing transitions are
    /// computed as `x_j^{n_j} B_j^{-1} B_i`, which must be denominator-free.
    pub fn new(
        base: &IdRing,
        rank: usize,
        x: Vec<Poly>,
        n: Vec<u32>,
        a: Vec<BaseElem>,
        bases: Option<Vec<Matrix<BaseElem>>>,
        transitions: Option<BTreeMap<(usize, usize), Matrix<BaseElem>>>,
    ) -> Result<Self> {
        let l = x.len();
        if l == 0 || n.len() != l || a.len() != l {
            return Err(Error::Semantic(
                "cover needs equally many elements, exponents and partition coefficients".into(),
            ));
        }
        let bases = bases.unwrap_or_else(|| vec![identity_like(&base.one(), rank); l]);
        if bases.len() != l || bases.iter().any(|b| b.len() != rank || b.iter().any(|r| r.len() != rank)) {
            return Err(Error::Semantic(format!("each local basis must be {rank}x{rank}")));
        }
        let transitions = match transitions {
            Some(t) => t,
            None => {
                let mut t = BTreeMap::new();
                for j in 0..l {
                    let xj = base.from_poly(x[j].pow(n[j] as u64))?;
                    let det = determinant(&bases[j]);
                    let adj = adjugate(&bases[j]);
                    for i in 0..l {
                        if i == j {
                            continue;
                        }
                        let num = mat_mul(&adj, &bases[i]);
                        let tij = num
                            .iter()
                            .map(|row| {
                                row.iter()
                                    .map(|e| exact_div(&e.mul(&xj), &det))
                                    .collect::<Option<Vec<_>>>()
                            })
                            .collect::<Option<Matrix<BaseElem>>>()
                            .ok_or_else(|| {
                                Error::Semantic(format!(
                                    "transition ({i},{j}) has denominators; supply the exponent n_{j} large enough"
                                ))
                            })?;
                        t.insert((i, j), tij);
                    }
                }
                t
            }
        };
        Ok(LocalCoverData {
            x,
            n,
            a,
            bases,
            transitions,
        })
    }

    /// The cover `{1}`: the module is free on the whole base.
    pub fn is_trivial(&self) -> bool {
        self.x.len() == 1
            && self.x[0].is_constant()
            && self.bases[0].iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, e)| {
                    if i == j {
                        *e == e.one_like()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }
}

/// Partition identity, nonzero cover elements, and transition consistency.
pub fn validate_cover(c: &LocalCoverData, m: &IdModuleSpec) -> CheckReport {
    let base = m.base();
    let mut report = CheckReport::new();
    for (i, x) in c.x.iter().enumerate() {
        report.compare("cover element nonzero", &format!("x{i}"), &[i], !x.is_zero(), || x.to_string(), || {
            "nonzero".into()
        });
    }
    let powers: Vec<BaseElem> = c
        .x
        .iter()
        .zip(&c.n)
        .map(|(x, &n)| base.from_poly(x.pow(n as u64)))
        .collect::<Result<_>>()
        .unwrap_or_default();
    if powers.len() != c.x.len() {
        report.compare("cover over t", "x", &[], false, || "no variable t in base".into(), || String::new());
        return report;
    }
    let mut sum = base.zero();
    for (a, p) in c.a.iter().zip(&powers) {
        sum = sum.add(&a.mul(p));
    }
    let one = base.one();
    report.compare(
        "partition identity",
        "sum a_i x_i^n_i",
        &[],
        sum == one,
        || base.format(&sum),
        || "1".into(),
    );
    if sum != one {
        // a common zero of all x_i^{n_i} rules out any partition coefficients
        let g = c.x.iter().fold(Poly::zero(base.field()), |g, x| g.gcd(x));
        if g.degree().unwrap_or(0) > 0 {
            report.compare("cover generates the unit ideal", "gcd(x_i)", &[], false, || g.to_string(), || {
                "1".into()
            });
        }
    }
    let r = m.rank();
    for (&(i, j), t) in &c.transitions {
        let sample = format!("T{i}{j}");
        let lhs = mat_mul(&c.bases[j], t);
        for (ri, row) in lhs.iter().enumerate() {
            for (ci, e) in row.iter().enumerate() {
                let want = c.bases[i][ri][ci].mul(&powers[j]);
                report.compare("B_j T_ij = x_j^n_j B_i", &sample, &[i, j, ri, ci], *e == want, || base.format(e), || {
                    base.format(&want)
                });
            }
        }
        if let Some(back) = c.transitions.get(&(j, i)) {
            let prod = mat_mul(t, back);
            let scale = powers[i].mul(&powers[j]);
            for ri in 0..r {
                for ci in 0..r {
                    let want = if ri == ci { scale.clone() } else { base.zero() };
                    let e = &prod[ri][ci];
                    report.compare("T_ij T_ji = x_i^n_i x_j^n_j", &sample, &[i, j, ri, ci], *e == want, || {
                        base.format(e)
                    }, || base.format(&want));
                }
            }
        }
    }
    report
}
