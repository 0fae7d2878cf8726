//! Trivialization over the formal completion: fundamental matrices, their
//! verification, Hasse–Wronskians and bounded linear-relation search.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::idmodule::IdModuleSpec;
use crate::idring::{IdRing, RingKind};
use crate::linalg::{normalize_vector, Echelon};
use crate::poly::Poly;
use crate::report::CheckReport;
use crate::ring::{determinant, mat_inverse_over_ring, mat_mul, Matrix};
use crate::scalars::{FieldSpec, Scalar};
use crate::series::TruncSeries;

/// `F` with `e = b·F` a basis of constants, expanded around `t = c` in the
/// local coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalMatrix {
    pub point: Scalar,
    pub order: usize,
    pub f: Matrix<TruncSeries<Scalar>>,
}

impl FundamentalMatrix {
    pub fn rank(&self) -> usize {
        self.f.len()
    }

    pub fn det(&self) -> TruncSeries<Scalar> {
        determinant(&self.f)
    }

    /// `det(F)^{-1}`, a unit series for every valid module.
    pub fn det_inverse(&self) -> Result<TruncSeries<Scalar>> {
        self.det().inverse()
    }
}

/// `Â(t,T)`: each `T`-coefficient of `A` expanded at `c`.
pub fn embedded_matrix(m: &IdModuleSpec, c: &Scalar, order: usize, t_order: usize) -> Result<Vec<Matrix<TruncSeries<Scalar>>>> {
    if let RingKind::Localized { inverted } = m.base().kind() {
        if let Some(d) = inverted.iter().find(|d| d.eval(c).is_zero()) {
            return Err(Error::BadPoint(format!("inverted polynomial {d} vanishes at {c}")));
        }
    }
    (0..=t_order)
        .map(|n| {
            m.coeff(n)?
                .iter()
                .map(|row| row.iter().map(|x| x.expand_at(c, order)).collect::<Result<Vec<_>>>())
                .collect::<Result<Matrix<_>>>()
        })
        .collect()
}

/// `F = Â(t,−t)` to order `order`.
pub fn fundamental_matrix(m: &IdModuleSpec, c: &Scalar, order: usize) -> Result<FundamentalMatrix> {
    let a_hat = embedded_matrix(m, c, order, order)?;
    let r = m.rank();
    let f = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    TruncSeries::new(a_hat.iter().map(|a| a[i][j].clone()).collect()).substitute_neg_t(order)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Matrix<_>>>()?;
    let f0: Matrix<Scalar> = f.iter().map(|row| row.iter().map(|s| s.coeff(0)).collect()).collect();
    if mat_inverse_over_ring(&f0).is_none() {
        return Err(Error::SingularAtOrigin);
    }
    Ok(FundamentalMatrix {
        point: c.clone(),
        order,
        f,
    })
}

/// `Â(t,T)·F(t+T) = F(t)` through `T^kt`, coefficients compared to order `N − kt`.
pub fn verify_constant_basis(m: &IdModuleSpec, f: &FundamentalMatrix, kt: usize) -> Result<CheckReport> {
    if kt > f.order {
        return Err(Error::InsufficientOrder {
            needed: kt,
            have: f.order,
        });
    }
    let cmp_order = f.order - kt;
    let a_hat = embedded_matrix(m, &f.point, cmp_order, kt)?;
    // shifted[j] = θ^{(j)}(F), the T^j coefficient of F(t+T)
    let shifted: Vec<Matrix<TruncSeries<Scalar>>> = (0..=kt)
        .map(|j| {
            f.f.iter()
                .map(|row| {
                    row.iter()
                        .map(|s| s.hasse_derivative(j).expect("j ≤ order").truncate(cmp_order))
                        .collect()
                })
                .collect()
        })
        .collect();
    let r = f.rank();
    let mut report = CheckReport::new();
    let zero = TruncSeries::constant(f.point.field().zero(), cmp_order);
    for n in 0..=kt {
        let mut acc: Matrix<TruncSeries<Scalar>> = vec![vec![zero.clone(); r]; r];
        for a in 0..=n {
            acc = crate::ring::mat_add(&acc, &mat_mul(&a_hat[a], &shifted[n - a]));
        }
        for i in 0..r {
            for j in 0..r {
                let want = if n == 0 { f.f[i][j].truncate(cmp_order) } else { zero.clone() };
                report.compare(
                    "A(t,T) F(t+T) = F(t)",
                    "F",
                    &[n, i, j],
                    acc[i][j].agrees_to(&want, cmp_order),
                    || series_string(&acc[i][j]),
                    || series_string(&want),
                );
            }
        }
    }
    Ok(report)
}

pub(crate) fn series_string(s: &TruncSeries<Scalar>) -> String {
    let p = Poly::new(s.coeffs()[0].field(), s.coeffs().to_vec());
    format!("{p} + O(t^{})", s.order() + 1)
}

/// Outcome of the Hasse–Wronskian search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Wronskian {
    /// Rows `θ^{(k_1)}, …, θ^{(k_r)}` give a unit determinant.
    Independent { indices: Vec<usize>, det: Vec<String> },
    /// A constant combination vanishing through the available order.
    Dependent { combination: Vec<String> },
    /// Independent through the available order, but not within the row bound.
    Inconclusive,
}

/// Greedy search over derivative orders `0, 1, …, bound` for rows of the
/// Hasse–Wronskian with independent constant terms.
pub fn hasse_wronskian(u: &[TruncSeries<Scalar>], bound: usize) -> Wronskian {
    let r = u.len();
    if r == 0 {
        return Wronskian::Inconclusive;
    }
    let field = u[0].coeffs()[0].field();
    let order = u.iter().map(|s| s.order()).min().expect("nonempty");
    // constant term of θ^{(k)}(u_i) is the t^k coefficient of u_i
    let row = |k: usize| -> Vec<Scalar> { u.iter().map(|s| s.coeff(k)).collect() };
    let mut kept: Vec<Vec<Scalar>> = Vec::new();
    let mut indices = Vec::new();
    for k in 0..=bound.min(order) {
        let mut trial = kept.clone();
        trial.push(row(k));
        if Echelon::new(field, r, &trial).rank() > kept.len() {
            kept = trial;
            indices.push(k);
            if kept.len() == r {
                break;
            }
        }
    }
    if kept.len() == r {
        let w: Matrix<TruncSeries<Scalar>> = indices
            .iter()
            .map(|&k| u.iter().map(|s| s.hasse_derivative(k).expect("k ≤ order")).collect())
            .collect();
        let det = determinant(&w);
        return Wronskian::Independent {
            indices,
            det: det.coeffs().iter().map(|c| c.to_string()).collect(),
        };
    }
    let all: Vec<Vec<Scalar>> = (0..=order).map(row).collect();
    match Echelon::new(field, r, &all).kernel().first() {
        Some(v) => Wronskian::Dependent {
            combination: normalize_vector(v).iter().map(|c| c.to_string()).collect(),
        },
        None => Wronskian::Inconclusive,
    }
}

/// Relation `Σ s_i θ^{(i)}(x) ≡ 0` with polynomial `s_i`, certified to a stated order.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRelation {
    pub coefficients: Vec<Poly>,
    pub certified_order: usize,
}

/// Search orders `0..=order_bound` in turn for polynomials `s_i` of degree at
/// most `coeff_deg` with `Σ s_i θ^{(i)}(x) ≡ 0` through the available order.
pub fn find_linear_id_relation(
    x: &TruncSeries<Scalar>,
    base: &IdRing,
    order_bound: usize,
    coeff_deg: usize,
) -> Result<Option<LinearRelation>> {
    let field: FieldSpec = base.field();
    if !matches!(base.kind(), RingKind::Poly | RingKind::Series { .. } | RingKind::Localized { .. }) {
        return Err(Error::Semantic("relation search needs coefficients in t".into()));
    }
    let n = x.order();
    let needed = (order_bound + 1) * (coeff_deg + 1) + 4;
    if n < needed {
        return Err(Error::InsufficientOrder { needed, have: n });
    }
    for d in 0..=order_bound {
        let cert = n - d;
        let derivs: Vec<TruncSeries<Scalar>> =
            (0..=d).map(|i| x.hasse_derivative(i).expect("i ≤ order").truncate(cert)).collect();
        // column (i, k) is t^k θ^{(i)}(x)
        let ncols = (d + 1) * (coeff_deg + 1);
        let rows: Vec<Vec<Scalar>> = (0..=cert)
            .map(|row| {
                let mut v = Vec::with_capacity(ncols);
                for s in &derivs {
                    for k in 0..=coeff_deg {
                        v.push(if row >= k { s.coeff(row - k) } else { field.zero() });
                    }
                }
                v
            })
            .collect();
        if let Some(v) = Echelon::new(field, ncols, &rows).kernel().first() {
            let v = normalize_vector(v);
            let coefficients = v
                .chunks(coeff_deg + 1)
                .map(|c| Poly::new(field, c.to_vec()))
                .collect();
            return Ok(Some(LinearRelation {
                coefficients,
                certified_order: cert,
            }));
        }
    }
    Ok(None)
}
