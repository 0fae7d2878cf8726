//! ID-modules presented by a matrix `A(t,T)`: `θ_M(b) = b·A` on a
//! distinguished generator tuple `b`.

mod cover;

pub use cover::{validate_cover, LocalCoverData};

use crate::error::{Error, Result};
use crate::idring::{BaseElem, IdRing, IterativeDerivation, RingKind};
use crate::poly::Poly;
use crate::report::CheckReport;
use crate::ring::{identity_like, mat_add, mat_inverse_over_ring, mat_mul, Matrix, RingElem};
use crate::scalars::binomial;
use crate::series::TruncSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct IdModuleSpec {
    base: IdRing,
    rank: usize,
    a: Matrix<TruncSeries<BaseElem>>,
    /// All `T`-coefficients beyond the stored order vanish.
    polynomial_in_t: bool,
}

impl IdModuleSpec {
    /// `a[i][j]` is the `T`-series of entry `(i, j)`; all entries share one order.
    pub fn new(base: IdRing, a: Matrix<TruncSeries<BaseElem>>, polynomial_in_t: bool) -> Result<Self> {
        let rank = a.len();
        if rank == 0 || a.iter().any(|row| row.len() != rank) {
            return Err(Error::Semantic("module matrix must be square and nonempty".into()));
        }
        let order = a[0][0].order();
        if a.iter().flatten().any(|s| s.order() != order) {
            return Err(Error::Semantic("matrix entries have different T-orders".into()));
        }
        if a.iter().flatten().any(|s| RingElem::field(s) != base.field()) {
            return Err(Error::BaseMismatch("matrix entries over another field".into()));
        }
        Ok(IdModuleSpec {
            base,
            rank,
            a,
            polynomial_in_t,
        })
    }

    /// The trivial module of rank `r`.
    pub fn identity(base: IdRing, rank: usize, order: usize) -> Self {
        let one = TruncSeries::constant(base.one(), order);
        let a = identity_like(&one, rank);
        IdModuleSpec {
            base,
            rank,
            a,
            polynomial_in_t: true,
        }
    }

    pub fn base(&self) -> &IdRing {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.a[0][0].order()
    }

    pub fn is_polynomial_in_t(&self) -> bool {
        self.polynomial_in_t
    }

    pub fn matrix(&self) -> &Matrix<TruncSeries<BaseElem>> {
        &self.a
    }

    /// `A_n`, the coefficient matrix of `T^n`.
    pub fn coeff(&self, n: usize) -> Result<Matrix<BaseElem>> {
        if n > self.order() && !self.polynomial_in_t {
            return Err(Error::InsufficientOrder {
                needed: n,
                have: self.order(),
            });
        }
        Ok(self
            .a
            .iter()
            .map(|row| row.iter().map(|s| s.coeff(n)).collect())
            .collect())
    }

    /// Same module with `A` stored to order `k`.
    pub fn with_order(&self, k: usize) -> Result<Self> {
        if k > self.order() && !self.polynomial_in_t {
            return Err(Error::InsufficientOrder {
                needed: k,
                have: self.order(),
            });
        }
        let a = self
            .a
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| if k <= s.order() { s.truncate(k) } else { s.extend_exact(k) })
                    .collect()
            })
            .collect();
        Ok(IdModuleSpec {
            a,
            ..self.clone()
        })
    }

    fn zero_matrix(&self) -> Matrix<BaseElem> {
        vec![vec![self.base.zero(); self.rank]; self.rank]
    }
}

fn theta_matrix(ring: &IdRing, m: &Matrix<BaseElem>, n: usize) -> Matrix<BaseElem> {
    m.iter()
        .map(|row| row.iter().map(|x| ring.theta_n(x, n)).collect())
        .collect()
}

/// `A(t,0)` must be the identity, and in particular invertible.
pub fn validate_module(m: &IdModuleSpec) -> CheckReport {
    let mut report = CheckReport::new();
    let a0 = m.coeff(0).expect("order 0 is always stored");
    let one = m.base.one();
    let zero = m.base.zero();
    for (i, row) in a0.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i == j { &one } else { &zero };
            report.compare("A(t,0) = 1", "A", &[i, j], x == want, || m.base.format(x), || {
                m.base.format(want)
            });
        }
    }
    let invertible = mat_inverse_over_ring(&a0).is_some();
    report.compare("A(t,0) invertible", "A", &[], invertible, || "singular".into(), || {
        "invertible".into()
    });
    report
}

/// `A(t,T+U) = A(t,T)·A(t+T,U)` through `T^kt U^ku`.
pub fn check_cocycle(m: &IdModuleSpec, kt: usize, ku: usize) -> Result<CheckReport> {
    if matches!(m.base.kind(), RingKind::Series { .. }) {
        return Err(Error::ShiftUnavailable);
    }
    let ring = &m.base;
    let coeffs: Vec<Matrix<BaseElem>> = (0..=kt + ku).map(|n| m.coeff(n)).collect::<Result<_>>()?;
    let mut report = CheckReport::new();
    for i in 0..=kt {
        for j in 0..=ku {
            let lhs: Matrix<BaseElem> = coeffs[i + j]
                .iter()
                .map(|row| row.iter().map(|x| x.scale(&binomial((i + j) as u64, i as u64, ring.field()))).collect())
                .collect();
            let mut rhs = m.zero_matrix();
            for a in 0..=i {
                rhs = mat_add(&rhs, &mat_mul(&coeffs[a], &theta_matrix(ring, &coeffs[j], i - a)));
            }
            for r in 0..m.rank {
                for c in 0..m.rank {
                    report.compare(
                        "cocycle",
                        "A",
                        &[i, j, r, c],
                        lhs[r][c] == rhs[r][c],
                        || ring.format(&lhs[r][c]),
                        || ring.format(&rhs[r][c]),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// `θ_M^{(n)}` on a coordinate column `v`: `Σ_{a+b=n} A_a·θ^{(b)}(v)`.
fn theta_module(m: &IdModuleSpec, coeffs: &[Matrix<BaseElem>], v: &[BaseElem], n: usize) -> Vec<BaseElem> {
    let mut out = vec![m.base.zero(); m.rank];
    for a in 0..=n {
        let tv: Vec<BaseElem> = v.iter().map(|x| m.base.theta_n(x, n - a)).collect();
        for (r, o) in out.iter_mut().enumerate() {
            for (c, x) in tv.iter().enumerate() {
                *o = o.add(&coeffs[a][r][c].mul(x));
            }
        }
    }
    out
}

/// The iteration rule for `θ_M` itself, evaluated on the generators and on
/// `Σ t^k b_k`. Independent of [`check_cocycle`], with which it must agree.
pub fn check_module_iteration(m: &IdModuleSpec, k: usize) -> Result<CheckReport> {
    if matches!(m.base.kind(), RingKind::Series { .. }) {
        return Err(Error::ShiftUnavailable);
    }
    let ring = &m.base;
    let coeffs: Vec<Matrix<BaseElem>> = (0..=k).map(|n| m.coeff(n)).collect::<Result<_>>()?;
    let mut samples: Vec<(String, Vec<BaseElem>)> = (0..m.rank)
        .map(|i| {
            let v = (0..m.rank).map(|j| if i == j { ring.one() } else { ring.zero() }).collect();
            (format!("b{i}"), v)
        })
        .collect();
    if let Ok(t) = ring.from_poly(Poly::t(ring.field())) {
        let v = (0..m.rank).map(|i| t.pow(i as u64 + 1)).collect();
        samples.push(("sum t^(k+1) b_k".into(), v));
    }
    let mut report = CheckReport::new();
    for (name, v) in &samples {
        let single: Vec<Vec<BaseElem>> = (0..=k).map(|n| theta_module(m, &coeffs, v, n)).collect();
        for j in 0..=k {
            for i in 0..=k - j {
                let lhs = theta_module(m, &coeffs, &single[j], i);
                let c = binomial((i + j) as u64, i as u64, ring.field());
                for r in 0..m.rank {
                    let rhs = single[i + j][r].scale(&c);
                    report.compare(
                        "module iteration",
                        name,
                        &[i, j, r],
                        lhs[r] == rhs,
                        || ring.format(&lhs[r]),
                        || ring.format(&rhs),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Characteristic 0: the module whose derivation is `∂_t + D`, i.e.
/// `A_0 = 1`, `A_{n+1} = (θ^{(1)}(A_n) + D·A_n) / (n+1)`.
pub fn from_derivation_matrix(base: &IdRing, d: &Matrix<BaseElem>, k: usize) -> Result<IdModuleSpec> {
    let field = base.field();
    if !field.is_char_zero() {
        return Err(Error::CharNotZero(field.characteristic()));
    }
    let r = d.len();
    if r == 0 || d.iter().any(|row| row.len() != r) {
        return Err(Error::Semantic("derivation matrix must be square and nonempty".into()));
    }
    let mut coeffs: Vec<Matrix<BaseElem>> = vec![identity_like(&base.one(), r)];
    for n in 0..k {
        let next = mat_add(&theta_matrix(base, &coeffs[n], 1), &mat_mul(d, &coeffs[n]));
        let inv = field.from_i64(n as i64 + 1).inv().expect("char 0");
        coeffs.push(next.iter().map(|row| row.iter().map(|x| x.scale(&inv)).collect()).collect());
    }
    let a = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| TruncSeries::new(coeffs.iter().map(|c| c[i][j].clone()).collect()))
                .collect()
        })
        .collect();
    IdModuleSpec::new(base.clone(), a, false)
}

/// Rank-one module of `f^{1/m}`: `A = (θ(f)/f)^{1/m}`. `f` must be a unit of the base.
pub fn radicand(base: &IdRing, m: u64, f: &Poly, k: usize) -> Result<IdModuleSpec> {
    let fe = base.from_poly(f.clone())?;
    if matches!(base.kind(), RingKind::Series { .. }) {
        return Err(Error::Semantic("radicand modules need a polynomial or localized base".into()));
    }
    let finv = fe.unit_inverse().ok_or_else(|| {
        Error::Semantic(format!("radicand {f} is not a unit of the base ring"))
    })?;
    let ratio = base.theta(&fe, k).map(|c| c.mul(&finv));
    let root = ratio.mth_root(m)?;
    IdModuleSpec::new(base.clone(), vec![vec![root]], false)
}

fn same_shape(m1: &IdModuleSpec, m2: &IdModuleSpec) -> Result<()> {
    if m1.base != m2.base {
        return Err(Error::BaseMismatch("modules over different base rings".into()));
    }
    if m1.order() != m2.order() {
        return Err(Error::BaseMismatch(format!(
            "T-orders {} and {} differ",
            m1.order(),
            m2.order()
        )));
    }
    Ok(())
}

pub fn direct_sum(m1: &IdModuleSpec, m2: &IdModuleSpec) -> Result<IdModuleSpec> {
    same_shape(m1, m2)?;
    let zero = TruncSeries::constant(m1.base.zero(), m1.order());
    let r = m1.rank + m2.rank;
    let a = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| match (i < m1.rank, j < m1.rank) {
                    (true, true) => m1.a[i][j].clone(),
                    (false, false) => m2.a[i - m1.rank][j - m1.rank].clone(),
                    _ => zero.clone(),
                })
                .collect()
        })
        .collect();
    IdModuleSpec::new(m1.base.clone(), a, m1.polynomial_in_t && m2.polynomial_in_t)
}

/// Kronecker product: generator `b_i ⊗ c_k` sits at index `i·r2 + k`.
pub fn tensor_product(m1: &IdModuleSpec, m2: &IdModuleSpec) -> Result<IdModuleSpec> {
    same_shape(m1, m2)?;
    let (r1, r2) = (m1.rank, m2.rank);
    let a = (0..r1 * r2)
        .map(|row| {
            (0..r1 * r2)
                .map(|col| m1.a[row / r2][col / r2].mul(&m2.a[row % r2][col % r2]))
                .collect()
        })
        .collect();
    IdModuleSpec::new(m1.base.clone(), a, m1.polynomial_in_t && m2.polynomial_in_t)
}
