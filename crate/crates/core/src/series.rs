//! Dense truncated power series in one variable, two-variable coefficient
//! grids, and the formal substitutions used throughout the crate.
//!
//! Truncation orders travel with the values. Binary operations on series of
//! different orders truncate to the smaller one.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{mat_inverse_over_ring, Matrix, RingElem};
use crate::scalars::{binomial, FieldSpec, Scalar};

/// `Σ_{i ≤ order} coeffs[i] X^i`, with `coeffs.len() == order + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries<R> {
    coeffs: Vec<R>,
}

impl<R: RingElem> TruncSeries<R> {
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncSeries { coeffs }
    }

    pub fn constant(c: R, order: usize) -> Self {
        let z = c.zero_like();
        let mut coeffs = vec![z; order + 1];
        coeffs[0] = c;
        TruncSeries { coeffs }
    }

    /// `c X^k` truncated at `order`.
    pub fn monomial(c: R, k: usize, order: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); order + 1];
        if k <= order {
            coeffs[k] = c;
        }
        TruncSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Pads with zeros; only meaningful when the caller knows the tail vanishes.
    pub fn extend_exact(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        let z = coeffs[0].zero_like();
        coeffs.resize(order + 1, z);
        TruncSeries { coeffs }
    }

    /// True when both series agree through `order` (which must not exceed either order).
    pub fn agrees_to(&self, other: &Self, order: usize) -> bool {
        (0..=order).all(|i| self.coeff(i) == other.coeff(i))
    }

    /// Index of the first nonzero coefficient, `None` if all vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn map<S: RingElem>(&self, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let c0inv = self.coeffs[0].unit_inverse().ok_or(Error::NotAUnit)?;
        let n = self.order();
        let mut out: Vec<R> = Vec::with_capacity(n + 1);
        out.push(c0inv.clone());
        for k in 1..=n {
            let mut acc = self.coeffs[0].zero_like();
            for j in 1..=k {
                acc = acc.add(&self.coeffs[j].mul(&out[k - j]));
            }
            out.push(acc.mul(&c0inv).neg());
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// The unique series with constant term 1 whose `m`-th power is `self`.
    pub fn mth_root(&self, m: u64) -> Result<Self> {
        let field = self.coeffs[0].field();
        let p = field.characteristic();
        if m == 0 || (p != 0 && m % p == 0) {
            return Err(Error::RootObstruction { m, p });
        }
        if self.coeffs[0] != self.coeffs[0].one_like() {
            return Err(Error::NotAUnit);
        }
        let m_inv = field.from_i64(m as i64).inv().expect("m is invertible");
        let n = self.order();
        // Newton: r ← r − (r^m − s) / (m r^{m−1}), doubling the precision each step
        let mut root = TruncSeries::constant(self.coeffs[0].one_like(), 0);
        while root.order() < n {
            let prec = (2 * root.order() + 1).min(n);
            let r = root.extend_exact(prec);
            let r_m1 = r.pow(m - 1);
            let resid = r_m1.mul(&r).sub(&self.truncate(prec));
            root = r.sub(&resid.mul(&r_m1.inverse()?).map(|c| c.scale(&m_inv)));
        }
        Ok(root)
    }

    /// `T ↦ T + U`: cell `(i, j)` is `C(i+j, i) a_{i+j}`.
    pub fn split_sum(&self, order_t: usize, order_u: usize) -> Result<BiSeries<R>> {
        if order_t + order_u > self.order() {
            return Err(Error::OrderMismatch(format!(
                "T+U substitution to orders ({order_t},{order_u}) needs series order {}, have {}",
                order_t + order_u,
                self.order()
            )));
        }
        let field = self.coeffs[0].field();
        let grid = (0..=order_t)
            .map(|i| {
                (0..=order_u)
                    .map(|j| {
                        self.coeffs[i + j].scale(&binomial((i + j) as u64, i as u64, field))
                    })
                    .collect()
            })
            .collect();
        Ok(BiSeries { grid })
    }
}

impl TruncSeries<Scalar> {
    pub fn from_ints(field: FieldSpec, coeffs: &[i64]) -> Self {
        TruncSeries::new(coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// `Σ t^n / n!` (characteristic 0 only).
    pub fn exp(field: FieldSpec, order: usize, rate: &Scalar) -> Result<Self> {
        if !field.is_char_zero() {
            return Err(Error::CharNotZero(field.characteristic()));
        }
        let mut coeffs = vec![field.one()];
        for n in 1..=order {
            let prev = coeffs[n - 1].clone();
            coeffs.push(&(&prev * rate) * &field.from_i64(n as i64).inv().expect("nonzero"));
        }
        Ok(TruncSeries::new(coeffs))
    }

    /// `θ_t^{(n)}` on `C[[t]]`: `Σ a_i C(i,n) t^{i-n}`, losing `n` orders.
    /// Returns `None` when `n` exceeds the order (no information left).
    pub fn hasse_derivative(&self, n: usize) -> Option<Self> {
        if n > self.order() {
            return None;
        }
        let field = self.coeffs[0].field();
        Some(TruncSeries::new(
            (n..=self.order())
                .map(|i| &self.coeffs[i] * &binomial(i as u64, n as u64, field))
                .collect(),
        ))
    }

    /// `t ↦ t + T` on a series in `t`: cell `(i, j)` is the `t^i T^j`
    /// coefficient, available for `i + j ≤ order`.
    pub fn shift_by_t(&self, order_t: usize) -> Result<TruncSeries<TruncSeries<Scalar>>> {
        if order_t > self.order() {
            return Err(Error::OrderMismatch(format!(
                "shift to T-order {order_t} of a series of order {}",
                self.order()
            )));
        }
        Ok(TruncSeries::new(
            (0..=order_t)
                .map(|j| self.hasse_derivative(j).expect("j within order"))
                .collect(),
        ))
    }

    /// Exact division when the divisor's valuation does not exceed the
    /// dividend's; the quotient loses that many orders.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let v = d.valuation().ok_or(Error::NotAUnit)?;
        let n = self.order().min(d.order());
        if v > n {
            return Err(Error::NotAUnit);
        }
        if (0..v).any(|i| !self.coeffs[i].is_zero()) {
            return Err(Error::NotAUnit);
        }
        let num = TruncSeries::new(self.coeffs[v..=n].to_vec());
        let den = TruncSeries::new(d.coeffs[v..=n].to_vec());
        Ok(num.mul(&den.inverse()?))
    }

    pub fn eval_poly(p: &Poly, order: usize) -> Self {
        TruncSeries::new((0..=order).map(|i| p.coeff(i)).collect())
    }
}

impl TruncSeries<Poly> {
    /// `T ↦ -t` for a series in `T` with polynomial coefficients in `t`,
    /// truncated at `t`-order `order`.
    pub fn substitute_neg_t(&self, order: usize) -> Result<TruncSeries<Scalar>> {
        if order > self.order() {
            return Err(Error::OrderMismatch(format!(
                "T ↦ -t to order {order} needs T-order {order}, have {}",
                self.order()
            )));
        }
        let field = self.coeffs[0].field();
        let mut out = vec![field.zero(); order + 1];
        let minus_one = -field.one();
        for (n, a) in self.coeffs.iter().enumerate().take(order + 1) {
            let sign = minus_one.pow(n as u64);
            for (i, c) in a.coeffs().iter().enumerate() {
                if i + n <= order {
                    out[i + n] = &out[i + n] + &(c * &sign);
                }
            }
        }
        Ok(TruncSeries::new(out))
    }
}

impl TruncSeries<TruncSeries<Scalar>> {
    /// `T ↦ -t` for a series in `T` whose coefficients are series in `t`.
    pub fn substitute_neg_t(&self, order: usize) -> Result<TruncSeries<Scalar>> {
        let avail = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.order() + n)
            .min()
            .unwrap_or(0)
            .min(self.order());
        if order > avail {
            return Err(Error::OrderMismatch(format!(
                "T ↦ -t to order {order}, information only through {avail}"
            )));
        }
        let field = self.coeffs[0].field();
        let minus_one = -field.one();
        let mut out = vec![field.zero(); order + 1];
        for (n, a) in self.coeffs.iter().enumerate().take(order + 1) {
            let sign = minus_one.pow(n as u64);
            for i in 0..=(order - n) {
                out[i + n] = &out[i + n] + &(&a.coeff(i) * &sign);
            }
        }
        Ok(TruncSeries::new(out))
    }
}

impl<R: RingElem> RingElem for TruncSeries<R> {
    fn zero_like(&self) -> Self {
        TruncSeries::constant(self.coeffs[0].zero_like(), self.order())
    }
    fn one_like(&self) -> Self {
        TruncSeries::constant(self.coeffs[0].one_like(), self.order())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn add(&self, other: &Self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect(),
        }
    }
    fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncSeries {
            coeffs: R::convolve(&self.coeffs, &other.coeffs, n + 1),
        }
    }
    fn scale(&self, s: &Scalar) -> Self {
        self.map(|c| c.scale(s))
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.inverse().ok()
    }
    fn field(&self) -> FieldSpec {
        self.coeffs[0].field()
    }
}

/// Coefficient grid of a two-variable truncated series: `grid[i][j]` multiplies `T^i U^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries<R> {
    grid: Vec<Vec<R>>,
}

impl<R: RingElem> BiSeries<R> {
    pub fn from_grid(grid: Vec<Vec<R>>) -> Self {
        assert!(!grid.is_empty() && !grid[0].is_empty());
        let w = grid[0].len();
        assert!(grid.iter().all(|r| r.len() == w), "grid must be rectangular");
        BiSeries { grid }
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.grid.len() - 1, self.grid[0].len() - 1)
    }

    pub fn cell(&self, i: usize, j: usize) -> &R {
        &self.grid[i][j]
    }

    /// Cells where the two grids differ, in row-major order.
    pub fn diff_cells(&self, other: &Self) -> Vec<(usize, usize)> {
        let (a, b) = self.orders();
        let mut out = Vec::new();
        for i in 0..=a {
            for j in 0..=b {
                if self.grid[i][j] != other.grid[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Inverse of a square matrix of truncated series; the constant-term matrix
/// must be invertible over the coefficient ring.
pub fn mat_inverse<R: RingElem>(m: &Matrix<TruncSeries<R>>) -> Result<Matrix<TruncSeries<R>>> {
    let n = m.len();
    let order = m.iter().flatten().map(|s| s.order()).min().expect("nonempty matrix");
    let coef = |k: usize| -> Matrix<R> {
        m.iter().map(|row| row.iter().map(|s| s.coeff(k)).collect()).collect()
    };
    let m0_inv = mat_inverse_over_ring(&coef(0)).ok_or(Error::SingularAtOrigin)?;
    let mut xs: Vec<Matrix<R>> = vec![m0_inv.clone()];
    let mks: Vec<Matrix<R>> = (0..=order).map(coef).collect();
    for k in 1..=order {
        let proto = &m0_inv[0][0];
        let mut acc: Matrix<R> = vec![vec![proto.zero_like(); n]; n];
        for j in 1..=k {
            acc = crate::ring::mat_add(&acc, &crate::ring::mat_mul(&mks[j], &xs[k - j]));
        }
        let xk = crate::ring::mat_mul(&m0_inv, &acc)
            .into_iter()
            .map(|row| row.into_iter().map(|x| x.neg()).collect())
            .collect();
        xs.push(xk);
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| TruncSeries::new(xs.iter().map(|x| x[i][j].clone()).collect()))
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{identity_like, mat_mul};
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn ser(c: &[i64]) -> TruncSeries<Scalar> {
        TruncSeries::from_ints(q(), c)
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ser(&[1]).inverse().unwrap(), ser(&[1]));
        assert_eq!(ser(&[1, -1, 0, 0, 0]).inverse().unwrap(), ser(&[1, 1, 1, 1, 1]));
        // coefficient recursion b_k = -2 b_{k-1}
        let inv = ser(&[1, 2, 0]).inverse().unwrap();
        assert_eq!(inv, ser(&[1, -2, 4]));
        assert!(ser(&[1, 2, 0]).mul(&inv).is_one_series());
        assert_eq!(ser(&[0, 1]).inverse(), Err(Error::NotAUnit));
    }

    impl TruncSeries<Scalar> {
        fn is_one_series(&self) -> bool {
            *self == self.one_like()
        }
    }

    #[test]
    fn mth_root_examples() {
        let r = ser(&[1, 1, 0]).mth_root(2).unwrap();
        let expect = TruncSeries::new(vec![
            q().one(),
            q().ratio(1, 2).unwrap(),
            q().ratio(-1, 8).unwrap(),
        ]);
        assert_eq!(r, expect);
        assert_eq!(r.pow(2), ser(&[1, 1, 0]));
        assert_eq!(ser(&[1, 0, 0]).mth_root(7).unwrap(), ser(&[1, 0, 0]));
        let f5 = FieldSpec::prime(5).unwrap();
        let s = TruncSeries::from_ints(f5, &[1, 1]);
        let r5 = s.mth_root(3).unwrap();
        assert_eq!(r5, TruncSeries::from_ints(f5, &[1, 2]));
        assert_eq!(r5.pow(3), s);
        assert_eq!(
            s.mth_root(5),
            Err(Error::RootObstruction { m: 5, p: 5 })
        );
    }

    #[test]
    fn substitutions() {
        // t^2 under t -> t + T
        let t2 = Poly::parse("t^2", q()).unwrap();
        let sh = t2.taylor_shift(3);
        assert_eq!(sh.coeff(0), t2);
        assert_eq!(sh.coeff(1), Poly::parse("2*t", q()).unwrap());
        assert_eq!(sh.coeff(2), Poly::parse("1", q()).unwrap());
        assert!(sh.coeff(3).is_zero());
        // 1 + tT under T -> -t
        let s = TruncSeries::new(vec![Poly::parse("1", q()).unwrap(), Poly::t(q()), Poly::zero(q())]);
        assert_eq!(s.substitute_neg_t(2).unwrap(), ser(&[1, 0, -1]));
        // T^2 under T -> T + U
        let t_sq = ser(&[0, 0, 1, 0, 0]);
        let bi = t_sq.split_sum(2, 2).unwrap();
        assert!(bi.cell(2, 2).is_zero());
        assert_eq!(*bi.cell(2, 0), q().one());
        assert_eq!(*bi.cell(1, 1), q().from_i64(2));
        assert_eq!(*bi.cell(0, 2), q().one());
        assert!(bi.cell(1, 0).is_zero());
        assert!(matches!(t_sq.split_sum(3, 2), Err(Error::OrderMismatch(_))));
    }

    #[test]
    fn mat_inverse_examples() {
        let one = ser(&[1, 0, 0]);
        let zero = ser(&[0, 0, 0]);
        let id = identity_like(&one, 2);
        assert_eq!(mat_inverse(&id).unwrap(), id);
        let m = vec![vec![one.clone(), ser(&[0, 1, 0])], vec![zero.clone(), one.clone()]];
        let inv = mat_inverse(&m).unwrap();
        assert_eq!(inv[0][1], ser(&[0, -1, 0]));
        assert_eq!(mat_mul(&m, &inv), id);
        let sing = vec![vec![ser(&[0, 1, 0]), zero.clone()], vec![zero, one]];
        assert_eq!(mat_inverse(&sing), Err(Error::SingularAtOrigin));
    }

    #[test]
    fn exact_division_with_valuation() {
        let num = ser(&[0, 0, 2, 2, 0]);
        let den = ser(&[0, 1, 1, 0, 0]);
        // 2t^2(1+t) / t(1+t) = 2t
        assert_eq!(num.div_exact(&den).unwrap(), ser(&[0, 2, 0, 0]));
    }

    fn arb_series(order: usize) -> impl Strategy<Value = TruncSeries<Scalar>> {
        proptest::collection::vec((-9i64..10, 1i64..5), order + 1).prop_map(|v| {
            TruncSeries::new(v.into_iter().map(|(a, b)| q().ratio(a, b).unwrap()).collect())
        })
    }

    fn arb_unit_series(order: usize) -> impl Strategy<Value = TruncSeries<Scalar>> {
        arb_series(order).prop_map(|s| {
            let mut c = s.into_coeffs();
            c[0] = q().one();
            TruncSeries::new(c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_axioms(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn double_inverse(a in arb_unit_series(7)) {
            prop_assert_eq!(a.inverse().unwrap().inverse().unwrap(), a);
        }

        #[test]
        fn root_power(a in arb_unit_series(6), m in 1u64..5) {
            prop_assert_eq!(a.mth_root(m).unwrap().pow(m), a);
        }

        #[test]
        fn shift_round_trip(cs in proptest::collection::vec(-5i64..6, 1..7), c in -3i64..4) {
            let p = Poly::from_ints(q(), &cs);
            let c = q().from_i64(c);
            prop_assert_eq!(p.shift(&c).shift(&-&c), p);
        }
    }
}
