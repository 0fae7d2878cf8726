//! Dense univariate polynomials in `t`.

use std::fmt;

use crate::error::Result;
use crate::parse::parse_terms;
use crate::ring::RingElem;
use crate::scalars::{binomial, FieldSpec, Scalar};
use crate::series::TruncSeries;

/// Dense polynomial; `coeffs[i]` is the coefficient of `t^i`. No trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(c.field(), vec![c])
    }

    pub fn monomial(c: Scalar, k: usize) -> Self {
        let f = c.field();
        let mut coeffs = vec![f.zero(); k];
        coeffs.push(c);
        Poly::new(f, coeffs)
    }

    /// The coordinate `t`.
    pub fn t(field: FieldSpec) -> Self {
        Poly::monomial(field.one(), 1)
    }

    pub fn from_ints(field: FieldSpec, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn parse(text: &str, field: FieldSpec) -> Result<Self> {
        let terms = parse_terms(text, field, &["t"])?;
        let deg = terms.keys().map(|k| k[0] as usize).max().unwrap_or(0);
        let mut coeffs = vec![field.zero(); deg + 1];
        for (k, v) in terms {
            coeffs[k[0] as usize] = v;
        }
        Ok(Poly::new(field, coeffs))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, c: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * c) + a;
        }
        acc
    }

    /// `θ_t^{(n)}(f) = Σ a_i C(i,n) t^{i-n}`.
    pub fn hasse_derivative(&self, n: usize) -> Poly {
        if n >= self.coeffs.len() {
            return Poly::zero(self.field);
        }
        let coeffs = (n..self.coeffs.len())
            .map(|i| &self.coeffs[i] * &binomial(i as u64, n as u64, self.field))
            .collect();
        Poly::new(self.field, coeffs)
    }

    /// Exact shift `t ↦ t + c`.
    pub fn shift(&self, c: &Scalar) -> Poly {
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|k| self.hasse_derivative(k).eval(c))
            .collect();
        Poly::new(self.field, coeffs)
    }

    /// `t ↦ t + T`: the series `Σ_n θ_t^{(n)}(f) T^n`, exact once `order ≥ deg f`.
    pub fn taylor_shift(&self, order: usize) -> TruncSeries<Poly> {
        TruncSeries::new((0..=order).map(|n| self.hasse_derivative(n)).collect())
    }

    /// `f(c + t)` as a truncated series in the local coordinate.
    pub fn expand_at(&self, c: &Scalar, order: usize) -> TruncSeries<Scalar> {
        let shifted = self.shift(c);
        TruncSeries::new((0..=order).map(|i| shifted.coeff(i)).collect())
    }

    /// Polynomial long division.
    pub fn div_rem(&self, d: &Poly) -> Option<(Poly, Poly)> {
        let dd = d.degree()?;
        let lc_inv = d.leading_coeff()?.inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] * &lc_inv;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * dc);
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        Some((Poly::new(self.field, quot), Poly::new(self.field, rem)))
    }

    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero")),
        }
    }
}

impl RingElem for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.field)
    }
    fn one_like(&self) -> Self {
        Poly::constant(self.field.one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            self.field,
            (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect(),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn neg(&self) -> Self {
        Poly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        Poly::new(self.field, Scalar::convolve(&self.coeffs, &other.coeffs, len))
    }
    fn scale(&self, s: &Scalar) -> Self {
        Poly::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }
    fn unit_inverse(&self) -> Option<Self> {
        if self.coeffs.len() == 1 {
            Some(Poly::constant(self.coeffs[0].inv()?))
        } else {
            None
        }
    }
    fn field(&self) -> FieldSpec {
        self.field
    }
}

/// Renders in the grammar accepted by [`Poly::parse`], highest degree first.
pub(crate) fn fmt_univariate(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[Scalar],
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        match (mono.is_empty(), mag == "1") {
            (true, _) => write!(f, "{mag}")?,
            (false, true) => write!(f, "{mono}")?,
            (false, false) => write!(f, "{mag}*{mono}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl Poly {
    /// Display with a variable name other than `t`.
    pub fn display_in(&self, var: &str) -> String {
        struct W<'a>(&'a Poly, &'a str);
        impl fmt::Display for W<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_univariate(f, &self.0.coeffs, self.1)
            }
        }
        W(self, var).to_string()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_univariate(f, &self.coeffs, "t")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn display_round_trips() {
        let p = Poly::parse("3*t^2 - 1/2*t + 1", q()).unwrap();
        assert_eq!(p.to_string(), "3*t^2 - 1/2*t + 1");
        assert_eq!(Poly::parse(&p.to_string(), q()).unwrap(), p);
        assert_eq!(Poly::zero(q()).to_string(), "0");
        assert_eq!(Poly::parse("-t", q()).unwrap().to_string(), "-t");
    }

    #[test]
    fn hasse_derivative_of_square() {
        let t2 = Poly::parse("t^2", q()).unwrap();
        assert_eq!(t2.hasse_derivative(1), Poly::parse("2*t", q()).unwrap());
        assert_eq!(t2.hasse_derivative(2), Poly::parse("1", q()).unwrap());
        assert!(t2.hasse_derivative(3).is_zero());
    }

    #[test]
    fn shift_and_back() {
        let p = Poly::parse("t^3 - 2*t + 5", q()).unwrap();
        let c = q().ratio(3, 2).unwrap();
        assert_eq!(p.shift(&c).shift(&-&c), p);
        assert_eq!(p.shift(&c).eval(&q().zero()), p.eval(&c));
    }

    #[test]
    fn division() {
        let a = Poly::parse("t^3 - 1", q()).unwrap();
        let b = Poly::parse("t - 1", q()).unwrap();
        assert_eq!(a.div_exact(&b).unwrap(), Poly::parse("t^2 + t + 1", q()).unwrap());
        assert!(a.div_exact(&Poly::parse("t + 2", q()).unwrap()).is_none());
        assert_eq!(a.gcd(&Poly::parse("t^2 - 1", q()).unwrap()), b);
    }
}
