//! Iterative derivations on concrete base rings.
//!
//! An iterative derivation is a family `θ^{(n)}` with `θ^{(0)} = id`, each
//! additive, multiplicative in the Leibniz sense, and satisfying the iteration
//! rule `θ^{(i)} ∘ θ^{(j)} = C(i+j, i) θ^{(i+j)}`. Here it is packaged as
//! `θ : R → R[[T]]`.

mod local;
mod tensor;
mod trivial;

pub mod checks;
pub mod testing;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use checks::{
    check_homomorphism, check_iteration_rule, constants_of_span, simplicity_certificate,
    taylor_embed,
};
pub use local::LocElem;
pub use tensor::{BasisKey, TensorElem};
pub use trivial::MPoly;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::RingElem;
use crate::scalars::{FieldSpec, Scalar};
use crate::series::TruncSeries;

/// Which ring and which derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    /// `C[t]` with `θ_t`.
    Poly,
    /// `C[t]` with the listed polynomials inverted.
    Localized { inverted: Arc<Vec<Poly>> },
    /// `C[[t]]` truncated at `t^order`, with `θ_t`.
    Series { order: usize },
    /// Polynomials in named generators with the trivial derivation.
    Trivial { generators: Vec<String> },
    Tensor(Box<IdRing>, Box<IdRing>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdRing {
    field: FieldSpec,
    kind: RingKind,
}

/// Element of one of the rings above.
#[derive(Clone, Debug)]
pub enum BaseElem {
    Poly(Poly),
    Local(LocElem),
    Series(TruncSeries<Scalar>),
    Trivial(MPoly),
    Tensor(TensorElem),
}

/// A ring together with its iterative derivation.
pub trait IterativeDerivation {
    fn field(&self) -> FieldSpec;

    /// `θ^{(n)}(x)`.
    fn theta_n(&self, x: &BaseElem, n: usize) -> BaseElem;

    /// `θ(x)` through `T^k`.
    fn theta(&self, x: &BaseElem, k: usize) -> TruncSeries<BaseElem> {
        TruncSeries::new((0..=k).map(|n| self.theta_n(x, n)).collect())
    }

    fn describe(&self, x: &BaseElem) -> String {
        x.to_string()
    }
}

impl IdRing {
    pub fn poly(field: FieldSpec) -> Self {
        IdRing {
            field,
            kind: RingKind::Poly,
        }
    }

    pub fn localized(field: FieldSpec, inverted: Vec<Poly>) -> Result<Self> {
        if inverted.iter().any(|d| d.is_zero()) {
            return Err(Error::Semantic("cannot invert the zero polynomial".into()));
        }
        if inverted.iter().any(|d| d.field() != field) {
            return Err(Error::BaseMismatch("inverted polynomial over another field".into()));
        }
        Ok(IdRing {
            field,
            kind: RingKind::Localized {
                inverted: Arc::new(inverted),
            },
        })
    }

    pub fn series(field: FieldSpec, order: usize) -> Self {
        IdRing {
            field,
            kind: RingKind::Series { order },
        }
    }

    pub fn trivial(field: FieldSpec, generators: Vec<String>) -> Self {
        IdRing {
            field,
            kind: RingKind::Trivial { generators },
        }
    }

    /// Tensor product over the field. Factors must have a monomial basis, so
    /// only polynomial, trivial and nested tensor factors are accepted.
    pub fn tensor(a: IdRing, b: IdRing) -> Result<Self> {
        if a.field != b.field {
            return Err(Error::BaseMismatch(format!(
                "tensor factors over {} and {}",
                a.field, b.field
            )));
        }
        for f in [&a, &b] {
            if f.one_key().is_none() {
                return Err(Error::Semantic(
                    "tensor factors must be polynomial, trivial or tensor rings".into(),
                ));
            }
        }
        Ok(IdRing {
            field: a.field,
            kind: RingKind::Tensor(Box::new(a), Box::new(b)),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn inverted(&self) -> Option<&Arc<Vec<Poly>>> {
        match &self.kind {
            RingKind::Localized { inverted } => Some(inverted),
            _ => None,
        }
    }

    fn one_key(&self) -> Option<BasisKey> {
        match &self.kind {
            RingKind::Poly => Some(BasisKey::Pow(0)),
            RingKind::Trivial { generators } => Some(BasisKey::Mono(vec![0; generators.len()])),
            RingKind::Tensor(a, b) => Some(BasisKey::Pair(
                Box::new(a.one_key()?),
                Box::new(b.one_key()?),
            )),
            _ => None,
        }
    }

    pub fn one(&self) -> BaseElem {
        self.from_scalar(self.field.one())
    }

    pub fn zero(&self) -> BaseElem {
        self.from_scalar(self.field.zero())
    }

    pub fn from_scalar(&self, c: Scalar) -> BaseElem {
        match &self.kind {
            RingKind::Poly => BaseElem::Poly(Poly::constant(c)),
            RingKind::Localized { inverted } => {
                BaseElem::Local(LocElem::from_poly(Poly::constant(c), inverted.clone()))
            }
            RingKind::Series { order } => {
                BaseElem::Series(TruncSeries::constant(c, *order))
            }
            RingKind::Trivial { generators } => {
                let n = generators.len();
                BaseElem::Trivial(MPoly::new(self.field, n, BTreeMap::from([(vec![0; n], c)])))
            }
            RingKind::Tensor(..) => {
                let one = self.one_key().expect("validated at construction");
                BaseElem::Tensor(TensorElem::new(self.field, one.clone(), BTreeMap::from([(one, c)])))
            }
        }
    }

    /// Embed a polynomial in `t` (polynomial, localized or series rings).
    pub fn from_poly(&self, p: Poly) -> Result<BaseElem> {
        match &self.kind {
            RingKind::Poly => Ok(BaseElem::Poly(p)),
            RingKind::Localized { inverted } => Ok(BaseElem::Local(LocElem::from_poly(p, inverted.clone()))),
            RingKind::Series { order } => Ok(BaseElem::Series(TruncSeries::eval_poly(&p, *order))),
            _ => Err(Error::Semantic("ring has no variable t".into())),
        }
    }

    /// `1 / d_i` in a localized ring.
    pub fn inverse_of_generator(&self, i: usize) -> Result<BaseElem> {
        match &self.kind {
            RingKind::Localized { inverted } if i < inverted.len() => {
                Ok(BaseElem::Local(LocElem::inverse_of_generator(i, inverted.clone())))
            }
            _ => Err(Error::Semantic(format!("no inverted generator {i}"))),
        }
    }

    /// Generator monomial of a trivial ring.
    pub fn monomial(&self, exps: Vec<u32>) -> Result<BaseElem> {
        match &self.kind {
            RingKind::Trivial { generators } if generators.len() == exps.len() => {
                Ok(BaseElem::Trivial(MPoly::monomial(self.field, exps)))
            }
            _ => Err(Error::Semantic("exponent vector does not match the generators".into())),
        }
    }

    fn keys_of(&self, x: &BaseElem) -> Result<BTreeMap<BasisKey, Scalar>> {
        match (&self.kind, x) {
            (RingKind::Poly, BaseElem::Poly(p)) => Ok(p
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (BasisKey::Pow(i as u32), c.clone()))
                .collect()),
            (RingKind::Trivial { .. }, BaseElem::Trivial(m)) => Ok(m
                .terms()
                .iter()
                .map(|(k, v)| (BasisKey::Mono(k.clone()), v.clone()))
                .collect()),
            (RingKind::Tensor(..), BaseElem::Tensor(t)) => Ok(t.terms().clone()),
            _ => Err(Error::BaseMismatch("element does not belong to this factor".into())),
        }
    }

    /// Elementary tensor `a ⊗ b`.
    pub fn elementary_tensor(&self, a: &BaseElem, b: &BaseElem) -> Result<BaseElem> {
        let RingKind::Tensor(ra, rb) = &self.kind else {
            return Err(Error::Semantic("not a tensor product".into()));
        };
        let ka = ra.keys_of(a)?;
        let kb = rb.keys_of(b)?;
        let mut terms = BTreeMap::new();
        for (x, u) in &ka {
            for (y, v) in &kb {
                terms.insert(BasisKey::Pair(Box::new(x.clone()), Box::new(y.clone())), u * v);
            }
        }
        let one = self.one_key().expect("validated at construction");
        Ok(BaseElem::Tensor(TensorElem::new(self.field, one, terms)))
    }

    /// Render an element with the ring's generator names.
    pub fn format(&self, x: &BaseElem) -> String {
        match (&self.kind, x) {
            (RingKind::Trivial { generators }, BaseElem::Trivial(m)) => {
                struct W<'a>(&'a MPoly, &'a [String]);
                impl fmt::Display for W<'_> {
                    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                        self.0.fmt_with(f, self.1)
                    }
                }
                W(m, generators).to_string()
            }
            _ => x.to_string(),
        }
    }

    fn theta_series(&self, x: &BaseElem, k: usize) -> TruncSeries<BaseElem> {
        match (&self.kind, x) {
            (RingKind::Localized { inverted }, BaseElem::Local(e)) => {
                // with L the denominator, θ(1/L)_n = Q_n / L^{n+1} where
                // Q_0 = 1 and Q_n = −Σ_{i≥1} θ^{(i)}(L) Q_{n−i} L^{i−1}
                let field = self.field;
                let mut l = Poly::constant(field.one());
                for (d, &ex) in inverted.iter().zip(e.exponents()) {
                    l = l.mul(&d.pow(ex as u64));
                }
                let shifted_l = l.taylor_shift(k);
                let num = e.numerator().taylor_shift(k);
                let mut lpow = vec![Poly::constant(field.one())];
                for i in 1..=k {
                    lpow.push(lpow[i - 1].mul(&l));
                }
                let mut q: Vec<Poly> = vec![Poly::constant(field.one())];
                for n in 1..=k {
                    let mut acc = Poly::zero(field);
                    for i in 1..=n {
                        acc = acc.add(&shifted_l.coeff(i).mul(&q[n - i]).mul(&lpow[i - 1]));
                    }
                    q.push(acc.neg());
                }
                let coeffs = (0..=k)
                    .map(|n| {
                        let mut top = Poly::zero(field);
                        for j in 0..=n {
                            top = top.add(&num.coeff(j).mul(&q[n - j]).mul(&lpow[j]));
                        }
                        let exps = e.exponents().iter().map(|&ex| ex * (n as u32 + 1)).collect();
                        BaseElem::Local(LocElem::new(top, exps, inverted.clone()))
                    })
                    .collect();
                TruncSeries::new(coeffs)
            }
            _ => TruncSeries::new((0..=k).map(|n| self.theta_n(x, n)).collect()),
        }
    }
}

impl IterativeDerivation for IdRing {
    fn field(&self) -> FieldSpec {
        self.field
    }

    fn theta_n(&self, x: &BaseElem, n: usize) -> BaseElem {
        match x {
            BaseElem::Poly(p) => BaseElem::Poly(p.hasse_derivative(n)),
            BaseElem::Local(_) => {
                if n == 0 {
                    return x.clone();
                }
                self.theta_series(x, n).coeff(n)
            }
            BaseElem::Series(s) => BaseElem::Series(
                s.hasse_derivative(n)
                    .unwrap_or_else(|| TruncSeries::constant(self.field.zero(), 0)),
            ),
            BaseElem::Trivial(m) => {
                if n == 0 {
                    x.clone()
                } else {
                    BaseElem::Trivial(m.zero_like())
                }
            }
            BaseElem::Tensor(t) => BaseElem::Tensor(t.theta_n(n)),
        }
    }

    fn theta(&self, x: &BaseElem, k: usize) -> TruncSeries<BaseElem> {
        self.theta_series(x, k)
    }

    fn describe(&self, x: &BaseElem) -> String {
        self.format(x)
    }
}

impl BaseElem {
    pub fn as_poly(&self) -> Option<&Poly> {
        match self {
            BaseElem::Poly(p) => Some(p),
            BaseElem::Local(e) => e.as_poly(),
            _ => None,
        }
    }

    /// `x(c + t)` to order `order`, computed directly from the representation.
    /// Agrees with [`taylor_embed`] wherever both apply.
    pub fn expand_at(&self, c: &Scalar, order: usize) -> Result<TruncSeries<Scalar>> {
        match self {
            BaseElem::Poly(p) => Ok(p.expand_at(c, order)),
            BaseElem::Local(l) => {
                let mut den = Poly::constant(l.field().one());
                for (d, &e) in l.inverted().iter().zip(l.exponents()) {
                    if e == 0 {
                        continue;
                    }
                    if d.eval(c).is_zero() {
                        return Err(Error::BadPoint(format!("{d} vanishes at {c}")));
                    }
                    den = den.mul(&d.pow(e as u64));
                }
                let inv = den.expand_at(c, order).inverse()?;
                Ok(l.numerator().expand_at(c, order).mul(&inv))
            }
            BaseElem::Series(s) => {
                if !c.is_zero() {
                    return Err(Error::BadPoint(format!(
                        "series coefficients only expand at 0, not {c}"
                    )));
                }
                if s.order() < order {
                    return Err(Error::InsufficientOrder {
                        needed: order,
                        have: s.order(),
                    });
                }
                Ok(s.truncate(order))
            }
            _ => Err(Error::Semantic(format!(
                "{} elements have no expansion in t",
                self.kind_name()
            ))),
        }
    }

    pub fn as_series(&self) -> Option<&TruncSeries<Scalar>> {
        match self {
            BaseElem::Series(s) => Some(s),
            _ => None,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            BaseElem::Poly(_) => "polynomial",
            BaseElem::Local(_) => "localized",
            BaseElem::Series(_) => "series",
            BaseElem::Trivial(_) => "trivial",
            BaseElem::Tensor(_) => "tensor",
        }
    }
}

impl PartialEq for BaseElem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (BaseElem::Poly(a), BaseElem::Poly(b)) => a == b,
            (BaseElem::Local(a), BaseElem::Local(b)) => a == b,
            (BaseElem::Series(a), BaseElem::Series(b)) => {
                let n = a.order().min(b.order());
                a.agrees_to(b, n)
            }
            (BaseElem::Trivial(a), BaseElem::Trivial(b)) => a == b,
            (BaseElem::Tensor(a), BaseElem::Tensor(b)) => a == b,
            _ => false,
        }
    }
}

macro_rules! dispatch2 {
    ($a:expr, $b:expr, $f:ident) => {
        match ($a, $b) {
            (BaseElem::Poly(x), BaseElem::Poly(y)) => BaseElem::Poly(x.$f(y)),
            (BaseElem::Local(x), BaseElem::Local(y)) => BaseElem::Local(x.$f(y)),
            (BaseElem::Series(x), BaseElem::Series(y)) => BaseElem::Series(x.$f(y)),
            (BaseElem::Trivial(x), BaseElem::Trivial(y)) => BaseElem::Trivial(x.$f(y)),
            (BaseElem::Tensor(x), BaseElem::Tensor(y)) => BaseElem::Tensor(x.$f(y)),
            (x, y) => panic!("mixed base elements: {} and {}", x.kind_name(), y.kind_name()),
        }
    };
}

macro_rules! dispatch1 {
    ($a:expr, $x:ident => $e:expr) => {
        match $a {
            BaseElem::Poly($x) => BaseElem::Poly($e),
            BaseElem::Local($x) => BaseElem::Local($e),
            BaseElem::Series($x) => BaseElem::Series($e),
            BaseElem::Trivial($x) => BaseElem::Trivial($e),
            BaseElem::Tensor($x) => BaseElem::Tensor($e),
        }
    };
}

impl RingElem for BaseElem {
    fn zero_like(&self) -> Self {
        dispatch1!(self, x => x.zero_like())
    }
    fn one_like(&self) -> Self {
        dispatch1!(self, x => x.one_like())
    }
    fn is_zero(&self) -> bool {
        match self {
            BaseElem::Poly(x) => x.is_zero(),
            BaseElem::Local(x) => x.is_zero(),
            BaseElem::Series(x) => x.is_zero(),
            BaseElem::Trivial(x) => x.is_zero(),
            BaseElem::Tensor(x) => x.is_zero(),
        }
    }
    fn add(&self, other: &Self) -> Self {
        dispatch2!(self, other, add)
    }
    fn sub(&self, other: &Self) -> Self {
        dispatch2!(self, other, sub)
    }
    fn neg(&self) -> Self {
        dispatch1!(self, x => x.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        dispatch2!(self, other, mul)
    }
    fn scale(&self, s: &Scalar) -> Self {
        dispatch1!(self, x => x.scale(s))
    }
    fn unit_inverse(&self) -> Option<Self> {
        Some(match self {
            BaseElem::Poly(x) => BaseElem::Poly(x.unit_inverse()?),
            BaseElem::Local(x) => BaseElem::Local(x.unit_inverse()?),
            BaseElem::Series(x) => BaseElem::Series(x.unit_inverse()?),
            BaseElem::Trivial(x) => BaseElem::Trivial(x.unit_inverse()?),
            BaseElem::Tensor(x) => BaseElem::Tensor(x.unit_inverse()?),
        })
    }
    fn field(&self) -> FieldSpec {
        match self {
            BaseElem::Poly(x) => x.field(),
            BaseElem::Local(x) => x.field(),
            BaseElem::Series(x) => RingElem::field(x),
            BaseElem::Trivial(x) => x.field(),
            BaseElem::Tensor(x) => x.field(),
        }
    }
}

impl fmt::Display for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseElem::Poly(p) => write!(f, "{p}"),
            BaseElem::Local(e) => write!(f, "{e}"),
            BaseElem::Series(s) => {
                let p = Poly::new(RingElem::field(s), s.coeffs().to_vec());
                write!(f, "{p} + O(t^{})", s.order() + 1)
            }
            BaseElem::Trivial(m) => m.fmt_with(f, &[]),
            BaseElem::Tensor(t) => write!(f, "{t}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn poly(s: &str, f: FieldSpec) -> BaseElem {
        BaseElem::Poly(Poly::parse(s, f).unwrap())
    }

    #[test]
    fn theta_of_t_squared() {
        let r = IdRing::poly(q());
        let th = r.theta(&poly("t^2", q()), 2);
        assert_eq!(th.coeff(0), poly("t^2", q()));
        assert_eq!(th.coeff(1), poly("2*t", q()));
        assert_eq!(th.coeff(2), poly("1", q()));
    }

    #[test]
    fn frobenius_power_in_char_5() {
        let f5 = FieldSpec::prime(5).unwrap();
        let r = IdRing::poly(f5);
        let th = r.theta(&poly("t^5", f5), 5);
        assert_eq!(th.coeff(0), poly("t^5", f5));
        for n in 1..5 {
            assert!(th.coeff(n).is_zero());
        }
        assert_eq!(th.coeff(5), poly("1", f5));
    }

    #[test]
    fn localized_theta_of_inverse() {
        let r = IdRing::localized(q(), vec![Poly::t(q())]).unwrap();
        let x = r.inverse_of_generator(0).unwrap();
        let th = r.theta(&x, 3);
        // 1/(t+T) = Σ (-1)^n T^n / t^{n+1}
        for n in 0..=3u32 {
            let inv = Arc::new(vec![Poly::t(q())]);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let expect = LocElem::new(Poly::from_ints(q(), &[sign]), vec![n + 1], inv);
            assert_eq!(th.coeff(n as usize), BaseElem::Local(expect));
            assert_eq!(r.theta_n(&x, n as usize), th.coeff(n as usize));
        }
    }

    #[test]
    fn tensor_leibniz() {
        let r = IdRing::tensor(IdRing::poly(q()), IdRing::trivial(q(), vec!["z".into()])).unwrap();
        let a = poly("t^2", q());
        let z = BaseElem::Trivial(MPoly::monomial(q(), vec![1]));
        let x = r.elementary_tensor(&a, &z).unwrap();
        let th1 = r.theta_n(&x, 1);
        assert_eq!(th1, r.elementary_tensor(&poly("2*t", q()), &z).unwrap());
        assert!(IdRing::tensor(IdRing::poly(q()), IdRing::series(q(), 4)).is_err());
    }
}
