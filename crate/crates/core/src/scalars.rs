//! Exact coefficient fields: the rationals and prime fields.
//!
//! A [`Scalar`] carries its own field, so arithmetic needs no context. Mixing
//! elements of different fields is a programming error and panics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field: characteristic 0 means ℚ, otherwise 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    characteristic: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 || (characteristic < (1 << 32) && is_prime(characteristic)) {
            Ok(FieldSpec { characteristic })
        } else {
            Err(Error::InvalidField(characteristic))
        }
    }

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidField(0));
        }
        Self::new(p)
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_char_zero(&self) -> bool {
        self.characteristic == 0
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rational(BigRational::from_integer(n.clone())),
            p => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Residue {
                    value: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// `num/den` in this field. Fails when `den` vanishes in the field.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or(Error::ZeroInput)?;
        Ok(&self.from_i64(num) * &inv)
    }

    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let s = text.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let bad = || Error::parse(1, format!("invalid scalar literal {text:?}"));
        let n = BigInt::from_str(num.trim_start_matches('+')).map_err(|_| bad())?;
        let value = self.from_bigint(&n);
        match den {
            None => Ok(value),
            Some(d) => {
                if !self.is_char_zero() {
                    return Err(Error::parse(
                        1,
                        format!("fractions are not accepted in characteristic {}", self.characteristic),
                    ));
                }
                let d = BigInt::from_str(d).map_err(|_| bad())?;
                if !d.is_positive() {
                    return Err(bad());
                }
                Ok(&value * &self.from_bigint(&d).inv().ok_or_else(bad)?)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F_{p}"),
        }
    }
}

/// An element of ℚ (always reduced, positive denominator) or 𝔽_p (residue in `[0, p)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::RATIONALS,
            Scalar::Residue { modulus, .. } => FieldSpec {
                characteristic: *modulus,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, e: u64) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Numerator and denominator as integers; residues report `(value, 1)`.
    pub fn to_ratio(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Rational(q) => (q.numer().clone(), q.denom().clone()),
            Scalar::Residue { value, .. } => (BigInt::from(*value), BigInt::one()),
        }
    }

    fn check_same(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "scalar field mismatch");
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn small_binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    // n < p here, so k! is invertible
    if k > n {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = ((num as u128 * ((n - i) % p) as u128) % p as u128) as u64;
        den = ((den as u128 * ((i + 1) % p) as u128) % p as u128) as u64;
    }
    ((num as u128 * pow_mod(den, p - 2, p) as u128) % p as u128) as u64
}

fn binomial_integer(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(n, k)` as an element of `field`. In characteristic p the value comes
/// from the base-p digits of `n` and `k` (Lucas), never from factorials.
pub fn binomial(n: u64, k: u64, field: FieldSpec) -> Scalar {
    match field.characteristic() {
        0 => field.from_bigint(&binomial_integer(n, k)),
        p => {
            let (mut n, mut k) = (n, k);
            let mut acc = 1u64;
            while k > 0 || n > 0 {
                let (nd, kd) = (n % p, k % p);
                if kd > nd {
                    acc = 0;
                    break;
                }
                acc = ((acc as u128 * small_binomial_mod(nd, kd, p) as u128) % p as u128) as u64;
                n /= p;
                k /= p;
            }
            Scalar::Residue {
                value: acc,
                modulus: p,
            }
        }
    }
}

/// `a (a-1) ... (a-n+1) / n!`.
pub fn generalized_binomial(a: &Scalar, n: u64) -> Result<Scalar> {
    let field = a.field();
    let p = field.characteristic();
    if p != 0 && n >= p {
        return Err(Error::CharDivision { n, p });
    }
    let mut num = field.one();
    let mut fact = field.one();
    for i in 0..n {
        num = &num * &(a - &field.from_i64(i as i64));
        fact = &fact * &field.from_i64(i as i64 + 1);
    }
    Ok(&num * &fact.inv().expect("n! invertible when n < p"))
}

impl crate::ring::RingElem for Scalar {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn field(&self) -> FieldSpec {
        Scalar::field(self)
    }

    /// Over ℚ both factors are brought to a common denominator so the inner
    /// loop is integer arithmetic and each output is reduced once.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        match &a[0] {
            Scalar::Rational(_) => {
                let (na, da) = integer_parts(a, len);
                let (nb, db) = integer_parts(b, len);
                let den = da * db;
                let mut out = vec![BigInt::zero(); len];
                for (i, x) in na.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in nb.iter().enumerate().take(len - i) {
                        if !y.is_zero() {
                            out[i + j] += x * y;
                        }
                    }
                }
                out.into_iter()
                    .map(|n| Scalar::Rational(BigRational::new(n, den.clone())))
                    .collect()
            }
            Scalar::Residue { modulus, .. } => {
                let p = *modulus as u128;
                let va: Vec<u128> = a.iter().take(len).map(residue_value).collect();
                let vb: Vec<u128> = b.iter().take(len).map(residue_value).collect();
                let mut out = vec![0u128; len];
                for (i, &x) in va.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in vb.iter().enumerate().take(len - i) {
                        out[i + j] = (out[i + j] + x * y % p) % p;
                    }
                }
                out.into_iter()
                    .map(|v| Scalar::Residue {
                        value: v as u64,
                        modulus: *modulus,
                    })
                    .collect()
            }
        }
    }
}

fn residue_value(s: &Scalar) -> u128 {
    match s {
        Scalar::Residue { value, .. } => *value as u128,
        Scalar::Rational(_) => panic!("mixed fields in one coefficient list"),
    }
}

/// Numerators over the least common denominator of the first `len` entries.
fn integer_parts(xs: &[Scalar], len: usize) -> (Vec<BigInt>, BigInt) {
    let xs = &xs[..len.min(xs.len())];
    let mut lcm = BigInt::one();
    for x in xs {
        if let Scalar::Rational(r) = x {
            if !r.denom().is_one() {
                lcm = lcm.lcm(r.denom());
            }
        }
    }
    let nums = xs
        .iter()
        .map(|x| match x {
            Scalar::Rational(r) if r.denom().is_one() => r.numer() * &lcm,
            Scalar::Rational(r) => r.numer() * (&lcm / r.denom()),
            Scalar::Residue { .. } => panic!("mixed fields in one coefficient list"),
        })
        .collect();
    (nums, lcm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(2, 1, q()), q().from_i64(2));
        assert_eq!(binomial(5, 2, fp(5)), fp(5).zero());
        // C(7,3) = 35 is odd
        assert_eq!(binomial(7, 3, fp(2)), fp(2).one());
        assert_eq!(binomial(3, 5, q()), q().zero());
    }

    #[test]
    fn pascal_identity_both_characteristics() {
        for f in [q(), fp(2), fp(3), fp(5), fp(7)] {
            for n in 0..=64u64 {
                for k in 1..=64u64 {
                    let lhs = &binomial(n, k, f) + &binomial(n, k - 1, f);
                    assert_eq!(lhs, binomial(n + 1, k, f), "n={n} k={k} {f}");
                }
            }
        }
    }

    #[test]
    fn binomial_of_p_vanishes_in_the_middle() {
        for p in [2u64, 3, 5, 7] {
            let f = fp(p);
            for k in 1..p {
                assert!(binomial(p, k, f).is_zero());
            }
            assert!(binomial(p, p, f).is_one());
            assert!(binomial(p, 0, f).is_one());
        }
    }

    #[test]
    fn lucas_matches_factorial_reduction() {
        for p in [2u64, 3, 5, 7] {
            let f = fp(p);
            for n in 0..=200u64 {
                for k in 0..=200u64 {
                    let direct = f.from_bigint(&binomial_integer(n, k));
                    assert_eq!(binomial(n, k, f), direct, "p={p} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn generalized_binomial_examples() {
        let third = q().ratio(1, 3).unwrap();
        assert_eq!(generalized_binomial(&third, 2).unwrap(), q().ratio(-1, 9).unwrap());
        assert!(generalized_binomial(&third, 0).unwrap().is_one());
        let third5 = fp(5).ratio(1, 3).unwrap();
        assert_eq!(
            generalized_binomial(&third5, 5),
            Err(Error::CharDivision { n: 5, p: 5 })
        );
        // integer upper argument agrees with the ordinary binomial
        assert_eq!(generalized_binomial(&q().from_i64(7), 3).unwrap(), binomial(7, 3, q()));
    }

    #[test]
    fn field_construction() {
        assert!(FieldSpec::new(4).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(7).is_ok());
        assert!(FieldSpec::prime(0).is_err());
    }

    #[test]
    fn scalar_syntax() {
        assert_eq!(q().parse_scalar("-3/6").unwrap(), q().ratio(-1, 2).unwrap());
        assert_eq!(q().parse_scalar("+4").unwrap().to_string(), "4");
        assert_eq!(fp(5).parse_scalar("-1").unwrap().to_string(), "4");
        assert!(fp(5).parse_scalar("1/2").is_err());
        assert!(q().parse_scalar("1/0").is_err());
        assert!(q().parse_scalar("x").is_err());
        assert_eq!(q().ratio(6, -4).unwrap().to_string(), "-3/2");
    }

    #[test]
    fn residue_inverse() {
        let f = fp(7);
        for a in 1..7 {
            let x = f.from_i64(a);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }
}
