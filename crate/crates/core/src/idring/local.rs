use std::fmt;
use std::sync::Arc;

use crate::poly::Poly;
use crate::ring::RingElem;
use crate::scalars::{FieldSpec, Scalar};

/// Element `num / Π d_i^{e_i}` of `C[t]` localized at a finite set of polynomials.
#[derive(Clone, Debug)]
pub struct LocElem {
    num: Poly,
    exps: Vec<u32>,
    inverted: Arc<Vec<Poly>>,
}

impl LocElem {
    pub fn new(num: Poly, exps: Vec<u32>, inverted: Arc<Vec<Poly>>) -> Self {
        assert_eq!(exps.len(), inverted.len());
        let mut e = LocElem {
            num,
            exps,
            inverted,
        };
        e.cancel();
        e
    }

    pub fn from_poly(p: Poly, inverted: Arc<Vec<Poly>>) -> Self {
        let n = inverted.len();
        LocElem::new(p, vec![0; n], inverted)
    }

    /// `1 / d_i`.
    pub fn inverse_of_generator(i: usize, inverted: Arc<Vec<Poly>>) -> Self {
        let field = inverted[i].field();
        let mut exps = vec![0; inverted.len()];
        exps[i] = 1;
        LocElem::new(Poly::constant(field.one()), exps, inverted)
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn inverted(&self) -> &Arc<Vec<Poly>> {
        &self.inverted
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.exps.iter_mut().for_each(|e| *e = 0);
            return;
        }
        for i in 0..self.exps.len() {
            while self.exps[i] > 0 {
                match self.num.div_exact(&self.inverted[i]) {
                    Some(q) => {
                        self.num = q;
                        self.exps[i] -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    fn denominator_power(&self, exps: &[u32]) -> Poly {
        let mut acc = Poly::constant(self.num.field().one());
        for (d, &e) in self.inverted.iter().zip(exps) {
            acc = acc.mul(&d.pow(e as u64));
        }
        acc
    }

    /// Numerator over the common denominator `Π d_i^{target_i}`; `target ≥ exps`.
    pub fn numerator_over(&self, target: &[u32]) -> Poly {
        let extra: Vec<u32> = target.iter().zip(&self.exps).map(|(t, e)| t - e).collect();
        self.num.mul(&self.denominator_power(&extra))
    }

    /// Polynomial part when the element lies in `C[t]`.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.exps.iter().all(|&e| e == 0).then_some(&self.num)
    }

    fn combine(&self, other: &Self) -> (Poly, Poly, Vec<u32>) {
        let target: Vec<u32> = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        (self.numerator_over(&target), other.numerator_over(&target), target)
    }

    /// `f(c)` for a point where no inverted polynomial vanishes.
    pub fn eval(&self, c: &Scalar) -> Option<Scalar> {
        let den = self.denominator_power(&self.exps).eval(c);
        Some(&self.num.eval(c) * &den.inv()?)
    }
}

impl PartialEq for LocElem {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.combine(other);
        a == b
    }
}

impl RingElem for LocElem {
    fn zero_like(&self) -> Self {
        LocElem::from_poly(Poly::zero(self.num.field()), self.inverted.clone())
    }
    fn one_like(&self) -> Self {
        LocElem::from_poly(Poly::constant(self.num.field().one()), self.inverted.clone())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        let (a, b, target) = self.combine(other);
        LocElem::new(a.add(&b), target, self.inverted.clone())
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn neg(&self) -> Self {
        LocElem {
            num: self.num.neg(),
            exps: self.exps.clone(),
            inverted: self.inverted.clone(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        LocElem::new(self.num.mul(&other.num), exps, self.inverted.clone())
    }
    fn scale(&self, s: &Scalar) -> Self {
        LocElem::new(self.num.scale(s), self.exps.clone(), self.inverted.clone())
    }
    /// Units recognized here are scalar multiples of products of the inverted polynomials.
    fn unit_inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let mut rest = self.num.clone();
        let mut num_exps = vec![0u32; self.exps.len()];
        for (i, d) in self.inverted.iter().enumerate() {
            if d.is_constant() {
                continue;
            }
            while let Some(q) = rest.div_exact(d) {
                rest = q;
                num_exps[i] += 1;
            }
        }
        let c = rest.unit_inverse()?;
        // (c0 Π d^a) / Π d^e  inverts to  c0^{-1} Π d^e / Π d^a
        let num = c.mul(&self.denominator_power(&self.exps));
        Some(LocElem::new(num, num_exps, self.inverted.clone()))
    }
    fn field(&self) -> FieldSpec {
        self.num.field()
    }
}

impl fmt::Display for LocElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dens: Vec<String> = self
            .inverted
            .iter()
            .zip(&self.exps)
            .filter(|(_, &e)| e > 0)
            .map(|(d, &e)| {
                if e == 1 {
                    format!("({d})")
                } else {
                    format!("({d})^{e}")
                }
            })
            .collect();
        if dens.is_empty() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, dens.join("*"))
        }
    }
}
