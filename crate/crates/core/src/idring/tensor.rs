use std::collections::BTreeMap;
use std::fmt;

use crate::ring::RingElem;
use crate::scalars::{binomial, FieldSpec, Scalar};

/// Basis element of a factor ring: `t^i` of a polynomial factor, a monomial
/// of a trivial factor, or an elementary tensor of two basis elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKey {
    Pow(u32),
    Mono(Vec<u32>),
    Pair(Box<BasisKey>, Box<BasisKey>),
}

impl BasisKey {
    pub fn mul(&self, other: &BasisKey) -> BasisKey {
        match (self, other) {
            (BasisKey::Pow(a), BasisKey::Pow(b)) => BasisKey::Pow(a + b),
            (BasisKey::Mono(a), BasisKey::Mono(b)) => {
                BasisKey::Mono(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (BasisKey::Pair(a1, b1), BasisKey::Pair(a2, b2)) => {
                BasisKey::Pair(Box::new(a1.mul(a2)), Box::new(b1.mul(b2)))
            }
            _ => panic!("incompatible basis keys"),
        }
    }

    /// `θ^{(n)}` of the basis element as a linear combination of basis elements.
    pub fn theta_n(&self, n: usize, field: FieldSpec) -> Vec<(BasisKey, Scalar)> {
        match self {
            BasisKey::Pow(i) => {
                if (*i as usize) < n {
                    vec![]
                } else {
                    let c = binomial(*i as u64, n as u64, field);
                    if c.is_zero() {
                        vec![]
                    } else {
                        vec![(BasisKey::Pow(i - n as u32), c)]
                    }
                }
            }
            BasisKey::Mono(_) => {
                if n == 0 {
                    vec![(self.clone(), field.one())]
                } else {
                    vec![]
                }
            }
            BasisKey::Pair(a, b) => {
                let mut out: BTreeMap<BasisKey, Scalar> = BTreeMap::new();
                for i in 0..=n {
                    let ta = a.theta_n(i, field);
                    if ta.is_empty() {
                        continue;
                    }
                    let tb = b.theta_n(n - i, field);
                    for (ka, ca) in &ta {
                        for (kb, cb) in &tb {
                            let k = BasisKey::Pair(Box::new(ka.clone()), Box::new(kb.clone()));
                            let v = ca * cb;
                            let s = match out.get(&k) {
                                Some(x) => x + &v,
                                None => v,
                            };
                            out.insert(k, s);
                        }
                    }
                }
                out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            }
        }
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKey::Pow(0) => write!(f, "1"),
            BasisKey::Pow(1) => write!(f, "t"),
            BasisKey::Pow(i) => write!(f, "t^{i}"),
            BasisKey::Mono(e) => {
                let parts: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("x{i}") } else { format!("x{i}^{x}") })
                    .collect();
                if parts.is_empty() {
                    write!(f, "1")
                } else {
                    write!(f, "{}", parts.join("*"))
                }
            }
            BasisKey::Pair(a, b) => write!(f, "({a} (x) {b})"),
        }
    }
}

/// Element of a tensor product, as a finite combination of elementary basis tensors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElem {
    field: FieldSpec,
    one: BasisKey,
    terms: BTreeMap<BasisKey, Scalar>,
}

impl TensorElem {
    pub fn new(field: FieldSpec, one: BasisKey, terms: BTreeMap<BasisKey, Scalar>) -> Self {
        TensorElem {
            field,
            one,
            terms: terms.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &BTreeMap<BasisKey, Scalar> {
        &self.terms
    }

    pub fn one_key(&self) -> &BasisKey {
        &self.one
    }

    pub fn theta_n(&self, n: usize) -> TensorElem {
        let mut out: BTreeMap<BasisKey, Scalar> = BTreeMap::new();
        for (k, v) in &self.terms {
            for (k2, c) in k.theta_n(n, self.field) {
                let p = v * &c;
                let s = match out.get(&k2) {
                    Some(x) => x + &p,
                    None => p,
                };
                out.insert(k2, s);
            }
        }
        TensorElem::new(self.field, self.one.clone(), out)
    }
}

impl RingElem for TensorElem {
    fn zero_like(&self) -> Self {
        TensorElem::new(self.field, self.one.clone(), BTreeMap::new())
    }
    fn one_like(&self) -> Self {
        TensorElem::new(
            self.field,
            self.one.clone(),
            BTreeMap::from([(self.one.clone(), self.field.one())]),
        )
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let s = match terms.get(k) {
                Some(x) => x + v,
                None => v.clone(),
            };
            terms.insert(k.clone(), s);
        }
        TensorElem::new(self.field, self.one.clone(), terms)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn neg(&self) -> Self {
        self.scale(&-self.field.one())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<BasisKey, Scalar> = BTreeMap::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k = ka.mul(kb);
                let p = va * vb;
                let s = match terms.get(&k) {
                    Some(x) => x + &p,
                    None => p,
                };
                terms.insert(k, s);
            }
        }
        TensorElem::new(self.field, self.one.clone(), terms)
    }
    fn scale(&self, s: &Scalar) -> Self {
        TensorElem::new(
            self.field,
            self.one.clone(),
            self.terms.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        )
    }
    fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().expect("one term");
            if *k == self.one {
                return Some(self.one_like().scale(&v.inv()?));
            }
        }
        None
    }
    fn field(&self) -> FieldSpec {
        self.field
    }
}

impl fmt::Display for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, v)| if v.is_one() { k.to_string() } else { format!("{v}*{k}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
