use std::collections::BTreeMap;
use std::fmt;

use crate::ring::RingElem;
use crate::scalars::{FieldSpec, Scalar};

/// Polynomial in named generators; the algebra carrying the trivial derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MPoly {
    pub fn new(field: FieldSpec, nvars: usize, terms: BTreeMap<Vec<u32>, Scalar>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(k, v)| {
                assert_eq!(k.len(), nvars);
                !v.is_zero()
            })
            .collect();
        MPoly {
            field,
            nvars,
            terms,
        }
    }

    pub fn monomial(field: FieldSpec, exps: Vec<u32>) -> Self {
        let nvars = exps.len();
        MPoly::new(field, nvars, BTreeMap::from([(exps, field.one())]))
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Scalar> {
        &self.terms
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub(crate) fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = k
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let n = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if e == 1 {
                        n
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            match (mono.is_empty(), v.is_one()) {
                (true, _) => write!(f, "{v}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{v}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl RingElem for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::new(self.field, self.nvars, BTreeMap::new())
    }
    fn one_like(&self) -> Self {
        MPoly::monomial(self.field, vec![0; self.nvars])
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
        MPoly::new(self.field, self.nvars, terms)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn neg(&self) -> Self {
        self.scale(&-self.field.one())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                let p = va * vb;
                let s = match terms.get(&k) {
                    Some(x) => x + &p,
                    None => p,
                };
                terms.insert(k, s);
            }
        }
        MPoly::new(self.field, self.nvars, terms)
    }
    fn scale(&self, s: &Scalar) -> Self {
        MPoly::new(
            self.field,
            self.nvars,
            self.terms.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        )
    }
    fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().expect("one term");
            if k.iter().all(|&e| e == 0) {
                return Some(MPoly::new(
                    self.field,
                    self.nvars,
                    BTreeMap::from([(k.clone(), v.inv()?)]),
                ));
            }
        }
        None
    }
    fn field(&self) -> FieldSpec {
        self.field
    }
}
