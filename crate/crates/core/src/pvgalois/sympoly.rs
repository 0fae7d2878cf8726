use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::RingElem;
use crate::scalars::{FieldSpec, Scalar};

/// Polynomial in generator symbols with coefficients in a ring `C`
/// (polynomials in `t`, base-ring elements, or scalars).
#[derive(Clone, Debug)]
pub struct SymPoly<C> {
    nsyms: usize,
    zero: C,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: RingElem> SymPoly<C> {
    pub fn new(nsyms: usize, zero: C, terms: BTreeMap<Vec<u32>, C>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(k, v)| {
                debug_assert_eq!(k.len(), nsyms);
                !v.is_zero()
            })
            .collect();
        SymPoly { nsyms, zero, terms }
    }

    pub fn constant(nsyms: usize, c: C) -> Self {
        let zero = c.zero_like();
        SymPoly::new(nsyms, zero, BTreeMap::from([(vec![0; nsyms], c)]))
    }

    pub fn symbol(nsyms: usize, i: usize, one: C) -> Self {
        let mut e = vec![0; nsyms];
        e[i] = 1;
        let zero = one.zero_like();
        SymPoly::new(nsyms, zero, BTreeMap::from([(e, one)]))
    }

    pub fn monomial(exps: Vec<u32>, c: C) -> Self {
        let zero = c.zero_like();
        SymPoly::new(exps.len(), zero, BTreeMap::from([(exps, c)]))
    }

    pub fn nsyms(&self) -> usize {
        self.nsyms
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.iter().sum()).max().unwrap_or(0)
    }

    pub fn map_coeffs<D: RingElem>(&self, zero: D, f: impl Fn(&C) -> D) -> SymPoly<D> {
        SymPoly::new(
            self.nsyms,
            zero,
            self.terms.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        )
    }
}

impl<C: RingElem> PartialEq for SymPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.nsyms == other.nsyms && self.terms == other.terms
    }
}

impl<C: RingElem> RingElem for SymPoly<C> {
    fn zero_like(&self) -> Self {
        SymPoly::new(self.nsyms, self.zero.clone(), BTreeMap::new())
    }
    fn one_like(&self) -> Self {
        SymPoly::constant(self.nsyms, self.zero.one_like())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let s = match terms.get(k) {
                Some(x) => x.add(v),
                None => v.clone(),
            };
            terms.insert(k.clone(), s);
        }
        SymPoly::new(self.nsyms, self.zero.clone(), terms)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn neg(&self) -> Self {
        self.map_coeffs(self.zero.clone(), |c| c.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                let p = va.mul(vb);
                let s = match terms.get(&k) {
                    Some(x) => x.add(&p),
                    None => p,
                };
                terms.insert(k, s);
            }
        }
        SymPoly::new(self.nsyms, self.zero.clone(), terms)
    }
    fn scale(&self, s: &Scalar) -> Self {
        self.map_coeffs(self.zero.clone(), |c| c.scale(s))
    }
    fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().expect("one term");
            if k.iter().all(|&e| e == 0) {
                return Some(SymPoly::constant(self.nsyms, v.unit_inverse()?));
            }
        }
        None
    }
    fn field(&self) -> FieldSpec {
        self.zero.field()
    }
}

/// Render a monomial such as `g0^2*g1`.
pub fn monomial_string(exps: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(names)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl SymPoly<Poly> {
    /// Parse a sum of terms `coef*mono`, e.g. `g1^3 - t` or `2*t*g0*g1 + 1`.
    /// Factors naming a symbol go to the monomial, every other factor is read
    /// as a polynomial in `t`. Parentheses are not supported.
    pub fn parse(text: &str, names: &[&str], field: FieldSpec) -> Result<Self> {
        let nsyms = names.len();
        let mut acc = SymPoly::new(nsyms, Poly::zero(field), BTreeMap::new());
        let spaced = text.replace('-', " + -");
        for term in spaced.split('+').map(str::trim).filter(|s| !s.is_empty()) {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b.trim()),
                None => (false, term),
            };
            let mut exps = vec![0u32; nsyms];
            let mut coef = Poly::constant(field.one());
            for f in body.split('*').map(str::trim) {
                let (base, pow) = match f.split_once('^') {
                    Some((b, e)) => (b.trim(), e.trim().parse::<u32>().ok()),
                    None => (f, Some(1)),
                };
                match names.iter().position(|n| *n == base) {
                    Some(i) => {
                        exps[i] += pow.ok_or_else(|| Error::Semantic(format!("bad exponent in `{f}`")))?;
                    }
                    None => coef = coef.mul(&Poly::parse(f, field)?),
                }
            }
            if neg {
                coef = coef.neg();
            }
            acc = acc.add(&SymPoly::monomial(exps, coef));
        }
        Ok(acc)
    }

    /// Human-readable form with the largest term first.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by_key(|k| std::cmp::Reverse(super::mining::grlex(k)));
        let mut out = String::new();
        for (idx, k) in keys.into_iter().enumerate() {
            let c = &self.terms[k];
            let mono = monomial_string(k, names);
            let nterms = c.coeffs().iter().filter(|x| !x.is_zero()).count();
            let mut body = if mono == "1" {
                c.to_string()
            } else if *c == c.one_like() {
                mono
            } else if *c == c.one_like().neg() {
                format!("-{mono}")
            } else if nterms == 1 {
                format!("{c}*{mono}")
            } else {
                format!("({c})*{mono}")
            };
            if idx > 0 {
                if let Some(rest) = body.strip_prefix('-') {
                    out.push_str(" - ");
                    body = rest.trim_start().to_string();
                } else {
                    out.push_str(" + ");
                }
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for SymPoly<Poly> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nsyms).map(|i| format!("g{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}
