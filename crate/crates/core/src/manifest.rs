//! JSON problem manifests: parsing with positional errors, validation,
//! canonical serialization, and construction of the library objects.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::idmodule::{from_derivation_matrix, radicand, IdModuleSpec, LocalCoverData};
use crate::idring::{BaseElem, IdRing, RingKind};
use crate::poly::Poly;
use crate::ring::{Matrix, RingElem};
use crate::scalars::{FieldSpec, Scalar};
use crate::series::TruncSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub char: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum BaseKindName {
    Poly,
    Localized,
    Series,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSection {
    pub kind: BaseKindName,
    #[serde(default)]
    pub inverted: Vec<String>,
    /// Truncation order of a series base.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

/// A base-ring element: a polynomial, or a fraction whose denominator is a
/// product of inverted polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemText {
    Poly(String),
    Fraction { num: String, den: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadicandSection {
    pub m: u64,
    pub numerator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// `A[i][j][n]`: the `T^n` coefficient of entry `(i, j)`; polynomial in `T`.
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<Vec<ElemText>>>>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Vec<ElemText>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radicand: Option<RadicandSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSection {
    pub x: Vec<String>,
    pub n: Vec<u32>,
    pub a: Vec<ElemText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<Vec<Vec<ElemText>>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    #[serde(rename = "N", default = "default_n")]
    pub n: usize,
    #[serde(rename = "K", default = "default_k")]
    pub k: usize,
    #[serde(default = "default_d")]
    pub d: u32,
    #[serde(default = "default_e")]
    pub e: usize,
    #[serde(default = "default_dz")]
    pub d_z: u32,
}

fn default_n() -> usize {
    16
}
fn default_k() -> usize {
    8
}
fn default_d() -> u32 {
    3
}
fn default_e() -> usize {
    2
}
fn default_dz() -> u32 {
    3
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            n: default_n(),
            k: default_k(),
            d: default_d(),
            e: default_e(),
            d_z: default_dz(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub field: FieldSection,
    pub base: BaseSection,
    pub module: ModuleSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverSection>,
    #[serde(default = "default_point")]
    pub point: String,
    #[serde(default)]
    pub bounds: Bounds,
    /// Order `k` of the subgroup `μ_k` for invariants; `0` means the full torus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<u64>,
}

fn default_point() -> String {
    "0".into()
}

/// Everything a command needs, built from a validated manifest.
#[derive(Clone, Debug)]
pub struct Problem {
    pub field: FieldSpec,
    pub base: IdRing,
    pub point: Scalar,
    pub bounds: Bounds,
    pub subgroup: Option<u64>,
    module: ModuleSection,
    cover: Option<CoverSection>,
}

/// Position of the first occurrence of `needle` as a JSON string literal.
fn locate(text: &str, needle: &str) -> (usize, usize) {
    let quoted = serde_json::to_string(needle).unwrap_or_default();
    match text.find(&quoted) {
        Some(off) => {
            let before = &text[..off];
            let line = before.matches('\n').count() + 1;
            let col = before.rsplit('\n').next().map(|s| s.chars().count()).unwrap_or(0) + 2;
            (line, col)
        }
        None => (0, 0),
    }
}

/// Parse, validate and canonicalize a manifest.
pub fn parse_manifest(text: &str) -> Result<Manifest> {
    let raw: Manifest = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let relocate = |err: Error, s: &str| match err {
        Error::Parse { column, message, .. } => {
            let (line, col) = locate(text, s);
            Error::Parse {
                line,
                column: col + column.saturating_sub(1),
                message: format!("in \"{s}\": {message}"),
            }
        }
        other => other,
    };
    let problem = raw.build_with(&relocate)?;
    Ok(problem.canonical_manifest(&raw))
}

impl Manifest {
    /// Sorted-key JSON with canonical polynomial and scalar strings.
    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("manifest serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn build(&self) -> Result<Problem> {
        self.build_with(&|e, _| e)
    }

    fn build_with(&self, relocate: &dyn Fn(Error, &str) -> Error) -> Result<Problem> {
        let field = FieldSpec::new(self.field.char)?;
        let poly = |s: &str| Poly::parse(s, field).map_err(|e| relocate(e, s));
        let base = match self.base.kind {
            BaseKindName::Poly => {
                if !self.base.inverted.is_empty() {
                    return Err(Error::Semantic("a polynomial base inverts nothing; use kind \"localized\"".into()));
                }
                IdRing::poly(field)
            }
            BaseKindName::Localized => {
                let inv = self.base.inverted.iter().map(|s| poly(s)).collect::<Result<Vec<_>>>()?;
                IdRing::localized(field, inv)?
            }
            BaseKindName::Series => IdRing::series(field, self.base.order.unwrap_or(self.bounds.n)),
        };
        let point = field.parse_scalar(&self.point).map_err(|e| relocate(e, &self.point))?;
        let b = &self.bounds;
        if b.n == 0 || b.k == 0 || b.d == 0 || b.d_z == 0 {
            return Err(Error::Semantic("bounds N, K, d and d_z must be positive".into()));
        }
        let builders = [self.module.a.is_some(), self.module.d.is_some(), self.module.radicand.is_some()];
        if builders.iter().filter(|&&x| x).count() != 1 {
            return Err(Error::Semantic("module needs exactly one of A, D, radicand".into()));
        }
        let problem = Problem {
            field,
            base,
            point,
            bounds: *b,
            subgroup: self.subgroup,
            module: self.module.clone(),
            cover: self.cover.clone(),
        };
        // surface module and cover errors at parse time
        let m = problem.module_with(relocate, 1)?;
        if let Some(r) = self.module.rank {
            if r != m.rank() {
                return Err(Error::Semantic(format!("declared rank {r}, matrix has rank {}", m.rank())));
            }
        }
        problem.cover_with(relocate, m.rank())?;
        Ok(problem)
    }
}

fn parse_elem(base: &IdRing, t: &ElemText, relocate: &dyn Fn(Error, &str) -> Error) -> Result<BaseElem> {
    let field = base.field();
    match t {
        ElemText::Poly(s) => base.from_poly(Poly::parse(s, field).map_err(|e| relocate(e, s))?),
        ElemText::Fraction { num, den } => {
            let n = base.from_poly(Poly::parse(num, field).map_err(|e| relocate(e, num))?)?;
            let d = base.from_poly(Poly::parse(den, field).map_err(|e| relocate(e, den))?)?;
            let inv = d
                .unit_inverse()
                .ok_or_else(|| Error::Semantic(format!("denominator {den} is not a unit of the base")))?;
            Ok(n.mul(&inv))
        }
    }
}

fn elem_text(base: &IdRing, x: &BaseElem) -> ElemText {
    match x {
        BaseElem::Local(l) => match l.as_poly() {
            Some(p) => ElemText::Poly(p.to_string()),
            None => {
                let mut d = Poly::constant(base.field().one());
                for (q, &e) in l.inverted().iter().zip(l.exponents()) {
                    d = d.mul(&q.pow(e as u64));
                }
                ElemText::Fraction {
                    num: l.numerator().to_string(),
                    den: d.to_string(),
                }
            }
        },
        other => ElemText::Poly(base.format(other)),
    }
}

impl Problem {
    /// The module with `A` available through `T^order`.
    pub fn module(&self, order: usize) -> Result<IdModuleSpec> {
        self.module_with(&|e, _| e, order)
    }

    fn module_with(&self, relocate: &dyn Fn(Error, &str) -> Error, order: usize) -> Result<IdModuleSpec> {
        let base = &self.base;
        if let Some(a) = &self.module.a {
            let r = a.len();
            let mut mat: Matrix<TruncSeries<BaseElem>> = Vec::with_capacity(r);
            let len = a.iter().flatten().map(|c| c.len()).max().unwrap_or(1).max(1);
            for row in a {
                let mut out = Vec::with_capacity(row.len());
                for entry in row {
                    let mut coeffs = entry
                        .iter()
                        .map(|c| parse_elem(base, c, relocate))
                        .collect::<Result<Vec<_>>>()?;
                    coeffs.resize(len, base.zero());
                    out.push(TruncSeries::new(coeffs));
                }
                mat.push(out);
            }
            let m = IdModuleSpec::new(base.clone(), mat, true)?;
            return m.with_order(order.max(len - 1));
        }
        if let Some(d) = &self.module.d {
            let dm = d
                .iter()
                .map(|row| row.iter().map(|c| parse_elem(base, c, relocate)).collect())
                .collect::<Result<Matrix<_>>>()?;
            return from_derivation_matrix(base, &dm, order);
        }
        let rad = self.module.radicand.as_ref().expect("validated");
        let f = Poly::parse(&rad.numerator, self.field).map_err(|e| relocate(e, &rad.numerator))?;
        radicand(base, rad.m, &f, order)
    }

    pub fn cover(&self, rank: usize) -> Result<Option<LocalCoverData>> {
        self.cover_with(&|e, _| e, rank)
    }

    fn cover_with(&self, relocate: &dyn Fn(Error, &str) -> Error, rank: usize) -> Result<Option<LocalCoverData>> {
        let c = match &self.cover {
            None => return Ok(None),
            Some(c) => c,
        };
        if matches!(self.base.kind(), RingKind::Series { .. }) {
            return Err(Error::Semantic("covers need a polynomial or localized base".into()));
        }
        let x = c
            .x
            .iter()
            .map(|s| Poly::parse(s, self.field).map_err(|e| relocate(e, s)))
            .collect::<Result<Vec<_>>>()?;
        let a = c.a.iter().map(|t| parse_elem(&self.base, t, relocate)).collect::<Result<Vec<_>>>()?;
        let bases = match &c.bases {
            None => None,
            Some(bs) => Some(
                bs.iter()
                    .map(|m| {
                        m.iter()
                            .map(|row| row.iter().map(|t| parse_elem(&self.base, t, relocate)).collect())
                            .collect::<Result<Matrix<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        LocalCoverData::new(&self.base, rank, x, c.n.clone(), a, bases, None).map(Some)
    }

    /// Apply command-line overrides.
    pub fn with_overrides(mut self, o: &Overrides) -> Result<Self> {
        if let Some(n) = o.order {
            self.bounds.n = n;
        }
        if let Some(k) = o.tdeg {
            self.bounds.k = k;
        }
        if let Some(d) = o.deg {
            self.bounds.d = d;
        }
        if let Some(e) = o.coeff_deg {
            self.bounds.e = e;
        }
        if let Some(z) = o.zdeg {
            self.bounds.d_z = z;
        }
        if let Some(c) = &o.point {
            self.point = self.field.parse_scalar(c)?;
        }
        Ok(self)
    }

    fn canonical_manifest(&self, raw: &Manifest) -> Manifest {
        let canon_poly = |s: &String| Poly::parse(s, self.field).map(|p| p.to_string()).unwrap_or_else(|_| s.clone());
        let canon_elem = |t: &ElemText| match parse_elem(&self.base, t, &|e, _| e) {
            Ok(x) => elem_text(&self.base, &x),
            Err(_) => t.clone(),
        };
        let module = ModuleSection {
            rank: raw.module.rank,
            a: raw
                .module
                .a
                .as_ref()
                .map(|a| a.iter().map(|r| r.iter().map(|e| e.iter().map(canon_elem).collect()).collect()).collect()),
            d: raw
                .module
                .d
                .as_ref()
                .map(|d| d.iter().map(|r| r.iter().map(canon_elem).collect()).collect()),
            radicand: raw.module.radicand.as_ref().map(|r| RadicandSection {
                m: r.m,
                numerator: canon_poly(&r.numerator),
            }),
        };
        let cover = raw.cover.as_ref().map(|c| CoverSection {
            x: c.x.iter().map(canon_poly).collect(),
            n: c.n.clone(),
            a: c.a.iter().map(canon_elem).collect(),
            bases: c
                .bases
                .as_ref()
                .map(|bs| bs.iter().map(|m| m.iter().map(|r| r.iter().map(canon_elem).collect()).collect()).collect()),
        });
        Manifest {
            field: raw.field.clone(),
            base: BaseSection {
                kind: raw.base.kind.clone(),
                inverted: raw.base.inverted.iter().map(canon_poly).collect(),
                order: raw.base.order,
            },
            module,
            cover,
            point: self.point.to_string(),
            bounds: raw.bounds,
            subgroup: raw.subgroup,
        }
    }
}

/// Bounds and point given on the command line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub order: Option<usize>,
    pub tdeg: Option<usize>,
    pub deg: Option<u32>,
    pub coeff_deg: Option<usize>,
    pub zdeg: Option<u32>,
    pub point: Option<String>,
}

/// Effective bounds as a sorted map, for echoing in reports.
pub fn bounds_map(b: &Bounds) -> BTreeMap<&'static str, usize> {
    BTreeMap::from([
        ("N", b.n),
        ("K", b.k),
        ("d", b.d as usize),
        ("e", b.e),
        ("d_z", b.d_z as usize),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXP: &str = r#"{"field": {"char": 0}, "base": {"kind": "poly"}, "module": {"D": [["1"]]}, "bounds": {"N": 8}}"#;

    #[test]
    fn minimal_exp_manifest() {
        let m = parse_manifest(EXP).unwrap();
        assert_eq!(m.bounds.n, 8);
        assert_eq!(m.bounds.k, 8);
        assert_eq!(m.bounds.e, 2);
        let p = m.build().unwrap();
        assert_eq!(p.module(4).unwrap().rank(), 1);
    }

    #[test]
    fn radicand_char5() {
        let text = r#"{"field": {"char": 5}, "base": {"kind": "localized", "inverted": ["t"]},
            "module": {"radicand": {"m": 3, "numerator": "t"}}, "point": "1"}"#;
        let m = parse_manifest(text).unwrap();
        assert_eq!(m.build().unwrap().field.characteristic(), 5);
    }

    #[test]
    fn derivation_builder_needs_char_zero() {
        let text = r#"{"field": {"char": 5}, "base": {"kind": "poly"}, "module": {"D": [["1"]]}}"#;
        assert_eq!(parse_manifest(text), Err(Error::CharNotZero(5)));
    }

    #[test]
    fn positional_errors() {
        let text = "{\"field\": {\"char\": 0},\n \"base\": {\"kind\": \"poly\"},\n \"module\": {\"D\": [[\"1 + * t\"]]}}";
        match parse_manifest(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_manifest("{\"field\": {\"char\": 0},\n  \"base\": 7}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_manifest(r#"{"field": {"char": 0}, "base": {"kind": "poly"}, "module": {}}"#),
            Err(Error::Semantic(_))
        ));
    }

    #[test]
    fn round_trip() {
        let text = r#"{"field": {"char": 0}, "base": {"kind": "localized", "inverted": ["t"]},
            "module": {"A": [[["1", {"num": "1", "den": "t"}]]]},
            "cover": {"x": ["1"], "n": [0], "a": ["1"]}, "point": "2/4"}"#;
        let m = parse_manifest(text).unwrap();
        assert_eq!(m.point, "1/2");
        let again = parse_manifest(&m.to_canonical_json()).unwrap();
        assert_eq!(again, m);
        assert_eq!(again.to_canonical_json(), m.to_canonical_json());
    }
}
