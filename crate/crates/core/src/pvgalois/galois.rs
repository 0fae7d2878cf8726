//! Stabilizer equations of the relation ideal, constants of the tensor
//! square, and invariants of diagonal groups.

use std::collections::BTreeMap;

use serde::Serialize;

use super::mining::{
    common_denominator, mine_series, monomial_images, numerator, required_order_for, t_powers, MonoSpace, RelationSet,
};
use super::sympoly::{monomial_string, SymPoly};
use super::PvPresentation;
use crate::error::{Error, Result};
use crate::idmodule::IdModuleSpec;
use crate::idring::BaseElem;
use crate::linalg::{normalize_vector, Echelon};
use crate::poly::Poly;
use crate::ring::{determinant, RingElem};
use crate::scalars::{binomial, FieldSpec, Scalar};
use crate::series::TruncSeries;

/// Equations cutting out `{Z : F ↦ F·Z preserves the relation ideal}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupEquations {
    pub rank: usize,
    /// `z_lk` entries of `Z`, then `w` standing for `det(Z)^{-1}`.
    pub variables: Vec<String>,
    pub equations: Vec<SymPoly<Scalar>>,
    /// Rank one only: the single polynomial in `z` generating all equations
    /// once `w = z^{-1}`; `None` when there is no constraint.
    pub diagonal: Option<Poly>,
}

impl GroupEquations {
    pub fn render(&self) -> Vec<String> {
        if self.rank == 1 {
            return self.diagonal.iter().map(|p| p.display_in("z")).collect();
        }
        self.equations.iter().map(|e| render_scalar_poly(e, &self.variables)).collect()
    }

    /// Order `m` when the group is `μ_m`, zero for the full torus.
    pub fn diagonal_order(&self) -> Result<u64> {
        if self.rank != 1 {
            return Err(Error::NotDiagonal(format!("rank {} group", self.rank)));
        }
        let p = match &self.diagonal {
            None => return Ok(0),
            Some(p) => p,
        };
        let deg = p.degree().unwrap_or(0);
        let one = p.field().one();
        let is_root_eq = deg > 0
            && p.coeffs()[deg] == one
            && p.coeffs()[0] == -one.clone()
            && p.coeffs()[1..deg].iter().all(|c| c.is_zero());
        if is_root_eq {
            Ok(deg as u64)
        } else {
            Err(Error::NotDiagonal(p.display_in("z")))
        }
    }
}

pub(crate) fn render_scalar_poly(p: &SymPoly<Scalar>, names: &[String]) -> String {
    let mut keys: Vec<&Vec<u32>> = p.terms().keys().collect();
    keys.sort_by_key(|k| std::cmp::Reverse(super::mining::grlex(k)));
    let mut out = String::new();
    for (i, k) in keys.into_iter().enumerate() {
        let c = p.terms()[k].to_string();
        let mono = monomial_string(k, names);
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, c),
        };
        let body = match (mono == "1", mag == "1") {
            (true, _) => mag,
            (false, true) => mono,
            (false, false) => format!("{mag}*{mono}"),
        };
        if i == 0 {
            out.push_str(if neg { "-" } else { "" });
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn require_free(p: &PvPresentation) -> Result<()> {
    if p.is_free() {
        Ok(())
    } else {
        Err(Error::Semantic("group computations need the free presentation; glue the cover first".into()))
    }
}

/// Substitute `F ↦ F·Z` in every relation and reduce the coefficient of each
/// `Z`-monomial modulo the bounded span of the relations.
pub fn stabilizer_equations(rs: &RelationSet, p: &PvPresentation, dz: u32) -> Result<GroupEquations> {
    require_free(p)?;
    let field = rs.field();
    let r = p.rank;
    let ng = r * r + 1;
    let nz = r * r + 1;
    let nv = ng + nz;
    if let Some(bad) = rs.relations.iter().find(|x| x.total_degree() > dz) {
        return Err(Error::ReductionOverflow(bad.total_degree() as usize));
    }
    let one = Poly::constant(field.one());
    let var = |i: usize| SymPoly::symbol(nv, i, one.clone());
    let mut subst = Vec::with_capacity(ng);
    for i in 0..r {
        for k in 0..r {
            let s = (0..r).fold(var(0).zero_like(), |acc, l| acc.add(&var(i * r + l).mul(&var(ng + l * r + k))));
            subst.push(s);
        }
    }
    subst.push(var(r * r).mul(&var(nv - 1)));

    let space = rs.space();
    let span = space.span(&rs.relations);
    // per relation and quotient coordinate, a polynomial in the z-variables
    let mut eqs: BTreeMap<(usize, usize), BTreeMap<Vec<u32>, Scalar>> = BTreeMap::new();
    for (ri, rel) in rs.relations.iter().enumerate() {
        let mut full = var(0).zero_like();
        for (exps, c) in rel.terms() {
            let mut term = SymPoly::constant(nv, c.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&subst[i].pow(e as u64));
                }
            }
            full = full.add(&term);
        }
        let mut by_z: BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, Poly>> = BTreeMap::new();
        for (exps, c) in full.terms() {
            by_z.entry(exps[ng..].to_vec())
                .or_default()
                .insert(exps[..ng].to_vec(), c.clone());
        }
        for (zm, gterms) in by_z {
            let gp = SymPoly::new(ng, Poly::zero(field), gterms);
            let v = space.vector(&gp).ok_or(Error::ReductionOverflow(dz as usize))?;
            for (col, x) in span.reduce(&v).into_iter().enumerate() {
                if !x.is_zero() {
                    let slot = eqs.entry((ri, col)).or_default();
                    let cur = slot.get(&zm).cloned().unwrap_or_else(|| field.zero());
                    slot.insert(zm.clone(), &cur + &x);
                }
            }
        }
    }
    let mut variables: Vec<String> = Vec::new();
    for l in 0..r {
        for k in 0..r {
            variables.push(if r == 1 { "z".into() } else { format!("z{l}{k}") });
        }
    }
    variables.push("w".into());

    let mut equations: Vec<SymPoly<Scalar>> = eqs
        .into_values()
        .map(|terms| SymPoly::new(nz, field.zero(), terms))
        .filter(|e| !e.is_zero())
        .collect();
    let diagonal = if r == 1 {
        let mut g: Option<Poly> = None;
        for e in &equations {
            let lp = laurent(e, field);
            if lp.is_zero() {
                continue;
            }
            g = Some(match g {
                None => lp,
                Some(h) => h.gcd(&lp),
            });
        }
        g.map(|p| p.monic())
    } else {
        None
    };
    // det(Z)·w = 1
    let zvar = |i: usize| SymPoly::symbol(nz, i, field.one());
    let zmat: Vec<Vec<SymPoly<Scalar>>> = (0..r).map(|l| (0..r).map(|k| zvar(l * r + k)).collect()).collect();
    equations.push(determinant(&zmat).mul(&zvar(nz - 1)).sub(&zmat[0][0].one_like()));
    Ok(GroupEquations {
        rank: r,
        variables,
        equations: reduce_equations(equations, field),
        diagonal,
    })
}

/// `w = z^{-1}`, then clear the negative powers.
fn laurent(e: &SymPoly<Scalar>, field: FieldSpec) -> Poly {
    let terms: Vec<(i64, Scalar)> = e
        .terms()
        .iter()
        .map(|(k, c)| (k[0] as i64 - k[1] as i64, c.clone()))
        .collect();
    let lo = terms.iter().map(|(a, _)| *a).min().unwrap_or(0);
    let hi = terms.iter().map(|(a, _)| *a).max().unwrap_or(0);
    let mut coeffs = vec![field.zero(); (hi - lo + 1) as usize];
    for (a, c) in terms {
        let i = (a - lo) as usize;
        coeffs[i] = &coeffs[i] + &c;
    }
    Poly::new(field, coeffs)
}

fn reduce_equations(eqs: Vec<SymPoly<Scalar>>, field: FieldSpec) -> Vec<SymPoly<Scalar>> {
    let nz = match eqs.first() {
        Some(e) => e.nsyms(),
        None => return eqs,
    };
    let mut monos: Vec<Vec<u32>> = eqs.iter().flat_map(|e| e.terms().keys().cloned()).collect();
    monos.sort_by_key(|m| std::cmp::Reverse(super::mining::grlex(m)));
    monos.dedup();
    let rows: Vec<Vec<Scalar>> = eqs
        .iter()
        .map(|e| monos.iter().map(|m| e.terms().get(m).cloned().unwrap_or_else(|| field.zero())).collect())
        .collect();
    Echelon::new(field, monos.len(), &rows)
        .rows()
        .iter()
        .map(|row| {
            SymPoly::new(
                nz,
                field.zero(),
                monos.iter().cloned().zip(normalize_vector(row)).collect(),
            )
        })
        .collect()
}

/// Outcome of the tensor-square constants computation in rank one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorConstants {
    pub degree: u32,
    /// Dimension of the constants of bidegree at most `(d, d)` modulo the ideal.
    pub dimension: usize,
    /// Dimension spanned by `Z^a`, `|a| ≤ d`, modulo the ideal.
    pub expected: usize,
    /// Every `Z^a` is a constant.
    pub powers_constant: bool,
}

impl TensorConstants {
    pub fn passed(&self) -> bool {
        self.powers_constant && self.dimension == self.expected
    }
}

/// Constants of `R ⊗ R` in bidegree `(d, d)` for a rank-one module, compared
/// with the span of the powers of `Z = g1 ⊗ g0`. Components `θ^{(n)}` are
/// checked for `n ≤ max(k, p)` in characteristic `p`.
pub fn tensor_constants_check(
    m: &IdModuleSpec,
    p: &PvPresentation,
    rs: &RelationSet,
    d: u32,
    k: usize,
) -> Result<TensorConstants> {
    require_free(p)?;
    if p.rank != 1 {
        return Err(Error::Semantic("tensor constants are computed for rank one".into()));
    }
    if d > rs.degree {
        return Err(Error::InsufficientOrder {
            needed: d as usize,
            have: rs.degree as usize,
        });
    }
    let field = rs.field();
    // in characteristic p the components below T^p only see first-order constants
    let k = k.max(field.characteristic() as usize);
    let base = m.base();
    let e = rs.coeff_degree;
    let side = super::mining::monomials_up_to(2, d);
    let mons: Vec<Vec<u32>> = side
        .iter()
        .flat_map(|a| side.iter().map(move |b| vec![a[0], a[1], b[0], b[1]]))
        .collect();
    let u = MonoSpace::new(field, 4, mons.clone(), e);
    let embed = |rel: &SymPoly<Poly>, right: bool| {
        let terms = rel
            .terms()
            .iter()
            .map(|(x, c)| {
                let key = if right { vec![0, 0, x[0], x[1]] } else { vec![x[0], x[1], 0, 0] };
                (key, c.clone())
            })
            .collect();
        SymPoly::new(4, Poly::zero(field), terms)
    };
    let ideal: Vec<SymPoly<Poly>> = rs
        .relations
        .iter()
        .flat_map(|r| [embed(r, false), embed(r, true)])
        .collect();
    let wu = u.span(&ideal);

    // A^w for every weight that occurs
    let mk = m.with_order(k)?;
    let a = mk.matrix()[0][0].clone();
    let ainv = a.inverse()?;
    let dd = 2 * d as i64;
    let mut apow: BTreeMap<i64, TruncSeries<BaseElem>> = BTreeMap::new();
    apow.insert(0, TruncSeries::constant(base.one(), k));
    for w in 1..=dd {
        let up = apow[&(w - 1)].mul(&a);
        let down = apow[&(1 - w)].mul(&ainv);
        apow.insert(w, up);
        apow.insert(-w, down);
    }
    let t = base.from_poly(Poly::new(field, vec![field.zero(), field.one()]))?;
    let tpow: Vec<BaseElem> = (0..=e).scan(base.one(), |acc, _| {
        let cur = acc.clone();
        *acc = acc.mul(&t);
        Some(cur)
    }).collect();

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for n in 1..=k {
        // θ_n(mono·t^kk) = Σ_j A^w_{n-j} C(kk, j) t^{kk-j} · mono
        let vals: Vec<BaseElem> = u
            .cols()
            .iter()
            .map(|(mono, kk)| {
                let w = (mono[1] + mono[3]) as i64 - (mono[0] + mono[2]) as i64;
                let aw = &apow[&w];
                (0..=n.min(*kk)).fold(base.zero(), |acc, j| {
                    let b = binomial(*kk as u64, j as u64, field);
                    acc.add(&aw.coeff(n - j).mul(&tpow[kk - j]).scale(&b))
                })
            })
            .collect();
        let target = common_denominator(vals.iter());
        let polys: Vec<Poly> = vals.iter().map(|v| numerator(v, &target)).collect();
        let en = polys.iter().filter_map(|q| q.degree()).max().unwrap_or(0).max(e);
        let big = MonoSpace::new(field, 4, mons.clone(), en);
        let wn = big.span(&ideal);
        let images: Vec<Vec<Scalar>> = u
            .cols()
            .iter()
            .zip(&polys)
            .map(|((mono, _), q)| {
                let sp = SymPoly::monomial(mono.clone(), q.clone());
                wn.reduce(&big.vector(&sp).expect("fits by construction"))
            })
            .collect();
        for row in 0..big.ncols() {
            let r: Vec<Scalar> = images.iter().map(|v| v[row].clone()).collect();
            if r.iter().any(|x| !x.is_zero()) {
                rows.push(r);
            }
        }
    }
    let kernel = Echelon::new(field, u.ncols(), &rows).kernel();
    let mut with_w: Vec<Vec<Scalar>> = wu.rows().to_vec();
    with_w.extend(kernel);
    let constants = Echelon::new(field, u.ncols(), &with_w);
    let dimension = constants.rank() - wu.rank();

    let mut zrows: Vec<Vec<Scalar>> = wu.rows().to_vec();
    let mut powers_constant = true;
    for a in -(d as i64)..=(d as i64) {
        let au = a.unsigned_abs() as u32;
        let key = if a >= 0 { vec![0, au, au, 0] } else { vec![au, 0, 0, au] };
        let v = u
            .vector(&SymPoly::monomial(key, Poly::constant(field.one())))
            .expect("Z^a lies in bidegree (d, d)");
        powers_constant &= constants.contains(&v);
        zrows.push(v);
    }
    let expected = Echelon::new(field, u.ncols(), &zrows).rank() - wu.rank();
    Ok(TensorConstants {
        degree: d,
        dimension,
        expected,
        powers_constant,
    })
}

/// Generators of the invariants of a diagonal subgroup acting on the
/// Picard–Vessiot ring of a rank-one module.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Invariants {
    /// `μ_k`, or zero for the full torus.
    pub subgroup: u64,
    pub generators: Vec<String>,
    /// Invariant monomials that already lie in the base, with their value.
    pub base_elements: Vec<(String, String)>,
    pub relations: Vec<String>,
    /// The mined relations among `h_i`, for membership queries.
    #[serde(skip)]
    pub relation_set: Option<RelationSet>,
}

/// Invariant monomials `g0^a g1^b` (`a ≡ b` modulo the subgroup order) in
/// increasing order; each is classified as a base element, generated by the
/// earlier generators, or a new generator.
pub fn diagonal_invariants(
    rs: &RelationSet,
    m: &IdModuleSpec,
    p: &PvPresentation,
    group: &GroupEquations,
    subgroup: Option<u64>,
) -> Result<Invariants> {
    require_free(p)?;
    let order = group.diagonal_order()?;
    let sub = subgroup.unwrap_or(order);
    if order == 0 && sub != 0 && subgroup.is_some() {
        // any μ_k sits inside the torus
    } else if order != 0 && (sub == 0 || order % sub != 0) {
        return Err(Error::Semantic(format!("μ_{sub} is not a subgroup of μ_{order}")));
    }
    let field = rs.field();
    let e = rs.coeff_degree;
    let n = p.order;
    let names = &rs.symbols;
    let base = m.base();
    let unit: Poly = match base.inverted() {
        Some(inv) => inv.iter().fold(Poly::constant(field.one()), |acc, q| acc.mul(q)),
        None => Poly::constant(field.one()),
    };
    let mut mons: Vec<Vec<u32>> = super::mining::monomials_up_to(2, rs.degree)
        .into_iter()
        .filter(|x| x.iter().sum::<u32>() > 0)
        .filter(|x| {
            let wgt = x[0] as i64 - x[1] as i64;
            if sub == 0 {
                wgt == 0
            } else {
                wgt.rem_euclid(sub as i64) == 0
            }
        })
        .collect();
    mons.sort_by_key(|x| super::mining::grlex(x));
    let imgs = monomial_images(&p.images, &mons, n);
    let tp = t_powers(&p.point, e + unit.degree().unwrap_or(0) * e, n);

    let mut generators: Vec<Vec<u32>> = Vec::new();
    let mut gen_images: Vec<TruncSeries<Scalar>> = Vec::new();
    let mut base_elements = Vec::new();
    for mono in mons {
        let img = &imgs[&mono];
        let label = monomial_string(&mono, names);
        if let Some(value) = base_value(img, &unit, &tp, e, &p.point, n) {
            base_elements.push((label, value));
            continue;
        }
        if generated(img, &gen_images, &tp[..=e], rs.degree, n) {
            continue;
        }
        generators.push(mono);
        gen_images.push(img.clone());
    }
    let hnames: Vec<String> = (0..generators.len()).map(|i| format!("h{i}")).collect();
    let eh = e.max(2);
    let relation_set = if generators.is_empty() {
        None
    } else {
        let need = required_order_for(&gen_images, 2, eh);
        if need > n {
            return Err(Error::InsufficientOrder { needed: need, have: n });
        }
        Some(mine_series(&hnames, &gen_images, &p.point, n, 2, eh)?)
    };
    Ok(Invariants {
        subgroup: sub,
        generators: generators.iter().map(|g| monomial_string(g, names)).collect(),
        base_elements,
        relations: relation_set.as_ref().map(|r| r.render()).unwrap_or_default(),
        relation_set,
    })
}

/// `img·u^j = q(t)` with `deg q ≤ e + j·deg u` for some `j ≤ e`.
fn base_value(
    img: &TruncSeries<Scalar>,
    unit: &Poly,
    tp: &[TruncSeries<Scalar>],
    e: usize,
    c: &Scalar,
    n: usize,
) -> Option<String> {
    let field = c.field();
    let du = unit.degree().unwrap_or(0);
    let jmax = if du == 0 { 0 } else { e };
    for j in 0..=jmax {
        let u = unit.pow(j as u64);
        let lhs = img.mul(&u.expand_at(c, n));
        let top = e + j * du;
        let mut cols: Vec<&TruncSeries<Scalar>> = vec![&lhs];
        cols.extend(tp[..=top].iter());
        let rows: Vec<Vec<Scalar>> = (0..=n).map(|i| cols.iter().map(|s| s.coeff(i)).collect()).collect();
        let ker = Echelon::new(field, cols.len(), &rows).kernel();
        if let Some(v) = ker.iter().find(|v| !v[0].is_zero()) {
            let inv = v[0].inv().expect("nonzero");
            let q = Poly::new(field, v[1..].iter().map(|x| -(x * &inv)).collect());
            return Some(if j == 0 { q.to_string() } else { format!("({q})/({})", u) });
        }
    }
    None
}

/// `img` lies in the span of `t^k·(products of earlier generators)`.
fn generated(img: &TruncSeries<Scalar>, gens: &[TruncSeries<Scalar>], tp: &[TruncSeries<Scalar>], d: u32, n: usize) -> bool {
    if gens.is_empty() {
        return false;
    }
    let field = img.coeff(0).field();
    let prods = monomial_images(gens, &super::mining::monomials_up_to(gens.len(), d), n);
    let mut cols: Vec<TruncSeries<Scalar>> = Vec::new();
    for s in prods.values() {
        for t in tp {
            cols.push(s.mul(t));
        }
    }
    let rows: Vec<Vec<Scalar>> = (0..=n).map(|i| cols.iter().map(|s| s.coeff(i)).collect()).collect();
    let ech = Echelon::new(field, cols.len(), &rows);
    let mut with = rows.clone();
    for (row, i) in with.iter_mut().zip(0..) {
        row.push(img.coeff(i));
    }
    Echelon::new(field, cols.len() + 1, &with).rank() == ech.rank()
}
