//! Bounded-degree relation mining: exact kernels over monomials in the
//! generator symbols times powers of `t`, certified to a truncation order.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::sympoly::SymPoly;
use super::{Layout, PvPresentation};
use crate::error::{Error, Result};
use crate::idmodule::IdModuleSpec;
use crate::idring::{BaseElem, IterativeDerivation};
use crate::linalg::{normalize_vector, Echelon};
use crate::poly::Poly;
use crate::report::CheckReport;
use crate::ring::{determinant, Matrix, RingElem};
use crate::scalars::{FieldSpec, Scalar};
use crate::series::{mat_inverse, TruncSeries};

/// Graded-lex key: total degree first, then lexicographic with the first symbol largest.
pub(crate) fn grlex(exps: &[u32]) -> (u32, Vec<u32>) {
    (exps.iter().sum(), exps.to_vec())
}

fn term_key(exps: &[u32], k: usize) -> (u32, Vec<u32>, usize) {
    (exps.iter().sum(), exps.to_vec(), k)
}

/// All exponent vectors in `nsyms` symbols of total degree at most `d`.
pub(crate) fn monomials_up_to(nsyms: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nsyms], &mut out);
    out.sort_by_key(|m| grlex(m));
    out
}

/// Coordinates for `{ m·t^k : m in a down-closed monomial set, k ≤ e }`,
/// columns ordered from the largest term down so that echelon pivots are
/// leading terms.
#[derive(Clone, Debug)]
pub struct MonoSpace {
    field: FieldSpec,
    nsyms: usize,
    mons: Vec<Vec<u32>>,
    e: usize,
    cols: Vec<(Vec<u32>, usize)>,
    index: HashMap<(Vec<u32>, usize), usize>,
}

impl MonoSpace {
    pub fn new(field: FieldSpec, nsyms: usize, mut mons: Vec<Vec<u32>>, e: usize) -> Self {
        mons.sort_by_key(|m| grlex(m));
        let mut cols: Vec<(Vec<u32>, usize)> = mons
            .iter()
            .flat_map(|m| (0..=e).map(move |k| (m.clone(), k)))
            .collect();
        cols.sort_by_key(|(m, k)| std::cmp::Reverse(term_key(m, *k)));
        let index = cols.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        MonoSpace {
            field,
            nsyms,
            mons,
            e,
            cols,
            index,
        }
    }

    pub fn total_degree(field: FieldSpec, nsyms: usize, d: u32, e: usize) -> Self {
        MonoSpace::new(field, nsyms, monomials_up_to(nsyms, d), e)
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn cols(&self) -> &[(Vec<u32>, usize)] {
        &self.cols
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.mons
    }

    pub fn t_degree(&self) -> usize {
        self.e
    }

    pub fn vector(&self, p: &SymPoly<Poly>) -> Option<Vec<Scalar>> {
        let mut v = vec![self.field.zero(); self.cols.len()];
        for (m, c) in p.terms() {
            for (k, x) in c.coeffs().iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let i = *self.index.get(&(m.clone(), k))?;
                v[i] = x.clone();
            }
        }
        Some(v)
    }

    pub fn poly(&self, v: &[Scalar]) -> SymPoly<Poly> {
        let mut terms: BTreeMap<Vec<u32>, Vec<Scalar>> = BTreeMap::new();
        for ((m, k), x) in self.cols.iter().zip(v) {
            if x.is_zero() {
                continue;
            }
            let c = terms.entry(m.clone()).or_insert_with(|| vec![self.field.zero(); self.e + 1]);
            c[*k] = x.clone();
        }
        SymPoly::new(
            self.nsyms,
            Poly::zero(self.field),
            terms.into_iter().map(|(m, c)| (m, Poly::new(self.field, c))).collect(),
        )
    }

    /// Coordinates of every `m·t^j·r` that stays inside the space.
    pub fn multiples(&self, rels: &[SymPoly<Poly>]) -> Vec<Vec<Scalar>> {
        let mut out = Vec::new();
        for r in rels {
            let tdeg = r.terms().values().filter_map(|c| c.degree()).max().unwrap_or(0);
            for m in &self.mons {
                'shift: for j in 0..=self.e.saturating_sub(tdeg) {
                    let mut v = vec![self.field.zero(); self.cols.len()];
                    for (exps, c) in r.terms() {
                        let key: Vec<u32> = exps.iter().zip(m).map(|(a, b)| a + b).collect();
                        for (k, x) in c.coeffs().iter().enumerate() {
                            if x.is_zero() {
                                continue;
                            }
                            match self.index.get(&(key.clone(), k + j)) {
                                Some(&i) => v[i] = x.clone(),
                                None => continue 'shift,
                            }
                        }
                    }
                    out.push(v);
                }
            }
        }
        out
    }

    /// Echelon form of the bounded span of `rels`.
    pub fn span(&self, rels: &[SymPoly<Poly>]) -> Echelon {
        Echelon::new(self.field, self.ncols(), &self.multiples(rels))
    }
}

/// Relations among the generator symbols, certified to `certified_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationSet {
    pub symbols: Vec<String>,
    pub relations: Vec<SymPoly<Poly>>,
    pub degree: u32,
    pub coeff_degree: usize,
    pub certified_order: usize,
    pub point: Scalar,
    /// Dimension of the full bounded kernel the generators were drawn from.
    pub kernel_dim: usize,
}

impl RelationSet {
    pub fn field(&self) -> FieldSpec {
        self.point.field()
    }

    pub fn space(&self) -> MonoSpace {
        MonoSpace::total_degree(self.field(), self.symbols.len(), self.degree, self.coeff_degree)
    }

    /// Membership of `p` in the span of `m·t^j·r` inside a space large enough to hold `p`.
    pub fn contains(&self, p: &SymPoly<Poly>) -> bool {
        let d = self.degree.max(p.total_degree());
        let e = p
            .terms()
            .values()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0)
            .max(self.coeff_degree);
        let space = MonoSpace::total_degree(self.field(), self.symbols.len(), d, e);
        let v = space.vector(p).expect("space sized to fit");
        space.span(&self.relations).contains(&v)
    }

    pub fn render(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.render(&self.symbols)).collect()
    }
}

/// Image of every monomial of `mons`, built up one symbol at a time.
pub(crate) fn monomial_images(
    images: &[TruncSeries<Scalar>],
    mons: &[Vec<u32>],
    order: usize,
) -> HashMap<Vec<u32>, TruncSeries<Scalar>> {
    let field = images[0].coeffs()[0].field();
    let mut memo: HashMap<Vec<u32>, TruncSeries<Scalar>> = HashMap::new();
    memo.insert(vec![0; images.len()], TruncSeries::constant(field.one(), order));
    let mut sorted = mons.to_vec();
    sorted.sort_by_key(|m| grlex(m));
    for m in sorted {
        // walk down to a known monomial, then multiply back up
        let mut chain = Vec::new();
        let mut cur = m;
        while !memo.contains_key(&cur) {
            let i = cur.iter().position(|&e| e > 0).expect("nonconstant");
            let mut prev = cur.clone();
            prev[i] -= 1;
            chain.push((cur, i));
            cur = prev;
        }
        while let Some((next, i)) = chain.pop() {
            let img = memo[&cur].mul(&images[i].truncate(order));
            memo.insert(next.clone(), img);
            cur = next;
        }
    }
    memo
}

/// Series of `t = c + s` and its powers.
pub(crate) fn t_powers(c: &Scalar, e: usize, order: usize) -> Vec<TruncSeries<Scalar>> {
    let t = Poly::new(c.field(), vec![c.clone(), c.field().one()]).expand_at(&c.field().zero(), order);
    let mut out = vec![TruncSeries::constant(c.field().one(), order)];
    for k in 1..=e {
        out.push(out[k - 1].mul(&t));
    }
    out
}

/// Evaluate a relation on the presentation's series images.
pub fn evaluate(rel: &SymPoly<Poly>, p: &PvPresentation) -> TruncSeries<Scalar> {
    let mons: Vec<Vec<u32>> = rel.terms().keys().cloned().collect();
    let imgs = monomial_images(&p.images, &mons, p.order);
    let mut acc = TruncSeries::constant(p.field().zero(), p.order);
    for (m, c) in rel.terms() {
        acc = acc.add(&imgs[m].mul(&c.expand_at(&p.point, p.order)));
    }
    acc
}

/// Order needed to mine at `(d, e)`: the valuation margin, and enough rows
/// to overdetermine the column count.
pub fn required_order(p: &PvPresentation, d: u32, e: usize) -> usize {
    required_order_for(&p.images, d, e)
}

pub(crate) fn required_order_for(images: &[TruncSeries<Scalar>], d: u32, e: usize) -> usize {
    let maxval = images.iter().filter_map(|s| s.valuation()).max().unwrap_or(0);
    let ncols = monomials_up_to(images.len(), d).len() * (e + 1);
    (d as usize * maxval + e + 8).max(ncols + 3)
}

/// Exact kernel of `m·t^k ↦ image(m)·(c+s)^k` over the bounded monomials,
/// reduced to generators: candidates in increasing leading term, each kept
/// only if it is not already in the bounded span of the earlier ones.
pub fn mine_relations(p: &PvPresentation, d: u32, e: usize) -> Result<RelationSet> {
    mine_series(&p.symbols, &p.images, &p.point, p.order, d, e)
}

pub(crate) fn mine_series(
    symbols: &[String],
    images: &[TruncSeries<Scalar>],
    point: &Scalar,
    order: usize,
    d: u32,
    e: usize,
) -> Result<RelationSet> {
    let field = point.field();
    let needed = required_order_for(images, d, e);
    if order < needed {
        return Err(Error::InsufficientOrder { needed, have: order });
    }
    let n = order;
    let space = MonoSpace::total_degree(field, symbols.len(), d, e);
    let imgs = monomial_images(images, space.monomials(), n);
    let tp = t_powers(point, e, n);
    let columns: Vec<TruncSeries<Scalar>> = space
        .cols()
        .par_iter()
        .map(|(m, k)| imgs[m].mul(&tp[*k]))
        .collect();
    let rows: Vec<Vec<Scalar>> = (0..=n)
        .map(|i| columns.iter().map(|c| c.coeff(i)).collect())
        .collect();
    let kernel = Echelon::new(field, space.ncols(), &rows).kernel();
    let kernel_dim = kernel.len();
    let reduced = Echelon::new(field, space.ncols(), &kernel);
    let mut candidates: Vec<Vec<Scalar>> = reduced.rows().to_vec();
    // rows come with increasing pivot column, that is decreasing leading term
    candidates.reverse();
    let mut kept: Vec<SymPoly<Poly>> = Vec::new();
    let mut span = Echelon::new(field, space.ncols(), &[]);
    for cand in candidates {
        if span.contains(&cand) {
            continue;
        }
        let rel = space.poly(&normalize_vector(&cand));
        let mut rows = span.rows().to_vec();
        rows.extend(space.multiples(std::slice::from_ref(&rel)));
        span = Echelon::new(field, space.ncols(), &rows);
        kept.push(rel);
    }
    Ok(RelationSet {
        symbols: symbols.to_vec(),
        relations: kept,
        degree: d,
        coeff_degree: e,
        certified_order: n,
        point: point.clone(),
        kernel_dim,
    })
}

/// `θ` of each generator symbol as a `T`-series of linear forms: `θ(F) = A^{-1}F`
/// on the matrix entries and `θ(det F^{-1}) = det(A)·det F^{-1}`.
pub(crate) fn symbol_thetas(m: &IdModuleSpec, k: usize) -> Result<Vec<TruncSeries<SymPoly<BaseElem>>>> {
    let base = m.base();
    let r = m.rank();
    let nsyms = r * r + 1;
    let mk = m.with_order(k)?;
    let a: &Matrix<TruncSeries<BaseElem>> = mk.matrix();
    let ainv = mat_inverse(a)?;
    let det = determinant(a);
    let zero = SymPoly::new(nsyms, base.zero(), BTreeMap::new());
    let sym = |i: usize| SymPoly::symbol(nsyms, i, base.one());
    let lift = |x: &BaseElem| SymPoly::constant(nsyms, x.clone());
    let mut out = Vec::with_capacity(nsyms);
    for i in 0..r {
        for col in 0..r {
            let coeffs = (0..=k)
                .map(|n| {
                    (0..r).fold(zero.clone(), |acc, l| acc.add(&lift(&ainv[i][l].coeff(n)).mul(&sym(l * r + col))))
                })
                .collect();
            out.push(TruncSeries::new(coeffs));
        }
    }
    out.push(TruncSeries::new((0..=k).map(|n| lift(&det.coeff(n)).mul(&sym(r * r))).collect()));
    Ok(out)
}

/// `θ` of a polynomial in the symbols through `T^k`.
pub(crate) fn theta_sympoly(
    m: &IdModuleSpec,
    thetas: &[TruncSeries<SymPoly<BaseElem>>],
    p: &SymPoly<Poly>,
    k: usize,
) -> Result<TruncSeries<SymPoly<BaseElem>>> {
    let base = m.base();
    let nsyms = p.nsyms();
    let zero = SymPoly::new(nsyms, base.zero(), BTreeMap::new());
    let mut acc = TruncSeries::constant(zero.clone(), k);
    for (exps, c) in p.terms() {
        let tc = base.theta(&base.from_poly(c.clone())?, k);
        let mut term = tc.map(|x| SymPoly::constant(nsyms, x.clone()));
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                term = term.mul(&thetas[i].pow(e as u64));
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Multiply by a unit of the base so that every coefficient is a polynomial.
pub(crate) fn clear_denominators(p: &SymPoly<BaseElem>, field: FieldSpec) -> SymPoly<Poly> {
    let target = common_denominator(p.terms().values());
    p.map_coeffs(Poly::zero(field), |c| numerator(c, &target))
}

/// Exponents of the smallest product of inverted elements clearing every denominator.
pub(crate) fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a BaseElem>) -> Vec<u32> {
    let mut target: Vec<u32> = Vec::new();
    for c in xs {
        if let BaseElem::Local(l) = c {
            if target.is_empty() {
                target = vec![0; l.exponents().len()];
            }
            for (t, e) in target.iter_mut().zip(l.exponents()) {
                *t = (*t).max(*e);
            }
        }
    }
    target
}

pub(crate) fn numerator(c: &BaseElem, target: &[u32]) -> Poly {
    match c {
        BaseElem::Poly(q) => q.clone(),
        BaseElem::Local(l) => l.numerator_over(target),
        other => panic!("coefficient {other} is not a function of t"),
    }
}

/// Apply `θ` formally to each relation and check every `T`-coefficient lies
/// in the bounded span of the relation set.
pub fn check_id_stable_ideal(rs: &RelationSet, m: &IdModuleSpec, p: &PvPresentation, k: usize) -> Result<CheckReport> {
    if !matches!(p.layout, Layout::Free) {
        return Err(Error::Semantic(
            "θ-stability is checked on free presentations; glue the cover first".into(),
        ));
    }
    let thetas = symbol_thetas(m, k)?;
    let mut report = CheckReport::new();
    for (idx, rel) in rs.relations.iter().enumerate() {
        let th = theta_sympoly(m, &thetas, rel, k)?;
        let name = rel.render(&rs.symbols);
        for n in 1..=k {
            let h = clear_denominators(&th.coeff(n), rs.field());
            let inside = rs.contains(&h);
            report.compare("theta-stable ideal", &name, &[idx, n], inside, || h.render(&rs.symbols), || {
                "element of the relation span".into()
            });
        }
    }
    Ok(report)
}
