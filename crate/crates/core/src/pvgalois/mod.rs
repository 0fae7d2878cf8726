//! Picard–Vessiot ring generators, bounded relation mining, stabilizer
//! equations of the Galois group, tensor constants and invariants.

pub mod galois;
pub mod mining;
mod sympoly;

pub use galois::{diagonal_invariants, stabilizer_equations, tensor_constants_check, GroupEquations, Invariants};
pub use mining::{check_id_stable_ideal, evaluate, mine_relations, required_order, MonoSpace, RelationSet};
pub use sympoly::{monomial_string, SymPoly};

use crate::error::{Error, Result};
use crate::idmodule::{IdModuleSpec, LocalCoverData};
use crate::ring::{adjugate, determinant, mat_mul, Matrix, RingElem};
use crate::scalars::{FieldSpec, Scalar};
use crate::series::{mat_inverse, TruncSeries};
use crate::solver::{fundamental_matrix, FundamentalMatrix};

/// How the generator symbols relate to the fundamental matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum Layout {
    /// `g_{i·r+j} = F_ij` and the last symbol is `det(F)^{-1}`.
    Free,
    /// Per cover piece `j`: the entries of `Y_j = F^{-1} B_j`, then
    /// `δ_j = x_j^{n_j r}·det F / det B_j`.
    Cover(LocalCoverData),
}

/// Generator symbols with their series images at the expansion point.
#[derive(Clone, Debug, PartialEq)]
pub struct PvPresentation {
    pub symbols: Vec<String>,
    pub images: Vec<TruncSeries<Scalar>>,
    pub point: Scalar,
    pub order: usize,
    pub rank: usize,
    pub layout: Layout,
    fundamental: FundamentalMatrix,
}

impl PvPresentation {
    pub fn field(&self) -> FieldSpec {
        self.point.field()
    }

    pub fn fundamental(&self) -> &FundamentalMatrix {
        &self.fundamental
    }

    pub fn is_free(&self) -> bool {
        matches!(self.layout, Layout::Free)
    }

    /// Rebuild the free presentation from the cover pieces:
    /// `F = Σ_j a_j B_j adj(Y_j) δ_j / x_j^{n_j (r-1)}`.
    pub fn glued_free(&self) -> Result<PvPresentation> {
        let c = match &self.layout {
            Layout::Free => return Ok(self.clone()),
            Layout::Cover(c) => c,
        };
        let r = self.rank;
        let field = self.field();
        let n = self.order;
        let zero = TruncSeries::constant(field.zero(), n);
        let mut f: Matrix<TruncSeries<Scalar>> = vec![vec![zero.clone(); r]; r];
        let per = r * r + 1;
        for j in 0..c.x.len() {
            let y: Matrix<TruncSeries<Scalar>> = (0..r)
                .map(|i| (0..r).map(|k| self.images[j * per + i * r + k].clone()).collect())
                .collect();
            let delta = &self.images[j * per + r * r];
            let bj = expand_matrix(&c.bases[j], &self.point, n)?;
            let aj = c.a[j].expand_at(&self.point, n)?;
            let xpow = c.x[j].pow((c.n[j] as usize * (r - 1)) as u64).expand_at(&self.point, n);
            let piece = mat_mul(&bj, &adjugate(&y));
            for (frow, prow) in f.iter_mut().zip(&piece) {
                for (fe, pe) in frow.iter_mut().zip(prow) {
                    let term = pe.mul(delta).mul(&aj).div_exact(&xpow)?;
                    *fe = fe.truncate(term.order()).add(&term);
                }
            }
        }
        let fm = FundamentalMatrix {
            point: self.point.clone(),
            order: f.iter().flatten().map(|s| s.order()).min().unwrap_or(n),
            f,
        };
        free_presentation(fm)
    }
}

fn expand_matrix(
    m: &Matrix<crate::idring::BaseElem>,
    c: &Scalar,
    order: usize,
) -> Result<Matrix<TruncSeries<Scalar>>> {
    m.iter()
        .map(|row| row.iter().map(|x| x.expand_at(c, order)).collect())
        .collect()
}

fn common_order(images: &mut [TruncSeries<Scalar>]) -> usize {
    let n = images.iter().map(|s| s.order()).min().unwrap_or(0);
    for s in images.iter_mut() {
        *s = s.truncate(n);
    }
    n
}

fn free_presentation(fm: FundamentalMatrix) -> Result<PvPresentation> {
    let r = fm.rank();
    let mut images: Vec<TruncSeries<Scalar>> = fm.f.iter().flatten().cloned().collect();
    images.push(fm.det_inverse()?);
    let order = common_order(&mut images);
    let symbols: Vec<String> = (0..r * r + 1).map(|i| format!("g{i}")).collect();
    Ok(PvPresentation {
        symbols,
        images,
        point: fm.point.clone(),
        order,
        rank: r,
        layout: Layout::Free,
        fundamental: fm,
    })
}

/// Generators of the Picard–Vessiot ring expanded at `t = c` to order `order`.
/// With a nontrivial cover the generators are the local ones on each piece;
/// the trivial cover gives the free presentation symbol for symbol.
pub fn pv_generators(
    m: &IdModuleSpec,
    cover: Option<&LocalCoverData>,
    c: &Scalar,
    order: usize,
) -> Result<PvPresentation> {
    let fm = fundamental_matrix(m, c, order)?;
    let cover = match cover {
        Some(cv) if !cv.is_trivial() => cv,
        _ => return free_presentation(fm),
    };
    let r = m.rank();
    let finv = mat_inverse(&fm.f)?;
    let detf = fm.det();
    let mut images = Vec::new();
    let mut symbols = Vec::new();
    for j in 0..cover.x.len() {
        let bj = expand_matrix(&cover.bases[j], c, order)?;
        if determinant(&cover.bases[j]).is_zero() {
            return Err(Error::Semantic(format!("local basis {j} is singular")));
        }
        let y = mat_mul(&finv, &bj);
        for (i, row) in y.into_iter().enumerate() {
            for (k, e) in row.into_iter().enumerate() {
                symbols.push(format!("y{j}_{i}{k}"));
                images.push(e);
            }
        }
        let xpow = cover.x[j].pow((cover.n[j] as usize * r) as u64).expand_at(c, order);
        let delta = xpow.mul(&detf).div_exact(&determinant(&bj))?;
        symbols.push(format!("d{j}"));
        images.push(delta);
    }
    let n = common_order(&mut images);
    Ok(PvPresentation {
        symbols,
        images,
        point: c.clone(),
        order: n,
        rank: r,
        layout: Layout::Cover(cover.clone()),
        fundamental: fm,
    })
}


#[cfg(test)]
mod tests;
