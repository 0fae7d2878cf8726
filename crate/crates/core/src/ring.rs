use std::fmt::Debug;

use crate::scalars::{FieldSpec, Scalar};

/// Commutative ring element that knows its own zero and one.
///
/// Implemented by scalars, polynomials, truncated series and base-ring
/// elements so that series and matrix code can be written once.
pub trait RingElem: Clone + Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
    /// Multiplicative inverse when the element is a unit of its ring.
    fn unit_inverse(&self) -> Option<Self>;
    fn field(&self) -> FieldSpec;

    /// The first `len` coefficients of the product of two coefficient lists.
    /// Both lists must be nonempty.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let mut out = vec![a[0].zero_like(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        out
    }

    fn from_scalar_like(&self, s: &Scalar) -> Self {
        self.one_like().scale(s)
    }

    fn pow(&self, e: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

pub type Matrix<R> = Vec<Vec<R>>;

pub fn mat_mul<R: RingElem>(a: &Matrix<R>, b: &Matrix<R>) -> Matrix<R> {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = a[i][0].zero_like();
                    for k in 0..inner {
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_add<R: RingElem>(a: &Matrix<R>, b: &Matrix<R>) -> Matrix<R> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect())
        .collect()
}

pub fn identity_like<R: RingElem>(proto: &R, n: usize) -> Matrix<R> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { proto.one_like() } else { proto.zero_like() })
                .collect()
        })
        .collect()
}

/// Leibniz-free determinant by cofactor expansion; ranks here are tiny.
pub fn determinant<R: RingElem>(m: &Matrix<R>) -> R {
    let n = m.len();
    match n {
        0 => panic!("determinant of empty matrix"),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = m[0][0].zero_like();
            for j in 0..n {
                let minor: Matrix<R> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].mul(&determinant(&minor));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Adjugate matrix, so that `m * adj(m) = det(m) * 1`.
pub fn adjugate<R: RingElem>(m: &Matrix<R>) -> Matrix<R> {
    let n = m.len();
    if n == 1 {
        return vec![vec![m[0][0].one_like()]];
    }
    let mut adj = vec![vec![m[0][0].zero_like(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Matrix<R> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = determinant(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { d } else { d.neg() };
        }
    }
    adj
}

/// Inverse of a matrix over a ring, pivoting only on units.
pub fn mat_inverse_over_ring<R: RingElem>(m: &Matrix<R>) -> Option<Matrix<R>> {
    let n = m.len();
    let proto = m[0][0].clone();
    let mut a: Matrix<R> = m.clone();
    let mut inv = identity_like(&proto, n);
    for col in 0..n {
        let (piv, pinv) = (col..n).find_map(|r| a[r][col].unit_inverse().map(|u| (r, u)))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        for j in 0..n {
            a[col][j] = a[col][j].mul(&pinv);
            inv[col][j] = inv[col][j].mul(&pinv);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                    inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
                }
            }
        }
    }
    Some(inv)
}
