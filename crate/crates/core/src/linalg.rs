//! Exact dense linear algebra over ℚ and 𝔽_p.
//!
//! Over ℚ, larger systems are reduced modulo word-size primes and lifted
//! back, with an exact check of the lift; small systems, and any lift that
//! fails the check, use fraction-free (Bareiss) elimination on integer rows.
//! Over 𝔽_p it is ordinary elimination. Either way the result is the unique
//! reduced row echelon form, so it does not depend on the route taken.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalars::{FieldSpec, Scalar};

/// Reduced row echelon form: pivot entries are 1 and pivot columns are clear elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    field: FieldSpec,
    ncols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for s in row {
        let (_, d) = s.to_ratio();
        lcm = lcm.lcm(&d);
    }
    row.iter()
        .map(|s| {
            let (n, d) = s.to_ratio();
            n * (&lcm / d)
        })
        .collect()
}

fn bareiss_forward(mut a: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..ncols {
                let num = &piv * &row[j] - &f * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = piv;
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

fn fp_forward(mut a: Vec<Vec<Scalar>>, ncols: usize) -> Vec<Vec<Scalar>> {
    let m = a.len();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        let pivot_row: Vec<Scalar> = a[r].iter().map(|x| x * &inv).collect();
        for row in a.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..ncols {
                row[j] = &row[j] - &(&f * &pivot_row[j]);
            }
        }
        a[r] = pivot_row;
        r += 1;
    }
    a.truncate(r);
    a
}

impl Echelon {
    /// Row-reduce `rows` (each of length `ncols`).
    pub fn new(field: FieldSpec, ncols: usize, rows: &[Vec<Scalar>]) -> Self {
        if field.is_char_zero() && rows.len() * ncols >= MODULAR_THRESHOLD {
            let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
            if let Some((pivots, reduced)) = modular_rref(&ints, ncols) {
                let rows = reduced
                    .into_iter()
                    .map(|r| r.into_iter().map(Scalar::Rational).collect())
                    .collect();
                return Echelon {
                    field,
                    ncols,
                    rows,
                    pivots,
                };
            }
        }
        Echelon::fraction_free(field, ncols, rows)
    }

    fn fraction_free(field: FieldSpec, ncols: usize, rows: &[Vec<Scalar>]) -> Self {
        let forward: Vec<Vec<Scalar>> = if field.is_char_zero() {
            let ints = rows.iter().map(|r| integer_row(r)).collect();
            bareiss_forward(ints, ncols)
                .into_iter()
                .map(|r| r.iter().map(|x| field.from_bigint(x)).collect())
                .collect()
        } else {
            fp_forward(rows.to_vec(), ncols)
        };
        let mut rows_out: Vec<Vec<Scalar>> = Vec::new();
        let mut pivots = Vec::new();
        for row in forward {
            let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
                continue;
            };
            let inv = row[pc].inv().expect("nonzero");
            rows_out.push(row.iter().map(|x| x * &inv).collect());
            pivots.push(pc);
        }
        // back substitution
        for i in (0..rows_out.len()).rev() {
            let pc = pivots[i];
            let (upper, lower) = rows_out.split_at_mut(i);
            let prow = &lower[0];
            for row in upper.iter_mut() {
                if row[pc].is_zero() {
                    continue;
                }
                let f = row[pc].clone();
                for j in pc..ncols {
                    row[j] = &row[j] - &(&f * &prow[j]);
                }
            }
        }
        Echelon {
            field,
            ncols,
            rows: rows_out,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Basis of `{x : A x = 0}`, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.field.zero(); self.ncols];
                v[free] = self.field.one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -&row[free];
                }
                v
            })
            .collect()
    }

    /// Canonical remainder of `v` modulo the row space (zero in every pivot column).
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for j in p..self.ncols {
                out[j] = &out[j] - &(&f * &row[j]);
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}

pub fn kernel(field: FieldSpec, ncols: usize, rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    Echelon::new(field, ncols, rows).kernel()
}

const MAX_PRIMES: usize = 256;
/// Below this many entries the fraction-free route is cheaper.
const MODULAR_THRESHOLD: usize = 400;

fn primes_below_2_31() -> impl Iterator<Item = u64> {
    let is_prime = |n: u64| n % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0);
    (1u64 << 30..1u64 << 31).rev().filter(move |&n| is_prime(n))
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut b, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn residue(x: &BigInt, p: &BigInt) -> u64 {
    num_traits::ToPrimitive::to_u64(&x.mod_floor(p)).expect("residue fits")
}

/// Pivot columns and the reduced rows modulo `p`.
fn rref_mod_p(a: &[Vec<BigInt>], ncols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let bp = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = a.iter().map(|row| row.iter().map(|x| residue(x, &bp)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(i) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, i);
        let inv = inv_mod(m[r][c], p);
        for x in m[r][c..].iter_mut() {
            *x = *x * inv % p;
        }
        let prow = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row[c..].iter_mut().zip(&prow[c..]) {
                *x = (*x + p - f * y % p) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (pivots, m)
}

/// `n/d ≡ a (mod m)` with `|n|, d ≤ sqrt(m/2)`, if such a fraction exists.
fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Entries of the reduced form that are not fixed by the pivot structure:
/// row `i`, columns after `pivots[i]` that are not pivots.
fn free_positions(pivots: &[usize], ncols: usize) -> Vec<(usize, usize)> {
    let mut is_pivot = vec![false; ncols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    pivots
        .iter()
        .enumerate()
        .flat_map(|(i, &pc)| (pc + 1..ncols).filter(|&j| !is_pivot[j]).map(move |j| (i, j)))
        .collect()
}

/// Reduced row echelon form over ℚ by elimination modulo word-size primes,
/// Chinese remaindering and rational reconstruction. The lift is accepted
/// only if every input row lies in its row space: rank modulo a prime never
/// exceeds the rank over ℚ, so the two row spaces then coincide.
fn modular_rref(a: &[Vec<BigInt>], ncols: usize) -> Option<(Vec<usize>, Vec<Vec<BigRational>>)> {
    let mut best: Option<Vec<usize>> = None;
    let mut positions: Vec<(usize, usize)> = Vec::new();
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut probe_prev: Option<Vec<BigRational>> = None;
    for p in primes_below_2_31().take(MAX_PRIMES) {
        let (pivots, m) = rref_mod_p(a, ncols, p);
        let better = match &best {
            None => true,
            Some(b) => pivots.len() > b.len() || (pivots.len() == b.len() && pivots < *b),
        };
        if better {
            positions = free_positions(&pivots, ncols);
            acc = vec![BigInt::zero(); positions.len()];
            modulus = BigInt::one();
            probe_prev = None;
            best = Some(pivots);
        } else if best.as_ref() != Some(&pivots) {
            continue;
        }
        let bp = BigInt::from(p);
        let m_inv = inv_mod(residue(&modulus, &bp), p);
        for (x, &(i, j)) in acc.iter_mut().zip(&positions) {
            let t = (m[i][j] + p - residue(x, &bp)) % p * m_inv % p;
            if t != 0 {
                *x += &modulus * BigInt::from(t);
            }
        }
        modulus *= &bp;

        // a few spread-out entries decide when a full lift is worth trying
        let step = (acc.len() / 8).max(1);
        let probe: Option<Vec<BigRational>> =
            acc.iter().step_by(step).map(|x| rational_reconstruct(x, &modulus)).collect();
        let stable = probe.is_some() && probe == probe_prev;
        probe_prev = probe;
        if !stable {
            continue;
        }
        let Some(vals) = acc.iter().map(|x| rational_reconstruct(x, &modulus)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let pivots = best.clone().expect("set above");
        let mut rows = vec![vec![BigRational::zero(); ncols]; pivots.len()];
        for (i, &pc) in pivots.iter().enumerate() {
            rows[i][pc] = BigRational::one();
        }
        for (v, &(i, j)) in vals.into_iter().zip(&positions) {
            rows[i][j] = v;
        }
        if in_row_space(a, &pivots, &rows, ncols) {
            return Some((pivots, rows));
        }
        probe_prev = None;
    }
    None
}

/// Every row `a` satisfies `a[j] = Σ_i a[p_i] R_i[j]` in each non-pivot column `j`.
fn in_row_space(a: &[Vec<BigInt>], pivots: &[usize], r: &[Vec<BigRational>], ncols: usize) -> bool {
    let mut is_pivot = vec![false; ncols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let lead: Vec<Vec<(usize, &BigInt)>> = a
        .iter()
        .map(|row| {
            pivots
                .iter()
                .enumerate()
                .filter(|(_, &pc)| !row[pc].is_zero())
                .map(|(i, &pc)| (i, &row[pc]))
                .collect()
        })
        .collect();
    (0..ncols).filter(|&j| !is_pivot[j]).all(|j| {
        let mut lcm = BigInt::one();
        for row in r {
            if !row[j].denom().is_one() {
                lcm = lcm.lcm(row[j].denom());
            }
        }
        let scaled: Vec<BigInt> = r.iter().map(|row| row[j].numer() * (&lcm / row[j].denom())).collect();
        a.iter().zip(&lead).all(|(row, terms)| {
            let rhs = terms.iter().fold(BigInt::zero(), |s, (i, x)| s + *x * &scaled[*i]);
            rhs == &row[j] * &lcm
        })
    })
}

/// Scale a vector to a canonical representative: over ℚ a primitive integer
/// vector whose first nonzero entry is positive, over 𝔽_p first nonzero entry 1.
pub fn normalize_vector(v: &[Scalar]) -> Vec<Scalar> {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else {
        return v.to_vec();
    };
    let field = first.field();
    if !field.is_char_zero() {
        let inv = first.inv().expect("nonzero");
        return v.iter().map(|x| x * &inv).collect();
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(&x.to_ratio().1);
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| {
            let (n, d) = x.to_ratio();
            n * (&lcm / d)
        })
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    let sign = if first.to_ratio().0 < BigInt::zero() { -1 } else { 1 };
    ints.iter()
        .map(|x| Scalar::Rational(BigRational::from_integer(x / &g * BigInt::from(sign))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    /// Plain Gauss-Jordan over rationals, used as an independent route.
    fn rational_rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
        let mut a = rows.to_vec();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            let inv = a[r][c].inv().unwrap();
            let prow: Vec<Scalar> = a[r].iter().map(|x| x * &inv).collect();
            for (i, row) in a.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for j in 0..ncols {
                        row[j] = &row[j] - &(&f * &prow[j]);
                    }
                }
            }
            a[r] = prow;
            r += 1;
        }
        r
    }

    fn mat_vec(rows: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
        rows.iter()
            .map(|r| r.iter().zip(v).fold(q().zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    #[test]
    fn proportional_columns() {
        let rows = vec![
            vec![q().from_i64(1), q().from_i64(2)],
            vec![q().from_i64(1), q().from_i64(2)],
        ];
        let k = kernel(q(), 2, &rows);
        assert_eq!(k.len(), 1);
        assert_eq!(normalize_vector(&k[0]), vec![q().from_i64(2), q().from_i64(-1)]);
    }

    #[test]
    fn prime_field_kernel() {
        let f = FieldSpec::prime(5).unwrap();
        let rows = vec![vec![f.from_i64(1), f.from_i64(2), f.from_i64(3)]];
        let k = kernel(f, 3, &rows);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s = (0..3).fold(f.zero(), |acc, i| &acc + &(&rows[0][i] * &v[i]));
            assert!(s.is_zero());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bareiss_agrees_with_gauss_jordan(
            entries in proptest::collection::vec((-4i64..5, 1i64..4), 20),
            nrows in 1usize..5,
        ) {
            let ncols = 4;
            let rows: Vec<Vec<Scalar>> = (0..nrows)
                .map(|i| (0..ncols).map(|j| {
                    let (a, b) = entries[(i * ncols + j) % entries.len()];
                    // force some rank deficiency
                    if j == 3 { q().from_i64(a * 0) } else { q().ratio(a, b).unwrap() }
                }).collect())
                .collect();
            let e = Echelon::new(q(), ncols, &rows);
            prop_assert_eq!(e.rank(), rational_rank(&rows, ncols));
            let k = e.kernel();
            prop_assert_eq!(k.len() + e.rank(), ncols);
            for v in &k {
                prop_assert!(mat_vec(&rows, v).iter().all(|x| x.is_zero()));
            }
            for r in &rows {
                prop_assert!(e.contains(r));
            }
        }

        #[test]
        fn modular_rref_matches_fraction_free(
            entries in proptest::collection::vec((-30i64..31, 1i64..12), 30),
            nrows in 1usize..7,
            dup in 0usize..5,
        ) {
            let ncols = 5;
            let mut rows: Vec<Vec<Scalar>> = (0..nrows)
                .map(|i| (0..ncols).map(|j| {
                    let (a, b) = entries[(i * ncols + j) % entries.len()];
                    q().ratio(a, b).unwrap()
                }).collect())
                .collect();
            // make one column a combination of two others
            for row in rows.iter_mut() {
                row[dup] = &row[(dup + 1) % ncols] * &q().ratio(7, 3).unwrap() - row[(dup + 2) % ncols].clone();
            }
            let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
            let (pivots, reduced) = modular_rref(&ints, ncols).expect("small entries lift");
            let slow = Echelon::fraction_free(q(), ncols, &rows);
            prop_assert_eq!(pivots, slow.pivots.clone());
            let lifted: Vec<Vec<Scalar>> =
                reduced.into_iter().map(|r| r.into_iter().map(Scalar::Rational).collect()).collect();
            prop_assert_eq!(lifted, slow.rows.clone());
        }

        #[test]
        fn reconstruction_inverts_reduction(n in -10_000i64..10_000, d in 1i64..10_000) {
            let m = BigInt::from(2_147_483_647u64) * BigInt::from(2_147_483_629u64);
            let x = BigRational::new(BigInt::from(n), BigInt::from(d));
            let e = x.denom().extended_gcd(&m);
            prop_assert!(e.gcd.is_one());
            let a = (x.numer() * e.x).mod_floor(&m);
            prop_assert_eq!(rational_reconstruct(&a, &m), Some(x));
        }
    }
}
