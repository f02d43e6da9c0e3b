//! Exact elimination: Bareiss determinants, integer echelon rank, rational
//! kernels and unimodular inverses.
//!
//! Rank and inverse run first in `i128` with checked arithmetic and restart in
//! `BigInt` on overflow, so results never depend on the fast path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Integer arithmetic with overflow reporting.
trait ExactInt: Clone + PartialEq + std::fmt::Debug {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `a*x - b*y`
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl ExactInt for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn nil() -> Self {
        0
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl ExactInt for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for (i, j, v) in m.triplets() {
        a[i][j] = v.clone();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        // smallest non-zero pivot keeps intermediate numbers small
        let p = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by(|&x, &y| a[x][k].abs().cmp(&a[y][k].abs()));
        let Some(p) = p else { return Ok(BigInt::zero()) };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..n {
                let v = &row[j] * pivot - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot.clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Rank over the rationals.
pub fn rank_rational(m: &IntMatrix) -> usize {
    match echelon_rank::<i128>(m) {
        Some(r) => r,
        None => echelon_rank::<BigInt>(m).expect("bigint arithmetic cannot overflow"),
    }
}

type SparseRow<T> = Vec<(usize, T)>;

fn sparse_rows<T: ExactInt>(m: &IntMatrix) -> Option<Vec<SparseRow<T>>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|(j, v)| T::from_big(v).map(|x| (*j, x))).collect())
        .collect()
}

/// Integer row echelon form over sparse rows; each new row is reduced against
/// the stored pivots and kept primitive (content 1).
fn echelon_rank<T: ExactInt>(m: &IntMatrix) -> Option<usize> {
    let mut rows = sparse_rows::<T>(m)?;
    rows.sort_by_key(Vec::len);
    let mut pivots: std::collections::HashMap<usize, SparseRow<T>> = std::collections::HashMap::new();
    for mut r in rows {
        while let Some((lead, lv)) = r.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => {
                    let pv = &p[0].1;
                    let g = pv.gcd(&lv);
                    let (a, b) = (pv.div_exact(&g), lv.div_exact(&g));
                    r = sparse_combine(&a, &r, &b, p)?;
                }
                None => {
                    make_primitive(&mut r);
                    pivots.insert(lead, r);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// `a*x - b*y` on sparse rows.
fn sparse_combine<T: ExactInt>(a: &T, x: &SparseRow<T>, b: &T, y: &SparseRow<T>) -> Option<SparseRow<T>> {
    let zero = T::nil();
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (col, xv, yv) = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                i += 1;
                j += 1;
                (p.0, &p.1, &q.1)
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                i += 1;
                (p.0, &p.1, &zero)
            }
            (Some(_), Some(q)) => {
                j += 1;
                (q.0, &zero, &q.1)
            }
            (Some(p), None) => {
                i += 1;
                (p.0, &p.1, &zero)
            }
            (None, Some(q)) => {
                j += 1;
                (q.0, &zero, &q.1)
            }
            (None, None) => unreachable!(),
        };
        let v = T::mul_sub(a, xv, b, yv)?;
        if !v.is_nil() {
            out.push((col, v));
        }
    }
    Some(out)
}

fn make_primitive<T: ExactInt>(r: &mut SparseRow<T>) {
    let Some(first) = r.first() else { return };
    let mut g = first.1.clone();
    for (_, v) in r.iter() {
        g = g.gcd(v);
        if g.is_unit() {
            return;
        }
    }
    if !g.is_nil() {
        for (_, v) in r.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
}

/// Basis of the right null space over the rationals, one vector per free column.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    RatMatrix::from_int(m).kernel_basis()
}

/// Exact integer inverse of a matrix with determinant ±1. The product with the
/// input is checked to be the identity before returning.
pub fn inverse_unimodular(m: &IntMatrix) -> Result<IntMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let inv = match unit_pivot_inverse::<i128>(m) {
        Some(Some(inv)) => inv,
        Some(None) => rational_inverse(m)?,
        None => match unit_pivot_inverse::<BigInt>(m) {
            Some(Some(inv)) => inv,
            _ => rational_inverse(m)?,
        },
    };
    let check = m.mul(&inv)?;
    assert!(check.is_identity(), "unimodular inverse failed its exact check");
    Ok(inv)
}

/// Gauss–Jordan using only ±1 pivots, so every step stays integral and the
/// determinant is ±1 by construction. `Some(None)`: no unit pivot available;
/// `None`: overflow.
fn unit_pivot_inverse<T: ExactInt>(m: &IntMatrix) -> Option<Option<IntMatrix>> {
    let n = m.rows();
    let mut rows: Vec<SparseRow<T>> = sparse_rows::<T>(m)?;
    // augment with the identity in columns n..2n
    for (i, r) in rows.iter_mut().enumerate() {
        r.push((n + i, T::from_big(&BigInt::one())?));
    }
    let mut done = vec![false; n];
    let mut pivot_row_of_col = vec![usize::MAX; n];
    for col in 0..n {
        let p = (0..n)
            .filter(|&i| !done[i])
            .filter(|&i| matches!(lookup(&rows[i], col), Some(v) if v.is_unit()))
            .min_by_key(|&i| rows[i].len());
        let Some(p) = p else { return Some(None) };
        done[p] = true;
        pivot_row_of_col[col] = p;
        let pv = lookup(&rows[p], col).unwrap().clone();
        if pv != T::from_big(&BigInt::one())? {
            rows[p] = rows[p].iter().map(|(j, v)| (*j, v.neg())).collect();
        }
        let pivot = rows[p].clone();
        let one = T::from_big(&BigInt::one())?;
        for i in 0..n {
            if i == p {
                continue;
            }
            if let Some(f) = lookup(&rows[i], col).cloned() {
                rows[i] = sparse_combine(&one, &rows[i], &f, &pivot)?;
            }
        }
    }
    let entries = (0..n).flat_map(|col| {
        let r = &rows[pivot_row_of_col[col]];
        r.iter().filter(|(j, _)| *j >= n).map(move |(j, v)| (col, j - n, v.to_big())).collect::<Vec<_>>()
    });
    Some(Some(IntMatrix::from_triplets(n, n, entries)))
}

fn lookup<T>(row: &SparseRow<T>, col: usize) -> Option<&T> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|p| &row[p].1)
}

fn rational_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let det = det_exact(m)?;
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular { det });
    }
    let inv = RatMatrix::from_int(m).inverse()?;
    inv.to_int().ok_or(Error::NotUnimodular { det })
}
