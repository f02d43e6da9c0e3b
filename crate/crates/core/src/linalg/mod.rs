//! Exact integer and rational matrices.
//!
//! [`IntMatrix`] stores arbitrary-precision integers in sorted sparse rows, which
//! suits the ±1 incidence structure of every operator in the crate. Elimination
//! routines densify internally where that is cheaper.

mod elimination;
mod mtx;
mod rational;

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use elimination::{det_exact, inverse_unimodular, kernel_basis, rank_rational};
pub use mtx::{read_matrix_market, write_matrix_market};
pub use rational::RatMatrix;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    /// Per row: `(column, value)` sorted by column, no zero values.
    data: Vec<Vec<(usize, BigInt)>>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        if self.rows <= 16 && self.cols <= 16 {
            for i in 0..self.rows {
                let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
                writeln!(f, "  {}", row.join(" "))?;
            }
        } else {
            writeln!(f, "  {} non-zeros", self.nnz())?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, BigInt::one())]).collect() }
    }

    /// Dense row-major input; panics on ragged rows.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i] = r
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.clone().into()))
                .filter(|(_, v)| !v.is_zero())
                .collect();
        }
        m
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<T: Into<BigInt>>(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Self {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); rows];
        for (i, j, v) in entries {
            assert!(i < rows && j < cols, "entry ({i},{j}) outside {rows}x{cols}");
            data[i].push((j, v.into()));
        }
        for row in &mut data {
            *row = merge_sorted(std::mem::take(row));
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, BigInt)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(p) => self.data[i][p].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.cols];
        for (i, j, v) in self.triplets() {
            data[j].push((i, v.clone()));
        }
        IntMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    if !mark[*j] {
                        mark[*j] = true;
                        touched.push(*j);
                    }
                    acc[*j] += a * b;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                mark[j] = false;
                let v = std::mem::take(&mut acc[j]);
                if !v.is_zero() {
                    out.push((j, v));
                }
            }
            touched.clear();
            data.push(out);
        }
        Ok(IntMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.combine(other, -1)
    }

    fn combine(&self, other: &IntMatrix, sign: i64) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut row: Vec<(usize, BigInt)> = a.clone();
                row.extend(b.iter().map(|(j, v)| (*j, v * sign)));
                merge_sorted(row)
            })
            .collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: i64) -> IntMatrix {
        if k == 0 {
            return IntMatrix::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|r| r.iter().map(|(j, v)| (*j, v * k)).collect()).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale(-1)
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.triplets().all(|(i, j, v)| self.get(j, i) == *v)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1.is_one())
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        self.data.iter().map(|r| r.iter().map(|(_, v)| v).sum()).collect()
    }

    pub fn total_sum(&self) -> BigInt {
        self.row_sums().into_iter().sum()
    }

    pub fn max_abs(&self) -> BigInt {
        self.triplets().map(|(_, _, v)| v.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Symmetric relabeling: entry `(i, j)` moves to `(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> IntMatrix {
        assert!(self.is_square() && perm.len() == self.rows);
        IntMatrix::from_triplets(
            self.rows,
            self.cols,
            self.triplets().map(|(i, j, v)| (perm[i], perm[j], v.clone())),
        )
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMatrix {
        let data = self.data[rows.clone()]
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(j, _)| cols.contains(j))
                    .map(|(j, v)| (j - cols.start, v.clone()))
                    .collect()
            })
            .collect();
        IntMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Dense copy; entries must fit in `i64`.
    pub fn to_dense_i64(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v.to_i64().expect("entry does not fit in i64");
        }
        out
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v.to_f64().unwrap_or(f64::NAN);
        }
        m
    }

    pub fn mul_vec_f64(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .iter()
            .map(|r| r.iter().map(|(j, v)| v.to_f64().unwrap() * x[*j]).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> BigInt {
        self.data.iter().map(|r| r.iter().map(|(_, v)| v.abs()).sum()).max().unwrap_or_else(BigInt::zero)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> BigInt {
        self.transpose().norm_inf()
    }
}

fn merge_sorted(mut row: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    row.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(row.len());
    for (j, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Kronecker product; entry `(i*p + k, j*q + l)` is `a[i][j] * b[k][l]` for `b`
/// of shape `p x q`.
pub fn kronecker(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (p, q) = (b.rows, b.cols);
    let mut data = Vec::with_capacity(a.rows * p);
    for ra in &a.data {
        for rb in &b.data {
            let mut row = Vec::with_capacity(ra.len() * rb.len());
            for (j, x) in ra {
                for (l, y) in rb {
                    row.push((j * q + l, x * y));
                }
            }
            data.push(row);
        }
    }
    IntMatrix { rows: a.rows * p, cols: a.cols * q, data }
}

/// Block-diagonal sum; `b` occupies rows/columns starting at `a`'s shape.
pub fn direct_sum(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut data = a.data.clone();
    data.extend(b.data.iter().map(|r| r.iter().map(|(j, v)| (j + a.cols, v.clone())).collect()));
    IntMatrix { rows: a.rows + b.rows, cols: a.cols + b.cols, data }
}

/// Index of `(i, k)` in a Kronecker product whose right factor has `inner` rows.
pub fn kron_index(i: usize, k: usize, inner: usize) -> usize {
    i * inner + k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_with_identity_is_block_diagonal() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let k = kronecker(&IntMatrix::identity(2), &m);
        assert_eq!(k, direct_sum(&m, &m));
        let k2 = kronecker(&m, &IntMatrix::identity(2));
        // same matrix after the perfect shuffle
        let perm = [0, 2, 1, 3];
        assert_eq!(k2.permuted(&perm), k);
    }

    #[test]
    fn direct_sum_trace() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = IntMatrix::from_rows(&[vec![-7]]);
        assert_eq!(direct_sum(&a, &b).trace(), a.trace() + b.trace());
    }

    #[test]
    fn products_and_sums() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 0], vec![0, 1, -1]]);
        let b = a.transpose();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.to_dense_i64(), vec![vec![5, 2], vec![2, 2]]);
        assert!(ab.is_symmetric());
        assert!(a.sub(&a).unwrap().is_zero());
        assert!(a.mul(&a).is_err());
        assert_eq!(a.submatrix(0..2, 1..3).to_dense_i64(), vec![vec![2, 0], vec![1, -1]]);
    }
}
