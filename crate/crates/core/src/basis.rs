//! Ordered cell bases of product terms.

use std::collections::HashMap;

use crate::complex::SimplicialComplex;
use crate::graph::CellLabel;
use crate::ring::ProductTerm;

/// A product cell: one cell index per factor (indices into the factor's canonical order).
pub type ProductCell = Vec<usize>;

/// Cells of a product term sorted by total dimension, then lexicographically by
/// their factor-cell indices. Every operator matrix of the term is indexed by it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellBasis {
    factor_sizes: Vec<usize>,
    cells: Vec<ProductCell>,
    dims: Vec<usize>,
    /// `offsets[k]..offsets[k+1]` is the block of k-dimensional cells.
    offsets: Vec<usize>,
    /// Position of each cell in row-major (Kronecker) order.
    kron: Vec<usize>,
    index: HashMap<ProductCell, usize>,
}

impl CellBasis {
    pub fn new(factors: &[SimplicialComplex]) -> Self {
        let factor_sizes: Vec<usize> = factors.iter().map(SimplicialComplex::len).collect();
        let total: usize = factor_sizes.iter().product();
        let factor_dims: Vec<Vec<usize>> =
            factors.iter().map(|f| f.cells().iter().map(|c| c.dim()).collect()).collect();
        let mut tagged: Vec<(usize, ProductCell, usize)> = Vec::with_capacity(total);
        if !factors.is_empty() && total > 0 {
            let mut tuple = vec![0usize; factors.len()];
            for k in 0..total {
                let dim = tuple.iter().zip(&factor_dims).map(|(&i, d)| d[i]).sum();
                tagged.push((dim, tuple.clone(), k));
                for pos in (0..tuple.len()).rev() {
                    tuple[pos] += 1;
                    if tuple[pos] < factor_sizes[pos] {
                        break;
                    }
                    tuple[pos] = 0;
                }
            }
        }
        // row-major order is already lexicographic, so a stable sort on dimension suffices
        tagged.sort_by_key(|t| t.0);
        let top = tagged.last().map_or(0, |t| t.0 + 1);
        let mut offsets = vec![0usize; top + 1];
        for t in &tagged {
            offsets[t.0 + 1] += 1;
        }
        for k in 1..offsets.len() {
            offsets[k] += offsets[k - 1];
        }
        let dims = tagged.iter().map(|t| t.0).collect();
        let kron = tagged.iter().map(|t| t.2).collect();
        let cells: Vec<ProductCell> = tagged.into_iter().map(|t| t.1).collect();
        let index = cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        CellBasis { factor_sizes, cells, dims, offsets, kron, index }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[ProductCell] {
        &self.cells
    }

    pub fn dim_of(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `(-1)^dim` of cell `i`.
    pub fn omega(&self, i: usize) -> i64 {
        if self.dims[i] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn grading_offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Highest cell dimension plus one (number of grading blocks).
    pub fn block_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn block(&self, k: usize) -> std::ops::Range<usize> {
        if k + 1 >= self.offsets.len() {
            let end = self.len();
            return end..end;
        }
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn index_of(&self, cell: &[usize]) -> Option<usize> {
        self.index.get(cell).copied()
    }

    pub fn factor_sizes(&self) -> &[usize] {
        &self.factor_sizes
    }

    /// Row-major position of basis cell `i`; the index map between this basis and
    /// Kronecker products of factor matrices.
    pub fn kron_position(&self, i: usize) -> usize {
        self.kron[i]
    }

    /// `perm[kron] = basis index`.
    pub fn kron_to_basis(&self) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        for (i, &k) in self.kron.iter().enumerate() {
            out[k] = i;
        }
        out
    }

    pub fn labels(&self, term: &ProductTerm) -> Vec<CellLabel> {
        self.cells
            .iter()
            .map(|c| c.iter().zip(term.factors()).map(|(&i, f)| f.cells()[i].clone()).collect())
            .collect()
    }
}
