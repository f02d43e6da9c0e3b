//! Operators on a shared cell basis: exterior derivative with product signs,
//! Dirac and Hodge operators, connection Laplacians of ring elements, the
//! interaction derivative on intersecting pairs and Koopman matrices.
//!
//! `d` uses the coboundary convention: it maps k-cells to (k+1)-cells, and
//! `d[y][x] = (-1)^i` when `x` is `y` with its i-th vertex removed.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::basis::CellBasis;
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{direct_sum, kronecker, write_matrix_market, IntMatrix};
use crate::ring::{ProductTerm, RingElement};

/// Which operator to build or export.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OperatorTag {
    /// Connection Laplacian.
    L,
    /// Hodge Laplacian.
    H,
    /// Dirac operator.
    D,
    /// Graph Laplacian of the vertex-edge skeleton, the block `H_0`.
    Kirchhoff,
}

impl FromStr for OperatorTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" => Ok(OperatorTag::L),
            "H" => Ok(OperatorTag::H),
            "D" => Ok(OperatorTag::D),
            "kirchhoff" | "K" => Ok(OperatorTag::Kirchhoff),
            _ => Err(Error::BadParameter(format!("unknown operator `{s}` (expected L, H, D or kirchhoff)"))),
        }
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorTag::L => "L",
            OperatorTag::H => "H",
            OperatorTag::D => "D",
            OperatorTag::Kirchhoff => "kirchhoff",
        })
    }
}

/// Coboundary of a single complex in its own cell order.
pub fn complex_coboundary(c: &SimplicialComplex) -> IntMatrix {
    let n = c.len();
    let entries = (0..n).flat_map(|y| c.boundary_of(y).into_iter().map(move |(x, s)| (y, x, s)));
    IntMatrix::from_triplets(n, n, entries)
}

fn omega_diagonal(c: &SimplicialComplex) -> IntMatrix {
    IntMatrix::from_triplets(c.len(), c.len(), c.cells().iter().enumerate().map(|(i, s)| (i, i, s.omega())))
}

/// Full exterior derivative of a term in [`CellBasis`] order.
///
/// Folded left to right with `d(x,y) = dx⊗y + (-1)^{dim x} x⊗dy`.
pub fn exterior_derivative(t: &ProductTerm) -> IntMatrix {
    let factors = t.factors();
    let mut d = complex_coboundary(&factors[0]);
    let mut omega = omega_diagonal(&factors[0]);
    for f in &factors[1..] {
        let db = complex_coboundary(f);
        let ib = IntMatrix::identity(f.len());
        d = kronecker(&d, &ib).add(&kronecker(&omega, &db)).expect("shapes agree");
        omega = kronecker(&omega, &omega_diagonal(f));
    }
    d.permuted(&t.basis().kron_to_basis())
}

/// Graded pieces `d_k`, mapping the k-block to the (k+1)-block.
pub fn boundary_operators(t: &ProductTerm) -> Vec<IntMatrix> {
    let basis = t.basis();
    let d = exterior_derivative(t);
    (0..basis.block_count().saturating_sub(1))
        .map(|k| d.submatrix(basis.block(k + 1), basis.block(k)))
        .collect()
}

/// `d`, `D = d + dᵀ` and `H = D²` of one product term, with `H` cut into its
/// dimension blocks.
#[derive(Clone, Debug)]
pub struct OperatorBundle {
    basis: Arc<CellBasis>,
    d: IntMatrix,
    dirac: IntMatrix,
    hodge: IntMatrix,
    blocks: Vec<IntMatrix>,
}

impl OperatorBundle {
    pub fn basis(&self) -> &CellBasis {
        &self.basis
    }
    pub fn d(&self) -> &IntMatrix {
        &self.d
    }
    pub fn dirac(&self) -> &IntMatrix {
        &self.dirac
    }
    pub fn hodge(&self) -> &IntMatrix {
        &self.hodge
    }
    /// `H_k` for `k = 0..=dim`.
    pub fn blocks(&self) -> &[IntMatrix] {
        &self.blocks
    }
}

/// Builds the bundle and checks `d² = 0`, symmetry of `D` and `H`, and that
/// `H` has no entries outside its diagonal blocks.
pub fn operator_bundle(t: &ProductTerm) -> OperatorBundle {
    let basis = t.basis();
    let d = exterior_derivative(t);
    assert!(d.mul(&d).unwrap().is_zero(), "d^2 != 0 for {t}");
    let dirac = d.add(&d.transpose()).unwrap();
    let hodge = dirac.mul(&dirac).unwrap();
    assert!(dirac.is_symmetric() && hodge.is_symmetric());
    let dims = basis.dims();
    assert!(hodge.triplets().all(|(i, j, _)| dims[i] == dims[j]), "H is not block diagonal");
    let blocks = (0..basis.block_count()).map(|k| hodge.submatrix(basis.block(k), basis.block(k))).collect();
    OperatorBundle { basis, d, dirac, hodge, blocks }
}

/// `1 + A` where `A` is the intersection adjacency of the cells of `c`.
pub fn complex_connection_laplacian(c: &SimplicialComplex) -> IntMatrix {
    let cells = c.cells();
    let mut entries = Vec::new();
    // group cells by vertex so only intersecting pairs are visited
    let mut by_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, s) in cells.iter().enumerate() {
        for &v in s.vertices() {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    for i in 0..cells.len() {
        let mut nb: Vec<usize> = cells[i].vertices().iter().flat_map(|v| by_vertex[v].iter().copied()).collect();
        nb.sort_unstable();
        nb.dedup();
        entries.extend(nb.into_iter().map(|j| (i, j, 1i64)));
    }
    IntMatrix::from_triplets(cells.len(), cells.len(), entries)
}

/// Connection Laplacian of a term: Kronecker product of the factors' operators
/// in basis order.
pub fn term_connection_laplacian(t: &ProductTerm) -> IntMatrix {
    let factors = t.factors();
    let mut l = complex_connection_laplacian(&factors[0]);
    for f in &factors[1..] {
        l = kronecker(&l, &complex_connection_laplacian(f));
    }
    l.permuted(&t.basis().kron_to_basis())
}

/// One direct summand of a connection operator.
#[derive(Clone, Debug)]
pub struct Summand {
    pub sign: i64,
    pub term: ProductTerm,
    /// First row of this summand in the full matrix.
    pub offset: usize,
}

impl Summand {
    pub fn len(&self) -> usize {
        self.term.cell_count()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.len()
    }
}

/// Direct sum of signed term operators, one summand per unit of coefficient.
#[derive(Clone, Debug)]
pub struct ConnectionOperator {
    summands: Vec<Summand>,
    l: IntMatrix,
}

impl ConnectionOperator {
    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }
    pub fn matrix(&self) -> &IntMatrix {
        &self.l
    }
    pub fn len(&self) -> usize {
        self.l.rows()
    }
    pub fn is_empty(&self) -> bool {
        self.l.rows() == 0
    }
    /// `ω` of every row's cell.
    pub fn omegas(&self) -> Vec<i64> {
        summand_omegas(&self.summands)
    }
    /// Row descriptors for export.
    pub fn descriptors(&self) -> Vec<CellDescriptor> {
        summand_descriptors(&self.summands)
    }
}

fn summand_omegas(summands: &[Summand]) -> Vec<i64> {
    summands
        .iter()
        .flat_map(|s| {
            let b = s.term.basis();
            (0..b.len()).map(move |i| b.omega(i)).collect::<Vec<_>>()
        })
        .collect()
}

fn summand_descriptors(summands: &[Summand]) -> Vec<CellDescriptor> {
    let mut out = Vec::new();
    for (k, s) in summands.iter().enumerate() {
        let b = s.term.basis();
        for (i, label) in b.labels(&s.term).into_iter().enumerate() {
            out.push(CellDescriptor {
                index: s.offset + i,
                summand: k,
                sign: s.sign,
                dim: b.dim_of(i),
                cell: label.into_iter().map(|x| x.vertices().to_vec()).collect(),
            });
        }
    }
    out
}

fn expand_summands(e: &RingElement) -> Vec<Summand> {
    let mut summands = Vec::new();
    let mut offset = 0;
    for (a, t) in e.terms() {
        for _ in 0..a.unsigned_abs() {
            summands.push(Summand { sign: a.signum(), term: t.clone(), offset });
            offset += t.cell_count();
        }
    }
    summands
}

/// Signed direct sum of a per-term operator over all summands of `e`.
pub fn element_operator(e: &RingElement, per_term: impl Fn(&ProductTerm) -> IntMatrix) -> (Vec<Summand>, IntMatrix) {
    let summands = expand_summands(e);
    let mut cache: std::collections::BTreeMap<&ProductTerm, IntMatrix> = Default::default();
    let mut m = IntMatrix::zeros(0, 0);
    for s in &summands {
        let block = cache.entry(&s.term).or_insert_with(|| per_term(&s.term));
        m = direct_sum(&m, &if s.sign < 0 { block.neg() } else { block.clone() });
    }
    (summands, m)
}

pub fn connection_operator(e: &RingElement) -> ConnectionOperator {
    let (summands, l) = element_operator(e, term_connection_laplacian);
    ConnectionOperator { summands, l }
}

/// Any tagged operator of an element, as a signed direct sum over summands.
pub fn tagged_operator(e: &RingElement, tag: OperatorTag) -> (IntMatrix, Vec<CellDescriptor>) {
    let (summands, m) = match tag {
        OperatorTag::L => element_operator(e, term_connection_laplacian),
        OperatorTag::D => element_operator(e, |t| operator_bundle(t).dirac().clone()),
        OperatorTag::H => element_operator(e, |t| operator_bundle(t).hodge().clone()),
        OperatorTag::Kirchhoff => {
            let (summands, m) = element_operator(e, |t| operator_bundle(t).blocks()[0].clone());
            let descriptors = summand_descriptors(&summands).into_iter().filter(|c| c.dim == 0).collect();
            let mut descriptors: Vec<CellDescriptor> = descriptors;
            for (i, c) in descriptors.iter_mut().enumerate() {
                c.index = i;
            }
            return (m, descriptors);
        }
    };
    (m, summand_descriptors(&summands))
}

/// Sidecar row description: which summand, its sign, the cell's dimension and
/// its vertex sets per factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellDescriptor {
    pub index: usize,
    pub summand: usize,
    pub sign: i64,
    pub dim: usize,
    pub cell: Vec<Vec<usize>>,
}

/// Writes the matrix as Matrix Market to `path` and the row descriptors to
/// `path` with `.cells.json` appended.
pub fn export_operator(e: &RingElement, tag: OperatorTag, path: &Path) -> Result<IntMatrix> {
    let (m, descriptors) = tagged_operator(e, tag);
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_matrix_market(&m, &mut w)?;
    w.flush()?;
    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".cells.json");
    std::fs::write(sidecar, serde_json::to_string_pretty(&descriptors)? + "\n")?;
    Ok(m)
}

/// The coboundary restricted to ordered pairs of intersecting cells of one
/// complex, graded by `dim x + dim y`.
#[derive(Clone, Debug)]
pub struct InteractionComplex {
    pairs: Vec<(usize, usize)>,
    degrees: Vec<usize>,
    offsets: Vec<usize>,
    d: IntMatrix,
}

impl InteractionComplex {
    /// Pairs of cell indices of the complex, in basis order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
    pub fn len(&self) -> usize {
        self.pairs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
    pub fn degree_of(&self, i: usize) -> usize {
        self.degrees[i]
    }
    pub fn d(&self) -> &IntMatrix {
        &self.d
    }
    pub fn block_count(&self) -> usize {
        self.offsets.len() - 1
    }
    pub fn block(&self, p: usize) -> std::ops::Range<usize> {
        self.offsets[p]..self.offsets[p + 1]
    }
    /// Graded pieces `d_p` from degree p to p+1.
    pub fn graded(&self) -> Vec<IntMatrix> {
        (0..self.block_count().saturating_sub(1))
            .map(|p| self.d.submatrix(self.block(p + 1), self.block(p)))
            .collect()
    }
}

pub fn interaction_derivative(g: &SimplicialComplex) -> InteractionComplex {
    let cells = g.cells();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (i, x) in cells.iter().enumerate() {
        for (j, y) in cells.iter().enumerate() {
            if x.intersects(y) {
                pairs.push((x.dim() + y.dim(), i, j));
            }
        }
    }
    pairs.sort();
    let top = pairs.last().map_or(0, |p| p.0 + 1);
    let mut offsets = vec![0usize; top + 1];
    for p in &pairs {
        offsets[p.0 + 1] += 1;
    }
    for k in 1..offsets.len() {
        offsets[k] += offsets[k - 1];
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, p)| ((p.1, p.2), k)).collect();
    let cofaces = g.coface_lists();
    let mut entries = Vec::new();
    for (col, &(_, x, y)) in pairs.iter().enumerate() {
        for &(x2, s) in &cofaces[x] {
            if let Some(&row) = index.get(&(x2, y)) {
                entries.push((row, col, s));
            }
        }
        let sign = cells[x].omega();
        for &(y2, s) in &cofaces[y] {
            if let Some(&row) = index.get(&(x, y2)) {
                entries.push((row, col, sign * s));
            }
        }
    }
    let n = pairs.len();
    let d = IntMatrix::from_triplets(n, n, entries);
    InteractionComplex {
        degrees: pairs.iter().map(|p| p.0).collect(),
        pairs: pairs.into_iter().map(|p| (p.1, p.2)).collect(),
        offsets,
        d,
    }
}

/// A simplicial automorphism of a product term: `T(x)_i = φ_i(x_{π(i)})`.
///
/// `factor_perm[i] = π(i)` and `vertex_maps[i]` sends vertices of factor `π(i)`
/// to vertices of factor `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    factor_perm: Vec<usize>,
    vertex_maps: Vec<HashMap<usize, usize>>,
}

impl Automorphism {
    pub fn new(t: &ProductTerm, factor_perm: Vec<usize>, vertex_maps: Vec<HashMap<usize, usize>>) -> Result<Self> {
        let n = t.factors().len();
        let bad = |m: String| Err(Error::NotAnAutomorphism(m));
        if factor_perm.len() != n || vertex_maps.len() != n {
            return bad(format!("term has {n} factors"));
        }
        let mut seen = vec![false; n];
        for &p in &factor_perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return bad(format!("{factor_perm:?} is not a permutation"));
            }
        }
        let a = Automorphism { factor_perm, vertex_maps };
        for (i, f) in t.factors().iter().enumerate() {
            let src = &t.factors()[a.factor_perm[i]];
            if src.len() != f.len() {
                return bad(format!("factor {i} and its source differ in size"));
            }
            for x in src.cells() {
                match a.map_simplex(i, x) {
                    Some((y, _)) if f.contains(&y) => {}
                    _ => return bad(format!("image of {x} is not a cell of factor {i}")),
                }
            }
            let mut images: Vec<usize> = src.vertices().iter().filter_map(|v| a.vertex_maps[i].get(v).copied()).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != src.vertex_count() {
                return bad(format!("vertex map {i} is not injective"));
            }
        }
        Ok(a)
    }

    pub fn identity(t: &ProductTerm) -> Self {
        let maps = t.factors().iter().map(|f| f.vertices().into_iter().map(|v| (v, v)).collect()).collect();
        Automorphism { factor_perm: (0..t.factors().len()).collect(), vertex_maps: maps }
    }

    /// Exchanges two identical factors.
    pub fn factor_swap(t: &ProductTerm, i: usize, j: usize) -> Result<Self> {
        let n = t.factors().len();
        if i >= n || j >= n || t.factors()[i] != t.factors()[j] {
            return Err(Error::NotAnAutomorphism(format!("factors {i} and {j} are not equal")));
        }
        let mut a = Automorphism::identity(t);
        a.factor_perm.swap(i, j);
        Ok(a)
    }

    /// Applies a vertex permutation to one factor, identity elsewhere.
    pub fn on_factor(t: &ProductTerm, factor: usize, map: HashMap<usize, usize>) -> Result<Self> {
        let mut a = Automorphism::identity(t);
        if factor >= a.vertex_maps.len() {
            return Err(Error::NotAnAutomorphism(format!("no factor {factor}")));
        }
        a.vertex_maps[factor] = map;
        Automorphism::new(t, a.factor_perm, a.vertex_maps)
    }

    /// Image of a simplex of factor `π(i)` in factor `i`, with the sign of the
    /// permutation that sorts the image vertex list.
    fn map_simplex(&self, i: usize, x: &Simplex) -> Option<(Simplex, i64)> {
        let image: Vec<usize> = x.vertices().iter().map(|v| self.vertex_maps[i].get(v).copied()).collect::<Option<_>>()?;
        let sign = permutation_sign(&image);
        Some((Simplex::new(image), sign))
    }

    /// Image cell index and orientation sign of basis cell `x`.
    pub fn apply(&self, t: &ProductTerm, x: usize) -> (usize, i64) {
        let basis = t.basis();
        let cell = &basis.cells()[x];
        let factors = t.factors();
        let mut image = Vec::with_capacity(cell.len());
        let mut sign = 1;
        for i in 0..cell.len() {
            let src = self.factor_perm[i];
            let s = &factors[src].cells()[cell[src]];
            let (y, si) = self.map_simplex(i, s).expect("validated automorphism");
            sign *= si;
            image.push(factors[i].index_of(&y).expect("validated automorphism"));
        }
        // Koszul sign of reordering the factor blocks
        let dims: Vec<usize> = (0..cell.len()).map(|i| factors[i].cells()[cell[i]].dim()).collect();
        for a in 0..cell.len() {
            for b in a + 1..cell.len() {
                let (pa, pb) = (self.factor_perm[a], self.factor_perm[b]);
                if pa > pb && dims[pa] % 2 == 1 && dims[pb] % 2 == 1 {
                    sign = -sign;
                }
            }
        }
        (basis.index_of(&image).expect("image is a cell"), sign)
    }
}

fn permutation_sign(v: &[usize]) -> i64 {
    let mut sign = 1;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            if v[a] > v[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `U[x][T(x)] = sign(T|x)`, so that `(U f)(x) = ±f(T x)`.
pub fn koopman_matrix(t: &ProductTerm, a: &Automorphism) -> IntMatrix {
    let n = t.cell_count();
    IntMatrix::from_triplets(n, n, (0..n).map(|x| {
        let (y, s) = a.apply(t, x);
        (x, y, s)
    }))
}

/// Rotation `v -> v + k mod n` of the cycle complex `C_n`.
pub fn cycle_rotation(n: usize, k: usize) -> HashMap<usize, usize> {
    (0..n).map(|v| (v, (v + k) % n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_ring_expression;
    use crate::linalg::det_exact;
    use num_bigint::BigInt;

    fn term(s: &str) -> ProductTerm {
        parse_ring_expression(s).unwrap().as_single_term().unwrap().clone()
    }

    #[test]
    fn edge_coboundary() {
        let d = boundary_operators(&term("K2"));
        assert_eq!(d.len(), 1);
        // edge {0,1}: d[e][{0}] = -1, d[e][{1}] = +1
        assert_eq!(d[0].to_dense_i64(), vec![vec![-1, 1]]);
    }

    #[test]
    fn square_of_paths_has_fifteen_cells() {
        let b = operator_bundle(&term("L2*L3"));
        assert_eq!(b.d().rows(), 15);
        assert_eq!(b.blocks().len(), 3);
    }

    #[test]
    fn cycle_hodge_zero_block_is_kirchhoff() {
        let b = operator_bundle(&term("C4"));
        assert_eq!(
            b.blocks()[0].to_dense_i64(),
            vec![vec![2, -1, 0, -1], vec![-1, 2, -1, 0], vec![0, -1, 2, -1], vec![-1, 0, -1, 2]]
        );
        let p = operator_bundle(&term("K1"));
        assert!(p.dirac().is_zero() && p.hodge().rows() == 1);
    }

    #[test]
    fn hodge_is_a_kronecker_sum() {
        // H(A×B) = H_A⊗I + I⊗H_B in row-major order
        let t = term("C4*K3");
        let (a, b) = (&t.factors()[0], &t.factors()[1]);
        let ha = operator_bundle(&ProductTerm::single(a.clone())).hodge().clone();
        let hb = operator_bundle(&ProductTerm::single(b.clone())).hodge().clone();
        let expected = kronecker(&ha, &IntMatrix::identity(b.len()))
            .add(&kronecker(&IntMatrix::identity(a.len()), &hb))
            .unwrap()
            .permuted(&t.basis().kron_to_basis());
        assert_eq!(operator_bundle(&t).hodge(), &expected);
    }

    #[test]
    fn triple_products_are_associative() {
        let a = operator_bundle(&term("K2*L3*K2"));
        assert_eq!(a.basis().len(), 3 * 5 * 3);
        assert!(a.d().mul(a.d()).unwrap().is_zero());
    }

    #[test]
    fn named_element_connection_operator() {
        let e = parse_ring_expression("C4 - 2*K3 + L2*L3").unwrap();
        let c = connection_operator(&e);
        assert_eq!(c.len(), 8 + 7 + 7 + 15);
        let signs: Vec<i64> = c.summands().iter().map(|s| s.sign).collect();
        assert_eq!(signs, vec![1, -1, -1, 1]);
        let m = c.matrix();
        assert!(m.is_symmetric());
        let diag = m.diagonal();
        assert!(diag[8..22].iter().all(|v| *v == BigInt::from(-1)));
        assert_eq!(m.submatrix(0..8, 0..8), complex_connection_laplacian(&e.terms()[0].1.factors()[0]));
    }

    #[test]
    fn connection_laplacian_of_triangle() {
        let l = complex_connection_laplacian(&parse_ring_expression("K3").unwrap().terms()[0].1.factors()[0]);
        assert_eq!(det_exact(&l).unwrap(), BigInt::from(-1));
        assert_eq!(l.trace(), BigInt::from(7));
    }

    #[test]
    fn interaction_pairs_of_an_edge() {
        let k2 = &term("K2").factors()[0].clone();
        let ic = interaction_derivative(k2);
        assert_eq!(ic.len(), 7);
        assert!(ic.d().mul(ic.d()).unwrap().is_zero());
    }

    #[test]
    fn factor_swap_on_square_of_edge() {
        let t = term("K2*K2");
        let swap = Automorphism::factor_swap(&t, 0, 1).unwrap();
        let u = koopman_matrix(&t, &swap);
        let fixed: Vec<(usize, i64)> =
            (0..t.cell_count()).filter(|&x| u.get(x, x) != BigInt::from(0)).map(|x| (t.basis().dim_of(x), i64::try_from(u.get(x, x)).unwrap())).collect();
        assert_eq!(fixed, vec![(0, 1), (0, 1), (2, -1)]);
        let d = exterior_derivative(&t);
        assert_eq!(u.mul(&d).unwrap(), d.mul(&u).unwrap());
    }

    #[test]
    fn rotation_commutes_with_d() {
        let t = term("C5");
        let r = Automorphism::on_factor(&t, 0, cycle_rotation(5, 1)).unwrap();
        let u = koopman_matrix(&t, &r);
        assert!(u.diagonal().iter().all(|v| *v == BigInt::from(0)));
        let d = exterior_derivative(&t);
        assert_eq!(u.mul(&d).unwrap(), d.mul(&u).unwrap());
        assert!(koopman_matrix(&t, &Automorphism::identity(&t)).is_identity());
        let bad: HashMap<usize, usize> = (0..5).map(|v| (v, (2 * v) % 5)).collect();
        assert!(matches!(Automorphism::on_factor(&t, 0, bad), Err(Error::NotAnAutomorphism(_))));
    }

    #[test]
    fn export_writes_sidecar() {
        let dir = std::env::temp_dir().join(format!("strongring-export-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("l.mtx");
        let m = export_operator(&parse_ring_expression("K2*K2").unwrap(), OperatorTag::L, &path).unwrap();
        assert_eq!(m.rows(), 9);
        let side = std::fs::read_to_string(dir.join("l.mtx.cells.json")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&side).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 9);
        std::fs::remove_dir_all(&dir).ok();
    }
}
