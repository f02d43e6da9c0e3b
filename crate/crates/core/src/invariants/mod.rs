//! Scalar, vector and polynomial invariants of ring elements.
//!
//! Every invariant here is additive over `+` and multiplicative over `*`.
//! Functions named `*_direct` compute on product cells without using that
//! structure; they exist as independent cross-checks.

mod green;
mod local;
mod report;

use std::collections::HashMap;

use num_rational::Rational64;
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::graph::{barycentric_refinement, Graph};
use crate::linalg::{kernel_basis, rank_rational};
use crate::operators::{boundary_operators, interaction_derivative, operator_bundle};
use crate::poly::{BiPoly, IntPoly};
use crate::ring::{ProductTerm, RingElement};

pub use green::{
    green_diagonal_probe, green_functions, green_functions_capped, green_supertrace, lefschetz, mckean_singer,
    GreenFunctions, HEAT_TIMES,
    GreenProbe, Lefschetz, McKeanSinger,
};
pub use local::{
    curvature, curvature_term, index_expectation, index_expectation_exact, index_expectation_monte_carlo,
    poincare_hopf, poincare_hopf_sublevel, poincare_hopf_term, refined_dimension_indices, CurvatureMap, IndexMap, Sampler, VertexKey,
    EXACT_ZERO_CELL_CAP,
};
pub use report::{invariant_report, InvariantReport, ReportOptions};

pub fn euler_characteristic(e: &RingElement) -> i64 {
    e.terms()
        .iter()
        .map(|(a, t)| a * t.factors().iter().map(SimplicialComplex::euler_characteristic).product::<i64>())
        .sum()
}

/// `Π ω(x)` over the cells of a single term with coefficient 1.
pub fn fermi_characteristic(e: &RingElement) -> Result<i64> {
    match e.terms() {
        [(1, t)] => Ok(term_fermi(t)),
        _ => Err(Error::NotASingleTerm),
    }
}

pub fn term_fermi(t: &ProductTerm) -> i64 {
    let odd = term_f_vector(t).iter().skip(1).step_by(2).sum::<usize>();
    if odd % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Determinant of the connection operator of any element: a summand `-L_t`
/// contributes `(-1)^{n_t} φ(t)`.
pub fn element_fermi(e: &RingElement) -> i64 {
    e.terms()
        .iter()
        .map(|(a, t)| {
            let phi = if *a < 0 && t.cell_count() % 2 == 1 { -term_fermi(t) } else { term_fermi(t) };
            phi.pow(a.unsigned_abs() as u32)
        })
        .product()
}

/// How the cells of a k-tuple must meet for the higher Wu characteristics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Default)]
pub enum WuSemantics {
    /// Every two cells of the tuple intersect.
    #[default]
    Pairwise,
    /// All cells of the tuple share a vertex.
    Common,
}

/// `ω_k`: sum of `Π ω(x_i)` over ordered k-tuples of mutually meeting cells.
pub fn wu_characteristic(e: &RingElement, k: usize, semantics: WuSemantics) -> Result<i64> {
    if k < 2 {
        return Err(Error::BadOrder(k));
    }
    let mut cache: HashMap<&SimplicialComplex, i64> = HashMap::new();
    Ok(e.terms()
        .iter()
        .map(|(a, t)| {
            a * t
                .factors()
                .iter()
                .map(|f| *cache.entry(f).or_insert_with(|| wu_complex(f, k, semantics)))
                .product::<i64>()
        })
        .sum())
}

pub fn wu_complex(c: &SimplicialComplex, k: usize, semantics: WuSemantics) -> i64 {
    let cells = c.cells();
    let omega: Vec<i64> = cells.iter().map(|x| x.omega()).collect();
    let vertex_sets: Vec<Vec<usize>> = cells.iter().map(|x| x.vertices().to_vec()).collect();
    let meets = |i: usize, j: usize| cells[i].intersects(&cells[j]);
    let nbhd: Vec<Vec<usize>> = (0..cells.len()).map(|i| (0..cells.len()).filter(|&j| meets(i, j)).collect()).collect();
    match semantics {
        WuSemantics::Pairwise => tuples_pairwise(&nbhd, &omega, k),
        WuSemantics::Common => tuples_common(&vertex_sets, &nbhd, &omega, k),
    }
}

/// Wu characteristic of a term by enumerating tuples of product cells.
pub fn wu_term_direct(t: &ProductTerm, k: usize, semantics: WuSemantics) -> i64 {
    let basis = t.basis();
    let labels = basis.labels(t);
    let omega: Vec<i64> = (0..basis.len()).map(|i| basis.omega(i)).collect();
    let n = basis.len();
    let meets = |i: usize, j: usize| labels[i].iter().zip(&labels[j]).all(|(a, b)| a.intersects(b));
    let nbhd: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| meets(i, j)).collect()).collect();
    match semantics {
        WuSemantics::Pairwise => tuples_pairwise(&nbhd, &omega, k),
        WuSemantics::Common => {
            // common intersection must hold in every coordinate separately
            let mut total = 0;
            let mut stack: Vec<(Vec<usize>, i64, usize)> = Vec::new();
            for i in 0..n {
                stack.push((vec![i], omega[i], 1));
            }
            while let Some((tuple, w, len)) = stack.pop() {
                if len == k {
                    total += w;
                    continue;
                }
                for &j in &nbhd[tuple[0]] {
                    let ok = (0..labels[j].len()).all(|c| {
                        let mut common: Vec<usize> = labels[j][c].vertices().to_vec();
                        for &m in &tuple {
                            common.retain(|v| labels[m][c].contains_vertex(*v));
                        }
                        !common.is_empty()
                    });
                    if ok {
                        let mut next = tuple.clone();
                        next.push(j);
                        stack.push((next, w * omega[j], len + 1));
                    }
                }
            }
            total
        }
    }
}

fn tuples_pairwise(nbhd: &[Vec<usize>], omega: &[i64], k: usize) -> i64 {
    if k == 2 {
        return (0..omega.len()).map(|i| omega[i] * nbhd[i].iter().map(|&j| omega[j]).sum::<i64>()).sum();
    }
    // candidates shrink to the common neighbourhood of the tuple so far
    fn go(nbhd: &[Vec<usize>], omega: &[i64], cand: &[usize], w: i64, left: usize) -> i64 {
        if left == 0 {
            return w;
        }
        cand.iter()
            .map(|&j| {
                let next: Vec<usize> = cand.iter().copied().filter(|c| nbhd[j].binary_search(c).is_ok()).collect();
                go(nbhd, omega, &next, w * omega[j], left - 1)
            })
            .sum()
    }
    (0..omega.len()).map(|i| go(nbhd, omega, &nbhd[i], omega[i], k - 1)).sum()
}

fn tuples_common(sets: &[Vec<usize>], nbhd: &[Vec<usize>], omega: &[i64], k: usize) -> i64 {
    fn go(sets: &[Vec<usize>], nbhd: &[Vec<usize>], omega: &[i64], first: usize, common: &[usize], w: i64, left: usize) -> i64 {
        if left == 0 {
            return w;
        }
        nbhd[first]
            .iter()
            .filter_map(|&j| {
                let next: Vec<usize> = common.iter().copied().filter(|v| sets[j].binary_search(v).is_ok()).collect();
                (!next.is_empty()).then(|| go(sets, nbhd, omega, first, &next, w * omega[j], left - 1))
            })
            .sum()
    }
    (0..omega.len()).map(|i| go(sets, nbhd, omega, i, &sets[i], omega[i], k - 1)).sum()
}

/// Cell counts by dimension of one term, read off its basis.
pub fn term_f_vector(t: &ProductTerm) -> Vec<usize> {
    let b = t.basis();
    (0..b.block_count()).map(|k| b.block(k).len()).collect()
}

/// Signed f-vector: `Σ a · f(term)`.
pub fn f_vector(e: &RingElement) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    for (a, t) in e.terms() {
        let f = term_f_vector(t);
        if out.len() < f.len() {
            out.resize(f.len(), 0);
        }
        for (k, v) in f.into_iter().enumerate() {
            out[k] += a * v as i64;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// `e(t) = Σ v_k t^k`; `e(-1) = χ`.
pub fn euler_polynomial(e: &RingElement) -> IntPoly {
    IntPoly::new(f_vector(e))
}

/// `V_ij`: ordered pairs of intersecting cells of dimensions `i` and `j`.
pub fn f_matrix_complex(c: &SimplicialComplex) -> Vec<Vec<i64>> {
    let top = c.dim().max(0) as usize + 1;
    let mut m = vec![vec![0i64; top]; top];
    for x in c.cells() {
        for y in c.cells() {
            if x.intersects(y) {
                m[x.dim()][y.dim()] += 1;
            }
        }
    }
    m
}

/// f-matrix of a term by enumerating intersecting pairs of product cells.
pub fn f_matrix_term_direct(t: &ProductTerm) -> Vec<Vec<i64>> {
    let b = t.basis();
    let labels = b.labels(t);
    let top = b.block_count();
    let mut m = vec![vec![0i64; top]; top];
    for i in 0..b.len() {
        for j in 0..b.len() {
            if labels[i].iter().zip(&labels[j]).all(|(x, y)| x.intersects(y)) {
                m[b.dim_of(i)][b.dim_of(j)] += 1;
            }
        }
    }
    m
}

/// `V(t, s) = Σ V_ij t^i s^j`, assembled as a product over factors.
pub fn f_polynomial(e: &RingElement) -> BiPoly {
    let mut cache: HashMap<&SimplicialComplex, BiPoly> = HashMap::new();
    let mut total = BiPoly::default();
    for (a, t) in e.terms() {
        let mut p = BiPoly::from_matrix(&[vec![*a]]);
        for f in t.factors() {
            let q = cache.entry(f).or_insert_with(|| BiPoly::from_matrix(&f_matrix_complex(f)));
            p = &p * q;
        }
        total = &total + &p;
    }
    total
}

pub fn f_matrix(e: &RingElement) -> Vec<Vec<i64>> {
    let p = f_polynomial(e);
    let top = p.terms().keys().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0);
    (0..top).map(|i| (0..top).map(|j| p.coeff(i, j)).collect()).collect()
}

/// Betti numbers with their Poincaré polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Betti {
    pub betti: Vec<i64>,
    pub poincare: IntPoly,
}

impl Betti {
    fn from_poly(poincare: IntPoly) -> Self {
        Betti { betti: poincare.coeffs().to_vec(), poincare }
    }
}

/// `b_k = v_k - rank d_k - rank d_{k-1}` with exact ranks, per term.
pub fn term_betti(t: &ProductTerm) -> Vec<i64> {
    let f = term_f_vector(t);
    let ranks: Vec<usize> = boundary_operators(t).iter().map(rank_rational).collect();
    (0..f.len())
        .map(|k| {
            let up = ranks.get(k).copied().unwrap_or(0);
            let down = if k > 0 { ranks[k - 1] } else { 0 };
            (f[k] - up - down) as i64
        })
        .collect()
}

/// Betti numbers of an element from exact ranks on every term.
pub fn betti_numbers(e: &RingElement) -> Betti {
    let mut p = IntPoly::default();
    for (a, t) in e.terms() {
        p = &p + &IntPoly::new(term_betti(t)).scale(*a);
    }
    Betti::from_poly(p)
}

/// Betti numbers from factor ranks assembled by the Künneth product.
pub fn betti_kunneth(e: &RingElement) -> Betti {
    let mut cache: HashMap<&SimplicialComplex, IntPoly> = HashMap::new();
    let mut p = IntPoly::default();
    for (a, t) in e.terms() {
        let mut q = IntPoly::new(vec![*a]);
        for f in t.factors() {
            let pf = cache.entry(f).or_insert_with(|| IntPoly::new(term_betti(&ProductTerm::single(f.clone()))));
            q = &q * pf;
        }
        p = &p + &q;
    }
    Betti::from_poly(p)
}

/// Kernel dimensions of the Hodge blocks, by exact rational elimination.
pub fn hodge_kernel_betti(t: &ProductTerm) -> Vec<i64> {
    operator_bundle(t).blocks().iter().map(|h| kernel_basis(h).len() as i64).collect()
}

/// Betti numbers of the interaction cohomology of one complex; the pair basis
/// grows quadratically, so complexes above `cap` cells are refused.
pub fn interaction_betti(g: &SimplicialComplex, cap: usize) -> Result<Vec<i64>> {
    if g.len() > cap {
        return Err(Error::TooLarge { what: "interaction pair basis".into(), size: g.len(), cap });
    }
    let ic = interaction_derivative(g);
    let ranks: Vec<usize> = ic.graded().iter().map(rank_rational).collect();
    Ok((0..ic.block_count())
        .map(|p| {
            let n = ic.block(p).len();
            let up = ranks.get(p).copied().unwrap_or(0);
            let down = if p > 0 { ranks[p - 1] } else { 0 };
            (n - up - down) as i64
        })
        .collect())
}

/// Inductive dimension of a graph: `-1` for the empty graph, otherwise one plus
/// the mean dimension of the unit spheres.
pub fn inductive_dimension(g: &Graph) -> Rational64 {
    let n = g.vertex_count();
    let mut memo: HashMap<Vec<usize>, Rational64> = HashMap::new();
    let all: Vec<usize> = (0..n).collect();
    dim_rec(g, &all, &mut memo)
}

fn dim_rec(g: &Graph, verts: &[usize], memo: &mut HashMap<Vec<usize>, Rational64>) -> Rational64 {
    if verts.is_empty() {
        return Rational64::from_integer(-1);
    }
    if let Some(v) = memo.get(verts) {
        return *v;
    }
    let mut sum = Rational64::from_integer(0);
    for &v in verts {
        let sphere: Vec<usize> = verts.iter().copied().filter(|&w| g.has_edge(v, w)).collect();
        sum += dim_rec(g, &sphere, memo) + 1;
    }
    let d = sum / Rational64::from_integer(verts.len() as i64);
    memo.insert(verts.to_vec(), d);
    d
}

/// Inductive dimension of a term: the factors' refined dimensions, summed.
pub fn dimension(t: &ProductTerm) -> Result<Rational64> {
    if t.factors().is_empty() {
        return Err(Error::EmptyTerm);
    }
    let mut total = Rational64::from_integer(0);
    for f in t.factors() {
        let (g, _) = barycentric_refinement(&ProductTerm::single(f.clone()))?;
        total += inductive_dimension(&g);
    }
    Ok(total)
}

/// Clique number: product over factors for a term, `max` over summands with
/// `c(-G) = -c(G)`; 0 for the zero element.
pub fn clique_number(e: &RingElement) -> i64 {
    e.terms()
        .iter()
        .map(|(a, t)| a.signum() * t.factors().iter().map(|f| f.clique_number() as i64).product::<i64>())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests;
