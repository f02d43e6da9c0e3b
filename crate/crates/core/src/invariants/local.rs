//! Curvature, Poincaré–Hopf indices and their expectation over random orders.

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::complex::{whitney_complex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::{barycentric_refinement, sublevel_sphere};
use crate::ring::{ProductTerm, RingElement};

/// Exact index expectation enumerates all orders of at most this many zero-cells.
pub const EXACT_ZERO_CELL_CAP: usize = 8;

/// A zero-cell of an element: the term it belongs to and its vertex per factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexKey {
    pub term: usize,
    pub vertex: Vec<usize>,
}

/// Rational values on the zero-cells of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureMap {
    pub values: Vec<(VertexKey, Rational64)>,
    pub total: Rational64,
}

impl CurvatureMap {
    fn from_values(values: Vec<(VertexKey, Rational64)>) -> Self {
        let total = values.iter().map(|v| v.1).sum();
        CurvatureMap { values, total }
    }
}

impl Serialize for CurvatureMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            term: usize,
            vertex: &'a [usize],
            value: String,
        }
        let values: Vec<Entry> = self
            .values
            .iter()
            .map(|(k, v)| Entry { term: k.term, vertex: &k.vertex, value: v.to_string() })
            .collect();
        let mut st = s.serialize_struct("CurvatureMap", 2)?;
        st.serialize_field("values", &values)?;
        st.serialize_field("total", &self.total.to_string())?;
        st.end()
    }
}

/// Integer indices on the zero-cells of an element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexMap {
    pub indices: Vec<(VertexKey, i64)>,
    pub total: i64,
}

/// For every cell of a term: its ω and the basis indices of its zero-cells.
struct CellVertices {
    omega: Vec<i64>,
    vertices: Vec<Vec<usize>>,
    zero_cells: usize,
}

fn cell_vertices(t: &ProductTerm) -> CellVertices {
    let basis = t.basis();
    let factors = t.factors();
    // factor cell -> factor cell indices of its vertices
    let fv: Vec<Vec<Vec<usize>>> = factors
        .iter()
        .map(|f| {
            f.cells()
                .iter()
                .map(|x| x.vertices().iter().map(|&v| f.index_of(&Simplex::vertex(v)).unwrap()).collect())
                .collect()
        })
        .collect();
    let mut vertices = Vec::with_capacity(basis.len());
    for cell in basis.cells() {
        let lists: Vec<&Vec<usize>> = cell.iter().enumerate().map(|(i, &c)| &fv[i][c]).collect();
        let mut out = Vec::new();
        let mut pos = vec![0usize; lists.len()];
        'odometer: loop {
            let tuple: Vec<usize> = pos.iter().enumerate().map(|(i, &p)| lists[i][p]).collect();
            out.push(basis.index_of(&tuple).unwrap());
            for k in (0..lists.len()).rev() {
                pos[k] += 1;
                if pos[k] < lists[k].len() {
                    continue 'odometer;
                }
                pos[k] = 0;
            }
            break;
        }
        vertices.push(out);
    }
    CellVertices {
        omega: (0..basis.len()).map(|i| basis.omega(i)).collect(),
        vertices,
        zero_cells: basis.block(0).len(),
    }
}

fn vertex_keys(t: &ProductTerm, term: usize) -> Vec<VertexKey> {
    let basis = t.basis();
    basis
        .block(0)
        .map(|i| VertexKey {
            term,
            vertex: basis.cells()[i].iter().zip(t.factors()).map(|(&c, f)| f.cells()[c].vertices()[0]).collect(),
        })
        .collect()
}

/// `K(v) = Σ_{x ∋ v} ω(x) / |x_0|` over the product cells containing `v`,
/// indexed like the zero-cell block of the basis.
pub fn curvature_term(t: &ProductTerm) -> Vec<Rational64> {
    let cv = cell_vertices(t);
    let mut k = vec![Rational64::from_integer(0); cv.zero_cells];
    for (x, verts) in cv.vertices.iter().enumerate() {
        let share = Rational64::new(cv.omega[x], verts.len() as i64);
        for &v in verts {
            k[v] += share;
        }
    }
    k
}

/// Curvature of every term scaled by its coefficient. Gauss–Bonnet: the total is χ.
pub fn curvature(e: &RingElement) -> CurvatureMap {
    let mut values = Vec::new();
    for (ti, (a, t)) in e.terms().iter().enumerate() {
        let k = curvature_term(t);
        values.extend(vertex_keys(t, ti).into_iter().zip(k).map(|(key, v)| (key, v * *a)));
    }
    CurvatureMap::from_values(values)
}

/// Index of `f` (given on the zero-cells of the term, by basis index): every
/// cell adds its ω to the vertex where `f` is largest on it.
pub fn poincare_hopf_term(t: &ProductTerm, f: impl Fn(usize) -> Rational64) -> Result<Vec<i64>> {
    let cv = cell_vertices(t);
    let values: Vec<Rational64> = (0..cv.zero_cells).map(f).collect();
    let mut idx = vec![0i64; cv.zero_cells];
    for (x, verts) in cv.vertices.iter().enumerate() {
        let mut vals: Vec<Rational64> = verts.iter().map(|&v| values[v]).collect();
        let top = *verts.iter().max_by_key(|&&v| values[v]).unwrap();
        vals.sort();
        if vals.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotLocallyInjective(t.basis().cells()[x].clone()));
        }
        idx[top] += cv.omega[x];
    }
    Ok(idx)
}

/// Poincaré–Hopf indices of `f(term, zero-cell)` on every term, scaled by the
/// coefficients. The total is χ.
pub fn poincare_hopf(e: &RingElement, f: impl Fn(usize, usize) -> Rational64) -> Result<IndexMap> {
    let mut indices = Vec::new();
    for (ti, (a, t)) in e.terms().iter().enumerate() {
        let idx = poincare_hopf_term(t, |v| f(ti, v))?;
        indices.extend(vertex_keys(t, ti).into_iter().zip(idx).map(|(k, i)| (k, i * a)));
    }
    let total = indices.iter().map(|x| x.1).sum();
    Ok(IndexMap { indices, total })
}

/// `1 - χ(S⁻(v))` with `S⁻(v)` the part of the link of `v` where `f < f(v)`,
/// for a single complex with `f` on vertex labels.
pub fn poincare_hopf_sublevel(c: &SimplicialComplex, f: impl Fn(usize) -> Rational64) -> Vec<(usize, i64)> {
    c.vertices()
        .into_iter()
        .map(|v| {
            let fv = f(v);
            let chi: i64 = c
                .cells()
                .iter()
                .filter(|y| !y.contains_vertex(v) && y.vertices().iter().all(|&w| f(w) < fv))
                .filter(|y| {
                    let mut with_v = y.vertices().to_vec();
                    with_v.push(v);
                    c.contains(&Simplex::new(with_v))
                })
                .map(|y| y.omega())
                .sum();
            (v, 1 - chi)
        })
        .collect()
}

/// Indices of `f(x) = sign · dim(x)` on the Barycentric refinement of `c`,
/// computed from sublevel spheres of the refinement graph. Vertex `i` of the
/// refinement is cell `i` of `c`.
pub fn refined_dimension_indices(c: &SimplicialComplex, sign: i64) -> Result<Vec<i64>> {
    let (g, _) = barycentric_refinement(&ProductTerm::single(c.clone()))?;
    let f = |i: usize| Rational64::from_integer(sign * c.cells()[i].dim() as i64);
    (0..g.vertex_count())
        .map(|x| {
            let s = sublevel_sphere(&g, f, x)?;
            Ok(1 - whitney_complex(&s).euler_characteristic())
        })
        .collect()
}

/// Probability measure for [`index_expectation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampler {
    /// Every total order of the zero-cells, equally weighted.
    Exact,
    /// Uniform random orders drawn from a seeded generator.
    MonteCarlo { seed: u64, samples: usize },
}

fn heap_permutations(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn add_indices(cv: &CellVertices, rank: &[usize], acc: &mut [i64]) {
    for (x, verts) in cv.vertices.iter().enumerate() {
        let top = *verts.iter().max_by_key(|&&v| rank[v]).unwrap();
        acc[top] += cv.omega[x];
    }
}

/// Average index over all orders of the zero-cells of each term.
pub fn index_expectation_exact(e: &RingElement) -> Result<CurvatureMap> {
    let mut values = Vec::new();
    for (ti, (a, t)) in e.terms().iter().enumerate() {
        let cv = cell_vertices(t);
        let n = cv.zero_cells;
        if n > EXACT_ZERO_CELL_CAP {
            return Err(Error::TooLargeForExact { found: n, cap: EXACT_ZERO_CELL_CAP });
        }
        let mut acc = vec![0i64; n];
        let mut count = 0i64;
        heap_permutations(n, |rank| {
            add_indices(&cv, rank, &mut acc);
            count += 1;
        });
        values.extend(vertex_keys(t, ti).into_iter().zip(acc).map(|(k, s)| (k, Rational64::new(s * a, count))));
    }
    Ok(CurvatureMap::from_values(values))
}

const CHUNK: usize = 4096;

/// Mean index over `samples` uniform random orders. Chunk `c` draws from stream
/// `c` of a generator seeded with `seed`, so the result does not depend on the
/// number of threads.
pub fn index_expectation_monte_carlo(e: &RingElement, seed: u64, samples: usize) -> CurvatureMap {
    let mut values = Vec::new();
    for (ti, (a, t)) in e.terms().iter().enumerate() {
        let cv = cell_vertices(t);
        let n = cv.zero_cells;
        let chunks = samples.div_ceil(CHUNK);
        let partial: Vec<Vec<i64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(((ti as u64) << 32) | c as u64);
                let mut acc = vec![0i64; n];
                let mut rank: Vec<usize> = (0..n).collect();
                for _ in 0..CHUNK.min(samples - c * CHUNK) {
                    rank.shuffle(&mut rng);
                    add_indices(&cv, &rank, &mut acc);
                }
                acc
            })
            .collect();
        let mut acc = vec![0i64; n];
        for p in partial {
            for (x, y) in acc.iter_mut().zip(p) {
                *x += y;
            }
        }
        let denom = samples.max(1) as i64;
        values.extend(vertex_keys(t, ti).into_iter().zip(acc).map(|(k, s)| (k, Rational64::new(s * a, denom))));
    }
    CurvatureMap::from_values(values)
}

pub fn index_expectation(e: &RingElement, sampler: Sampler) -> Result<CurvatureMap> {
    match sampler {
        Sampler::Exact => index_expectation_exact(e),
        Sampler::MonteCarlo { seed, samples } => Ok(index_expectation_monte_carlo(e, seed, samples)),
    }
}
