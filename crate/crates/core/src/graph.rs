//! Finite simple graphs and the graph-level constructions of the strong ring:
//! connection graphs, strong and Zykov products, Barycentric refinement, unit
//! spheres and discrete sphere recognition.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_rational::Rational64;

use crate::basis::CellBasis;
use crate::complex::{whitney_complex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::ring::ProductTerm;

/// A product cell written out as one simplex per factor.
pub type CellLabel = Vec<Simplex>;

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<CellLabel>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], labels: None }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, count: n });
                }
            }
            if u == v {
                return Err(Error::BadParameter(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    /// Adds the edge `u v`; loops and repeated edges are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        if let Err(p) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(p, v);
            let q = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(q, u);
        }
    }

    pub fn with_labels(mut self, labels: Vec<CellLabel>) -> Self {
        assert_eq!(labels.len(), self.adj.len());
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[CellLabel]> {
        self.labels.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    /// Induced subgraph; vertex `i` of the result is `vertices[i]`. Labels are kept.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for w in &self.adj[v] {
                if let Some(&j) = pos.get(w) {
                    if i < j {
                        g.add_edge(i, j);
                    }
                }
            }
        }
        if let Some(l) = &self.labels {
            g.labels = Some(vertices.iter().map(|&v| l[v].clone()).collect());
        }
        g
    }

    /// Edge set written through the labels; equal for two graphs iff they agree
    /// under the label bijection.
    pub fn labeled_edge_set(&self) -> Option<BTreeSet<(CellLabel, CellLabel)>> {
        let labels = self.labels.as_ref()?;
        Some(
            self.edges()
                .into_iter()
                .map(|(u, v)| {
                    let (a, b) = (labels[u].clone(), labels[v].clone());
                    if a <= b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect(),
        )
    }

    /// Size of the largest complete subgraph.
    pub fn clique_number(&self) -> usize {
        whitney_complex(self).clique_number()
    }

    /// `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (u, v) in self.edges() {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    /// Parses `u v` lines; the vertex count is one more than the largest label
    /// unless `n` is given.
    pub fn from_edge_list(text: &str, n: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::BadParameter(format!("line {}: `{line}`", lineno + 1)))?;
            if nums.len() != 2 {
                return Err(Error::BadParameter(format!("line {}: expected two vertices", lineno + 1)));
            }
            edges.push((nums[0], nums[1]));
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
        Graph::from_edges(n, &edges)
    }
}

/// Vertices are the cells of the term; distinct cells are adjacent iff they
/// intersect in every coordinate.
pub fn connection_graph(term: &ProductTerm) -> Result<Graph> {
    if term.factors().is_empty() {
        return Err(Error::EmptyTerm);
    }
    let basis = term.basis();
    // closed neighbourhoods in each factor
    let factor_nbhd: Vec<Vec<Vec<usize>>> = term
        .factors()
        .iter()
        .map(|c| {
            let cells = c.cells();
            (0..cells.len())
                .map(|i| (0..cells.len()).filter(|&j| cells[i].intersects(&cells[j])).collect())
                .collect()
        })
        .collect();
    let mut g = Graph::new(basis.len());
    for (i, cell) in basis.cells().iter().enumerate() {
        let mut tuple = vec![0usize; cell.len()];
        for_each_tuple(cell, &factor_nbhd, 0, &mut tuple, &mut |t| {
            let j = basis.index_of(t).expect("product of cells is a cell");
            if j > i {
                g.add_edge(i, j);
            }
        });
    }
    Ok(g.with_labels(basis.labels(term)))
}

fn for_each_tuple(
    cell: &[usize],
    nbhd: &[Vec<Vec<usize>>],
    k: usize,
    tuple: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if k == cell.len() {
        f(tuple);
        return;
    }
    for &j in &nbhd[k][cell[k]] {
        tuple[k] = j;
        for_each_tuple(cell, nbhd, k + 1, tuple, f);
    }
}

/// Vertex `(u, v)` is `u * |b| + v`; coordinates must be equal-or-adjacent.
/// Labels, when both graphs carry them, are concatenated.
pub fn strong_product(a: &Graph, b: &Graph) -> Graph {
    let nb = b.vertex_count();
    let mut g = Graph::new(a.vertex_count() * nb);
    for u in 0..a.vertex_count() {
        let cu: Vec<usize> = std::iter::once(u).chain(a.adj[u].iter().copied()).collect();
        for v in 0..nb {
            let cv: Vec<usize> = std::iter::once(v).chain(b.adj[v].iter().copied()).collect();
            for &x in &cu {
                for &y in &cv {
                    let (p, q) = (u * nb + v, x * nb + y);
                    if p < q {
                        g.add_edge(p, q);
                    }
                }
            }
        }
    }
    if let (Some(la), Some(lb)) = (&a.labels, &b.labels) {
        let labels = la
            .iter()
            .flat_map(|x| lb.iter().map(move |y| x.iter().chain(y).cloned().collect()))
            .collect();
        g.labels = Some(labels);
    }
    g
}

/// Vertices are the cells of the term; `c ~ d` iff one is contained in the other
/// coordinatewise. Returns the graph and its Whitney complex (labels are cell
/// indices of the term's basis).
pub fn barycentric_refinement(term: &ProductTerm) -> Result<(Graph, SimplicialComplex)> {
    if term.factors().is_empty() {
        return Err(Error::EmptyTerm);
    }
    let basis = term.basis();
    let graph = containment_graph(term, &basis).with_labels(basis.labels(term));
    let complex = whitney_complex(&graph);
    Ok((graph, complex))
}

fn containment_graph(term: &ProductTerm, basis: &CellBasis) -> Graph {
    // faces (all proper sub-cells) per factor cell
    let below: Vec<Vec<Vec<usize>>> = term
        .factors()
        .iter()
        .map(|c| {
            let cells = c.cells();
            (0..cells.len())
                .map(|i| (0..cells.len()).filter(|&j| cells[j].is_subset(&cells[i])).collect())
                .collect()
        })
        .collect();
    let mut g = Graph::new(basis.len());
    for (i, cell) in basis.cells().iter().enumerate() {
        let mut tuple = vec![0usize; cell.len()];
        for_each_tuple(cell, &below, 0, &mut tuple, &mut |t| {
            let j = basis.index_of(t).unwrap();
            if j != i {
                g.add_edge(i, j);
            }
        });
    }
    g
}

/// Barycentric refinement of a single complex as a complex on cell indices.
pub fn refine_complex(c: &SimplicialComplex) -> SimplicialComplex {
    if c.is_empty() {
        return SimplicialComplex::empty();
    }
    barycentric_refinement(&ProductTerm::single(c.clone())).expect("non-empty").1
}

pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let na = a.vertex_count();
    let mut g = Graph::new(na + b.vertex_count());
    for (u, v) in a.edges() {
        g.add_edge(u, v);
    }
    for (u, v) in b.edges() {
        g.add_edge(u + na, v + na);
    }
    g
}

/// Zykov sum: disjoint union plus every cross edge.
pub fn zykov_join(a: &Graph, b: &Graph) -> Graph {
    let na = a.vertex_count();
    let mut g = disjoint_union(a, b);
    for u in 0..na {
        for v in 0..b.vertex_count() {
            g.add_edge(u, na + v);
        }
    }
    g
}

pub fn complement(a: &Graph) -> Graph {
    let n = a.vertex_count();
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if !a.has_edge(u, v) {
                g.add_edge(u, v);
            }
        }
    }
    g.labels = a.labels.clone();
    g
}

/// Product dual to the strong product under complementation.
pub fn zykov_product(a: &Graph, b: &Graph) -> Graph {
    complement(&strong_product(&complement(a), &complement(b)))
}

pub fn unit_sphere(g: &Graph, v: usize) -> Result<Graph> {
    check_vertex(g, v)?;
    Ok(g.induced(g.neighbors(v)))
}

/// Neighbours of `v` with a strictly smaller function value.
pub fn sublevel_sphere(g: &Graph, f: impl Fn(usize) -> Rational64, v: usize) -> Result<Graph> {
    check_vertex(g, v)?;
    let fv = f(v);
    let below: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| f(w) < fv).collect();
    Ok(g.induced(&below))
}

fn check_vertex(g: &Graph, v: usize) -> Result<()> {
    if v >= g.vertex_count() {
        return Err(Error::VertexOutOfRange { vertex: v, count: g.vertex_count() });
    }
    Ok(())
}

/// Vertex subset of a fixed ambient graph, used as a memo key.
#[derive(Clone, PartialEq, Eq, Hash)]
struct VertexSet(Vec<u64>);

impl VertexSet {
    fn full(n: usize) -> Self {
        let mut bits = vec![0u64; n.div_ceil(64)];
        for v in 0..n {
            bits[v / 64] |= 1 << (v % 64);
        }
        VertexSet(bits)
    }

    fn contains(&self, v: usize) -> bool {
        self.0[v / 64] & (1 << (v % 64)) != 0
    }

    fn without(&self, v: usize) -> Self {
        let mut s = self.clone();
        s.0[v / 64] &= !(1 << (v % 64));
        s
    }

    fn members(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Recursive sphere/contractibility recogniser on induced subgraphs of one graph.
struct SphereOracle<'a> {
    g: &'a Graph,
    spheres: HashMap<(VertexSet, i64), bool>,
    contractible: HashMap<VertexSet, bool>,
}

impl<'a> SphereOracle<'a> {
    fn new(g: &'a Graph) -> Self {
        SphereOracle { g, spheres: HashMap::new(), contractible: HashMap::new() }
    }

    fn sphere_within(&self, s: &VertexSet, v: usize) -> VertexSet {
        let mut out = VertexSet(vec![0; s.0.len()]);
        for &w in self.g.neighbors(v) {
            if s.contains(w) {
                out.0[w / 64] |= 1 << (w % 64);
            }
        }
        out
    }

    fn is_sphere(&mut self, s: &VertexSet, d: i64) -> bool {
        let n = s.count();
        if d == -1 {
            return n == 0;
        }
        if n == 0 || d < -1 {
            return false;
        }
        let key = (s.clone(), d);
        if let Some(&r) = self.spheres.get(&key) {
            return r;
        }
        let members = s.members();
        let mut ok = true;
        for &v in &members {
            let sv = self.sphere_within(s, v);
            if !self.is_sphere(&sv, d - 1) {
                ok = false;
                break;
            }
        }
        if ok {
            for &v in &members {
                if !self.is_contractible(&s.without(v)) {
                    ok = false;
                    break;
                }
            }
        }
        self.spheres.insert(key, ok);
        ok
    }

    fn is_contractible(&mut self, s: &VertexSet) -> bool {
        let n = s.count();
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        if let Some(&r) = self.contractible.get(s) {
            return r;
        }
        let mut ok = false;
        for v in s.members() {
            let sv = self.sphere_within(s, v);
            if self.is_contractible(&sv) && self.is_contractible(&s.without(v)) {
                ok = true;
                break;
            }
        }
        self.contractible.insert(s.clone(), ok);
        ok
    }
}

/// Evako recursion: the empty graph is the (-1)-sphere; a d-sphere is non-empty,
/// has (d-1)-sphere unit spheres and becomes contractible when any vertex is removed.
pub fn is_evako_sphere(g: &Graph, d: i64) -> bool {
    let mut oracle = SphereOracle::new(g);
    oracle.is_sphere(&VertexSet::full(g.vertex_count()), d)
}

/// Inductive contractibility (K1 is contractible; a graph is if some vertex has a
/// contractible unit sphere and a contractible complement).
pub fn is_contractible(g: &Graph) -> bool {
    let mut oracle = SphereOracle::new(g);
    oracle.is_contractible(&VertexSet::full(g.vertex_count()))
}

/// Subcomplex of the Barycentric refinement generated by the cells on which `f`
/// changes sign across `c`. Vertex labels of the result are cell indices of `g`.
pub fn level_set(
    g: &SimplicialComplex,
    f: impl Fn(usize) -> Rational64,
    c: Rational64,
) -> Result<SimplicialComplex> {
    for v in g.vertices() {
        if f(v) == c {
            return Err(Error::ValueInRange(c.to_string()));
        }
    }
    if g.is_empty() {
        return Ok(SimplicialComplex::empty());
    }
    let (graph, _) = barycentric_refinement(&ProductTerm::single(g.clone()))?;
    let chosen: Vec<usize> = g
        .cells()
        .iter()
        .enumerate()
        .filter(|(_, x)| {
            let vals: Vec<Rational64> = x.vertices().iter().map(|&v| f(v)).collect();
            let lo = vals.iter().min().unwrap();
            let hi = vals.iter().max().unwrap();
            *lo < c && c < *hi
        })
        .map(|(i, _)| i)
        .collect();
    let sub = graph.induced(&chosen);
    Ok(whitney_complex(&sub).relabel(|v| chosen[v]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GeneratorSpec};

    fn octahedron_graph() -> Graph {
        generate(&GeneratorSpec::Octahedron).unwrap().skeleton_graph()
    }

    #[test]
    fn connection_graph_of_edge_is_a_path() {
        let k2 = ProductTerm::single(generate(&GeneratorSpec::Complete(2)).unwrap());
        let g = connection_graph(&k2).unwrap();
        assert_eq!(g.vertex_count(), 3);
        // cells {0},{1},{0,1}: only the vertices are non-adjacent
        assert_eq!(g.edges(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn octahedron_connection_graph_has_26_vertices() {
        let t = ProductTerm::single(generate(&GeneratorSpec::Octahedron).unwrap());
        assert_eq!(connection_graph(&t).unwrap().vertex_count(), 26);
    }

    #[test]
    fn strong_product_sizes_and_identity() {
        let c4 = Graph::cycle(4);
        let k1 = Graph::new(1);
        assert_eq!(strong_product(&k1, &c4).edges(), c4.edges());
        let p = strong_product(&c4, &Graph::complete(3));
        assert_eq!(p.vertex_count(), 12);
    }

    #[test]
    fn suspension_of_square_is_octahedron() {
        let j = zykov_join(&Graph::new(2), &Graph::cycle(4));
        assert_eq!(j.edge_count(), 12);
        assert_eq!(whitney_complex(&j).f_vector(), vec![6, 12, 8]);
    }

    #[test]
    fn complement_is_an_involution() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(complement(&complement(&g)), g);
    }

    #[test]
    fn unit_spheres() {
        let oct = octahedron_graph();
        for v in 0..6 {
            let s = unit_sphere(&oct, v).unwrap();
            assert_eq!((s.vertex_count(), s.edge_count()), (4, 4));
            assert!(is_evako_sphere(&s, 1));
        }
        let s = unit_sphere(&Graph::cycle(4), 0).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count()), (2, 0));
        assert!(matches!(unit_sphere(&oct, 6), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn sublevel_sphere_is_empty_at_the_minimum() {
        let oct = octahedron_graph();
        // distance from vertex 0 plus a tiebreak
        let dist = |w: usize| -> Rational64 {
            let d = if w == 0 {
                0
            } else if oct.has_edge(0, w) {
                1
            } else {
                2
            };
            Rational64::new(d * 10 + w as i64, 1)
        };
        assert_eq!(sublevel_sphere(&oct, dist, 0).unwrap().vertex_count(), 0);
        // vertex 1 is antipodal to 0 and sits above all its neighbours
        let top = sublevel_sphere(&oct, dist, 1).unwrap();
        assert_eq!((top.vertex_count(), top.edge_count()), (4, 4));
    }

    #[test]
    fn sphere_recognition() {
        assert!(is_evako_sphere(&Graph::cycle(4), 1));
        assert!(is_evako_sphere(&Graph::cycle(7), 1));
        assert!(is_evako_sphere(&octahedron_graph(), 2));
        assert!(!is_evako_sphere(&Graph::complete(3), 1));
        assert!(!is_evako_sphere(&Graph::cycle(4), 2));
        assert!(is_evako_sphere(&Graph::new(2), 0));
        assert!(is_evako_sphere(&Graph::new(0), -1));
        assert!(is_contractible(&Graph::complete(3)));
        assert!(is_contractible(&Graph::path(5)));
        assert!(!is_contractible(&Graph::cycle(5)));
    }

    #[test]
    fn level_sets() {
        let oct = generate(&GeneratorSpec::Octahedron).unwrap();
        // vertices 0,1 / 2,3 / 4,5 are antipodal pairs
        let coords = [1.0, -1.0, 0.3, -0.3, 0.1, -0.1];
        let f = |v: usize| Rational64::approximate_float(coords[v]).unwrap();
        let l = level_set(&oct, f, Rational64::from_integer(0)).unwrap();
        assert!(is_evako_sphere(&l.skeleton_graph(), 1));
        let below = level_set(&oct, f, Rational64::from_integer(-5)).unwrap();
        assert!(below.is_empty());
        assert!(matches!(level_set(&oct, f, Rational64::from_integer(1)), Err(Error::ValueInRange(_))));

        let c4 = generate(&GeneratorSpec::Cycle(4)).unwrap();
        let h = [0, 1, 3, 2];
        let l = level_set(&c4, |v| Rational64::from_integer(h[v]), Rational64::new(3, 2)).unwrap();
        assert_eq!(l.f_vector(), vec![2]);
        assert!(is_evako_sphere(&l.skeleton_graph(), 0));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = octahedron_graph();
        assert_eq!(Graph::from_edge_list(&g.to_edge_list(), Some(6)).unwrap(), g);
    }
}
