//! Finite abstract simplicial complexes with a canonical cell order.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A non-empty finite vertex set, stored sorted.
///
/// The sorted order doubles as the orientation of the simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Builds a simplex from arbitrary vertices; duplicates are dropped.
    ///
    /// Panics on an empty vertex list.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        assert!(!vertices.is_empty(), "a simplex needs at least one vertex");
        Simplex(vertices)
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// `(-1)^dim`.
    pub fn omega(&self) -> i64 {
        if self.dim() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn intersects(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return true,
            }
        }
        false
    }

    /// Codimension-one faces with their incidence signs `(-1)^i`, where `i` is the
    /// position of the removed vertex. Empty for a vertex.
    pub fn faces(&self) -> Vec<(Simplex, i64)> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .rev()
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                (Simplex(v), if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    /// Dimension first, then lexicographic on the sorted vertex list.
    pub fn canonical_cmp(&self, other: &Simplex) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }

    fn subsets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        assert!(n < 32, "simplex too large to enumerate its faces");
        (1u32..(1u32 << n)).map(move |mask| {
            Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect())
        })
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A finite set of non-empty sets closed under taking non-empty subsets.
///
/// Cells are kept in canonical order (dimension, then lexicographic). The empty
/// complex is allowed and plays the role of the ring zero.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    cells: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    facets: Vec<Simplex>,
    /// `offsets[k]..offsets[k+1]` are the k-dimensional cells.
    offsets: Vec<usize>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for SimplicialComplex {}

impl std::hash::Hash for SimplicialComplex {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.cells.hash(state)
    }
}

impl PartialOrd for SimplicialComplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SimplicialComplex {
    /// Smaller complexes first; ties broken on the canonical cell lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.cells.len().cmp(&other.cells.len()).then_with(|| {
            for (a, b) in self.cells.iter().zip(&other.cells) {
                match a.canonical_cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

/// On-disk facet list, e.g. `{"facets": [[0,1],[1,2],[2,0]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FacetFile {
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::from_closed_set(BTreeSet::new())
    }

    /// Checks downward closure of an explicit set system.
    pub fn validate<I, S>(sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        let mut members = BTreeSet::new();
        for set in sets {
            let mut v: Vec<usize> = set.into_iter().collect();
            v.sort_unstable();
            v.dedup();
            if v.is_empty() {
                return Err(Error::EmptySetMember);
            }
            members.insert(Simplex(v));
        }
        // Closure under codimension-one faces implies closure under all subsets.
        for s in &members {
            for (face, _) in s.faces() {
                if !members.contains(&face) {
                    return Err(Error::ClosureViolation { missing: face.0 });
                }
            }
        }
        Ok(Self::from_closed_set(members))
    }

    /// Generates the downward closure of a list of vertex sets.
    pub fn from_facets<I, S>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        let mut members = BTreeSet::new();
        for f in facets {
            let mut v: Vec<usize> = f.into_iter().collect();
            v.sort_unstable();
            v.dedup();
            if v.is_empty() {
                return Err(Error::EmptySetMember);
            }
            let s = Simplex(v);
            if members.contains(&s) {
                continue;
            }
            members.extend(s.subsets());
        }
        Ok(Self::from_closed_set(members))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: FacetFile = serde_json::from_str(text)?;
        Self::from_facets(file.facets)
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_facet_file(&self) -> FacetFile {
        FacetFile { facets: self.facets.iter().map(|f| f.0.clone()).collect() }
    }

    fn from_closed_set(members: BTreeSet<Simplex>) -> Self {
        let mut cells: Vec<Simplex> = members.into_iter().collect();
        cells.sort_by(|a, b| a.canonical_cmp(b));
        let index: HashMap<Simplex, usize> =
            cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let top = cells.last().map_or(0, |c| c.len());
        let mut offsets = vec![0; top + 1];
        for c in &cells {
            offsets[c.len()] += 1;
        }
        for k in 1..offsets.len() {
            offsets[k] += offsets[k - 1];
        }
        // maximality: a cell is a facet iff it is a face of no cell one dimension up
        let mut covered = vec![false; cells.len()];
        for c in &cells {
            for (f, _) in c.faces() {
                covered[index[&f]] = true;
            }
        }
        let facets = cells
            .iter()
            .zip(&covered)
            .filter(|(_, &cov)| !cov)
            .map(|(c, _)| c.clone())
            .collect();
        SimplicialComplex { cells, index, facets, offsets }
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Maximal cell dimension, `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.offsets.len() as isize - 2
    }

    pub fn cells_of_dim(&self, k: usize) -> &[Simplex] {
        if k + 1 >= self.offsets.len() {
            return &[];
        }
        &self.cells[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Sorted vertex labels (the zero-dimensional cells).
    pub fn vertices(&self) -> Vec<usize> {
        self.cells_of_dim(0).iter().map(|c| c.0[0]).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.cells_of_dim(0).len()
    }

    /// `(v_0, v_1, ...)`: number of cells per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().map(Simplex::omega).sum()
    }

    /// Faces of cell `i` as `(index, sign)` pairs.
    pub fn boundary_of(&self, i: usize) -> Vec<(usize, i64)> {
        self.cells[i].faces().into_iter().map(|(f, s)| (self.index[&f], s)).collect()
    }

    /// Cofaces (one dimension up) of every cell, as `(index, sign)` pairs.
    pub fn coface_lists(&self) -> Vec<Vec<(usize, i64)>> {
        let mut out = vec![Vec::new(); self.cells.len()];
        for i in 0..self.cells.len() {
            for (f, s) in self.boundary_of(i) {
                out[f].push((i, s));
            }
        }
        out
    }

    /// The 1-skeleton as a graph on vertex positions `0..vertex_count`.
    pub fn skeleton_graph(&self) -> Graph {
        let verts = self.vertices();
        let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::new(verts.len());
        for e in self.cells_of_dim(1) {
            g.add_edge(pos[&e.0[0]], pos[&e.0[1]]);
        }
        g
    }

    /// Relabels vertices through `map` (must be injective on the vertex set).
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Self {
        let members: BTreeSet<Simplex> =
            self.cells.iter().map(|c| Simplex::new(c.0.iter().map(|&v| map(v)).collect())).collect();
        assert_eq!(members.len(), self.cells.len(), "relabeling must be injective");
        Self::from_closed_set(members)
    }

    /// Join with another complex; the other complex's vertices are shifted past
    /// this one's largest label.
    pub fn join(&self, other: &SimplicialComplex) -> Self {
        let shift = self.vertices().last().map_or(0, |v| v + 1);
        let other = other.relabel(|v| v + shift);
        let mut members: BTreeSet<Simplex> = self.cells.iter().cloned().collect();
        members.extend(other.cells.iter().cloned());
        for x in &self.cells {
            for y in &other.cells {
                let mut v = x.0.clone();
                v.extend_from_slice(&y.0);
                members.insert(Simplex(v));
            }
        }
        Self::from_closed_set(members)
    }

    /// Disjoint union with the other complex shifted past this one's labels.
    pub fn disjoint_union(&self, other: &SimplicialComplex) -> Self {
        let shift = self.vertices().last().map_or(0, |v| v + 1);
        let mut members: BTreeSet<Simplex> = self.cells.iter().cloned().collect();
        members.extend(other.relabel(|v| v + shift).cells);
        Self::from_closed_set(members)
    }

    /// Largest cell size (clique number of the Whitney complex); 0 when empty.
    pub fn clique_number(&self) -> usize {
        self.cells.last().map_or(0, |c| c.len())
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.facets.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// All complete subgraphs of a graph as cells; vertex `i` of the graph becomes label `i`.
pub fn whitney_complex(graph: &Graph) -> SimplicialComplex {
    let n = graph.vertex_count();
    let mut members = BTreeSet::new();
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = (0..n)
        .map(|v| (vec![v], graph.neighbors(v).iter().copied().filter(|&w| w > v).collect()))
        .collect();
    while let Some((clique, candidates)) = stack.pop() {
        for (i, &w) in candidates.iter().enumerate() {
            let next: Vec<usize> =
                candidates[i + 1..].iter().copied().filter(|&u| graph.has_edge(w, u)).collect();
            let mut c = clique.clone();
            c.push(w);
            stack.push((c, next));
        }
        members.insert(Simplex(clique));
    }
    SimplicialComplex::from_closed_set(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_edge() {
        let k2 = SimplicialComplex::validate(vec![vec![1], vec![2], vec![1, 2]]).unwrap();
        assert_eq!(k2.len(), 3);
        assert_eq!(k2.f_vector(), vec![2, 1]);
        assert_eq!(k2.facets(), &[Simplex::new(vec![1, 2])]);
    }

    #[test]
    fn closure_failure_names_the_missing_face() {
        match SimplicialComplex::validate(vec![vec![1, 2]]) {
            Err(Error::ClosureViolation { missing }) => assert_eq!(missing, vec![1]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            SimplicialComplex::validate(vec![Vec::<usize>::new()]),
            Err(Error::EmptySetMember)
        ));
    }

    #[test]
    fn empty_system_is_zero() {
        let z = SimplicialComplex::validate(Vec::<Vec<usize>>::new()).unwrap();
        assert!(z.is_empty());
        assert_eq!(z.dim(), -1);
        assert_eq!(z.euler_characteristic(), 0);
    }

    #[test]
    fn canonical_order_is_dimension_then_lex() {
        let c = SimplicialComplex::from_facets(vec![vec![2, 3], vec![0, 1, 2]]).unwrap();
        let dims: Vec<usize> = c.cells().iter().map(Simplex::dim).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(c.cells_of_dim(1)[0].vertices(), &[0, 1]);
        assert_eq!(c.cells_of_dim(1)[3].vertices(), &[2, 3]);
        assert_eq!(c.facets().len(), 2);
    }

    #[test]
    fn whitney_of_small_graphs() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(whitney_complex(&c4).len(), 8);
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(whitney_complex(&k3).len(), 7);
    }

    #[test]
    fn facet_file_round_trip() {
        let c = SimplicialComplex::from_json_str(r#"{"facets": [[0,1],[1,2],[2,0]]}"#).unwrap();
        assert_eq!(c.f_vector(), vec![3, 3]);
        let again =
            SimplicialComplex::from_json_str(&serde_json::to_string(&c.to_facet_file()).unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn face_signs_alternate() {
        let t = Simplex::new(vec![0, 1, 2]);
        let faces = t.faces();
        assert_eq!(faces[0], (Simplex::new(vec![0, 1]), 1));
        assert_eq!(faces[1], (Simplex::new(vec![0, 2]), -1));
        assert_eq!(faces[2], (Simplex::new(vec![1, 2]), 1));
    }
}
