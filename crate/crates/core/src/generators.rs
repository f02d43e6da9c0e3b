//! Named complexes and seeded random complexes.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{whitney_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Seeded generator used for every randomized construction in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// Full simplex on `n` vertices.
    Complete(usize),
    /// Whitney complex of the `n`-cycle, `n >= 3` (`C3` is `K3`).
    Cycle(usize),
    /// Path on `n` vertices.
    Path(usize),
    /// `n` isolated points.
    Points(usize),
    Octahedron,
    /// Join with two points.
    Suspension(Box<GeneratorSpec>),
    /// Whitney complex of an Erdős–Rényi graph.
    RandomEr { n: usize, p: f64, seed: u64 },
    /// Square-free integers in `2..=n` as sets of their prime factors.
    Primes(usize),
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Complete(n) => write!(f, "K{n}"),
            GeneratorSpec::Cycle(n) => write!(f, "C{n}"),
            GeneratorSpec::Path(n) => write!(f, "L{n}"),
            GeneratorSpec::Points(n) => write!(f, "P{n}"),
            GeneratorSpec::Octahedron => write!(f, "Oct"),
            GeneratorSpec::Suspension(g) => write!(f, "Susp({g})"),
            GeneratorSpec::RandomEr { n, p, seed } => write!(f, "RandomER({n},{p},{seed})"),
            GeneratorSpec::Primes(n) => write!(f, "Primes({n})"),
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<SimplicialComplex> {
    let bad = |msg: String| Err(Error::BadParameter(msg));
    match spec {
        GeneratorSpec::Complete(n) => {
            if *n == 0 {
                return bad("K needs n >= 1".into());
            }
            SimplicialComplex::from_facets(vec![(0..*n).collect::<Vec<_>>()])
        }
        GeneratorSpec::Cycle(n) => {
            if *n < 3 {
                return bad(format!("C{n}: cycles need n >= 3"));
            }
            Ok(whitney_complex(&Graph::cycle(*n)))
        }
        GeneratorSpec::Path(n) => {
            if *n == 0 {
                return bad("L needs n >= 1".into());
            }
            Ok(whitney_complex(&Graph::path(*n)))
        }
        GeneratorSpec::Points(n) => {
            if *n == 0 {
                return bad("P needs n >= 1".into());
            }
            SimplicialComplex::from_facets((0..*n).map(|v| vec![v]))
        }
        GeneratorSpec::Octahedron => Ok(octahedron()),
        GeneratorSpec::Suspension(inner) => {
            let g = generate(inner)?;
            let two = SimplicialComplex::from_facets(vec![vec![0], vec![1]])?;
            Ok(g.join(&two))
        }
        GeneratorSpec::RandomEr { n, p, seed } => {
            if !(0.0..=1.0).contains(p) || *n == 0 {
                return bad(format!("RandomER needs n >= 1 and 0 <= p <= 1, got n={n}, p={p}"));
            }
            let mut rng = seeded_rng(*seed);
            Ok(whitney_complex(&erdos_renyi(*n, *p, &mut rng)))
        }
        GeneratorSpec::Primes(n) => {
            if *n < 2 {
                return bad("Primes needs n >= 2".into());
            }
            SimplicialComplex::validate((2..=*n).filter_map(square_free_prime_factors))
        }
    }
}

/// `K_{2,2,2}`: antipodal pairs are `{0,1}`, `{2,3}`, `{4,5}`.
fn octahedron() -> SimplicialComplex {
    let mut facets = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                facets.push(vec![a, b, c]);
            }
        }
    }
    SimplicialComplex::from_facets(facets).unwrap()
}

fn square_free_prime_factors(mut k: usize) -> Option<Vec<usize>> {
    let mut primes = Vec::new();
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            k /= p;
            if k % p == 0 {
                return None;
            }
            primes.push(p);
        }
        p += 1;
    }
    if k > 1 {
        primes.push(k);
    }
    Some(primes)
}

pub fn erdos_renyi(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Random non-empty complex with at most `max_cells` cells: alternately the
/// Whitney complex of a random graph or the closure of random facets.
pub fn random_complex(rng: &mut impl Rng, max_cells: usize) -> SimplicialComplex {
    assert!(max_cells >= 1);
    loop {
        let c = if rng.random_bool(0.5) {
            let n = rng.random_range(1..=7);
            let p = rng.random_range(0.25..0.85);
            whitney_complex(&erdos_renyi(n, p, rng))
        } else {
            let n = rng.random_range(1..=7usize);
            let k = rng.random_range(1..=4);
            let facets: Vec<Vec<usize>> = (0..k)
                .map(|_| {
                    let size = rng.random_range(1..=n.min(4));
                    let mut v: Vec<usize> = (0..n).collect();
                    for i in 0..size {
                        let j = rng.random_range(i..n);
                        v.swap(i, j);
                    }
                    v.truncate(size);
                    v
                })
                .collect();
            SimplicialComplex::from_facets(facets).unwrap()
        };
        if !c.is_empty() && c.len() <= max_cells {
            return c;
        }
    }
}

/// Triangulated band of `n` squares with two triangles each. With `twist` the
/// last square is glued with the sides exchanged (Möbius strip), otherwise
/// straight (cylinder). Both have f-vector `(2n, 5n, 2n)`.
pub fn triangulated_band(n: usize, twist: bool) -> Result<SimplicialComplex> {
    if n < 4 {
        return Err(Error::BadParameter("band needs at least 4 squares".into()));
    }
    // a_i = i, b_i = n + i
    let a = |i: usize| i % n;
    let b = |i: usize| n + i % n;
    let mut facets = Vec::new();
    for i in 0..n {
        let (ai, bi) = (a(i), b(i));
        let (aj, bj) = if i + 1 == n && twist { (b(0), a(0)) } else { (a(i + 1), b(i + 1)) };
        facets.push(vec![ai, bi, bj]);
        facets.push(vec![ai, aj, bj]);
    }
    SimplicialComplex::from_facets(facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedron_and_its_suspension() {
        let oct = generate(&GeneratorSpec::Octahedron).unwrap();
        assert_eq!(oct.f_vector(), vec![6, 12, 8]);
        assert_eq!(oct.len(), 26);
        let s3 = generate(&GeneratorSpec::Suspension(Box::new(GeneratorSpec::Octahedron))).unwrap();
        assert_eq!(s3.f_vector(), vec![8, 24, 32, 16]);
        assert_eq!(s3.len(), 80);
    }

    #[test]
    fn c3_is_k3() {
        assert_eq!(generate(&GeneratorSpec::Cycle(3)).unwrap(), generate(&GeneratorSpec::Complete(3)).unwrap());
    }

    #[test]
    fn parameters_are_checked() {
        for spec in [
            GeneratorSpec::Cycle(2),
            GeneratorSpec::Complete(0),
            GeneratorSpec::Primes(1),
            GeneratorSpec::RandomEr { n: 4, p: 1.5, seed: 0 },
        ] {
            assert!(matches!(generate(&spec), Err(Error::BadParameter(_))), "{spec}");
        }
    }

    #[test]
    fn random_er_is_reproducible() {
        let spec = GeneratorSpec::RandomEr { n: 9, p: 0.4, seed: 11 };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }

    #[test]
    fn primes_complex() {
        let p = generate(&GeneratorSpec::Primes(10)).unwrap();
        // 2,3,5,7 and 6={2,3}, 10={2,5}
        assert_eq!(p.f_vector(), vec![4, 2]);
    }

    #[test]
    fn bands_are_flag_with_equal_f_vectors() {
        for twist in [false, true] {
            let band = triangulated_band(6, twist).unwrap();
            assert_eq!(band.f_vector(), vec![12, 24, 12]);
            assert_eq!(whitney_complex(&band.skeleton_graph()).f_vector(), band.f_vector());
        }
        assert_eq!(triangulated_band(6, false).unwrap().euler_characteristic(), 0);
    }

    #[test]
    fn random_complexes_respect_the_cap() {
        let mut rng = seeded_rng(3);
        for _ in 0..200 {
            let c = random_complex(&mut rng, 20);
            assert!(!c.is_empty() && c.len() <= 20);
        }
    }
}
