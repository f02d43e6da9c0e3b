//! Ring elements: integer combinations of products of simplicial complexes.
//!
//! Addition is the disjoint union, multiplication the Cartesian product of the
//! cell sets. Elements are kept normalized: zero coefficients and empty factors
//! vanish, zero-dimensional factors are absorbed into the coefficient (a
//! product with `P_n` is `n` copies), factors inside a term are sorted and
//! structurally equal terms are merged.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use crate::basis::CellBasis;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::stanley_reisner::stanley_reisner;

/// Ordered list of non-empty complexes; its cells are tuples of factor cells.
#[derive(Clone, Debug)]
pub struct ProductTerm {
    factors: Vec<SimplicialComplex>,
    basis: OnceLock<Arc<CellBasis>>,
}

impl PartialEq for ProductTerm {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for ProductTerm {}

impl PartialOrd for ProductTerm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProductTerm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.factors.cmp(&other.factors)
    }
}

impl ProductTerm {
    /// Fails with `EmptyTerm` when there are no factors or a factor is empty.
    pub fn new(factors: Vec<SimplicialComplex>) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(SimplicialComplex::is_empty) {
            return Err(Error::EmptyTerm);
        }
        Ok(ProductTerm { factors, basis: OnceLock::new() })
    }

    /// Panics on the empty complex.
    pub fn single(c: SimplicialComplex) -> Self {
        Self::new(vec![c]).expect("single factor must be non-empty")
    }

    pub fn point() -> Self {
        Self::single(point_complex())
    }

    pub fn factors(&self) -> &[SimplicialComplex] {
        &self.factors
    }

    pub fn basis(&self) -> Arc<CellBasis> {
        self.basis.get_or_init(|| Arc::new(CellBasis::new(&self.factors))).clone()
    }

    pub fn cell_count(&self) -> usize {
        self.factors.iter().map(SimplicialComplex::len).product()
    }

    /// Number of zero-dimensional cells (vertex tuples).
    pub fn zero_cell_count(&self) -> usize {
        self.factors.iter().map(SimplicialComplex::vertex_count).product()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim() as usize).sum()
    }

    pub fn is_point(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].len() == 1
    }

    /// Concatenation of the factor lists (unnormalized product).
    pub fn times(&self, other: &ProductTerm) -> ProductTerm {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        ProductTerm { factors: f, basis: OnceLock::new() }
    }

    /// Absorbs zero-dimensional factors and sorts the rest. Returns the
    /// multiplier picked up from the absorbed factors.
    fn normalized(&self) -> (i64, ProductTerm) {
        let mut mult = 1i64;
        let mut rest = Vec::new();
        for f in &self.factors {
            if f.dim() == 0 {
                mult *= f.vertex_count() as i64;
            } else {
                rest.push(f.clone());
            }
        }
        if rest.is_empty() {
            rest.push(point_complex());
        }
        rest.sort();
        (mult, ProductTerm { factors: rest, basis: OnceLock::new() })
    }
}

impl fmt::Display for ProductTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// The one-point complex `K1`, the multiplicative unit.
pub fn point_complex() -> SimplicialComplex {
    SimplicialComplex::from_facets(vec![vec![0]]).unwrap()
}

/// Integer combination of product terms. The empty sum is the zero element.
#[derive(Clone, Debug, Default)]
pub struct RingElement {
    terms: Vec<(i64, ProductTerm)>,
}

impl PartialEq for RingElement {
    /// Structural equality of the normalized term multisets.
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.normalize().terms;
        let mut b = other.normalize().terms;
        a.sort_by(|x, y| x.1.cmp(&y.1));
        b.sort_by(|x, y| x.1.cmp(&y.1));
        a == b
    }
}

impl Eq for RingElement {}

impl RingElement {
    pub fn zero() -> Self {
        RingElement { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_term(1, ProductTerm::point())
    }

    /// The complex as a ring element; the empty complex gives zero.
    pub fn from_complex(c: SimplicialComplex) -> Self {
        if c.is_empty() {
            return Self::zero();
        }
        Self::from_term(1, ProductTerm::single(c)).normalize()
    }

    pub fn from_term(coefficient: i64, term: ProductTerm) -> Self {
        RingElement { terms: vec![(coefficient, term)] }.normalize()
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_term(n, ProductTerm::point())
    }

    /// Builds an element from raw terms without normalizing.
    pub fn from_raw_terms(terms: Vec<(i64, ProductTerm)>) -> Self {
        RingElement { terms }
    }

    pub fn terms(&self) -> &[(i64, ProductTerm)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.normalize().terms.is_empty()
    }

    /// Merges identical terms (first appearance keeps its position) and drops zeros.
    pub fn normalize(&self) -> Self {
        let mut out: Vec<(i64, ProductTerm)> = Vec::new();
        for (c, t) in &self.terms {
            if *c == 0 {
                continue;
            }
            let (m, t) = t.normalized();
            let c = c * m;
            match out.iter_mut().find(|(_, u)| *u == t) {
                Some(slot) => slot.0 += c,
                None => out.push((c, t)),
            }
        }
        out.retain(|(c, _)| *c != 0);
        RingElement { terms: out }
    }

    pub fn scale(&self, k: i64) -> Self {
        RingElement { terms: self.terms.iter().map(|(c, t)| (c * k, t.clone())).collect() }.normalize()
    }

    /// The single term of an element `1 * t`.
    pub fn as_single_term(&self) -> Result<&ProductTerm> {
        match self.terms.as_slice() {
            [(1, t)] => Ok(t),
            _ => Err(Error::NotASingleTerm),
        }
    }

    /// Total number of cells counted with multiplicity (negative terms count too).
    pub fn total_cells(&self) -> usize {
        self.terms.iter().map(|(c, t)| c.unsigned_abs() as usize * t.cell_count()).sum()
    }
}

pub fn ring_add(a: &RingElement, b: &RingElement) -> RingElement {
    let mut terms = a.terms.clone();
    terms.extend(b.terms.iter().cloned());
    RingElement { terms }.normalize()
}

pub fn ring_neg(a: &RingElement) -> RingElement {
    a.scale(-1)
}

pub fn ring_mul(a: &RingElement, b: &RingElement) -> RingElement {
    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
    for (c, s) in &a.terms {
        for (d, t) in &b.terms {
            terms.push((c * d, s.times(t)));
        }
    }
    RingElement { terms }.normalize()
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        ring_add(self, rhs)
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(self, rhs: RingElement) -> RingElement {
        ring_add(&self, &rhs)
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        ring_add(self, &ring_neg(rhs))
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(self, rhs: RingElement) -> RingElement {
        &self - &rhs
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        ring_mul(self, rhs)
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        ring_mul(&self, &rhs)
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        ring_neg(&self)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        ring_neg(self)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, t)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Unit,
    Prime,
    Composite,
}

/// Outcome of the primality test for a single term.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PrimalityCertificate {
    pub verdict: Primality,
    pub factor_count: usize,
    /// Degree-one monomials of the Stanley–Reisner polynomial. A product of two
    /// non-units has none; a single complex has one per vertex.
    pub linear_monomials: usize,
}

impl PrimalityCertificate {
    pub fn is_prime(&self) -> bool {
        self.verdict == Primality::Prime
    }
}

/// A single coefficient-one term is a multiplicative prime iff it is one
/// complex other than the point.
pub fn is_multiplicative_prime(e: &RingElement) -> Result<PrimalityCertificate> {
    let e = e.normalize();
    let term = e.as_single_term()?;
    let poly = stanley_reisner(&e);
    let linear_monomials = poly.monomials().keys().filter(|m| m.len() == 1).count();
    let verdict = if term.is_point() {
        Primality::Unit
    } else if term.factors().len() == 1 {
        Primality::Prime
    } else {
        Primality::Composite
    };
    Ok(PrimalityCertificate { verdict, factor_count: term.factors().len(), linear_monomials })
}

/// The two factorizations `(1 + x + x^2)(1 + x^3)` and `(1 + x^2 + x^4)(1 + x)`
/// with `x = K2`, their expansions, and whether the expansions agree.
pub struct NonUniqueFactorization {
    pub left: RingElement,
    pub right: RingElement,
    /// Expanded products before merging.
    pub left_raw: RingElement,
    pub right_raw: RingElement,
    pub equal: bool,
}

pub fn nonunique_factorization_demo() -> NonUniqueFactorization {
    let k2 = RingElement::from_complex(SimplicialComplex::from_facets(vec![vec![0, 1]]).unwrap());
    let one = RingElement::one();
    let pow = |k: usize| (0..k).fold(one.clone(), |acc, _| &acc * &k2);
    let a1 = vec![one.clone(), pow(1), pow(2)];
    let a2 = vec![one.clone(), pow(3)];
    let b1 = vec![one.clone(), pow(2), pow(4)];
    let b2 = vec![one.clone(), pow(1)];
    let raw = |p: &[RingElement], q: &[RingElement]| {
        let mut terms = Vec::new();
        for s in p {
            for t in q {
                let (c, u) = &s.terms[0];
                let (d, v) = &t.terms[0];
                terms.push((c * d, u.times(v)));
            }
        }
        RingElement::from_raw_terms(terms)
    };
    let sum = |v: &[RingElement]| v.iter().fold(RingElement::zero(), |acc, x| &acc + x);
    let left = &sum(&a1) * &sum(&a2);
    let right = &sum(&b1) * &sum(&b2);
    let equal = left == right;
    NonUniqueFactorization { left_raw: raw(&a1, &a2), right_raw: raw(&b1, &b2), left, right, equal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GeneratorSpec};

    fn el(spec: GeneratorSpec) -> RingElement {
        RingElement::from_complex(generate(&spec).unwrap())
    }

    #[test]
    fn self_difference_vanishes() {
        let k2 = el(GeneratorSpec::Complete(2));
        assert!((&k2 - &k2).is_zero());
        assert_eq!(&k2 - &k2, RingElement::zero());
    }

    #[test]
    fn two_points_times_edge_is_twice_the_edge() {
        let p2 = el(GeneratorSpec::Points(2));
        let k2 = el(GeneratorSpec::Complete(2));
        let prod = &p2 * &k2;
        assert_eq!(prod.terms().len(), 1);
        assert_eq!(prod.terms()[0].0, 2);
        assert_eq!(prod, k2.scale(2));
    }

    #[test]
    fn zero_and_one() {
        let g = el(GeneratorSpec::Cycle(4));
        assert!((&RingElement::zero() * &g).is_zero());
        assert_eq!(&RingElement::one() * &g, g);
        assert_eq!(RingElement::from_complex(SimplicialComplex::empty()), RingElement::zero());
    }

    #[test]
    fn normalization_is_idempotent() {
        let g = &el(GeneratorSpec::Cycle(4)) * &el(GeneratorSpec::Points(3));
        let raw = RingElement::from_raw_terms(vec![(1, ProductTerm::point()), (0, ProductTerm::point())]);
        assert_eq!(raw.normalize().terms(), raw.normalize().normalize().terms());
        assert_eq!(g.normalize().terms(), g.terms());
    }

    #[test]
    fn primality() {
        let k4 = el(GeneratorSpec::Complete(4));
        let c = is_multiplicative_prime(&k4).unwrap();
        assert!(c.is_prime());
        assert_eq!(c.linear_monomials, 4);

        let k2 = el(GeneratorSpec::Complete(2));
        let c = is_multiplicative_prime(&(&k2 * &k2)).unwrap();
        assert_eq!(c.verdict, Primality::Composite);
        assert_eq!(c.factor_count, 2);
        assert_eq!(c.linear_monomials, 0);

        let c = is_multiplicative_prime(&RingElement::one()).unwrap();
        assert_eq!(c.verdict, Primality::Unit);

        assert!(matches!(is_multiplicative_prime(&k2.scale(2)), Err(Error::NotASingleTerm)));
    }

    #[test]
    fn nonunique_factorization() {
        let demo = nonunique_factorization_demo();
        assert!(demo.equal);
        assert_eq!(demo.left_raw.terms().len(), 3 * 2);
        assert_eq!(demo.right_raw.terms().len(), 3 * 2);
        assert_eq!(demo.left.terms().len(), 6);
        assert_eq!(demo.left_raw.normalize(), demo.right_raw.normalize());
    }
}
