//! Stanley–Reisner picture: a complex is the sum of its square-free monomials
//! `x_A`, one variable per vertex. Each factor of each term gets fresh variables.

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::RingElement;

/// Origin of a variable: which term, which factor, which vertex label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub term: usize,
    pub factor: usize,
    pub vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StanleyReisnerPoly {
    variables: Vec<Variable>,
    /// Sorted variable indices -> coefficient; never stores zero.
    monomials: BTreeMap<Vec<usize>, i64>,
}

impl StanleyReisnerPoly {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn monomials(&self) -> &BTreeMap<Vec<usize>, i64> {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Value with every variable set to `x`.
    pub fn eval_constant(&self, x: i64) -> i64 {
        self.monomials.iter().map(|(m, c)| c * x.pow(m.len() as u32)).sum()
    }

    /// Number of distinct factors whose variables occur in `m`.
    fn factor_count(&self, m: &[usize]) -> usize {
        let mut seen: Vec<(usize, usize)> = m.iter().map(|&v| (self.variables[v].term, self.variables[v].factor)).collect();
        seen.dedup();
        seen.len()
    }

    /// Dimension of the cell behind a monomial: one less than the degree per factor.
    pub fn cell_dim(&self, m: &[usize]) -> usize {
        m.len() - self.factor_count(m)
    }

    /// Euler characteristic, `-f(-1, ..., -1)` evaluated factorwise: each factor
    /// contributes `-x_A(-1)`, so a monomial counts `(-1)^dim` of its cell. For
    /// single-factor terms this is the plain evaluation.
    pub fn euler_characteristic(&self) -> i64 {
        self.monomials
            .iter()
            .map(|(m, c)| if self.cell_dim(m) % 2 == 0 { *c } else { -c })
            .sum()
    }

    /// Coefficient sums by cell dimension.
    pub fn degree_profile(&self) -> Vec<i64> {
        let dims: Vec<usize> = self.monomials.keys().map(|m| self.cell_dim(m)).collect();
        let top = dims.iter().copied().max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for (d, c) in dims.into_iter().zip(self.monomials.values()) {
            out[d] += c;
        }
        out
    }

    /// Sum with the other polynomial's variables renamed to fresh ones.
    pub fn disjoint_sum(&self, other: &Self) -> Self {
        let shift = self.variables.len();
        let mut out = self.clone();
        out.variables.extend_from_slice(&other.variables);
        for (m, c) in &other.monomials {
            let key: Vec<usize> = m.iter().map(|v| v + shift).collect();
            *out.monomials.entry(key).or_insert(0) += c;
        }
        out.monomials.retain(|_, c| *c != 0);
        out
    }

    /// Product with the other polynomial's variables renamed to fresh ones;
    /// stays square-free.
    pub fn disjoint_product(&self, other: &Self) -> Self {
        let shift = self.variables.len();
        let mut variables = self.variables.clone();
        variables.extend_from_slice(&other.variables);
        let mut monomials = BTreeMap::new();
        for (m, c) in &self.monomials {
            for (n, d) in &other.monomials {
                let mut key = m.clone();
                key.extend(n.iter().map(|v| v + shift));
                *monomials.entry(key).or_insert(0) += c * d;
            }
        }
        monomials.retain(|_, c| *c != 0);
        StanleyReisnerPoly { variables, monomials }
    }

    fn name(&self, v: usize) -> String {
        if self.variables.len() <= 26 {
            ((b'a' + v as u8) as char).to_string()
        } else {
            format!("x{v}")
        }
    }
}

impl fmt::Display for StanleyReisnerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        let mut ms: Vec<(&Vec<usize>, &i64)> = self.monomials.iter().collect();
        ms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
        for (i, (m, &c)) in ms.into_iter().enumerate() {
            if c < 0 {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            for &v in m {
                write!(f, "{}", self.name(v))?;
            }
        }
        Ok(())
    }
}

/// Expands every term into square-free monomials over fresh variables.
pub fn stanley_reisner(e: &RingElement) -> StanleyReisnerPoly {
    let mut poly = StanleyReisnerPoly::default();
    for (ti, (coef, term)) in e.terms().iter().enumerate() {
        let mut acc = StanleyReisnerPoly {
            variables: Vec::new(),
            monomials: BTreeMap::from([(Vec::new(), *coef)]),
        };
        for (fi, factor) in term.factors().iter().enumerate() {
            let verts = factor.vertices();
            let variables: Vec<Variable> =
                verts.iter().map(|&v| Variable { term: ti, factor: fi, vertex: v }).collect();
            let monomials = factor
                .cells()
                .iter()
                .map(|x| {
                    let m = x.vertices().iter().map(|v| verts.binary_search(v).unwrap()).collect();
                    (m, 1)
                })
                .collect();
            acc = acc.disjoint_product(&StanleyReisnerPoly { variables, monomials });
        }
        poly = poly.disjoint_sum(&acc);
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_ring_expression;

    #[test]
    fn edge_polynomial() {
        let p = stanley_reisner(&parse_ring_expression("K2").unwrap());
        assert_eq!(p.to_string(), "a+b+ab");
        assert_eq!(p.euler_characteristic(), 1);
    }

    #[test]
    fn square_of_edge_has_nine_monomials() {
        let p = stanley_reisner(&parse_ring_expression("K2*K2").unwrap());
        assert_eq!(p.len(), 9);
        let expected = ["ac", "bc", "abc", "ad", "bd", "abd", "acd", "bcd", "abcd"];
        let shown = p.to_string();
        for m in expected {
            assert!(shown.split('+').any(|t| t == m), "{m} missing in {shown}");
        }
        assert!(p.monomials().keys().all(|m| m.windows(2).all(|w| w[0] < w[1])));
    }

    #[test]
    fn named_element_evaluates_to_minus_one() {
        let p = stanley_reisner(&parse_ring_expression("C4 - 2*K3 + L2*L3").unwrap());
        assert_eq!(p.euler_characteristic(), -1);
        // plain evaluation differs once a term has two factors
        let q = stanley_reisner(&parse_ring_expression("K2*K2").unwrap());
        assert_eq!((q.euler_characteristic(), -q.eval_constant(-1)), (1, -1));
    }
}
