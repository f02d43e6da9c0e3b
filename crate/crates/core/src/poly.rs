//! Small integer polynomials used for f-vectors, Poincaré and f-matrix generating functions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::Serialize;

/// Dense univariate polynomial, `coeffs[k]` is the coefficient of `t^k`.
/// Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct IntPoly(Vec<i64>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn scale(&self, k: i64) -> Self {
        IntPoly::new(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.0.len().max(rhs.0.len());
        IntPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0) + rhs.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return IntPoly::default();
        }
        let mut out = vec![0; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            write!(f, "{sign}")?;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Sparse bivariate polynomial in `t, s`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly(BTreeMap<(usize, usize), i64>);

impl BiPoly {
    pub fn from_matrix(m: &[Vec<i64>]) -> Self {
        let mut map = BTreeMap::new();
        for (i, row) in m.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c != 0 {
                    map.insert((i, j), c);
                }
            }
        }
        BiPoly(map)
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.0
    }

    pub fn coeff(&self, i: usize, j: usize) -> i64 {
        self.0.get(&(i, j)).copied().unwrap_or(0)
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.0.clone();
        for (&k, &c) in &rhs.0 {
            *out.entry(k).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        BiPoly(out)
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BTreeMap::new();
        for (&(i, j), &a) in &self.0 {
            for (&(k, l), &b) in &rhs.0 {
                *out.entry((i + k, j + l)).or_insert(0) += a * b;
            }
        }
        out.retain(|_, c| *c != 0);
        BiPoly(out)
    }
}
