//! Green functions (the inverse connection operator), Lefschetz numbers and
//! super traces.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::complex::whitney_complex;
use crate::error::{Error, Result};
use crate::graph::{barycentric_refinement, connection_graph, unit_sphere};
use crate::linalg::{direct_sum, inverse_unimodular, kernel_basis, IntMatrix, RatMatrix};
use crate::operators::{
    complex_connection_laplacian, koopman_matrix, operator_bundle, term_connection_laplacian, Automorphism,
    ConnectionOperator,
};
use crate::ring::{ProductTerm, RingElement};
use crate::spectral::{max_deviation, symmetric_eigenvalues};

use super::euler_characteristic;

/// `g = L⁻¹` with its row sums (potentials) and total.
#[derive(Clone, Debug)]
pub struct GreenFunctions {
    pub g: IntMatrix,
    pub potentials: Vec<BigInt>,
    pub total: BigInt,
    pub omegas: Vec<i64>,
}

impl GreenFunctions {
    /// `Σ ω(x) g(x,x)`.
    pub fn supertrace(&self) -> BigInt {
        self.g.diagonal().iter().zip(&self.omegas).map(|(d, w)| d * w).sum()
    }
}

pub fn green_functions(e: &RingElement) -> Result<GreenFunctions> {
    green_functions_capped(e, usize::MAX)
}

/// Exact inverse of the connection operator, one block per summand. Every
/// potential is checked against `ω(x) g(x,x)`.
pub fn green_functions_capped(e: &RingElement, cap: usize) -> Result<GreenFunctions> {
    let mut cache: BTreeMap<&ProductTerm, IntMatrix> = BTreeMap::new();
    let mut g = IntMatrix::zeros(0, 0);
    for (a, t) in e.terms() {
        if t.cell_count() > cap {
            return Err(Error::TooLarge { what: "exact inverse".into(), size: t.cell_count(), cap });
        }
        if !cache.contains_key(t) {
            cache.insert(t, inverse_unimodular(&term_connection_laplacian(t))?);
        }
        let block = if *a < 0 { cache[t].neg() } else { cache[t].clone() };
        for _ in 0..a.unsigned_abs() {
            g = direct_sum(&g, &block);
        }
    }
    let omegas = crate::operators::connection_operator(e).omegas();
    let potentials = g.row_sums();
    for (x, v) in potentials.iter().enumerate() {
        assert_eq!(*v, g.get(x, x) * omegas[x], "potential at row {x} differs from ω(x) g(x,x)");
    }
    let total = potentials.iter().sum();
    Ok(GreenFunctions { g, potentials, total, omegas })
}

/// How often `g(x,x) = 1 - χ(S(x))` holds on one complex, for the unit sphere
/// taken in the connection graph and in the Barycentric refinement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreenProbe {
    pub cells: usize,
    pub connection_sphere_matches: usize,
    pub refined_sphere_matches: usize,
}

pub fn green_diagonal_probe(c: &crate::complex::SimplicialComplex) -> Result<GreenProbe> {
    let g = inverse_unimodular(&complex_connection_laplacian(c))?;
    let t = ProductTerm::single(c.clone());
    let conn = connection_graph(&t)?;
    let (refined, _) = barycentric_refinement(&t)?;
    let mut probe = GreenProbe { cells: c.len(), connection_sphere_matches: 0, refined_sphere_matches: 0 };
    for x in 0..c.len() {
        let d = g.get(x, x);
        let chi = |graph| whitney_complex(&unit_sphere(graph, x).unwrap()).euler_characteristic();
        if d == BigInt::from(1 - chi(&conn)) {
            probe.connection_sphere_matches += 1;
        }
        if d == BigInt::from(1 - chi(&refined)) {
            probe.refined_sphere_matches += 1;
        }
    }
    Ok(probe)
}

/// Fixed-point side and cohomological side of the Lefschetz formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lefschetz {
    /// `Σ_k (-1)^k tr(T | ker H_k)`.
    pub chi_t: i64,
    /// Fixed cells with their indices `ω(x) sign(T|x)`.
    pub fixed: Vec<(usize, i64)>,
    pub fixed_sum: i64,
}

impl Lefschetz {
    pub fn agrees(&self) -> bool {
        self.chi_t == self.fixed_sum
    }
}

pub fn lefschetz(t: &ProductTerm, a: &Automorphism) -> Result<Lefschetz> {
    let u = koopman_matrix(t, a);
    let basis = t.basis();
    let fixed: Vec<(usize, i64)> = (0..basis.len())
        .filter_map(|x| {
            let s = u.get(x, x).to_i64().unwrap();
            (s != 0).then(|| (x, basis.omega(x) * s))
        })
        .collect();
    let fixed_sum = fixed.iter().map(|f| f.1).sum();
    let bundle = operator_bundle(t);
    let mut chi_t = BigRational::zero();
    for (k, h) in bundle.blocks().iter().enumerate() {
        let kernel = kernel_basis(h);
        if kernel.is_empty() {
            continue;
        }
        let r = basis.block(k);
        let km = RatMatrix::from_columns(r.len(), &kernel);
        let uk = RatMatrix::left_mul_int(&u.submatrix(r.clone(), r), &km)?;
        let kt = km.transpose();
        let m = kt.mul(&km)?.inverse()?.mul(&kt.mul(&uk)?)?;
        // T maps harmonic forms to harmonic forms, so K M reproduces U K exactly
        assert_eq!(km.mul(&m)?, uk, "Koopman operator does not preserve ker H_{k}");
        let tr = m.trace();
        chi_t = if k % 2 == 0 { chi_t + tr } else { chi_t - tr };
    }
    assert!(chi_t.is_integer());
    Ok(Lefschetz { chi_t: chi_t.to_integer().to_i64().unwrap(), fixed, fixed_sum })
}

/// Both McKean–Singer identities and the even/odd pairing of Hodge spectra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McKeanSinger {
    pub chi: i64,
    /// `(t, str exp(-tH))`.
    pub heat: Vec<(f64, f64)>,
    /// `Σ ω(x) g(x,x)`, exact.
    pub green_supertrace: String,
    /// Largest gap between sorted non-zero even and odd Hodge eigenvalues.
    pub susy_deviation: f64,
}

impl McKeanSinger {
    pub fn passed(&self, tol: f64) -> bool {
        self.green_supertrace == self.chi.to_string()
            && self.heat.iter().all(|(_, v)| (v - self.chi as f64).abs() < tol)
            && self.susy_deviation < tol
    }
}

pub const HEAT_TIMES: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

/// Terms above `exact_cap` cells get their Green super trace from the factors:
/// the inverse of a Kronecker product is the Kronecker product of inverses, and
/// the super trace of that is the product of the factors' super traces.
pub fn mckean_singer(e: &RingElement, exact_cap: usize) -> Result<McKeanSinger> {
    let chi = euler_characteristic(e);
    let mut heat = vec![0.0; HEAT_TIMES.len()];
    let mut susy_deviation: f64 = 0.0;
    let mut green = BigInt::zero();
    for (a, t) in e.terms() {
        let bundle = operator_bundle(t);
        let (mut even, mut odd) = (Vec::new(), Vec::new());
        for (k, h) in bundle.blocks().iter().enumerate() {
            let ev = symmetric_eigenvalues(h.to_f64());
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for (i, &s) in HEAT_TIMES.iter().enumerate() {
                heat[i] += *a as f64 * sign * ev.iter().map(|l| (-s * l).exp()).sum::<f64>();
            }
            let nonzero = ev.into_iter().filter(|l| l.abs() > 1e-8);
            if k % 2 == 0 {
                even.extend(nonzero);
            } else {
                odd.extend(nonzero);
            }
        }
        even.sort_by(f64::total_cmp);
        odd.sort_by(f64::total_cmp);
        susy_deviation = susy_deviation.max(max_deviation(&even, &odd));
        let str_g = if t.cell_count() <= exact_cap {
            let gf = green_functions(&RingElement::from_term(1, t.clone()))?;
            gf.supertrace()
        } else {
            let mut p = BigInt::from(1);
            for f in t.factors() {
                let gf = green_functions(&RingElement::from_complex(f.clone()))?;
                p *= gf.supertrace();
            }
            p
        };
        green += str_g * a;
    }
    Ok(McKeanSinger {
        chi,
        heat: HEAT_TIMES.iter().copied().zip(heat).collect(),
        green_supertrace: green.to_string(),
        susy_deviation,
    })
}

/// Exact `Σ ω(x) g(x,x)` over the whole connection operator of an element.
pub fn green_supertrace(op: &ConnectionOperator) -> Result<BigInt> {
    let g = inverse_unimodular(op.matrix())?;
    Ok(g.diagonal().iter().zip(op.omegas()).map(|(d, w)| d * w).sum())
}
