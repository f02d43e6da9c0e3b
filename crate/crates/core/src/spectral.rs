//! Floating-point spectra and the spectral identities of the ring.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::graph::refine_complex;
use crate::linalg::{kronecker, IntMatrix};
use crate::operators::{operator_bundle, tagged_operator, term_connection_laplacian, OperatorTag};
use crate::ring::{ProductTerm, RingElement};

/// Default cap on the matrix size handed to the dense eigensolver.
pub const SPECTRUM_CAP: usize = 4000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    /// Ascending.
    pub values: Vec<f64>,
    pub operator_tag: OperatorTag,
    pub source: String,
}

impl Spectrum {
    /// `index,eigenvalue` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue\n");
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{i},{v:.12e}").unwrap();
        }
        out
    }
}

/// Eigenvalues of a dense symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues of an integer matrix that must be symmetric within `tol`.
pub fn eigenvalues(m: &IntMatrix, tol: f64) -> Result<Vec<f64>> {
    let dense = m.to_f64();
    if !dense.is_square() {
        return Err(Error::NotSquare { rows: dense.nrows(), cols: dense.ncols() });
    }
    let asym = (&dense - dense.transpose()).abs().max();
    if asym > tol {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(symmetric_eigenvalues(dense))
}

/// Spectrum of a tagged operator of an element; refuses summands above `cap`.
/// Each distinct term is diagonalized once and negated summands reuse its
/// spectrum with the sign flipped, so `σ(-G) = -σ(G)` holds exactly.
pub fn spectrum(e: &RingElement, tag: OperatorTag, cap: usize) -> Result<Spectrum> {
    let mut values = Vec::new();
    let mut cache: std::collections::BTreeMap<&ProductTerm, Vec<f64>> = Default::default();
    for (a, t) in e.terms() {
        let size = match tag {
            OperatorTag::Kirchhoff => t.basis().block(0).len(),
            _ => t.cell_count(),
        };
        if size > cap {
            return Err(Error::TooLarge { what: format!("{tag} operator"), size, cap });
        }
        if !cache.contains_key(t) {
            let (m, _) = tagged_operator(&RingElement::from_term(1, t.clone()), tag);
            cache.insert(t, eigenvalues(&m, 0.0)?);
        }
        for _ in 0..a.unsigned_abs() {
            values.extend(cache[t].iter().map(|x| if *a < 0 { -x } else { *x }));
        }
    }
    Ok(Spectrum { values: sorted(values), operator_tag: tag, source: e.to_string() })
}

/// Empirical distribution of a finite sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralMeasure {
    samples: Vec<f64>,
}

impl SpectralMeasure {
    pub fn new(mut samples: Vec<f64>) -> Self {
        samples.sort_by(f64::total_cmp);
        SpectralMeasure { samples }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.partition_point(|&s| s <= x) as f64 / self.samples.len() as f64
    }

    /// Kolmogorov–Smirnov distance, the sup of `|F - G|` over all sample points.
    pub fn ks_distance(&self, other: &SpectralMeasure) -> f64 {
        self.samples
            .iter()
            .chain(&other.samples)
            .map(|&x| (self.cdf(x) - other.cdf(x)).abs())
            .fold(0.0, f64::max)
    }
}

/// Largest deviation between two sorted multisets; infinite if the sizes differ.
pub fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn single_term(e: &RingElement) -> Result<&ProductTerm> {
    match e.terms() {
        [(1, t)] => Ok(t),
        _ => Err(Error::NotASingleTerm),
    }
}

fn dense_spectrum(m: &IntMatrix) -> Vec<f64> {
    symmetric_eigenvalues(m.to_f64())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralCheck {
    pub deviation: f64,
    pub tol: f64,
    pub passed: bool,
    pub size: usize,
}

impl SpectralCheck {
    fn new(deviation: f64, tol: f64, size: usize) -> Self {
        SpectralCheck { deviation, tol, passed: deviation < tol, size }
    }
}

/// `σ(L(a×b))` against the products `λμ`, all spectra computed densely.
pub fn check_spectral_multiplicativity(a: &RingElement, b: &RingElement, tol: f64) -> Result<SpectralCheck> {
    let (ta, tb) = (single_term(a)?, single_term(b)?);
    let la = dense_spectrum(&term_connection_laplacian(ta));
    let lb = dense_spectrum(&term_connection_laplacian(tb));
    let products = sorted(la.iter().flat_map(|x| lb.iter().map(move |y| x * y)).collect());
    let lab = dense_spectrum(&term_connection_laplacian(&ta.times(tb)));
    Ok(SpectralCheck::new(max_deviation(&products, &lab), tol, lab.len()))
}

/// Dirac version `σ(|D(a×b)|) = {√(λ²+μ²)}` and Hodge version
/// `σ(H(a×b)) = {λ+μ}`; the reported deviation is the larger of the two.
pub fn check_spectral_pythagoras(a: &RingElement, b: &RingElement, tol: f64) -> Result<(SpectralCheck, SpectralCheck)> {
    let (ta, tb) = (single_term(a)?, single_term(b)?);
    let (ba, bb) = (operator_bundle(ta), operator_bundle(tb));
    let prod = operator_bundle(&ta.times(tb));
    let da = dense_spectrum(ba.dirac());
    let db = dense_spectrum(bb.dirac());
    let pyth = sorted(da.iter().flat_map(|x| db.iter().map(move |y| (x * x + y * y).sqrt())).collect());
    let dab = sorted(dense_spectrum(prod.dirac()).into_iter().map(f64::abs).collect());
    let ha = dense_spectrum(ba.hodge());
    let hb = dense_spectrum(bb.hodge());
    let sums = sorted(ha.iter().flat_map(|x| hb.iter().map(move |y| x + y)).collect());
    let hab = dense_spectrum(prod.hodge());
    Ok((
        SpectralCheck::new(max_deviation(&pyth, &dab), tol, dab.len()),
        SpectralCheck::new(max_deviation(&sums, &hab), tol, hab.len()),
    ))
}

/// Connection spectrum of an element. Multi-factor terms are assembled from
/// the factor spectra by multiplicativity, so large tori stay cheap; the
/// identity itself is checked by [`check_spectral_multiplicativity`].
pub fn connection_spectrum(e: &RingElement) -> Vec<f64> {
    let mut out = Vec::new();
    for (a, t) in e.terms() {
        let mut s = vec![1.0];
        for f in t.factors() {
            let sf = dense_spectrum(&term_connection_laplacian(&ProductTerm::single(f.clone())));
            s = s.iter().flat_map(|x| sf.iter().map(move |y| x * y)).collect();
        }
        for _ in 0..a.unsigned_abs() {
            out.extend(s.iter().map(|x| x * a.signum() as f64));
        }
    }
    sorted(out)
}

/// `min |λ|` over the connection spectrum.
pub fn mass_gap(e: &RingElement) -> f64 {
    connection_spectrum(e).into_iter().map(f64::abs).fold(f64::INFINITY, f64::min)
}

/// One refinement level of a limit experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitLevel {
    pub level: usize,
    pub cells: usize,
    pub f_vector: Vec<usize>,
    /// Cell counts predicted from the previous level by the Stirling recursion.
    pub predicted_f_vector: Option<Vec<usize>>,
    pub ks_to_previous: Option<f64>,
    pub ks_to_limit: Option<f64>,
    #[serde(skip)]
    pub measure: SpectralMeasure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitExperiment {
    pub operator_tag: OperatorTag,
    pub levels: Vec<LimitLevel>,
}

impl LimitExperiment {
    pub fn ks_sequence_decreasing(&self) -> bool {
        let ks: Vec<f64> = self.levels.iter().filter_map(|l| l.ks_to_previous).collect();
        ks.windows(2).all(|w| w[1] < w[0])
    }
}

/// Number of grid points used to sample the one-dimensional limit law.
pub const LIMIT_GRID: usize = 20_000;

/// Samples of `F(x) = 4 sin²(πx/2)` on a uniform midpoint grid of `[0, 1]`.
pub fn limit_law_samples(points: usize) -> SpectralMeasure {
    SpectralMeasure::new(
        (0..points)
            .map(|j| {
                let x = (j as f64 + 0.5) / points as f64;
                4.0 * (std::f64::consts::FRAC_PI_2 * x).sin().powi(2)
            })
            .collect(),
    )
}

fn stirling2(n: usize, k: usize) -> u128 {
    let mut s = vec![vec![0u128; k + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            s[i][j] = j as u128 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[n][k]
}

/// f-vector of the Barycentric refinement: `f'_k = Σ_j (k+1)! S(j+1, k+1) f_j`.
pub fn refined_f_vector(f: &[usize]) -> Vec<usize> {
    (0..f.len())
        .map(|k| {
            let fact: u128 = (1..=k as u128 + 1).product();
            (k..f.len()).map(|j| (fact * stirling2(j + 1, k + 1) * f[j] as u128) as usize).sum()
        })
        .collect()
}

fn level_spectrum(c: &SimplicialComplex, tag: OperatorTag) -> Vec<f64> {
    let e = RingElement::from_complex(c.clone());
    let (m, _) = tagged_operator(&e, tag);
    dense_spectrum(&m)
}

/// Refines `g` `levels` times and compares the densities of states. For
/// one-dimensional complexes with the Kirchhoff operator each level is also
/// compared with the limit law.
pub fn barycentric_limit_experiment(
    g: &SimplicialComplex,
    levels: usize,
    tag: OperatorTag,
    cap: usize,
) -> Result<LimitExperiment> {
    let mut complexes = vec![g.clone()];
    for _ in 0..levels {
        let next = refine_complex(complexes.last().unwrap());
        if next.len() > cap {
            return Err(Error::TooLarge { what: "refinement level".into(), size: next.len(), cap });
        }
        complexes.push(next);
    }
    let spectra: Vec<Vec<f64>> = complexes.par_iter().map(|c| level_spectrum(c, tag)).collect();
    let limit = (g.dim() == 1 && tag == OperatorTag::Kirchhoff).then(|| limit_law_samples(LIMIT_GRID));
    let mut out: Vec<LimitLevel> = Vec::new();
    for (i, (c, s)) in complexes.iter().zip(spectra).enumerate() {
        let measure = SpectralMeasure::new(s);
        let prev = out.last();
        out.push(LimitLevel {
            level: i,
            cells: c.len(),
            f_vector: c.f_vector(),
            predicted_f_vector: prev.map(|p| refined_f_vector(&p.f_vector)),
            ks_to_previous: prev.map(|p| p.measure.ks_distance(&measure)),
            ks_to_limit: limit.as_ref().map(|l| l.ks_distance(&measure)),
            measure,
        });
    }
    Ok(LimitExperiment { operator_tag: tag, levels: out })
}

/// Hodge spectrum of the torus `C_n^ν` with the i-th factor's Hodge operator
/// multiplied by `signature[i]`: all sums `Σ s_i λ_{k_i}` over the factor
/// spectrum of `C_n`.
pub fn lorentz_hodge_spectrum(n: usize, nu: usize, signature: &[i64]) -> Result<Spectrum> {
    if signature.len() != nu || signature.iter().any(|s| s.abs() != 1) {
        return Err(Error::BadSignature(format!("{signature:?} for ν = {nu}")));
    }
    let c = crate::generators::generate(&crate::generators::GeneratorSpec::Cycle(n))?;
    let h = dense_spectrum(operator_bundle(&ProductTerm::single(c)).hodge());
    let mut values = vec![0.0];
    for &s in signature {
        values = values.iter().flat_map(|x| h.iter().map(move |y| x + s as f64 * y)).collect();
    }
    let sig: String = signature.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
    Ok(Spectrum { values: sorted(values), operator_tag: OperatorTag::H, source: format!("C{n}^{nu} ({sig})") })
}

/// The signed Kronecker sum `Σ s_i I⊗…⊗H⊗…⊗I` as an explicit matrix, for
/// cross-checking [`lorentz_hodge_spectrum`] on small tori.
pub fn lorentz_hodge_matrix(n: usize, signature: &[i64]) -> Result<IntMatrix> {
    let c = crate::generators::generate(&crate::generators::GeneratorSpec::Cycle(n))?;
    let h = operator_bundle(&ProductTerm::single(c)).hodge().clone();
    let size = h.rows();
    let nu = signature.len();
    let mut total = IntMatrix::zeros(size.pow(nu as u32), size.pow(nu as u32));
    for (i, &s) in signature.iter().enumerate() {
        let mut m = IntMatrix::identity(1);
        for j in 0..nu {
            m = kronecker(&m, &if i == j { h.scale(s) } else { IntMatrix::identity(size) });
        }
        total = total.add(&m)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_ring_expression;

    fn el(s: &str) -> RingElement {
        parse_ring_expression(s).unwrap()
    }

    #[test]
    fn kirchhoff_of_cycle_is_the_circulant_spectrum() {
        for n in [4usize, 7, 12] {
            let s = spectrum(&el(&format!("C{n}")), OperatorTag::Kirchhoff, SPECTRUM_CAP).unwrap();
            let expected = sorted((0..n).map(|k| 4.0 * (std::f64::consts::PI * k as f64 / n as f64).sin().powi(2)).collect());
            assert!(max_deviation(&s.values, &expected) < 1e-10);
        }
        assert_eq!(spectrum(&el("1"), OperatorTag::L, SPECTRUM_CAP).unwrap().values, vec![1.0]);
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![0, 0]]);
        assert!(matches!(eigenvalues(&m, 1e-12), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn multiplicativity_and_pythagoras() {
        let c = check_spectral_multiplicativity(&el("C4"), &el("K3"), 1e-8).unwrap();
        assert!(c.passed, "{c:?}");
        let (d, h) = check_spectral_pythagoras(&el("L2"), &el("L2"), 1e-8).unwrap();
        assert!(d.passed && h.passed, "{d:?} {h:?}");
        assert_eq!(check_spectral_multiplicativity(&el("1"), &el("C5"), 1e-10).unwrap().deviation, 0.0);
    }

    #[test]
    fn ks_of_identical_samples_is_zero() {
        let a = SpectralMeasure::new(vec![3.0, 1.0, 2.0]);
        assert_eq!(a.ks_distance(&a.clone()), 0.0);
        assert_eq!(a.cdf(0.5), 0.0);
        assert_eq!(a.cdf(2.0), 2.0 / 3.0);
        let b = SpectralMeasure::new(vec![10.0]);
        assert_eq!(a.ks_distance(&b), 1.0);
    }

    #[test]
    fn stirling_recursion_for_a_triangle() {
        // refinement of K3: 7 vertices, 12 edges, 6 triangles
        assert_eq!(refined_f_vector(&[3, 3, 1]), vec![7, 12, 6]);
    }

    #[test]
    fn lorentz_matrix_agrees_with_signed_sums() {
        let s = lorentz_hodge_spectrum(4, 2, &[1, -1]).unwrap();
        let m = lorentz_hodge_matrix(4, &[1, -1]).unwrap();
        assert!(max_deviation(&s.values, &dense_spectrum(&m)) < 1e-10);
        assert!(matches!(lorentz_hodge_spectrum(4, 2, &[1]), Err(Error::BadSignature(_))));
        let plus = lorentz_hodge_spectrum(5, 2, &[1, 1]).unwrap();
        assert!(plus.values[0] > -1e-12);
    }

    #[test]
    fn negated_element_has_negated_connection_spectrum() {
        let a = spectrum(&el("K3"), OperatorTag::L, SPECTRUM_CAP).unwrap().values;
        let b = spectrum(&el("-K3"), OperatorTag::L, SPECTRUM_CAP).unwrap().values;
        let neg = sorted(a.iter().map(|x| -x).collect());
        assert_eq!(b, neg);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(spectrum(&el("C10"), OperatorTag::L, 5), Err(Error::TooLarge { .. })));
    }
}
