//! Isospectral Lax deformation of the Dirac operator, and Newton continuation
//! for `L u + ε V(u) = g`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inverse_unimodular, IntMatrix};
use crate::operators::OperatorBundle;

type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Debug)]
pub struct LaxOptions {
    pub beta: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Largest relative spectral drift tolerated before `StepTooLarge`.
    pub drift_bound: f64,
}

impl Default for LaxOptions {
    fn default() -> Self {
        LaxOptions { beta: 0.0, t_end: 1.0, dt: 0.01, drift_bound: 1e-6 }
    }
}

/// `D_t` together with the grading used to split it.
#[derive(Clone, Debug)]
pub struct LaxState {
    pub t: f64,
    pub dirac: CMatrix,
    dims: Vec<usize>,
}

impl LaxState {
    /// `(d_t, b_t)`: the block raising degree by one and the block-diagonal part.
    pub fn split(&self) -> (CMatrix, CMatrix) {
        split(&self.dirac, &self.dims)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.dirac - self.dirac.adjoint()).camax() <= tol
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.dirac)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaxDiagnostics {
    pub t: f64,
    /// `max |λ_i(t) - λ_i(0)| / max(1, max |λ_i(0)|)`.
    pub spectral_drift: f64,
    /// Frobenius norm of `d_t`.
    pub d_norm: f64,
    /// Frobenius norm of `d_t d_t`.
    pub d2_residual: f64,
    /// Largest entry of `D_t² - D_0²`. Recorded, never asserted.
    pub hodge_drift: f64,
}

#[derive(Clone, Debug)]
pub struct LaxTrajectory {
    pub initial: LaxState,
    pub last: LaxState,
    pub diagnostics: Vec<LaxDiagnostics>,
}

impl LaxTrajectory {
    pub fn max_drift(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.spectral_drift).fold(0.0, f64::max)
    }

    pub fn max_d2_residual(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.d2_residual).fold(0.0, f64::max)
    }

    /// True when `‖d_t‖` never grows by more than `slack` from one step to the next.
    pub fn d_norm_non_increasing(&self, slack: f64) -> bool {
        self.diagnostics.windows(2).all(|w| w[1].d_norm <= w[0].d_norm + slack)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,spectral_drift,d_norm,d2_residual\n");
        for d in &self.diagnostics {
            writeln!(s, "{},{:.6e},{:.12e},{:.6e}", d.t, d.spectral_drift, d.d_norm, d.d2_residual).unwrap();
        }
        s
    }
}

fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn split(m: &CMatrix, dims: &[usize]) -> (CMatrix, CMatrix) {
    let n = m.nrows();
    let d = CMatrix::from_fn(n, n, |i, j| if dims[i] == dims[j] + 1 { m[(i, j)] } else { Complex64::ZERO });
    let b = CMatrix::from_fn(n, n, |i, j| if dims[i] == dims[j] { m[(i, j)] } else { Complex64::ZERO });
    (d, b)
}

fn lax_rhs(m: &CMatrix, dims: &[usize], beta: f64) -> CMatrix {
    let (d, b) = split(m, dims);
    let mut big_b = &d - d.adjoint();
    if beta != 0.0 {
        big_b += b * Complex64::new(0.0, beta);
    }
    &big_b * m - m * &big_b
}

fn diagnostics(state: &LaxState, lambda0: &[f64], hodge0: &CMatrix) -> LaxDiagnostics {
    let (d, _) = state.split();
    let scale = lambda0.iter().fold(1.0f64, |a, l| a.max(l.abs()));
    let drift = state
        .eigenvalues()
        .iter()
        .zip(lambda0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale;
    let hodge = &state.dirac * &state.dirac;
    LaxDiagnostics {
        t: state.t,
        spectral_drift: drift,
        d_norm: d.norm(),
        d2_residual: (&d * &d).norm(),
        hodge_drift: (hodge - hodge0).camax(),
    }
}

/// Integrates `D' = [B, D]` with `B = d - d* + iβ b` by classical RK4 from
/// `D_0 = d + dᵀ`, splitting `D_t` by position in the grading at every stage.
pub fn lax_flow(bundle: &OperatorBundle, opts: &LaxOptions) -> Result<LaxTrajectory> {
    if !(opts.dt > 0.0) || !opts.t_end.is_finite() || opts.t_end < 0.0 {
        return Err(Error::BadParameter(format!("need dt > 0 and t_end >= 0, got dt={} t_end={}", opts.dt, opts.t_end)));
    }
    let dims = bundle.basis().dims().to_vec();
    let d0 = bundle.dirac().to_f64().map(|x| Complex64::new(x, 0.0));
    let initial = LaxState { t: 0.0, dirac: d0.clone(), dims: dims.clone() };
    let lambda0 = initial.eigenvalues();
    let hodge0 = &d0 * &d0;
    let steps = (opts.t_end / opts.dt).round() as usize;
    let mut m = d0;
    let mut diags = vec![diagnostics(&initial, &lambda0, &hodge0)];
    let h = opts.dt;
    for s in 1..=steps {
        let k1 = lax_rhs(&m, &dims, opts.beta);
        let k2 = lax_rhs(&(&m + &k1 * Complex64::from(h / 2.0)), &dims, opts.beta);
        let k3 = lax_rhs(&(&m + &k2 * Complex64::from(h / 2.0)), &dims, opts.beta);
        let k4 = lax_rhs(&(&m + &k3 * Complex64::from(h)), &dims, opts.beta);
        m += (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4) * Complex64::from(h / 6.0);
        let state = LaxState { t: s as f64 * h, dirac: m.clone(), dims: dims.clone() };
        let diag = diagnostics(&state, &lambda0, &hodge0);
        if diag.spectral_drift > opts.drift_bound {
            return Err(Error::StepTooLarge { t: diag.t, drift: diag.spectral_drift });
        }
        diags.push(diag);
    }
    let last = LaxState { t: steps as f64 * h, dirac: m, dims };
    Ok(LaxTrajectory { initial, last, diagnostics: diags })
}

/// A scalar nonlinearity applied entrywise, with its derivative and a global
/// Lipschitz constant.
#[derive(Clone, Copy)]
pub struct Nonlinearity {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
    pub df: fn(f64) -> f64,
    pub lipschitz: f64,
}

impl Nonlinearity {
    pub fn sin() -> Self {
        Nonlinearity { name: "sin", f: f64::sin, df: f64::cos, lipschitz: 1.0 }
    }

    pub fn tanh() -> Self {
        Nonlinearity { name: "tanh", f: f64::tanh, df: |x| 1.0 - x.tanh().powi(2), lipschitz: 1.0 }
    }
}

impl std::fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Nonlinearity({}, Lip={})", self.name, self.lipschitz)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuationResult {
    pub u: Vec<f64>,
    pub residual: f64,
    pub steps: usize,
    /// `ε Lip(V) sqrt(‖L⁻¹‖₁ ‖L⁻¹‖∞)`, which bounds `ε Lip(V) ‖L⁻¹‖₂`.
    pub contraction_bound: f64,
    /// `‖L⁻¹‖∞`.
    pub green_inf_norm: f64,
}

pub const NEWTON_MAX_ITER: usize = 50;

/// Solves `L u + ε V(u) = rhs` by Newton's method from `u₀ = L⁻¹ rhs`. The
/// map `u ↦ L⁻¹(rhs - ε V(u))` must be a contraction, which is checked
/// before iterating from the exact inverse of `L`.
pub fn newton_continuation(
    l: &IntMatrix,
    v: Nonlinearity,
    rhs: &[f64],
    eps: f64,
    tol: f64,
) -> Result<ContinuationResult> {
    if !l.is_square() || l.rows() != rhs.len() {
        return Err(Error::DimensionMismatch(format!("{}x{} operator, rhs of length {}", l.rows(), l.cols(), rhs.len())));
    }
    let g = match inverse_unimodular(l) {
        Ok(g) => g,
        Err(Error::NotUnimodular { .. }) => {
            return Err(Error::ContractionBoundViolated { bound: f64::INFINITY });
        }
        Err(e) => return Err(e),
    };
    let one = g.norm_one().to_f64().unwrap_or(f64::INFINITY);
    let inf = g.norm_inf().to_f64().unwrap_or(f64::INFINITY);
    let bound = eps.abs() * v.lipschitz * (one * inf).sqrt();
    if bound >= 1.0 {
        return Err(Error::ContractionBoundViolated { bound });
    }
    let u0 = g.mul_vec_f64(rhs);
    if eps == 0.0 {
        return Ok(ContinuationResult { u: u0, residual: 0.0, steps: 0, contraction_bound: bound, green_inf_norm: inf });
    }
    let lf = l.to_f64();
    let b = DVector::from_column_slice(rhs);
    let mut u = DVector::from_vec(u0);
    let residual_of = |u: &DVector<f64>| &lf * u + u.map(v.f) * eps - &b;
    let mut r = residual_of(&u);
    for step in 1..=NEWTON_MAX_ITER {
        let mut jac = lf.clone();
        for i in 0..u.len() {
            jac[(i, i)] += eps * (v.df)(u[i]);
        }
        let delta = jac.lu().solve(&r).ok_or(Error::NoConvergence { iterations: step, residual: r.amax() })?;
        u -= delta;
        r = residual_of(&u);
        if r.amax() < tol {
            return Ok(ContinuationResult {
                u: u.iter().copied().collect(),
                residual: r.amax(),
                steps: step,
                contraction_bound: bound,
                green_inf_norm: inf,
            });
        }
    }
    Err(Error::NoConvergence { iterations: NEWTON_MAX_ITER, residual: r.amax() })
}
