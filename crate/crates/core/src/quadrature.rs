//! Quadrature rules: adaptive tanh-sinh on a finite interval and generalized
//! Gauss-Laguerre rules for the weight `s^alpha e^{-s}`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::ln_gamma_real;
use crate::sum::CompensatedSum;

/// Outcome of an adaptive rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Settings for [`tanh_sinh`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TanhSinh {
    /// Points on the coarsest level.
    pub initial_nodes: usize,
    pub max_levels: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for TanhSinh {
    fn default() -> Self {
        Self {
            initial_nodes: 32,
            max_levels: 10,
            rel_tol: 1e-13,
            abs_tol: 1e-15,
        }
    }
}

const TAU_MAX: f64 = 6.5;

/// Node and weight of the map `y = L / (1 + e^{-pi sinh tau})`, computed so
/// that points near either endpoint keep full relative accuracy.
#[inline]
fn node(len: f64, tau: f64) -> (f64, f64) {
    let u = std::f64::consts::PI * tau.sinh();
    let scale = len * std::f64::consts::PI * tau.cosh();
    if u >= 0.0 {
        let e = (-u).exp();
        (len / (1.0 + e), scale * e / ((1.0 + e) * (1.0 + e)))
    } else {
        let e = u.exp();
        (len * e / (1.0 + e), scale * e / ((1.0 + e) * (1.0 + e)))
    }
}

/// `int_0^len f(y) dy` by the double-exponential rule, halving the step until
/// two successive levels agree to the tolerance.
///
/// `f` may be singular (integrably) at `y = 0`; it is never evaluated at the endpoints.
pub fn tanh_sinh<F>(f: F, len: f64, cfg: &TanhSinh) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(len > 0.0 && len.is_finite()) {
        return Err(Error::invalid("integration length must be positive"));
    }
    let n0 = cfg.initial_nodes.max(4);
    let mut h = 2.0 * TAU_MAX / n0 as f64;
    let mut evals = 0;
    let eval = |tau: f64, evals: &mut usize| -> Complex64 {
        let (y, w) = node(len, tau);
        if y <= 0.0 || y >= len || w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        *evals += 1;
        let v = f(y) * w;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(f64::NAN, f64::NAN)
        }
    };
    let mut acc = CompensatedSum::new();
    for k in 0..=n0 {
        let tau = -TAU_MAX + k as f64 * h;
        acc.add(eval(tau, &mut evals));
    }
    let mut prev = acc.value() * h;
    let mut prev_diff = f64::INFINITY;
    for _level in 1..=cfg.max_levels {
        let n_new = (2.0 * TAU_MAX / h).round() as usize;
        for k in 0..n_new {
            let tau = -TAU_MAX + (k as f64 + 0.5) * h;
            acc.add(eval(tau, &mut evals));
        }
        h /= 2.0;
        let cur = acc.value() * h;
        if !(cur.re.is_finite() && cur.im.is_finite()) {
            return Err(Error::QuadratureFailure(
                "non-finite integrand value".into(),
            ));
        }
        let diff = (cur - prev).norm();
        let tol = cfg.abs_tol.max(cfg.rel_tol * cur.norm());
        // quadratic convergence: the next correction is about diff^2 / prev_diff
        if diff <= tol
            || (prev_diff.is_finite()
                && diff * diff / prev_diff <= tol
                && diff < 1e-3 * cur.norm().max(cfg.abs_tol))
        {
            return Ok(QuadResult {
                value: cur,
                error_estimate: diff.min(if prev_diff.is_finite() {
                    diff * diff / prev_diff
                } else {
                    diff
                }),
                evaluations: evals,
            });
        }
        prev = cur;
        prev_diff = diff;
    }
    let tol = cfg.abs_tol.max(cfg.rel_tol * prev.norm());
    if prev_diff <= 10.0 * tol {
        return Ok(QuadResult {
            value: prev,
            error_estimate: prev_diff,
            evaluations: evals,
        });
    }
    Err(Error::QuadratureFailure(format!(
        "tanh-sinh refinements still differ by {prev_diff:.3e} (tolerance {tol:.3e})"
    )))
}

/// Nodes and weights of the `n`-point rule for `int_0^inf s^alpha e^{-s} g(s) ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerre {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    /// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
    /// generalized Laguerre recurrence, weights the squared first eigenvector
    /// components times `Gamma(alpha + 1)`.
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("Gauss-Laguerre needs at least one node"));
        }
        if !(alpha > -1.0) {
            return Err(Error::invalid("Laguerre exponent alpha must exceed -1"));
        }
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let fi = i as f64;
            jac[(i, i)] = 2.0 * fi + alpha + 1.0;
            if i + 1 < n {
                let off = ((fi + 1.0) * (fi + 1.0 + alpha)).sqrt();
                jac[(i, i + 1)] = off;
                jac[(i + 1, i)] = off;
            }
        }
        let eig = SymmetricEigen::new(jac);
        let mu0 = ln_gamma_real(alpha + 1.0).exp();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|k| (eig.eigenvalues[k], mu0 * eig.eigenvectors[(0, k)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.iter().any(|p| !(p.0 > 0.0 && p.1.is_finite())) {
            return Err(Error::NonConvergence {
                what: "Gauss-Laguerre eigenvalues",
                limit: n,
            });
        }
        Ok(Self {
            alpha,
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn integrate<F>(&self, g: F) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let mut acc = CompensatedSum::new();
        for (&s, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * g(s));
        }
        acc.value()
    }
}

/// `int_0^inf y^chi e^{-c y^2} G(y) dy` for `c > 0` by splitting `G` into even
/// and odd parts and applying Gauss-Laguerre rules in `s = c y^2`.
pub fn half_range_gauss<F>(chi: f64, c: f64, g: F, n: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(c > 0.0) {
        return Err(Error::invalid("Gaussian rate must be positive"));
    }
    let even = GaussLaguerre::new(n, (chi - 1.0) / 2.0)?;
    let odd = GaussLaguerre::new(n, chi / 2.0)?;
    let ev = even.integrate(|s| {
        let y = (s / c).sqrt();
        0.5 * (g(y) + g(-y))
    });
    let od = odd.integrate(|s| {
        let y = (s / c).sqrt();
        0.5 * (g(y) - g(-y)) / y
    });
    Ok(0.5 * c.powf(-(chi + 1.0) / 2.0) * ev + 0.5 * c.powf(-(chi + 2.0) / 2.0) * od)
}
