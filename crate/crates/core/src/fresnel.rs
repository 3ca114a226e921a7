//! Regularized Fresnel-type integrals `int_0^inf x^chi e^{-i phi x^2} G(x) dx`.
//!
//! The contour route rotates the half-line onto the ray where the Gaussian
//! factor decays, `x = e^{i(theta - sign(phi) pi/4)} y`. The damping route
//! evaluates the absolutely convergent integrals with an extra `e^{-eps x^2}`
//! and extrapolates to `eps = 0`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{half_range_gauss, tanh_sinh, TanhSinh};

pub type AnalyticFactor = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

const TAIL_TOLERANCE: f64 = 1e-14;
const MAX_RADIUS: f64 = 1e4;

/// Declared bound `|G(z)| <= constant * exp(rate * |z|^order)` on the whole plane.
///
/// An order at most one satisfies every growth hypothesis of order in `(1, 2]`
/// with an arbitrarily small budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Growth {
    pub order: f64,
    pub rate: f64,
    pub constant: f64,
}

impl Growth {
    pub fn bounded(constant: f64) -> Self {
        Self {
            order: 0.0,
            rate: 0.0,
            constant,
        }
    }

    /// Exponential type `rate`, as for `e^{i lambda z}` with `rate = |lambda|`.
    pub fn exponential_type(rate: f64, constant: f64) -> Self {
        Self {
            order: 1.0,
            rate,
            constant,
        }
    }

    pub fn gaussian(rate: f64, constant: f64) -> Self {
        Self {
            order: 2.0,
            rate,
            constant,
        }
    }

    /// Polynomial of the given coefficient moduli, folded into
    /// `sum |c_k| r^k <= C e^{r}` with `C = sum |c_k| k^k e^{-k}`.
    pub fn polynomial(abs_coeffs: &[f64]) -> Self {
        let c = abs_coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                if k == 0 {
                    a
                } else {
                    let kf = k as f64;
                    a * (kf * kf.ln() - kf).exp()
                }
            })
            .sum::<f64>();
        Self::exponential_type(1.0, c.max(f64::MIN_POSITIVE))
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=2.0).contains(&self.order) {
            return Err(Error::invalid("growth order must lie in [0, 2]"));
        }
        if !(self.rate >= 0.0 && self.rate.is_finite()) {
            return Err(Error::invalid("growth rate must be a nonnegative real"));
        }
        if !(self.constant > 0.0 && self.constant.is_finite()) {
            return Err(Error::invalid("growth constant must be positive"));
        }
        Ok(())
    }

    pub fn ln_bound(&self, r: f64) -> f64 {
        self.constant.ln() + self.rate * r.powf(self.order)
    }
}

/// Integrand data `(chi, phi, G)`.
#[derive(Clone)]
pub struct FresnelIntegrand {
    pub chi: f64,
    pub phase: f64,
    pub analytic_factor: AnalyticFactor,
    pub growth: Growth,
    pub description: String,
}

impl fmt::Debug for FresnelIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FresnelIntegrand")
            .field("chi", &self.chi)
            .field("phase", &self.phase)
            .field("growth", &self.growth)
            .field("description", &self.description)
            .finish()
    }
}

const AUDIT_ANGLES: usize = 32;
const AUDIT_RADII: [f64; 8] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

impl FresnelIntegrand {
    /// Validates the parameters and audits the declared growth of `G` on
    /// rays around the origin.
    pub fn new<G>(
        chi: f64,
        phase: f64,
        g: G,
        growth: Growth,
        description: impl Into<String>,
    ) -> Result<Self>
    where
        G: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        let f = Self {
            chi,
            phase,
            analytic_factor: Arc::new(g),
            growth,
            description: description.into(),
        };
        f.validate()?;
        f.audit_growth()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.chi > -1.0) || !self.chi.is_finite() {
            return Err(Error::invalid("chi must exceed −1"));
        }
        if self.phase == 0.0 || !self.phase.is_finite() {
            return Err(Error::invalid("phase must be a nonzero real"));
        }
        self.growth.validate()
    }

    /// Samples `G` on 32 rays and checks the declared bound.
    pub fn audit_growth(&self) -> Result<()> {
        for k in 0..AUDIT_ANGLES {
            let ang = 2.0 * PI * k as f64 / AUDIT_ANGLES as f64;
            for &r in &AUDIT_RADII {
                if self.growth.ln_bound(r) > 600.0 {
                    break;
                }
                let z = Complex64::from_polar(r, ang);
                let v = (self.analytic_factor)(z);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::GrowthViolation(format!(
                        "{}: G is not finite at {z}",
                        self.description
                    )));
                }
                let lb = self.growth.ln_bound(r);
                if v.norm() > lb.exp() * (1.0 + 1e-8) + 1e-300 && v.norm().ln() > lb + 1e-8 {
                    return Err(Error::GrowthViolation(format!(
                        "{}: |G({z})| = {:.3e} exceeds the declared bound {:.3e}",
                        self.description,
                        v.norm(),
                        lb.exp()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn eval_factor(&self, z: Complex64) -> Complex64 {
        (self.analytic_factor)(z)
    }

    /// Same data with `G(-z)` in place of `G(z)`.
    pub fn reflected(&self) -> Self {
        let g = self.analytic_factor.clone();
        Self {
            chi: self.chi,
            phase: self.phase,
            analytic_factor: Arc::new(move |z| g(-z)),
            growth: self.growth,
            description: format!("{} (reflected)", self.description),
        }
    }

    /// `(chi, phi s^2, G(s .))`, whose value is the original divided by `s^{chi+1}`.
    pub fn rescaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::invalid("scale must be positive"));
        }
        let g = self.analytic_factor.clone();
        Ok(Self {
            chi: self.chi,
            phase: self.phase * s * s,
            analytic_factor: Arc::new(move |z| g(z * s)),
            growth: Growth {
                rate: self.growth.rate * s.powf(self.growth.order),
                ..self.growth
            },
            description: format!("{} (scaled by {s})", self.description),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    GeneralizedGauss,
    AdaptiveTanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub ray_angle_offset: f64,
    pub nodes: usize,
    pub scheme: Scheme,
    /// Chosen from the growth bound when absent.
    pub truncation_radius: Option<f64>,
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            ray_angle_offset: 0.0,
            nodes: 32,
            scheme: Scheme::AdaptiveTanhSinh,
            truncation_radius: None,
            tolerance: 1e-13,
        }
    }
}

impl QuadratureConfig {
    pub fn with_angle(theta: f64) -> Self {
        Self {
            ray_angle_offset: theta,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ray_angle_offset.abs() < FRAC_PI_4) {
            return Err(Error::invalid(
                "ray angle offset must satisfy |theta| < pi/4",
            ));
        }
        if self.nodes < 16 {
            return Err(Error::invalid("at least 16 quadrature nodes are required"));
        }
        if let Some(r) = self.truncation_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::invalid("truncation radius must be positive"));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        Ok(())
    }

    fn tanh_sinh(&self) -> TanhSinh {
        TanhSinh {
            initial_nodes: self.nodes,
            rel_tol: self.tolerance,
            ..Default::default()
        }
    }
}

/// Radius beyond which `int_R^inf y^chi e^{-a y^2} |G(m e^{i.} y)| dy` is below the
/// tail tolerance. Uses the declared bound when it decays, otherwise samples
/// `magnitude` along the ray when the bound decays too slowly.
fn truncation_radius<H>(chi: f64, a: f64, growth: &Growth, m: f64, magnitude: H) -> Result<f64>
where
    H: Fn(f64) -> f64,
{
    let q = growth.order;
    let bm = growth.rate * m.powf(q);
    let decays = q < 2.0 || bm < 0.75 * a;
    if decays {
        let target = TAIL_TOLERANCE.ln();
        let mut y: f64 = 1.0;
        while y < MAX_RADIUS {
            let lnb = chi * y.ln() + growth.constant.ln() - a * y * y + bm * y.powf(q);
            let kappa = 2.0 * a * y - q * bm * y.powf(q - 1.0) - chi / y;
            if kappa > 0.0 && lnb - kappa.ln() < target {
                return Ok(y);
            }
            y += 0.125;
        }
    }
    let step = 0.25;
    let mut quiet = 0;
    let mut y = step;
    while y < 1e3 {
        let v = magnitude(y);
        if !v.is_finite() {
            return Err(Error::GrowthViolation(
                "integrand is not finite along the ray".into(),
            ));
        }
        if v < 1e-17 {
            quiet += 1;
            if quiet >= 8 && quiet as f64 * step >= 0.5 * y {
                return Ok(y);
            }
        } else {
            quiet = 0;
        }
        y += step;
    }
    Err(Error::GrowthViolation(
        "integrand does not decay along the rotated ray".into(),
    ))
}

/// Regularized `int_0^inf x^chi e^{-i phi x^2} G(x) dx` along the rotated ray.
pub fn regularize_halfline(f: &FresnelIntegrand, q: &QuadratureConfig) -> Result<Complex64> {
    f.validate()?;
    q.validate()?;
    let theta = q.ray_angle_offset;
    let sigma = f.phase.signum();
    let beta = theta - sigma * FRAC_PI_4;
    let omega = Complex64::from_polar(1.0, beta);
    let pref = Complex64::from_polar(1.0, (f.chi + 1.0) * beta);
    let rate = Complex64::from_polar(f.phase.abs(), 2.0 * theta);
    let chi = f.chi;
    let g = &f.analytic_factor;
    let h = |y: f64| y.powf(chi) * (-rate * y * y).exp() * g(omega * y);
    match q.scheme {
        Scheme::AdaptiveTanhSinh => {
            let r = match q.truncation_radius {
                Some(r) => r,
                None => truncation_radius(chi, rate.re, &f.growth, 1.0, |y| h(y).norm())?,
            };
            let res = tanh_sinh(h, r, &q.tanh_sinh())?;
            Ok(pref * res.value)
        }
        Scheme::GeneralizedGauss => {
            if theta != 0.0 {
                return Err(Error::invalid(
                    "the generalized Gauss scheme integrates along the unrotated ray only",
                ));
            }
            let c = f.phase.abs();
            let gg = |y: f64| g(omega * y);
            let coarse = half_range_gauss(chi, c, gg, q.nodes)?;
            let fine = half_range_gauss(chi, c, gg, q.nodes + q.nodes / 2)?;
            let diff = (fine - coarse).norm();
            let tol = (q.tolerance * 1e3 * fine.norm()).max(1e-14);
            if diff > 10.0 * tol {
                return Err(Error::QuadratureFailure(format!(
                    "Gauss rules with {} and {} nodes differ by {diff:.3e}",
                    q.nodes,
                    q.nodes + q.nodes / 2
                )));
            }
            Ok(pref * fine)
        }
    }
}

/// Regularized `int_R |x|^chi e^{-i phi x^2} G(x) dx` as the sum of two half-lines.
pub fn regularize_realline(f: &FresnelIntegrand, q: &QuadratureConfig) -> Result<Complex64> {
    Ok(regularize_halfline(f, q)? + regularize_halfline(&f.reflected(), q)?)
}

/// Result of the damping extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub value: Complex64,
    pub error_estimate: f64,
    pub damped_values: Vec<Complex64>,
    pub extrapolants: Vec<Complex64>,
}

/// The damping list used when none is supplied.
pub fn default_eps_list() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3, 1e-4]
}

/// Value at `x = 0` of the polynomial through `pts`, by Neville's scheme.
fn neville_at_zero(pts: &[(f64, Complex64)]) -> Complex64 {
    let mut p: Vec<Complex64> = pts.iter().map(|&(_, v)| v).collect();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (pts[i].0, pts[i + m].0);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

/// `lim_{eps -> 0} int_0^inf x^chi e^{-(eps + i phi) x^2} G(x) dx`, each damped
/// integral computed on the ray `x = (eps + i phi)^{-1/2} s` where its weight
/// becomes `e^{-s^2}`, followed by cubic extrapolation in `eps`.
pub fn epsilon_oracle(f: &FresnelIntegrand, eps_list: &[f64]) -> Result<OracleEstimate> {
    f.validate()?;
    if eps_list.len() < 3 {
        return Err(Error::invalid("at least three damping values are required"));
    }
    if eps_list.iter().any(|&e| !(e > 0.0 && e.is_finite()))
        || eps_list.windows(2).any(|w| !(w[1] < w[0]))
    {
        return Err(Error::invalid(
            "damping values must be positive and strictly decreasing",
        ));
    }
    let chi = f.chi;
    let g = &f.analytic_factor;
    let ts = TanhSinh::default();
    let mut damped = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let omega = Complex64::new(eps, f.phase).powf(-0.5);
        let h = |s: f64| s.powf(chi) * (-s * s).exp() * g(omega * s);
        let r = truncation_radius(chi, 1.0, &f.growth, omega.norm(), |s| h(s).norm())?;
        let v = tanh_sinh(h, r, &ts)?.value;
        damped.push(omega.powf(chi + 1.0) * v);
    }
    let pts: Vec<(f64, Complex64)> = eps_list
        .iter()
        .copied()
        .zip(damped.iter().copied())
        .collect();
    let extrapolants: Vec<Complex64> = (1..pts.len())
        .map(|k| neville_at_zero(&pts[k.saturating_sub(3)..=k]))
        .collect();
    let n = extrapolants.len();
    let value = extrapolants[n - 1];
    let error_estimate = (extrapolants[n - 1] - extrapolants[n - 2]).norm();
    if n >= 3 {
        let prev = (extrapolants[n - 2] - extrapolants[n - 3]).norm();
        let floor = 1e-9 * value.norm().max(1e-10);
        if error_estimate > prev && error_estimate > floor {
            return Err(Error::ExtrapolationDivergence(format!(
                "last extrapolant change {error_estimate:.3e} exceeds the previous {prev:.3e}"
            )));
        }
    }
    Ok(OracleEstimate {
        value,
        error_estimate,
        damped_values: damped,
        extrapolants,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleReport {
    pub thetas: Vec<f64>,
    pub values: Vec<Complex64>,
    pub max_deviation: f64,
}

pub const SUITE_ANGLES: [f64; 5] = [-0.6, -0.3, 0.0, 0.3, 0.6];

/// Evaluates the half-line value at each offset and reports the largest
/// pairwise deviation.
pub fn angle_independence_check(f: &FresnelIntegrand, thetas: &[f64]) -> Result<AngleReport> {
    if thetas.iter().any(|t| !(t.abs() <= FRAC_PI_4 - 0.05)) {
        return Err(Error::invalid(
            "ray offsets must satisfy |theta| <= pi/4 - 0.05",
        ));
    }
    let values = thetas
        .iter()
        .map(|&t| regularize_halfline(f, &QuadratureConfig::with_angle(t)))
        .collect::<Result<Vec<_>>>()?;
    let mut max_deviation: f64 = 0.0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            max_deviation = max_deviation.max((values[i] - values[j]).norm());
        }
    }
    Ok(AngleReport {
        thetas: thetas.to_vec(),
        values,
        max_deviation,
    })
}

fn poly(coeffs: Vec<f64>) -> impl Fn(Complex64) -> Complex64 + Send + Sync + 'static {
    move |z| {
        coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

impl FresnelIntegrand {
    /// `G(z) = sum_k coeffs[k] z^k`.
    pub fn polynomial(chi: f64, phase: f64, coeffs: Vec<f64>) -> Result<Self> {
        let abs: Vec<f64> = coeffs.iter().map(|c| c.abs()).collect();
        let desc = format!("chi={chi}, phi={phase}, G=poly{coeffs:?}");
        Self::new(chi, phase, poly(coeffs), Growth::polynomial(&abs), desc)
    }

    /// `G(z) = e^{i lambda z}`.
    pub fn plane_wave(chi: f64, phase: f64, lambda: f64) -> Result<Self> {
        Self::new(
            chi,
            phase,
            move |z| (Complex64::i() * lambda * z).exp(),
            Growth::exponential_type(lambda.abs(), 1.0),
            format!("chi={chi}, phi={phase}, G=exp(i {lambda} z)"),
        )
    }

    /// `G(z) = e^{-b z^2}`.
    pub fn gaussian(chi: f64, phase: f64, b: f64) -> Result<Self> {
        if !(b >= 0.0) {
            return Err(Error::invalid("Gaussian factor rate must be nonnegative"));
        }
        Self::new(
            chi,
            phase,
            move |z| (-b * z * z).exp(),
            Growth::gaussian(b, 1.0),
            format!("chi={chi}, phi={phase}, G=exp(-{b} z^2)"),
        )
    }
}

/// Twenty integrands covering constant, polynomial, plane-wave and Gaussian
/// factors with both phase signs and weights with `chi` in `(-1, 2]`.
pub fn reference_suite() -> Result<Vec<FresnelIntegrand>> {
    Ok(vec![
        FresnelIntegrand::polynomial(0.0, 1.0, vec![1.0])?,
        FresnelIntegrand::polynomial(1.0, 1.0, vec![1.0])?,
        FresnelIntegrand::polynomial(0.0, -1.0, vec![1.0])?,
        FresnelIntegrand::polynomial(-0.5, 1.0, vec![1.0])?,
        FresnelIntegrand::polynomial(2.0, 0.5, vec![1.0])?,
        FresnelIntegrand::polynomial(0.0, 1.0, vec![1.0, 1.0])?,
        FresnelIntegrand::polynomial(0.5, -1.0, vec![3.0, -2.0, 1.0])?,
        FresnelIntegrand::polynomial(-0.5, 2.0, vec![0.0, 0.0, 0.0, 1.0])?,
        FresnelIntegrand::polynomial(1.0, -0.5, vec![0.0, -1.0, 0.0, 0.0, 1.0])?,
        FresnelIntegrand::polynomial(0.0, 1.0, vec![2.0, -1.0, 0.5, -0.25, 0.1])?,
        FresnelIntegrand::plane_wave(0.0, 1.0, 1.0)?,
        FresnelIntegrand::plane_wave(0.0, -1.0, 1.0)?,
        FresnelIntegrand::plane_wave(0.5, 1.0, -2.0)?,
        FresnelIntegrand::plane_wave(-0.5, -2.0, 1.5)?,
        FresnelIntegrand::plane_wave(1.0, 0.5, 0.5)?,
        FresnelIntegrand::gaussian(0.0, 1.0, 0.2)?,
        FresnelIntegrand::gaussian(0.0, -1.0, 0.25)?,
        FresnelIntegrand::gaussian(1.0, 2.0, 0.5)?,
        FresnelIntegrand::new(
            -0.5,
            -1.0,
            |z| (-0.2 * z * z + Complex64::i() * z).exp(),
            Growth::gaussian(0.25, 5f64.exp()),
            "chi=-0.5, phi=-1, G=exp(-0.2 z^2 + i z)",
        )?,
        FresnelIntegrand::new(
            2.0,
            -1.5,
            |z| z.cos(),
            Growth::exponential_type(1.0, 1.0),
            "chi=2, phi=-1.5, G=cos z",
        )?,
    ])
}

/// Contour value, damping oracle and angle spread for one integrand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub description: String,
    pub contour: Complex64,
    pub oracle: Complex64,
    pub oracle_error_estimate: f64,
    pub relative_deviation: f64,
    pub angle_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub entries: Vec<SuiteEntry>,
    pub max_oracle_deviation: f64,
    pub max_angle_deviation: f64,
}

/// Runs both routes and the angle scan over `suite`. The oracle deviation is
/// relative with an absolute floor of `1e-10`.
pub fn verify_suite(suite: &[FresnelIntegrand], eps_list: &[f64]) -> Result<SuiteReport> {
    let mut entries = Vec::with_capacity(suite.len());
    for f in suite {
        let contour = regularize_halfline(f, &QuadratureConfig::default())?;
        let oracle = epsilon_oracle(f, eps_list)?;
        let relative_deviation = (contour - oracle.value).norm() / oracle.value.norm().max(1e-10);
        let angles = angle_independence_check(f, &SUITE_ANGLES)?;
        entries.push(SuiteEntry {
            description: f.description.clone(),
            contour,
            oracle: oracle.value,
            oracle_error_estimate: oracle.error_estimate,
            relative_deviation,
            angle_deviation: angles.max_deviation,
        });
    }
    let max_oracle_deviation = entries
        .iter()
        .map(|e| e.relative_deviation)
        .fold(0.0, f64::max);
    let max_angle_deviation = entries
        .iter()
        .map(|e| e.angle_deviation)
        .fold(0.0, f64::max);
    Ok(SuiteReport {
        entries,
        max_oracle_deviation,
        max_angle_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn constant(chi: f64, phase: f64) -> FresnelIntegrand {
        FresnelIntegrand::new(chi, phase, |_| c(1.0, 0.0), Growth::bounded(1.0), "one").unwrap()
    }

    fn fresnel_value() -> Complex64 {
        0.5 * PI.sqrt() * Complex64::from_polar(1.0, -FRAC_PI_4)
    }

    #[test]
    fn classical_fresnel_values() {
        let q = QuadratureConfig::default();
        let v = regularize_halfline(&constant(0.0, 1.0), &q).unwrap();
        assert!((v - fresnel_value()).norm() < 1e-13);
        let v = regularize_halfline(&constant(1.0, 1.0), &q).unwrap();
        assert!((v - c(0.0, -0.5)).norm() < 1e-13);
        let v = regularize_halfline(&constant(0.0, -1.0), &q).unwrap();
        assert!((v - fresnel_value().conj()).norm() < 1e-13);
    }

    #[test]
    fn singular_weight() {
        // int_0^inf x^{-1/2} e^{-i x^2} dx = Gamma(1/4) e^{-i pi/8} / 2
        let v = regularize_halfline(&constant(-0.5, 1.0), &QuadratureConfig::default()).unwrap();
        let g = crate::special::gamma(c(0.25, 0.0)).unwrap().re;
        let want = 0.5 * g * Complex64::from_polar(1.0, -PI / 8.0);
        assert!((v - want).norm() < 1e-12, "{v} {want}");
    }

    #[test]
    fn gauss_scheme_agrees() {
        let q = QuadratureConfig {
            scheme: Scheme::GeneralizedGauss,
            nodes: 48,
            ..Default::default()
        };
        for f in [
            constant(0.5, 1.0),
            FresnelIntegrand::plane_wave(0.0, -1.0, 1.0).unwrap(),
        ] {
            let a = regularize_halfline(&f, &q).unwrap();
            let b = regularize_halfline(&f, &QuadratureConfig::default()).unwrap();
            assert!((a - b).norm() < 1e-11, "{a} {b}");
        }
        let rotated = QuadratureConfig {
            ray_angle_offset: 0.2,
            ..q
        };
        assert!(regularize_halfline(&constant(0.0, 1.0), &rotated).is_err());
    }

    #[test]
    fn free_propagator_identity() {
        for (t, lambda) in [(0.5, 1.0), (1.3, -2.0), (0.2, 0.7)] {
            let f = FresnelIntegrand::plane_wave(0.0, -0.5 / t, lambda).unwrap();
            let v = regularize_realline(&f, &QuadratureConfig::default()).unwrap();
            let want = (2.0 * PI * t).sqrt()
                * Complex64::from_polar(1.0, FRAC_PI_4 - lambda * lambda * t / 2.0);
            assert!((v - want).norm() < 1e-11, "t={t}: {v} {want}");
        }
    }

    #[test]
    fn realline_symmetry() {
        let q = QuadratureConfig::default();
        let even = FresnelIntegrand::new(
            0.0,
            0.7,
            |z| z.cos(),
            Growth::exponential_type(1.0, 1.0),
            "cos",
        )
        .unwrap();
        let full = regularize_realline(&even, &q).unwrap();
        let half = regularize_halfline(&even, &q).unwrap();
        assert!((full - 2.0 * half).norm() < 1e-13);
        let odd = FresnelIntegrand::new(
            0.0,
            0.7,
            |z| z.sin(),
            Growth::exponential_type(1.0, 1.0),
            "sin",
        )
        .unwrap();
        assert!(regularize_realline(&odd, &q).unwrap().norm() < 1e-13);
    }

    #[test]
    fn oracle_examples() {
        let eps = default_eps_list();
        let v = epsilon_oracle(&constant(0.0, 1.0), &eps).unwrap();
        assert!((v.value - fresnel_value()).norm() < 1e-6);
        for (k, &e) in eps.iter().enumerate() {
            let closed = 0.5 * (PI / c(e, 1.0)).sqrt();
            assert!((v.damped_values[k] - closed).norm() < 1e-13);
        }
        let zero =
            FresnelIntegrand::new(0.0, 1.0, |_| c(0.0, 0.0), Growth::bounded(1.0), "zero").unwrap();
        assert_eq!(epsilon_oracle(&zero, &eps).unwrap().value, c(0.0, 0.0));
        let gauss = FresnelIntegrand::gaussian(0.0, -1.0, 1.0).unwrap();
        let v = epsilon_oracle(&gauss, &eps).unwrap();
        let want = 0.5 * (PI / c(1.0, -1.0)).sqrt();
        assert!((v.value - want).norm() < 1e-8, "{} {want}", v.value);
        assert!(epsilon_oracle(&gauss, &[1e-1, 1e-2]).is_err());
        assert!(epsilon_oracle(&gauss, &[1e-2, 1e-1, 1e-3]).is_err());
    }

    #[test]
    fn validation() {
        let r = FresnelIntegrand::new(-1.0, 1.0, |_| c(1.0, 0.0), Growth::bounded(1.0), "x");
        assert_eq!(r.unwrap_err().to_string().contains("chi must exceed"), true);
        assert!(
            FresnelIntegrand::new(0.0, 0.0, |_| c(1.0, 0.0), Growth::bounded(1.0), "x").is_err()
        );
        let lying = FresnelIntegrand::new(0.0, 1.0, |z| z.exp(), Growth::bounded(1.0), "exp");
        assert!(matches!(lying, Err(Error::GrowthViolation(_))));
        let f = constant(0.0, 1.0);
        assert!(regularize_halfline(&f, &QuadratureConfig::with_angle(FRAC_PI_4)).is_err());
        let few = QuadratureConfig {
            nodes: 8,
            ..Default::default()
        };
        assert!(regularize_halfline(&f, &few).is_err());
        assert!(angle_independence_check(&f, &[0.75]).is_err());
    }

    #[test]
    fn angle_examples() {
        let r = angle_independence_check(&constant(0.0, 1.0), &[-0.6, 0.0, 0.6]).unwrap();
        assert!(r.max_deviation <= 1e-8);
        let zero = FresnelIntegrand::new(0.3, -1.0, |_| c(0.0, 0.0), Growth::bounded(1.0), "zero")
            .unwrap();
        assert_eq!(
            angle_independence_check(&zero, &SUITE_ANGLES)
                .unwrap()
                .max_deviation,
            0.0
        );
    }

    #[test]
    fn linearity() {
        let q = QuadratureConfig::default();
        let f1 = FresnelIntegrand::plane_wave(0.5, 1.0, 1.2).unwrap();
        let f2 = FresnelIntegrand::polynomial(0.5, 1.0, vec![1.0, 0.0, -1.0]).unwrap();
        let (a, b) = (c(0.3, -1.1), c(-2.0, 0.5));
        let g1 = f1.analytic_factor.clone();
        let g2 = f2.analytic_factor.clone();
        let combo = FresnelIntegrand::new(
            0.5,
            1.0,
            move |z| a * g1(z) + b * g2(z),
            Growth::exponential_type(1.2, a.norm() + b.norm() * 2.0),
            "combo",
        )
        .unwrap();
        let lhs = regularize_halfline(&combo, &q).unwrap();
        let rhs =
            a * regularize_halfline(&f1, &q).unwrap() + b * regularize_halfline(&f2, &q).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn scaling_law() {
        let q = QuadratureConfig::default();
        for f in [
            FresnelIntegrand::plane_wave(0.5, -1.0, 0.8).unwrap(),
            FresnelIntegrand::gaussian(1.0, 1.0, 0.2).unwrap(),
        ] {
            let base = regularize_halfline(&f, &q).unwrap();
            for s in [0.5, 1.7, 3.0] {
                let g = f.rescaled(s).unwrap();
                let v = s.powf(f.chi + 1.0) * regularize_halfline(&g, &q).unwrap();
                assert!((v - base).norm() < 1e-8 * base.norm(), "s={s}");
            }
        }
    }

    #[test]
    fn suite_passes_both_checks() {
        let suite = reference_suite().unwrap();
        assert_eq!(suite.len(), 20);
        let rep = verify_suite(&suite, &default_eps_list()).unwrap();
        for e in &rep.entries {
            assert!(
                e.relative_deviation <= 1e-6,
                "{}: {}",
                e.description,
                e.relative_deviation
            );
            assert!(
                e.angle_deviation <= 1e-8,
                "{}: {}",
                e.description,
                e.angle_deviation
            );
        }
    }
}
