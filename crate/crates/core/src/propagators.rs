//! Green-function evolution of plane-wave data for the centrifugal potential
//! `u / (2x^2)` on the half-line and the harmonic oscillator `x^2 / 2`, with
//! supershift gap sweeps and a probe of the singular times `(2k+1) pi / 2`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{psi_grid, GapGrid, GapReport};
use crate::fit::{least_squares, loglog_rate, LinearFit};
use crate::fresnel::{
    epsilon_oracle, regularize_halfline, AnalyticFactor, FresnelIntegrand, Growth, OracleEstimate,
    QuadratureConfig,
};
use crate::operators::DispersionSpec;
use crate::sequences::{coefficients, evaluate_product, SuperoscParams};
use crate::special::{e_nu_series, gamma, SeriesEvalConfig};
use crate::sum::compensated_sum;

const I: Complex64 = Complex64::new(0.0, 1.0);
const SINGULAR_EPS: f64 = 1e-9;

/// Potential `u / (2x^2)`; the kernel carries `J_nu` with `nu = sqrt(1 + 4u) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentrifugalSpec {
    pub u: f64,
    pub nu: f64,
}

impl CentrifugalSpec {
    pub fn new(u: f64) -> Result<Self> {
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::invalid("centrifugal constant u must be positive"));
        }
        Ok(Self {
            u,
            nu: (1.0 + 4.0 * u).sqrt() / 2.0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let fresh = Self::new(self.u)?;
        if (fresh.nu - self.nu).abs() > 1e-12 * fresh.nu {
            return Err(Error::invalid("nu must equal sqrt(1 + 4u) / 2"));
        }
        Ok(())
    }
}

/// Harmonic oscillator settings; the potential is fixed to `x^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSpec {
    /// Minimum distance of a gap grid from the singular times.
    pub margin: f64,
}

impl Default for HarmonicSpec {
    fn default() -> Self {
        Self { margin: 0.1 }
    }
}

impl HarmonicSpec {
    /// Distance from `t` to the nearest point of `pi/2 + pi Z`.
    pub fn distance_to_singular(t: f64) -> f64 {
        let r = (t - FRAC_PI_2).rem_euclid(PI);
        r.min(PI - r)
    }

    /// Distance from `t` to the nearest point of `pi Z`, where the kernel degenerates.
    pub fn distance_to_kernel_singular(t: f64) -> f64 {
        let r = t.rem_euclid(PI);
        r.min(PI - r)
    }

    pub fn is_singular(t: f64) -> bool {
        t.cos().abs() < SINGULAR_EPS
    }

    /// Errors unless every time in `[t_min, t_max]` keeps the margin.
    pub fn check_interval(&self, t_min: f64, t_max: f64) -> Result<()> {
        let k0 = ((t_min - FRAC_PI_2) / PI).floor();
        let k1 = ((t_max - FRAC_PI_2) / PI).floor();
        let d = if k0 != k1 {
            0.0
        } else {
            Self::distance_to_singular(t_min).min(Self::distance_to_singular(t_max))
        };
        if d < self.margin {
            return Err(Error::MarginViolation(format!(
                "time interval [{t_min}, {t_max}] comes within {d:.3e} of a singular time (margin {})",
                self.margin
            )));
        }
        Ok(())
    }
}

/// `(cos t)^{-1/2}` continued along the real `t` axis from the principal value
/// at `t = 0`, losing a quarter turn of phase at each zero of `cos`.
pub fn cos_inverse_sqrt(t: f64) -> Result<Complex64> {
    let c = t.cos();
    if c.abs() < SINGULAR_EPS {
        return Err(Error::SingularTime(t));
    }
    let n = ((t + FRAC_PI_2) / PI).floor();
    Ok(Complex64::from_polar(c.abs().powf(-0.5), -FRAC_PI_2 * n))
}

/// `phi_lambda(t, x) = (cos t)^{-1/2} exp(-i x^2 tan t / 2 - i lambda^2 tan t / 2 + i lambda x / cos t)`.
pub fn harmonic_evolve_closed(lambda: f64, t: f64, x: f64) -> Result<Complex64> {
    harmonic_closed_derivative(lambda, t, x, 0, 0)
}

/// Polynomial in `(x, k)` stored as `c[i][m]` for `x^i k^m`.
#[derive(Debug, Clone)]
struct Poly2(Vec<Vec<Complex64>>);

impl Poly2 {
    fn one() -> Self {
        Poly2(vec![vec![Complex64::new(1.0, 0.0)]])
    }

    fn get(&self, i: usize, m: usize) -> Complex64 {
        self.0
            .get(i)
            .and_then(|r| r.get(m))
            .copied()
            .unwrap_or_default()
    }

    fn dims(&self) -> (usize, usize) {
        (
            self.0.len(),
            self.0.iter().map(|r| r.len()).max().unwrap_or(0),
        )
    }

    fn zeros(nx: usize, nk: usize) -> Self {
        Poly2(vec![vec![Complex64::default(); nk]; nx])
    }

    fn dx(&self) -> Self {
        let (nx, nk) = self.dims();
        let mut out = Self::zeros(nx.max(1), nk);
        for i in 1..nx {
            for m in 0..nk {
                out.0[i - 1][m] += self.get(i, m) * i as f64;
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &Self, s: Complex64) {
        let (nx, nk) = other.dims();
        let (sx, sk) = self.dims();
        let (tx, tk) = (sx.max(nx), sk.max(nk));
        for r in self.0.iter_mut() {
            r.resize(tk, Complex64::default());
        }
        self.0.resize(tx, vec![Complex64::default(); tk]);
        for i in 0..nx {
            for m in 0..nk {
                self.0[i][m] += s * other.get(i, m);
            }
        }
    }

    /// Multiplication by `alpha x + gamma k`.
    fn times_linear(&self, alpha: Complex64, gamma: Complex64) -> Self {
        let (nx, nk) = self.dims();
        let mut out = Self::zeros(nx + 1, nk + 1);
        for i in 0..nx {
            for m in 0..nk {
                let v = self.get(i, m);
                out.0[i + 1][m] += alpha * v;
                out.0[i][m + 1] += gamma * v;
            }
        }
        out
    }

    fn times_x2(&self) -> Self {
        let (nx, nk) = self.dims();
        let mut out = Self::zeros(nx + 2, nk);
        for i in 0..nx {
            for m in 0..nk {
                out.0[i + 2][m] += self.get(i, m);
            }
        }
        out
    }

    /// `sum_i c[i][m] x^i` for each `m`.
    fn x_coeffs(&self, x: f64) -> Vec<Complex64> {
        let (nx, nk) = self.dims();
        (0..nk)
            .map(|m| {
                (0..nx)
                    .rev()
                    .fold(Complex64::default(), |acc, i| acc * x + self.get(i, m))
            })
            .collect()
    }
}

/// `P` with `d_t^mu d_x^nu phi_k = P(x, k) phi_k` for every plane-wave solution,
/// using `d_t = -i H` with `H = (-d_x^2 + x^2) / 2`.
fn derivative_polynomial(t: f64, mu: usize, nu: usize) -> Poly2 {
    let alpha = -I * t.tan();
    let gamma = I / t.cos();
    let qpp = alpha;
    let mut p = Poly2::one();
    let q1 = |p: &Poly2| p.times_linear(alpha, gamma);
    for _ in 0..mu {
        // (P e^q)'' = (P'' + 2 q' P' + (q'' + q'^2) P) e^q
        let px = p.dx();
        let mut second = px.dx();
        second.add_scaled(&q1(&px), Complex64::new(2.0, 0.0));
        second.add_scaled(&p, qpp);
        second.add_scaled(&q1(&q1(&p)), Complex64::new(1.0, 0.0));
        let mut next = p.times_x2();
        next.add_scaled(&second, Complex64::new(-1.0, 0.0));
        let mut scaled = Poly2::zeros(0, 0);
        scaled.add_scaled(&next, -0.5 * I);
        p = scaled;
    }
    for _ in 0..nu {
        let mut next = p.dx();
        next.add_scaled(&q1(&p), Complex64::new(1.0, 0.0));
        p = next;
    }
    p
}

/// `d_t^mu d_x^nu phi_lambda(t, x)`, exact up to rounding, `mu, nu <= 2`.
pub fn harmonic_closed_derivative(
    lambda: f64,
    t: f64,
    x: f64,
    mu: usize,
    nu: usize,
) -> Result<Complex64> {
    if mu > 2 || nu > 2 {
        return Err(Error::invalid("derivative orders mu, nu must not exceed 2"));
    }
    let amp = cos_inverse_sqrt(t)?;
    let tan = t.tan();
    let phase = -0.5 * x * x * tan - 0.5 * lambda * lambda * tan + lambda * x / t.cos();
    let base = amp * Complex64::from_polar(1.0, phase);
    if mu == 0 && nu == 0 {
        return Ok(base);
    }
    let p = derivative_polynomial(t, mu, nu);
    let poly: Complex64 = p
        .x_coeffs(x)
        .iter()
        .enumerate()
        .map(|(m, c)| c * lambda.powi(m as i32))
        .sum();
    Ok(poly * base)
}

/// `i phi_t - (-phi_xx + x^2 phi) / 2` by central differences at step `h`.
pub fn harmonic_pde_residual(lambda: f64, t: f64, x: f64, h: f64) -> Result<Complex64> {
    let f = |tt: f64, xx: f64| {
        harmonic_evolve_closed(lambda, tt, xx).unwrap_or(Complex64::new(f64::NAN, 0.0))
    };
    let dt = crate::oracles::fd_mixed(f, t, x, 1, 0, h)?;
    let dxx = crate::oracles::fd_mixed(f, t, x, 0, 2, h)?;
    let v = harmonic_evolve_closed(lambda, t, x)?;
    let r = I * dt - 0.5 * (-dxx + x * x * v);
    if !(r.re.is_finite() && r.im.is_finite()) {
        return Err(Error::SingularTime(t));
    }
    Ok(r)
}

/// Mehler-kernel route: `(2 i pi sin t)^{-1/2} e^{i cot t x^2/2}` times the
/// regularized real-line integral with phase `-cot t / 2` and
/// `G(x') = e^{i(lambda - x / sin t) x'}`.
///
/// With a zero ray offset in `q`, each half-line picks its own offset: zero when
/// the linear factor decays along the ray, `sign(phase) (pi/4 - 0.3)` otherwise.
pub fn harmonic_evolve_kernel(
    lambda: f64,
    t: f64,
    x: f64,
    q: &QuadratureConfig,
) -> Result<Complex64> {
    let (s, c) = t.sin_cos();
    if s.abs() < SINGULAR_EPS || c.abs() < SINGULAR_EPS {
        return Err(Error::SingularTime(t));
    }
    let cot = c / s;
    let phase = -0.5 * cot;
    let sigma = phase.signum();
    let m = (t / PI).floor();
    let pref = Complex64::from_polar(
        (2.0 * PI * s.abs()).powf(-0.5),
        -FRAC_PI_4 - FRAC_PI_2 * m + 0.5 * cot * x * x,
    );
    let k = lambda - x / s;
    let mut total = Complex64::new(0.0, 0.0);
    for kk in [k, -k] {
        let f = FresnelIntegrand::new(
            0.0,
            phase,
            move |z| (I * kk * z).exp(),
            Growth::exponential_type(kk.abs(), 1.0),
            format!("Mehler kernel half-line, k = {kk}"),
        )?;
        let mut qq = *q;
        if q.ray_angle_offset == 0.0 && kk * sigma > 0.0 {
            qq.ray_angle_offset = sigma * (FRAC_PI_4 - 0.3);
        }
        total += regularize_halfline(&f, &qq)?;
    }
    Ok(pref * total)
}

/// Evolution of the Gaussian datum `exp(-alpha x^2 / 2 + i beta x)`, `alpha >= 0`:
/// `D^{-1/2} exp(-alpha_t x^2 / 2 + i beta x / D - i beta^2 sin t / (2D))`
/// with `D = cos t + i alpha sin t` and `alpha_t = (alpha cos t + i sin t) / D`.
pub fn harmonic_gaussian_closed(alpha: f64, beta: f64, t: f64, x: f64) -> Result<Complex64> {
    if !(alpha >= 0.0) {
        return Err(Error::invalid("Gaussian rate alpha must be nonnegative"));
    }
    let (s, c) = t.sin_cos();
    let d = Complex64::new(c, alpha * s);
    if d.norm() < SINGULAR_EPS {
        return Err(Error::SingularTime(t));
    }
    let arg = if c.abs() < SINGULAR_EPS {
        FRAC_PI_2 * (t / FRAC_PI_2).round()
    } else {
        (alpha * s / c).atan() + PI * (t / PI).round()
    };
    let amp = Complex64::from_polar(d.norm().powf(-0.5), -0.5 * arg);
    let alpha_t = Complex64::new(alpha * c, s) / d;
    let expo = -0.5 * alpha_t * x * x + I * beta * x / d - I * beta * beta * s / (2.0 * d);
    Ok(amp * expo.exp())
}

/// Evolution of `e^{i lambda x}` damped by the window `exp(-x^2 / (2 sigma^2))`.
pub fn harmonic_windowed_closed(lambda: f64, sigma: f64, t: f64, x: f64) -> Result<Complex64> {
    if !(sigma > 0.0) {
        return Err(Error::invalid("window width must be positive"));
    }
    harmonic_gaussian_closed(1.0 / (sigma * sigma), lambda, t, x)
}

/// Evolution of the windowed superoscillation `F_N(x, a) exp(-x^2 / (2 sigma^2))`
/// as a sum of windowed plane-wave evolutions.
pub fn harmonic_windowed_superposition(
    params: &SuperoscParams,
    sigma: f64,
    t: f64,
    x: f64,
) -> Result<Complex64> {
    let fs = coefficients(params)?;
    let terms = fs
        .coefficients
        .iter()
        .zip(&fs.frequencies)
        .map(|(c, &k)| Ok(c * harmonic_windowed_closed(k, sigma, t, x)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(compensated_sum(terms))
}

/// `sum_j C_j d_t^mu d_x^nu phi_{k_j}` on a row of `xs` at fixed `t`.
///
/// Each `phi_k` factors as `(cos t)^{-1/2} e^{-i x^2 tan t / 2} e^{i k xi + i tau k^2}`
/// with `xi = x / cos t` and `tau = -tan t / 2`, so the sum is a free evolution of
/// `F_N` evaluated through the operator route whenever the direct sum is ill-conditioned.
pub fn harmonic_superposition_row(
    params: &SuperoscParams,
    t: f64,
    xs: &[f64],
    mu: usize,
    nu: usize,
) -> Result<Vec<Complex64>> {
    if mu > 2 || nu > 2 {
        return Err(Error::invalid("derivative orders mu, nu must not exceed 2"));
    }
    let amp = cos_inverse_sqrt(t)?;
    let (tan, cos) = (t.tan(), t.cos());
    let tau = -0.5 * tan;
    let xis: Vec<f64> = xs.iter().map(|&x| x / cos).collect();
    let free = DispersionSpec::monomial(2);
    let p = derivative_polynomial(t, mu, nu);
    let (_, nk) = p.dims();
    // D_m = sum_j C_j k_j^m e^{i k_j xi + i tau k_j^2} = (-i d_xi)^m S
    let mut dm: Vec<Vec<Complex64>> = Vec::with_capacity(nk);
    for m in 0..nk {
        let row = psi_grid(&free, params, &[tau], &xis, 0, m)?.remove(0);
        let f = (-I).powu(m as u32);
        dm.push(row.into_iter().map(|v| v * f).collect());
    }
    Ok(xs
        .iter()
        .enumerate()
        .map(|(ix, &x)| {
            let base = amp * Complex64::from_polar(1.0, -0.5 * x * x * tan);
            let cs = p.x_coeffs(x);
            base * cs
                .iter()
                .enumerate()
                .map(|(m, c)| c * dm[m][ix])
                .sum::<Complex64>()
        })
        .collect())
}

/// Uniform gap between the superposition of in-band harmonic solutions and
/// `phi_a`, with derivatives of orders `mu, nu <= 2`.
pub fn supershift_gap_harmonic(
    a: f64,
    grid: &GapGrid,
    ns: &[usize],
    mu: usize,
    nu: usize,
    spec: &HarmonicSpec,
) -> Result<GapReport> {
    grid.validate()?;
    if !a.is_finite() {
        return Err(Error::invalid("a must be finite"));
    }
    spec.check_interval(grid.t_min, grid.t_max)?;
    check_ns(ns)?;
    if mu > 2 || nu > 2 {
        return Err(Error::invalid("derivative orders mu, nu must not exceed 2"));
    }
    let ts = grid.ts();
    let xs = grid.xs();
    let lim: Vec<Vec<Complex64>> = ts
        .iter()
        .map(|&t| {
            xs.iter()
                .map(|&x| harmonic_closed_derivative(a, t, x, mu, nu))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut gaps = Vec::with_capacity(ns.len());
    for &n in ns {
        let params = SuperoscParams::new(a, n)?;
        let rows = ts
            .iter()
            .map(|&t| harmonic_superposition_row(&params, t, &xs, mu, nu))
            .collect::<Result<Vec<_>>>()?;
        let g = rows
            .iter()
            .zip(&lim)
            .flat_map(|(r, l)| r.iter().zip(l).map(|(v, w)| (v - w).norm()))
            .fold(0.0, f64::max);
        gaps.push(g);
    }
    Ok(report(*grid, ns, gaps, (mu, nu)))
}

fn check_ns(ns: &[usize]) -> Result<()> {
    if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "Ns must be positive and strictly increasing",
        ));
    }
    Ok(())
}

fn report(grid: GapGrid, ns: &[usize], gaps: Vec<f64>, orders: (usize, usize)) -> GapReport {
    let fit = loglog_rate(ns, &gaps, 5);
    GapReport {
        grid,
        ns: ns.to_vec(),
        gaps,
        fitted_rate: fit.slope,
        fit,
        derivative_orders: orders,
        superoscillation_criterion: None,
    }
}

/// Initial datum for the centrifugal propagator: an entire function with a
/// declared growth bound.
#[derive(Clone)]
pub struct Datum {
    pub f: AnalyticFactor,
    pub growth: Growth,
    pub description: String,
}

impl std::fmt::Debug for Datum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Datum")
            .field("growth", &self.growth)
            .field("description", &self.description)
            .finish()
    }
}

impl Datum {
    pub fn plane_wave(lambda: f64) -> Self {
        Self {
            f: Arc::new(move |z| (I * lambda * z).exp()),
            growth: Growth::exponential_type(lambda.abs(), 1.0),
            description: format!("exp(i {lambda} x)"),
        }
    }

    /// `F_N(z, a)`, bounded by `exp(max(|a|, 1) |z|)`.
    pub fn superoscillation(params: &SuperoscParams) -> Self {
        let p = *params;
        Self {
            f: Arc::new(move |z| evaluate_product(z, &p)),
            growth: Growth::exponential_type(p.alpha(), 1.0),
            description: format!("F_{}(x, {})", p.n, p.a),
        }
    }

    /// `F_N(z, a) - e^{i a z}`.
    pub fn superoscillation_defect(params: &SuperoscParams) -> Self {
        let p = *params;
        Self {
            f: Arc::new(move |z| evaluate_product(z, &p) - (I * p.a * z).exp()),
            growth: Growth::exponential_type(p.alpha(), 2.0),
            description: format!("F_{}(x, {}) - exp(i {} x)", p.n, p.a, p.a),
        }
    }

    /// `z^power exp(-z^2 / (2 sigma^2) + i lambda z)`.
    pub fn windowed(lambda: f64, sigma: f64, power: u32) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::invalid("window width must be positive"));
        }
        let delta = 1.0 / (4.0 * sigma * sigma);
        let pw = power as f64;
        let poly_c = if power == 0 {
            1.0
        } else {
            (pw / (2.0 * std::f64::consts::E * delta)).powf(pw / 2.0)
        };
        let s2 = 2.0 * sigma * sigma;
        Ok(Self {
            f: Arc::new(move |z| z.powu(power) * (-z * z / s2 + I * lambda * z).exp()),
            growth: Growth::gaussian(
                1.0 / s2 + 2.0 * delta,
                poly_c * (lambda * lambda / (4.0 * delta)).exp(),
            ),
            description: format!("x^{power} exp(-x^2/(2 {sigma}^2) + i {lambda} x)"),
        })
    }
}

/// `e^{-i pi (nu+1)/2} 2^{-nu} e^{i x^2/(2t)} x^{nu+1/2} / t^{nu+1}`.
pub fn centrifugal_prefactor(spec: &CentrifugalSpec, t: f64, x: f64) -> Complex64 {
    let nu = spec.nu;
    let modulus = (-nu * std::f64::consts::LN_2 + (nu + 0.5) * x.ln() - (nu + 1.0) * t.ln()).exp();
    Complex64::from_polar(modulus, -FRAC_PI_2 * (nu + 1.0) + x * x / (2.0 * t))
}

/// The half-line integrand `x'^{nu+1/2} e^{i x'^2/(2t)} E_nu(x x'/t) datum(x')`.
///
/// `|E_nu(w)| <= e^{|Im w|} / Gamma(nu+1)` supplies the growth bound.
pub fn centrifugal_integrand(
    spec: &CentrifugalSpec,
    datum: &Datum,
    t: f64,
    x: f64,
) -> Result<FresnelIntegrand> {
    spec.validate()?;
    if !(t > 0.0 && t.is_finite()) || !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid(
            "centrifugal evolution needs t > 0 and x > 0",
        ));
    }
    let nu = spec.nu;
    let scale = x / t;
    let g0 = gamma(Complex64::new(nu + 1.0, 0.0))?.re;
    let cfg = SeriesEvalConfig {
        max_terms: 2000,
        ..Default::default()
    };
    let d = datum.f.clone();
    let growth = Growth {
        order: datum.growth.order.max(1.0),
        rate: if datum.growth.order <= 1.0 {
            scale + datum.growth.rate
        } else {
            // r <= (delta r^2 + 1/delta)/2 with delta = 1 / scale
            datum.growth.rate + 0.5
        },
        constant: datum.growth.constant / g0
            * if datum.growth.order <= 1.0 {
                1.0
            } else {
                (0.5 * scale * scale).exp()
            },
    };
    FresnelIntegrand::new(
        nu + 0.5,
        -1.0 / (2.0 * t),
        move |z| {
            let e = e_nu_series(nu, z * scale, &cfg).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            e * d(z)
        },
        growth,
        format!(
            "centrifugal nu={nu}, t={t}, x={x}, datum {}",
            datum.description
        ),
    )
}

/// `psi(t, x)` for a general entire datum by the rotated-contour route.
pub fn centrifugal_evolve_datum(
    spec: &CentrifugalSpec,
    datum: &Datum,
    t: f64,
    x: f64,
    q: &QuadratureConfig,
) -> Result<Complex64> {
    let f = centrifugal_integrand(spec, datum, t, x)?;
    Ok(centrifugal_prefactor(spec, t, x) * regularize_halfline(&f, q)?)
}

/// Evolution of `e^{i lambda x}` under `-d^2/2 + u/(2x^2)` on the half-line.
pub fn centrifugal_evolve(
    spec: &CentrifugalSpec,
    lambda: f64,
    t: f64,
    x: f64,
    q: &QuadratureConfig,
) -> Result<Complex64> {
    centrifugal_evolve_datum(spec, &Datum::plane_wave(lambda), t, x, q)
}

/// Same quantity by the damping-extrapolation route.
pub fn centrifugal_evolve_oracle(
    spec: &CentrifugalSpec,
    datum: &Datum,
    t: f64,
    x: f64,
    eps_list: &[f64],
) -> Result<OracleEstimate> {
    let f = centrifugal_integrand(spec, datum, t, x)?;
    let pref = centrifugal_prefactor(spec, t, x);
    let mut est = epsilon_oracle(&f, eps_list)?;
    est.value *= pref;
    est.error_estimate *= pref.norm();
    Ok(est)
}

/// Gap `sup |sum_j C_j psi_{k_j} - psi_a|` over a grid in `(0, inf)^2`, computed
/// as one regularized integral of `E_nu (F_N - e^{i a x'})` per point.
pub fn supershift_gap_centrifugal(
    spec: &CentrifugalSpec,
    a: f64,
    grid: &GapGrid,
    ns: &[usize],
    q: &QuadratureConfig,
) -> Result<GapReport> {
    spec.validate()?;
    grid.validate()?;
    if !(grid.t_min > 0.0 && grid.x_min > 0.0) {
        return Err(Error::invalid("centrifugal grid must lie in t > 0, x > 0"));
    }
    check_ns(ns)?;
    let ts = grid.ts();
    let xs = grid.xs();
    let points: Vec<(f64, f64)> = ts
        .iter()
        .flat_map(|&t| xs.iter().map(move |&x| (t, x)))
        .collect();
    let mut gaps = Vec::with_capacity(ns.len());
    for &n in ns {
        let params = SuperoscParams::new(a, n)?;
        let datum = Datum::superoscillation_defect(&params);
        let vals = points
            .par_iter()
            .map(|&(t, x)| centrifugal_evolve_datum(spec, &datum, t, x, q).map(|v| v.norm()))
            .collect::<Result<Vec<_>>>()?;
        gaps.push(vals.into_iter().fold(0.0, f64::max));
    }
    Ok(report(*grid, ns, gaps, (0, 0)))
}

/// `|sum_j C_j psi_{k_j}(t, x) - psi[F_N](t, x)|`: evolution of the sum against
/// the sum of evolutions.
pub fn centrifugal_linearity_defect(
    spec: &CentrifugalSpec,
    params: &SuperoscParams,
    t: f64,
    x: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let fs = coefficients(params)?;
    let terms = fs
        .coefficients
        .iter()
        .zip(&fs.frequencies)
        .map(|(c, &k)| Ok(c * centrifugal_evolve(spec, k, t, x, q)?))
        .collect::<Result<Vec<_>>>()?;
    let summed = compensated_sum(terms);
    let whole = centrifugal_evolve_datum(spec, &Datum::superoscillation(params), t, x, q)?;
    Ok((summed - whole).norm())
}

/// Magnitudes of `phi_lambda(t, x)` as `t` approaches a singular time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityReport {
    pub lambda: f64,
    pub x: f64,
    pub ts: Vec<f64>,
    pub cos_abs: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// Slope of `ln |phi|` against `ln |cos t|`.
    pub fitted_exponent: f64,
    pub fit: LinearFit,
    pub blow_up: bool,
}

/// Fits `|phi_lambda(t, x)| ~ |cos t|^e` over `ts`. A blow-up is flagged when
/// the list reaches `|cos t| < 1e-2` with an exponent below `-1/4`.
pub fn singularity_probe(lambda: f64, x: f64, ts: &[f64]) -> Result<SingularityReport> {
    if ts.len() < 2 {
        return Err(Error::invalid("the probe needs at least two times"));
    }
    let magnitudes = ts
        .iter()
        .map(|&t| harmonic_evolve_closed(lambda, t, x).map(|v| v.norm()))
        .collect::<Result<Vec<_>>>()?;
    let cos_abs: Vec<f64> = ts.iter().map(|t| t.cos().abs()).collect();
    let pts: Vec<(f64, f64)> = cos_abs
        .iter()
        .zip(&magnitudes)
        .map(|(c, m)| (c.ln(), m.ln()))
        .collect();
    let spread = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
        - pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let fit = if spread > 1e-12 {
        least_squares(&pts)
    } else {
        LinearFit {
            slope: 0.0,
            intercept: pts[0].1,
            residual: 0.0,
        }
    };
    let min_cos = cos_abs.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SingularityReport {
        lambda,
        x,
        ts: ts.to_vec(),
        cos_abs,
        magnitudes,
        fitted_exponent: fit.slope,
        fit,
        blow_up: min_cos < 1e-2 && fit.slope < -0.25,
    })
}

/// Times `pi/2 - 10^{-k/2}` for `k = 2..=2 + count - 1`.
pub fn default_probe_times(count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| FRAC_PI_2 - 10f64.powf(-(k as f64 + 2.0) / 2.0))
        .collect()
}
