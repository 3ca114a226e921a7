//! Evolution of `F_N(x, a)` under `i dpsi/dt - Pcheck(d/dx) psi = 0`:
//! `psi_N(t, x) = sum_j C_j e^{i P(k_j) t} e^{i k_j x}`, its limit
//! `e^{i t P(a)} e^{i a x}`, and uniform gap measurements.
//!
//! Two evaluation routes are provided. The direct sum is used while
//! `sum_j |C_j|` is moderate; beyond that the field is written as
//! `sum_m s_m(t) F_N^{(m)}(x)` with `s_m` the Taylor coefficients of the symbol
//! `exp(t S(W))`, and the derivatives come from a scaled Taylor jet of the
//! product form.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{loglog_rate, LinearFit};
use crate::operators::{symbol_from_dispersion, DispersionKind, DispersionSpec};
use crate::oracles::fd_mixed;
use crate::sequences::{coefficients, shifted_jet, FourierSum, SuperoscParams};
use crate::special::ln_factorials;
use crate::sum::CompensatedSum;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Above this value of `sum_j |C_j|` the operator route replaces the direct sum.
pub const DIRECT_SUM_LIMIT: f64 = 1e4;

const JET_DEGREES: [usize; 4] = [64, 128, 256, 512];

/// Checks the preconditions shared by [`psi`] and [`limit_field`].
pub fn check_preconditions(spec: &DispersionSpec, a: f64) -> Result<()> {
    spec.validate()?;
    if !a.is_finite() {
        return Err(Error::invalid("a must be finite"));
    }
    if spec.kind == DispersionKind::PowerSeries {
        if a.abs() < 1.0 {
            return Err(Error::Domain(format!(
                "power-series evolution needs |a| >= 1, got {a}"
            )));
        }
        if let Some(rho) = spec.radius {
            if rho <= 2.0 {
                return Err(Error::Domain(format!(
                    "power-series evolution needs a radius above 2, got {rho}"
                )));
            }
            if a.abs() >= rho - 1.0 {
                return Err(Error::Domain(format!(
                    "power-series evolution needs |a| < rho - 1 = {}, got {a}",
                    rho - 1.0
                )));
            }
        }
    }
    Ok(())
}

/// `e^{i t P(a)} e^{i a x}` differentiated `mu` times in `t` and `nu` times in `x`.
pub fn limit_derivative(
    spec: &DispersionSpec,
    a: f64,
    t: f64,
    x: f64,
    mu: usize,
    nu: usize,
) -> Result<Complex64> {
    check_preconditions(spec, a)?;
    let p = spec.eval(Complex64::new(a, 0.0))?;
    let w = I * p;
    Ok(w.powu(mu as u32) * (I * a).powu(nu as u32) * (w * t + I * a * x).exp())
}

/// `e^{i t P(a)} e^{i a x}`.
pub fn limit_field(spec: &DispersionSpec, a: f64, t: f64, x: f64) -> Result<Complex64> {
    limit_derivative(spec, a, t, x, 0, 0)
}

/// Direct sum `sum_j C_j (iP(k_j))^mu (i k_j)^nu e^{i P(k_j) t + i k_j x}`.
pub fn psi_direct(
    spec: &DispersionSpec,
    fs: &FourierSum,
    t: f64,
    x: f64,
    mu: usize,
    nu: usize,
) -> Result<Complex64> {
    let mut acc = CompensatedSum::new();
    for (c, &k) in fs.coefficients.iter().zip(&fs.frequencies) {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let w = I * spec.eval(Complex64::new(k, 0.0))?;
        acc.add(c * w.powu(mu as u32) * (I * k).powu(nu as u32) * (w * t + I * k * x).exp());
    }
    Ok(acc.value())
}

/// Symbol coefficients `s_m` of `S(W)^mu exp(t S(W))` at the largest degree.
fn symbol_for(spec: &DispersionSpec, t: f64, mu: usize) -> Result<Vec<Complex64>> {
    let j = *JET_DEGREES.last().unwrap();
    let sym = symbol_from_dispersion(spec, t, j)?;
    Ok(if mu == 0 {
        sym.coeffs
    } else {
        sym.times_exponent_power(spec, mu).coeffs
    })
}

/// Smallest jet degree `J` at which `|s_m| beta^{m+nu} sqrt(2 pi (m+nu))`, a
/// bound on the terms `|s_m F_N^{(m+nu)}(x)|` for real `x`, is negligible past `J`.
fn jet_degree(symbols: &[Vec<Complex64>], beta: f64, nu: usize) -> Result<usize> {
    let lb = beta.ln();
    let bound = |s: &[Complex64], m: usize| -> f64 {
        let v = s[m].norm();
        if v == 0.0 {
            f64::NEG_INFINITY
        } else {
            let k = (m + nu) as f64;
            v.ln() + k * lb + 0.5 * (std::f64::consts::TAU * k.max(1.0)).ln()
        }
    };
    'deg: for &j in &JET_DEGREES {
        for s in symbols {
            let peak = (0..=j)
                .map(|m| bound(s, m))
                .fold(f64::NEG_INFINITY, f64::max);
            let floor = peak.max(0.0) + (1e-17f64).ln();
            let tail = (j - j / 8..=j)
                .chain(j + 1..s.len().min(2 * j))
                .map(|m| bound(s, m))
                .fold(f64::NEG_INFINITY, f64::max);
            if tail > floor {
                continue 'deg;
            }
        }
        return Ok(j);
    }
    Err(Error::Truncation(format!(
        "operator route needs more than {} symbol terms",
        JET_DEGREES.last().unwrap()
    )))
}

/// Scaled derivatives of `F_N` at one point: `F_N^{(k)}(x) = exp(lw_k) d_k`.
struct Jet {
    d: Vec<Complex64>,
    lw: Vec<f64>,
}

impl Jet {
    fn new(params: &SuperoscParams, x: f64, len: usize, lf: &[f64]) -> Self {
        let beta = params.a.abs() + 1.0;
        let r = (len as f64 / (std::f64::consts::E * beta)).max(1.0);
        let d = shifted_jet(params, Complex64::new(x, 0.0), r, len);
        let lr = r.ln();
        let lw = (0..len).map(|k| lf[k] - k as f64 * lr).collect();
        Self { d, lw }
    }

    /// `sum_m s_m F_N^{(m + nu)}(x)`.
    fn contract(&self, s: &[Complex64], j: usize, nu: usize) -> Complex64 {
        let mut acc = CompensatedSum::new();
        for m in 0..=j {
            let k = m + nu;
            let v = s[m] * self.d[k];
            let n = v.norm();
            if n > 0.0 {
                acc.add(v / n * (n.ln() + self.lw[k]).exp());
            }
        }
        acc.value()
    }
}

/// `d^{mu+nu} psi_N / dt^mu dx^nu` on the tensor grid `ts x xs` by the
/// operator route. The result is indexed `[it][ix]`.
pub fn psi_operator_grid(
    spec: &DispersionSpec,
    params: &SuperoscParams,
    ts: &[f64],
    xs: &[f64],
    mu: usize,
    nu: usize,
) -> Result<Vec<Vec<Complex64>>> {
    check_preconditions(spec, params.a)?;
    params.validate()?;
    let beta = params.a.abs() + 1.0;
    let symbols = ts
        .iter()
        .map(|&t| symbol_for(spec, t, mu))
        .collect::<Result<Vec<_>>>()?;
    let j = jet_degree(&symbols, beta, nu)?;
    let len = j + nu + 1;
    let lf = ln_factorials(len);
    let cols: Vec<Vec<Complex64>> = xs
        .par_iter()
        .map(|&x| {
            let jet = Jet::new(params, x, len, &lf);
            symbols.iter().map(|s| jet.contract(s, j, nu)).collect()
        })
        .collect();
    Ok((0..ts.len())
        .map(|it| cols.iter().map(|c| c[it]).collect())
        .collect())
}

/// Operator-route value of `d^{mu+nu} psi_N / dt^mu dx^nu` at one point.
pub fn psi_operator(
    spec: &DispersionSpec,
    params: &SuperoscParams,
    t: f64,
    x: f64,
    mu: usize,
    nu: usize,
) -> Result<Complex64> {
    Ok(psi_operator_grid(spec, params, &[t], &[x], mu, nu)?[0][0])
}

/// `d^{mu+nu} psi_N / dt^mu dx^nu` on a tensor grid, choosing the route from
/// the conditioning `sum_j |C_j|`.
pub fn psi_grid(
    spec: &DispersionSpec,
    params: &SuperoscParams,
    ts: &[f64],
    xs: &[f64],
    mu: usize,
    nu: usize,
) -> Result<Vec<Vec<Complex64>>> {
    check_preconditions(spec, params.a)?;
    if params.abs_coefficient_sum() <= DIRECT_SUM_LIMIT {
        let fs = coefficients(params)?;
        ts.iter()
            .map(|&t| {
                xs.iter()
                    .map(|&x| psi_direct(spec, &fs, t, x, mu, nu))
                    .collect()
            })
            .collect()
    } else {
        psi_operator_grid(spec, params, ts, xs, mu, nu)
    }
}

/// Derivative of the evolved field at one point.
pub fn psi_derivative(
    spec: &DispersionSpec,
    params: &SuperoscParams,
    t: f64,
    x: f64,
    mu: usize,
    nu: usize,
) -> Result<Complex64> {
    Ok(psi_grid(spec, params, &[t], &[x], mu, nu)?[0][0])
}

/// `psi_N(t, x) = sum_j C_j e^{i P(k_j) t} e^{i k_j x}`.
pub fn psi(spec: &DispersionSpec, params: &SuperoscParams, t: f64, x: f64) -> Result<Complex64> {
    psi_derivative(spec, params, t, x, 0, 0)
}

/// Sampled field together with the data that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolvedField {
    pub spec: DispersionSpec,
    pub params: SuperoscParams,
    /// `(t, x, psi_N(t, x))` triples.
    pub sample: Vec<(f64, f64, Complex64)>,
}

pub fn evolve_field(
    spec: &DispersionSpec,
    params: &SuperoscParams,
    ts: &[f64],
    xs: &[f64],
) -> Result<EvolvedField> {
    let v = psi_grid(spec, params, ts, xs, 0, 0)?;
    let mut sample = Vec::with_capacity(ts.len() * xs.len());
    for (it, &t) in ts.iter().enumerate() {
        for (ix, &x) in xs.iter().enumerate() {
            sample.push((t, x, v[it][ix]));
        }
    }
    Ok(EvolvedField {
        spec: spec.clone(),
        params: *params,
        sample,
    })
}

/// Central-difference value of `i dpsi/dt - Pcheck(d/dx) psi` at `(t, x)`.
///
/// The spatial polynomial must have degree at most 4.
pub fn pde_residual(
    spec: &DispersionSpec,
    params: &SuperoscParams,
    t: f64,
    x: f64,
    h: f64,
) -> Result<Complex64> {
    if !(h > 0.0) {
        return Err(Error::invalid("step h must be positive"));
    }
    let q = spec.check_polynomial();
    if q.len() > 5 {
        return Err(Error::invalid(
            "finite-difference residuals support dispersion degree up to 4",
        ));
    }
    check_preconditions(spec, params.a)?;
    let offsets: Vec<f64> = (-2..=2).map(|k| k as f64 * h).collect();
    let ts: Vec<f64> = offsets.iter().map(|o| t + o).collect();
    let xs: Vec<f64> = offsets.iter().map(|o| x + o).collect();
    let grid = psi_grid(spec, params, &ts, &xs, 0, 0)?;
    let at = |tt: f64, xx: f64| {
        let it = ((tt - t) / h).round() as i64 + 2;
        let ix = ((xx - x) / h).round() as i64 + 2;
        grid[it as usize][ix as usize]
    };
    let mut r = I * fd_mixed(at, t, x, 1, 0, h)?;
    for (k, qk) in q.iter().enumerate() {
        if *qk != Complex64::new(0.0, 0.0) {
            r -= qk * fd_mixed(at, t, x, 0, k, h)?;
        }
    }
    Ok(r)
}

/// `d psi / dt - i^{1-p} d^p psi / dx^p` for `P = X^p`, both sides summed term
/// by term. Vanishes on every evolved field.
pub fn derivative_exchange_residual(
    p: usize,
    params: &SuperoscParams,
    t: f64,
    x: f64,
) -> Result<Complex64> {
    let spec = DispersionSpec::monomial(p);
    let lhs = psi_derivative(&spec, params, t, x, 1, 0)?;
    let rhs = psi_derivative(&spec, params, t, x, 0, p)?;
    Ok(lhs - crate::operators::i_pow(1 - p as i64) * rhs)
}

/// Compact rectangle in `(t, x)` sampled on a uniform tensor grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
}

impl Default for GapGrid {
    fn default() -> Self {
        Self {
            t_min: 0.0,
            t_max: 1.0,
            nt: 41,
            x_min: -2.0,
            x_max: 2.0,
            nx: 81,
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect()
}

impl GapGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min <= self.t_max && self.x_min <= self.x_max) {
            return Err(Error::invalid("grid bounds must be ordered"));
        }
        if self.nt == 0 || self.nx == 0 {
            return Err(Error::invalid("grid needs at least one point per axis"));
        }
        if ![self.t_min, self.t_max, self.x_min, self.x_max]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::invalid("grid bounds must be finite"));
        }
        Ok(())
    }

    pub fn ts(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.nt)
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub grid: GapGrid,
    pub ns: Vec<usize>,
    pub gaps: Vec<f64>,
    /// Log-log slope of gap against `N` over the last five points.
    pub fitted_rate: f64,
    pub fit: LinearFit,
    pub derivative_orders: (usize, usize),
    /// `sup_{[-1,1]} |P| <= 1 < |P(a)|`, when it applies.
    pub superoscillation_criterion: Option<bool>,
}

/// Whether `sup_{[-1,1]} |P| <= 1 < |P(a)|`, sampled on 401 points.
pub fn superoscillation_criterion(spec: &DispersionSpec, a: f64) -> Result<bool> {
    let mut sup: f64 = 0.0;
    for k in 0..=400 {
        let x = -1.0 + k as f64 / 200.0;
        sup = sup.max(spec.eval(Complex64::new(x, 0.0))?.norm());
    }
    Ok(sup <= 1.0 && spec.eval(Complex64::new(a, 0.0))?.norm() > 1.0)
}

/// Uniform gap `sup |d^{mu+nu} psi_N - d^{mu+nu} e^{i t P(a) + i a x}|` over the grid
/// for each `N`, with a log-log rate fit.
pub fn supershift_gap(
    spec: &DispersionSpec,
    a: f64,
    grid: &GapGrid,
    ns: &[usize],
    mu: usize,
    nu: usize,
) -> Result<GapReport> {
    check_preconditions(spec, a)?;
    grid.validate()?;
    if mu + nu > 4 {
        return Err(Error::invalid("mu + nu must not exceed 4"));
    }
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) || ns[0] == 0 {
        return Err(Error::invalid(
            "Ns must be positive and strictly increasing",
        ));
    }
    let ts = grid.ts();
    let xs = grid.xs();
    let lim: Vec<Vec<Complex64>> = ts
        .iter()
        .map(|&t| {
            xs.iter()
                .map(|&x| limit_derivative(spec, a, t, x, mu, nu))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut gaps = Vec::with_capacity(ns.len());
    for &n in ns {
        let params = SuperoscParams::new(a, n)?;
        let field = psi_grid(spec, &params, &ts, &xs, mu, nu)?;
        let g = field
            .iter()
            .zip(&lim)
            .flat_map(|(row, lrow)| row.iter().zip(lrow).map(|(v, l)| (v - l).norm()))
            .fold(0.0, f64::max);
        gaps.push(g);
    }
    let fit = loglog_rate(ns, &gaps, 5);
    let criterion = if spec.kind == DispersionKind::Polynomial {
        Some(superoscillation_criterion(spec, a)?)
    } else {
        None
    };
    Ok(GapReport {
        grid: *grid,
        ns: ns.to_vec(),
        gaps,
        fitted_rate: fit.slope,
        fit,
        derivative_orders: (mu, nu),
        superoscillation_criterion: criterion,
    })
}
