//! Infinite-order differential operators `sum_j b_j (d/dW)^j`, identified with
//! their symbols `sum_j b_j W^j`, and their action on Taylor series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{growth_certificate, GrowthCertificate};
use crate::series;
use crate::special::{ln_factorials, mittag_leffler, SeriesEvalConfig};
use crate::sum::CompensatedSum;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest symbol truncation accepted by [`symbol_from_dispersion`].
pub const MAX_SYMBOL_DEGREE: usize = 512;
pub const DEFAULT_SYMBOL_DEGREE: usize = 256;
pub const DEFAULT_SERIES_DEGREE: usize = 256;

/// `i^n` for integer `n`.
pub fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => I,
        2 => Complex64::new(-1.0, 0.0),
        _ => -I,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispersionKind {
    Polynomial,
    PowerSeries,
}

/// Dispersion `P(X) = sum_k gamma_k X^k`, a polynomial or a power series with
/// radius of convergence `radius` (`None` for entire series).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionSpec {
    pub kind: DispersionKind,
    pub gammas: Vec<Complex64>,
    pub radius: Option<f64>,
}

impl DispersionSpec {
    pub fn polynomial(gammas: Vec<Complex64>) -> Result<Self> {
        let s = Self {
            kind: DispersionKind::Polynomial,
            gammas,
            radius: None,
        };
        s.validate()?;
        Ok(s)
    }

    /// Real-coefficient polynomial.
    pub fn polynomial_real(gammas: &[f64]) -> Result<Self> {
        Self::polynomial(gammas.iter().map(|&g| Complex64::new(g, 0.0)).collect())
    }

    /// `X^p`.
    pub fn monomial(p: usize) -> Self {
        let mut g = vec![ZERO; p + 1];
        g[p] = Complex64::new(1.0, 0.0);
        Self {
            kind: DispersionKind::Polynomial,
            gammas: g,
            radius: None,
        }
    }

    pub fn power_series(gammas: Vec<Complex64>, radius: Option<f64>) -> Result<Self> {
        let s = Self {
            kind: DispersionKind::PowerSeries,
            gammas,
            radius,
        };
        s.validate()?;
        Ok(s)
    }

    /// `exp(X) = sum X^k / k!` truncated at `terms` coefficients.
    pub fn exponential(terms: usize) -> Self {
        let mut g = Vec::with_capacity(terms);
        let mut c = 1.0;
        for k in 0..terms {
            g.push(Complex64::new(c, 0.0));
            c /= (k + 1) as f64;
        }
        Self {
            kind: DispersionKind::PowerSeries,
            gammas: g,
            radius: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self
            .gammas
            .iter()
            .any(|g| !(g.re.is_finite() && g.im.is_finite()))
        {
            return Err(Error::invalid("dispersion coefficients must be finite"));
        }
        match self.kind {
            DispersionKind::Polynomial => {
                if let Some(last) = self.gammas.last() {
                    if *last == ZERO {
                        return Err(Error::invalid(
                            "leading polynomial coefficient must be nonzero",
                        ));
                    }
                }
                if self.radius.is_some() {
                    return Err(Error::invalid("a polynomial dispersion carries no radius"));
                }
            }
            DispersionKind::PowerSeries => {
                if let Some(r) = self.radius {
                    if !(r > 0.0) {
                        return Err(Error::invalid("radius of convergence must be positive"));
                    }
                }
                let bound = self.radius.map_or(1.0, |r| 2.0 / r);
                let n = self.gammas.len();
                for k in (n / 2).max(4)..n {
                    let m = self.gammas[k].norm();
                    if m > 0.0 && m.powf(1.0 / k as f64) > bound {
                        return Err(Error::invalid(format!(
                            "coefficient gamma_{k} grows faster than the declared radius allows"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.gammas.len().saturating_sub(1)
    }

    /// Is every coefficient real with only even powers present?
    pub fn is_even_real(&self) -> bool {
        self.gammas
            .iter()
            .enumerate()
            .all(|(k, g)| g.im == 0.0 && (k % 2 == 0 || g.re == 0.0))
    }

    pub fn check_argument(&self, lambda: Complex64) -> Result<()> {
        if let Some(r) = self.radius {
            if lambda.norm() >= r {
                return Err(Error::Domain(format!(
                    "|lambda| = {} is outside the radius of convergence {r}",
                    lambda.norm()
                )));
            }
        }
        Ok(())
    }

    /// `P(lambda)`.
    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        self.check_argument(lambda)?;
        Ok(series::eval(&self.gammas, lambda))
    }

    /// `sum_k |gamma_k|`.
    pub fn abs_sum(&self) -> f64 {
        self.gammas.iter().map(|g| g.norm()).sum()
    }

    /// Coefficients of `t S(W)` with `S(W) = sum_k i^{1-k} gamma_k W^k`, so that
    /// `S(i k) = i P(k)`.
    pub fn exponent_series(&self, t: f64, len: usize) -> Vec<Complex64> {
        let mut g = vec![ZERO; len];
        for (k, gk) in self.gammas.iter().enumerate().take(len) {
            g[k] = t * i_pow(1 - k as i64) * gk;
        }
        g
    }

    /// Coefficients of `Pcheck(X) = -sum_k (-i)^k gamma_k X^k`, the spatial
    /// polynomial with `Pcheck(i k) = -P(k)`, so that plane waves
    /// `e^{i P(k) t} e^{i k x}` solve `i dpsi/dt - Pcheck(d/dx) psi = 0`.
    pub fn check_polynomial(&self) -> Vec<Complex64> {
        self.gammas
            .iter()
            .enumerate()
            .map(|(k, g)| -i_pow(-(k as i64)) * g)
            .collect()
    }
}

/// Taylor series of an entire function together with a growth certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntireFunctionSeries {
    pub taylor_coeffs: Vec<Complex64>,
    pub certificate: GrowthCertificate,
}

impl EntireFunctionSeries {
    /// Wraps coefficients with the minimal certificate of order `p` and type `b`.
    pub fn new(taylor_coeffs: Vec<Complex64>, p: f64, b: f64) -> Result<Self> {
        let certificate = growth_certificate(&taylor_coeffs, p, b)?;
        Ok(Self {
            taylor_coeffs,
            certificate,
        })
    }

    /// `z -> e^{i lambda z}` to the given degree.
    pub fn exponential(lambda: Complex64, degree: usize) -> Self {
        let mut c = Vec::with_capacity(degree + 1);
        let mut v = Complex64::new(1.0, 0.0);
        for l in 0..=degree {
            c.push(v);
            v *= I * lambda / (l + 1) as f64;
        }
        let b = lambda.norm().max(1e-300);
        Self {
            taylor_coeffs: c,
            certificate: GrowthCertificate { p: 1.0, c: 1.0, b },
        }
    }

    pub fn degree(&self) -> usize {
        self.taylor_coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        series::eval(&self.taylor_coeffs, z)
    }

    pub fn linear_combination(a: Complex64, f: &Self, b: Complex64, g: &Self) -> Result<Self> {
        let n = f.taylor_coeffs.len().max(g.taylor_coeffs.len());
        let at = |s: &Self, k: usize| s.taylor_coeffs.get(k).copied().unwrap_or(ZERO);
        let coeffs = (0..n).map(|k| a * at(f, k) + b * at(g, k)).collect();
        let p = f.certificate.p.max(g.certificate.p);
        let beta = f.certificate.b.max(g.certificate.b);
        Self::new(coeffs, p, beta)
    }
}

/// Truncated symbol `sum_{j <= J} b_j W^j` of an infinite-order operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSymbol {
    pub coeffs: Vec<Complex64>,
    pub symbol_order: f64,
    pub symbol_type_bound: f64,
    pub truncation_j: usize,
    /// `|b_j| <= C b^j / Gamma(j/p + 1)` for entire symbols; `None` for
    /// symbols with a finite radius of convergence.
    pub certificate: Option<GrowthCertificate>,
    pub radius: Option<f64>,
}

impl OperatorSymbol {
    pub fn identity(truncation_j: usize) -> Self {
        let mut coeffs = vec![ZERO; truncation_j + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        Self {
            coeffs,
            symbol_order: 1.0,
            symbol_type_bound: 0.0,
            truncation_j,
            certificate: Some(GrowthCertificate {
                p: 1.0,
                c: 1.0,
                b: 1.0,
            }),
            radius: None,
        }
    }

    pub fn zero(truncation_j: usize) -> Self {
        Self {
            coeffs: vec![ZERO; truncation_j + 1],
            symbol_order: 1.0,
            symbol_type_bound: 0.0,
            truncation_j,
            certificate: Some(GrowthCertificate {
                p: 1.0,
                c: 0.0,
                b: 1.0,
            }),
            radius: None,
        }
    }

    /// Multiplies the symbol by `S(W)^mu` (the `t`-derivative of order `mu`).
    pub fn times_exponent_power(&self, spec: &DispersionSpec, mu: usize) -> Self {
        let n = self.coeffs.len();
        let s = spec.exponent_series(1.0, n);
        let mut c = self.coeffs.clone();
        for _ in 0..mu {
            c = series::mul(&c, &s, n);
        }
        let certificate = self
            .certificate
            .and_then(|cert| growth_certificate(&c, cert.p, cert.b).ok());
        Self {
            coeffs: c,
            certificate,
            ..self.clone()
        }
    }
}

/// Symbol `exp(t S(W))`, `S(W) = sum_k i^{1-k} gamma_k W^k`, truncated at degree `truncation_j`.
pub fn symbol_from_dispersion(
    spec: &DispersionSpec,
    t: f64,
    truncation_j: usize,
) -> Result<OperatorSymbol> {
    spec.validate()?;
    if !t.is_finite() {
        return Err(Error::invalid("t must be finite"));
    }
    if truncation_j > MAX_SYMBOL_DEGREE {
        return Err(Error::Truncation(format!(
            "symbol degree {truncation_j} exceeds the limit {MAX_SYMBOL_DEGREE}"
        )));
    }
    if spec.kind == DispersionKind::Polynomial && truncation_j < spec.degree() {
        return Err(Error::invalid(
            "symbol truncation must reach the polynomial degree",
        ));
    }
    let len = truncation_j + 1;
    let g = spec.exponent_series(t, len);
    let coeffs = series::exp(&g, len);
    if coeffs
        .iter()
        .any(|c| !(c.re.is_finite() && c.im.is_finite()))
    {
        return Err(Error::Overflow("symbol coefficients".into()));
    }
    let b_type = t.abs() * spec.abs_sum();
    let (order, certificate) = match spec.kind {
        DispersionKind::Polynomial => {
            let p = (spec.degree() as f64).max(1.0);
            let b = if b_type > 0.0 {
                1.05 * b_type.powf(1.0 / p)
            } else {
                1.0
            };
            (p, Some(growth_certificate(&coeffs, p, b)?))
        }
        DispersionKind::PowerSeries => (1.0, None),
    };
    Ok(OperatorSymbol {
        coeffs,
        symbol_order: order,
        symbol_type_bound: b_type,
        truncation_j,
        certificate,
        radius: spec.radius,
    })
}

/// `(Df)_l = sum_j ((j+l)!/l!) b_j a_{l+j}`, with output certificate
/// `|(Df)_l| <= K beta^l / l!`.
///
/// For certified entire symbols `K = C_f C_sym E_{1/p,1}(b_sym beta)`; otherwise
/// `K = C_f sum_j |b_j| beta^j`, which requires `beta <= 0.95 rho`.
pub fn apply_operator(
    sym: &OperatorSymbol,
    f: &EntireFunctionSeries,
) -> Result<EntireFunctionSeries> {
    let cert = f.certificate;
    let l_max = f.degree();
    if cert.c > 0.0 && cert.ln_bound(l_max) - cert.c.ln() > (1e-12f64).ln() {
        return Err(Error::Truncation(format!(
            "series of degree {l_max} leaves a tail above 1e-12 for the certificate (C={}, b={}, p={})",
            cert.c, cert.b, cert.p
        )));
    }
    if cert.p != 1.0 {
        return Err(Error::invalid("operators act on order-1 certified series"));
    }
    let beta = cert.b;
    if let Some(rho) = sym.radius {
        if beta > 0.95 * rho {
            return Err(Error::Domain(format!(
                "series type {beta} exceeds 0.95 of the symbol radius {rho}"
            )));
        }
    }

    let j_max = sym.truncation_j.min(sym.coeffs.len() - 1);
    let lf = ln_factorials(l_max + j_max + 1);
    let s = beta.max(1.0);
    let ls = s.ln();
    // a_m m! / s^m and b_j s^j, formed from logarithms of the moduli
    let scaled = |v: Complex64, ln_w: f64| -> Complex64 {
        let m = v.norm();
        if m == 0.0 {
            ZERO
        } else {
            (v / m) * (m.ln() + ln_w).exp()
        }
    };
    let d: Vec<Complex64> = f
        .taylor_coeffs
        .iter()
        .enumerate()
        .map(|(m, &a)| scaled(a, lf[m] - m as f64 * ls))
        .collect();
    let bs: Vec<Complex64> = sym.coeffs[..=j_max]
        .iter()
        .enumerate()
        .map(|(j, &b)| scaled(b, j as f64 * ls))
        .collect();
    let mut out = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        let mut acc = CompensatedSum::new();
        for j in 0..=j_max.min(l_max - l) {
            acc.add(bs[j] * d[l + j]);
        }
        out.push(scaled(acc.value(), l as f64 * ls - lf[l]));
    }
    if out.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::Overflow("operator output coefficients".into()));
    }

    let k = match (sym.radius, sym.certificate) {
        (None, Some(sc)) => {
            let ml = mittag_leffler(
                sc.p,
                Complex64::new(sc.b * beta, 0.0),
                &SeriesEvalConfig {
                    max_terms: 5000,
                    tail_tolerance: 1e-12,
                    ..Default::default()
                },
            )
            .map_err(|e| Error::CertificateOverflow(format!("Mittag-Leffler factor: {e}")))?;
            cert.c * sc.c * ml.re
        }
        _ => {
            let total: f64 = bs
                .iter()
                .enumerate()
                .map(|(j, b)| b.norm() * (beta / s).powi(j as i32))
                .sum();
            cert.c * total
        }
    };
    if !k.is_finite() {
        return Err(Error::CertificateOverflow(format!(
            "output constant is not finite (type {beta})"
        )));
    }
    let certificate = GrowthCertificate {
        p: 1.0,
        c: k * (1.0 + 1e-12),
        b: beta,
    };
    Ok(EntireFunctionSeries {
        taylor_coeffs: out,
        certificate,
    })
}

/// Scalar `e^{i t P(lambda)}` by which the operator multiplies `e^{i lambda z}`.
pub fn apply_to_exponential(spec: &DispersionSpec, t: f64, lambda: Complex64) -> Result<Complex64> {
    let p = spec.eval(lambda)?;
    Ok((I * t * p).exp())
}

/// Radial growth fit of an applied series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTransportReport {
    /// Slope of `ln ln M(r)` against `ln r`.
    pub fitted_order: f64,
    /// Fitted `eps` in `|g(z)| <= C' exp(eps |z|^p_check)`.
    pub epsilon: f64,
    pub c_prime: f64,
    pub p_check: f64,
    pub radius: f64,
    pub radii: Vec<f64>,
    pub max_moduli: Vec<f64>,
    pub identically_zero: bool,
    /// Every sampled `M(r)` respects the fitted bound.
    pub bound_holds: bool,
}

/// Applies `sym` to `f`, samples `M(r) = max_theta |g(r e^{i theta})|` on
/// `[R/4, R]` with `R = 8`, and fits both the growth order and the constants of
/// `|g(z)| <= C' exp(eps |z|^p_check)`.
pub fn growth_transport_check(
    sym: &OperatorSymbol,
    f: &EntireFunctionSeries,
    p_check: f64,
) -> Result<GrowthTransportReport> {
    if !(p_check > 1.0 && p_check <= 2.0) {
        return Err(Error::invalid("p_check must lie in (1, 2]"));
    }
    let g = apply_operator(sym, f)?;
    let radius = 8.0;
    let n_r = 24;
    let n_theta = 64;
    let radii: Vec<f64> = (0..n_r)
        .map(|k| radius / 4.0 + (radius - radius / 4.0) * k as f64 / (n_r - 1) as f64)
        .collect();
    let max_moduli: Vec<f64> = radii
        .iter()
        .map(|&r| {
            (0..n_theta)
                .map(|m| {
                    let th = std::f64::consts::TAU * m as f64 / n_theta as f64;
                    g.eval(Complex64::from_polar(r, th)).norm()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let identically_zero = g.taylor_coeffs.iter().all(|c| *c == ZERO);
    if identically_zero {
        return Ok(GrowthTransportReport {
            fitted_order: 0.0,
            epsilon: 0.0,
            c_prime: 0.0,
            p_check,
            radius,
            radii,
            max_moduli,
            identically_zero,
            bound_holds: true,
        });
    }
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .zip(&max_moduli)
        .filter(|(_, &m)| m > std::f64::consts::E)
        .map(|(&r, &m)| (r.ln(), m.ln().ln()))
        .collect();
    let fitted_order = if pts.len() >= 2 {
        crate::fit::least_squares(&pts).slope
    } else {
        0.0
    };
    let lin: Vec<(f64, f64)> = radii
        .iter()
        .zip(&max_moduli)
        .filter(|(_, &m)| m > 0.0)
        .map(|(&r, &m)| (r.powf(p_check), m.ln()))
        .collect();
    let epsilon = if lin.len() >= 2 {
        crate::fit::least_squares(&lin).slope.max(0.0)
    } else {
        0.0
    };
    let c_prime = radii
        .iter()
        .zip(&max_moduli)
        .map(|(&r, &m)| m * (-epsilon * r.powf(p_check)).exp())
        .fold(0.0, f64::max);
    let bound_holds = radii
        .iter()
        .zip(&max_moduli)
        .all(|(&r, &m)| m <= c_prime * (epsilon * r.powf(p_check)).exp() * (1.0 + 1e-12));
    Ok(GrowthTransportReport {
        fitted_order,
        epsilon,
        c_prime,
        p_check,
        radius,
        radii,
        max_moduli,
        identically_zero,
        bound_holds,
    })
}
