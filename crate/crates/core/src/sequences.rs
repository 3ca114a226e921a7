//! The superoscillating sequence
//! `F_N(z, a) = (cos(z/N) + i a sin(z/N))^N = sum_j C_j(N, a) e^{i (1 - 2j/N) z}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series;
use crate::special::ln_gamma_real;
use crate::sum::compensated_sum;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperoscParams {
    pub a: f64,
    pub n: usize,
}

impl SuperoscParams {
    pub fn new(a: f64, n: usize) -> Result<Self> {
        let p = Self { a, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::invalid("N must be at least 1"));
        }
        if !self.a.is_finite() {
            return Err(Error::invalid("a must be finite"));
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.a.abs().max(1.0)
    }

    /// Frequency `k_j = 1 - 2j/N`.
    pub fn frequency(&self, j: usize) -> f64 {
        1.0 - 2.0 * j as f64 / self.n as f64
    }

    /// `sum_j |C_j| = ((|1+a| + |1-a|)/2)^N`, the amplification of the direct sum.
    pub fn abs_coefficient_sum(&self) -> f64 {
        let base = ((1.0 + self.a).abs() + (1.0 - self.a).abs()) / 2.0;
        base.powi(self.n as i32)
    }
}

/// `sum_j C_j e^{i k_j z}` with its generation index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSum {
    pub coefficients: Vec<Complex64>,
    pub frequencies: Vec<f64>,
    pub n: usize,
}

impl FourierSum {
    pub fn new(coefficients: Vec<Complex64>, frequencies: Vec<f64>, n: usize) -> Result<Self> {
        if coefficients.len() != frequencies.len() {
            return Err(Error::invalid(
                "coefficients and frequencies differ in length",
            ));
        }
        if coefficients.len() != n + 1 {
            return Err(Error::invalid("a generation-N sum carries N+1 terms"));
        }
        Ok(Self {
            coefficients,
            frequencies,
            n,
        })
    }

    /// Every frequency lies in `[-1, 1]`.
    pub fn is_band_limited(&self) -> bool {
        self.frequencies.iter().all(|k| k.abs() <= 1.0)
    }

    pub fn abs_sum(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).sum()
    }
}

/// Bound `|f_j| <= C b^j / Gamma(j/p + 1)` on a list of Taylor coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub p: f64,
    pub c: f64,
    pub b: f64,
}

impl GrowthCertificate {
    /// Log of the majorant at index `j`.
    pub fn ln_bound(&self, j: usize) -> f64 {
        if self.c == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.c.ln() + j as f64 * self.b.ln() - ln_gamma_real(j as f64 / self.p + 1.0)
    }

    /// Checks the bound on every coefficient, allowing relative slack `rtol`.
    pub fn validates(&self, coeffs: &[Complex64], rtol: f64) -> bool {
        coeffs.iter().enumerate().all(|(j, f)| {
            let m = f.norm();
            m == 0.0 || m.ln() <= self.ln_bound(j) + rtol
        })
    }
}

/// Float with a separate binary exponent, used to run the coefficient
/// recurrence far outside the `f64` range.
#[derive(Clone, Copy)]
struct Scaled {
    m: f64,
    e: i32,
}

impl Scaled {
    const STEP: i32 = 256;

    fn new(m: f64) -> Self {
        let mut s = Self { m, e: 0 };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let big = 2f64.powi(Self::STEP);
        while self.m.abs() > big {
            self.m /= big;
            self.e += Self::STEP;
        }
        while self.m != 0.0 && self.m.abs() < 1.0 / big {
            self.m *= big;
            self.e -= Self::STEP;
        }
    }

    fn mul(self, x: f64) -> Self {
        let mut s = Self {
            m: self.m * x,
            e: self.e,
        };
        s.normalize();
        s
    }

    fn powu(self, mut k: usize) -> Self {
        let mut acc = Scaled::new(1.0);
        let mut base = self;
        while k > 0 {
            if k & 1 == 1 {
                acc = Scaled {
                    m: acc.m * base.m,
                    e: acc.e + base.e,
                };
                acc.normalize();
            }
            k >>= 1;
            if k > 0 {
                base = Scaled {
                    m: base.m * base.m,
                    e: 2 * base.e,
                };
                base.normalize();
            }
        }
        acc
    }

    fn to_f64(self) -> f64 {
        if self.m == 0.0 {
            return 0.0;
        }
        let e = self.e.clamp(-1400, 1400);
        self.m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }
}

/// `C_j(N, a) = binom(N, j) ((1+a)/2)^{N-j} ((1-a)/2)^j`, `k_j = 1 - 2j/N`.
///
/// The ratio recurrence `C_{j+1} = C_j (N-j)/(j+1) (1-a)/(1+a)` runs on a
/// mantissa with a detached exponent, so intermediate binomials never overflow.
pub fn coefficients(params: &SuperoscParams) -> Result<FourierSum> {
    params.validate()?;
    let n = params.n;
    let hi = (1.0 + params.a) / 2.0;
    let lo = (1.0 - params.a) / 2.0;
    let freqs: Vec<f64> = (0..=n).map(|j| params.frequency(j)).collect();
    let zero = Complex64::new(0.0, 0.0);
    let mut coeffs = vec![zero; n + 1];
    if hi == 0.0 {
        coeffs[n] = Complex64::new(Scaled::new(lo).powu(n).to_f64(), 0.0);
    } else if lo == 0.0 {
        coeffs[0] = Complex64::new(Scaled::new(hi).powu(n).to_f64(), 0.0);
    } else {
        let ratio = lo / hi;
        let mut c = Scaled::new(hi).powu(n);
        for j in 0..=n {
            let v = c.to_f64();
            if !v.is_finite() {
                return Err(Error::Overflow(format!(
                    "|C_{j}({n}, {})| exceeds the f64 range",
                    params.a
                )));
            }
            coeffs[j] = Complex64::new(v, 0.0);
            if j < n {
                c = c.mul((n - j) as f64 / (j + 1) as f64 * ratio);
            }
        }
    }
    if coeffs.iter().any(|c| !c.re.is_finite()) {
        return Err(Error::Overflow("coefficient overflow".into()));
    }
    FourierSum::new(coeffs, freqs, n)
}

fn powu(mut base: Complex64, mut k: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        k >>= 1;
        if k > 0 {
            base *= base;
        }
    }
    acc
}

/// Product form `(cos(z/N) + i a sin(z/N))^N`.
pub fn evaluate_product(z: Complex64, params: &SuperoscParams) -> Complex64 {
    let w = z / params.n as f64;
    powu(w.cos() + I * params.a * w.sin(), params.n)
}

/// Direct sum `sum_j C_j e^{i k_j z}`.
pub fn evaluate_sum(z: Complex64, fs: &FourierSum) -> Complex64 {
    compensated_sum(
        fs.coefficients
            .iter()
            .zip(&fs.frequencies)
            .map(|(c, &k)| c * (I * k * z).exp()),
    )
}

/// `(2/3)(|a^2-1|/N)|z|^2 exp((alpha+1)|z|)` with `alpha = max(1, |a|)`.
pub fn gap_bound(z: Complex64, params: &SuperoscParams) -> f64 {
    let r = z.norm();
    let a = params.a;
    2.0 / 3.0 * ((a * a - 1.0).abs() / params.n as f64) * r * r * ((params.alpha() + 1.0) * r).exp()
}

/// Smallest `C` with `|f_j| <= C b^j / Gamma(j/p + 1)` over the given list.
pub fn growth_certificate(coeffs: &[Complex64], p: f64, b: f64) -> Result<GrowthCertificate> {
    if !(p >= 1.0) {
        return Err(Error::invalid("growth order p must be at least 1"));
    }
    if !(b > 0.0) {
        return Err(Error::invalid("growth type b must be positive"));
    }
    let mut ln_c = f64::NEG_INFINITY;
    for (j, f) in coeffs.iter().enumerate() {
        let m = f.norm();
        if m > 0.0 {
            let v = m.ln() + ln_gamma_real(j as f64 / p + 1.0) - j as f64 * b.ln();
            ln_c = ln_c.max(v);
        }
    }
    let c = ln_c.exp();
    if !c.is_finite() {
        return Err(Error::Overflow("growth certificate constant".into()));
    }
    Ok(GrowthCertificate { p, c, b })
}

/// Grid proxy for `sup |f(z)| exp(-B |z|^p)` on `|z| <= radius`.
///
/// Radii sit on the fixed lattice `k / grid_n`, so enlarging the radius only
/// adds sample points and the estimate is nondecreasing in `radius`.
pub fn ap_norm_estimate<F>(f: F, p: f64, b: f64, radius: f64, grid_n: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    use rayon::prelude::*;
    if grid_n < 8 {
        return Err(Error::invalid("grid_n must be at least 8"));
    }
    if !(radius >= 0.0) {
        return Err(Error::invalid("radius must be nonnegative"));
    }
    let nr = (radius * grid_n as f64 + 1e-9).floor() as usize;
    let best = (0..=nr)
        .into_par_iter()
        .map(|k| {
            let r = k as f64 / grid_n as f64;
            let damp = -b * r.powf(p);
            let rays = if k == 0 { 1 } else { grid_n };
            (0..rays)
                .map(|m| {
                    let th = 2.0 * std::f64::consts::PI * m as f64 / grid_n as f64;
                    let v = f(Complex64::from_polar(r, th)).norm();
                    if v == 0.0 {
                        0.0
                    } else {
                        (v.ln() + damp).exp()
                    }
                })
                .fold(0.0f64, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// Taylor coefficients `f_0..f_degree` of `z -> F_N(z, a)`.
pub fn taylor_coefficients(params: &SuperoscParams, degree: usize) -> Vec<Complex64> {
    shifted_jet(params, Complex64::new(0.0, 0.0), 1.0, degree + 1)
}

/// Coefficients `d_m` of `u -> F_N(x + r u, a)` for `m < len`, so that
/// `F_N^{(m)}(x) = m! d_m / r^m`.
pub fn shifted_jet(params: &SuperoscParams, x: Complex64, r: f64, len: usize) -> Vec<Complex64> {
    let n = params.n;
    let s = r / n as f64;
    let theta = x / n as f64;
    let mut g = Vec::with_capacity(len);
    let mut scale = 1.0;
    for k in 0..len {
        let ph = theta + k as f64 * std::f64::consts::FRAC_PI_2;
        g.push(scale * (ph.cos() + I * params.a * ph.sin()));
        scale *= s / (k + 1) as f64;
    }
    series::pow_int(&g, n as u64, len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn first_generation_coefficients() {
        let p = SuperoscParams::new(3.0, 1).unwrap();
        let fs = coefficients(&p).unwrap();
        assert_eq!(fs.coefficients, vec![c(2.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(fs.frequencies, vec![1.0, -1.0]);
    }

    #[test]
    fn second_generation_a2() {
        let fs = coefficients(&SuperoscParams::new(2.0, 2).unwrap()).unwrap();
        let want = [2.25, -1.5, 0.25];
        for (g, w) in fs.coefficients.iter().zip(want) {
            assert!((g.re - w).abs() < 1e-15);
        }
        assert!((evaluate_sum(c(0.0, 0.0), &fs) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn a_equal_one_is_a_single_wave() {
        for n in [1, 7, 100] {
            let fs = coefficients(&SuperoscParams::new(1.0, n).unwrap()).unwrap();
            assert_eq!(fs.coefficients[0], c(1.0, 0.0));
            assert!(fs.coefficients[1..].iter().all(|v| *v == c(0.0, 0.0)));
        }
    }

    #[test]
    fn log_space_coefficients_sum_to_one() {
        for (a, n) in [(2.0, 61), (-3.0, 80), (0.5, 300), (5.0, 70)] {
            let p = SuperoscParams::new(a, n).unwrap();
            let fs = coefficients(&p).unwrap();
            let s = evaluate_sum(c(0.0, 0.0), &fs);
            assert!(
                (s - 1.0).norm() <= 1e-14 * fs.abs_sum().max(1.0),
                "a={a} n={n}: {s}"
            );
        }
    }

    #[test]
    fn overflow_is_reported() {
        let p = SuperoscParams::new(5.0, 600).unwrap();
        assert!(matches!(coefficients(&p), Err(Error::Overflow(_))));
    }

    #[test]
    fn product_examples() {
        let p = SuperoscParams::new(3.0, 1).unwrap();
        let v = evaluate_product(c(std::f64::consts::FRAC_PI_2, 0.0), &p);
        assert!((v - c(0.0, 3.0)).norm() < 1e-15);
        assert_eq!(evaluate_product(c(0.0, 0.0), &p), c(1.0, 0.0));
    }

    #[test]
    fn product_matches_sum() {
        let cases = [
            (c(1.0, 1.0), 2.0, 17, 1e-10),
            (c(0.8, 0.0), 2.0, 4, 1e-12),
            (c(0.0, 2.0), -3.0, 8, 1e-10),
        ];
        for (z, a, n, tol) in cases {
            let p = SuperoscParams::new(a, n).unwrap();
            let fs = coefficients(&p).unwrap();
            let d = (evaluate_product(z, &p) - evaluate_sum(z, &fs)).norm();
            assert!(
                d < tol * evaluate_product(z, &p).norm().max(1.0),
                "{z} {a} {n}: {d}"
            );
        }
    }

    #[test]
    fn gap_bound_examples() {
        let p = SuperoscParams::new(2.0, 10).unwrap();
        assert_eq!(gap_bound(c(0.0, 0.0), &p), 0.0);
        let z = c(1.0, 0.0);
        let gap = (evaluate_product(z, &p) - (I * 2.0 * z).exp()).norm();
        assert!(gap <= gap_bound(z, &p));
        let one = SuperoscParams::new(1.0, 9).unwrap();
        assert_eq!(gap_bound(c(3.0, 1.0), &one), 0.0);
        let z = c(2.0, -1.0);
        assert!((evaluate_product(z, &one) - (I * z).exp()).norm() < 1e-14);
    }

    #[test]
    fn exponential_certificate_is_one() {
        let lam = 1.7;
        let mut f = vec![c(1.0, 0.0)];
        for j in 1..40 {
            let prev = f[j - 1];
            f.push(prev * I * lam / j as f64);
        }
        let cert = growth_certificate(&f, 1.0, lam).unwrap();
        assert!((cert.c - 1.0).abs() < 1e-12);
        assert!(cert.validates(&f, 1e-12));
        assert_eq!(
            growth_certificate(&[c(0.0, 0.0); 5], 1.0, 1.0).unwrap().c,
            0.0
        );
    }

    #[test]
    fn sequence_certificate_golden() {
        let p = SuperoscParams::new(2.0, 10).unwrap();
        let f = taylor_coefficients(&p, 60);
        let cert = growth_certificate(&f, 1.0, 3.0).unwrap();
        assert!(cert.validates(&f, 1e-12));
        assert!((cert.c - 1.0).abs() < 1e-12, "C = {}", cert.c);
    }

    #[test]
    fn taylor_coefficients_match_sum() {
        let p = SuperoscParams::new(2.0, 6).unwrap();
        let f = taylor_coefficients(&p, 40);
        let fs = coefficients(&p).unwrap();
        let mut fact = 1.0;
        for (l, v) in f.iter().enumerate() {
            if l > 0 {
                fact *= l as f64;
            }
            let want: Complex64 = fs
                .coefficients
                .iter()
                .zip(&fs.frequencies)
                .map(|(cj, &k)| cj * (I * k).powu(l as u32))
                .sum::<Complex64>()
                / fact;
            assert!((v - want).norm() < 1e-13 * (1.0 + want.norm()), "l={l}");
        }
    }

    #[test]
    fn shifted_jet_derivatives() {
        let p = SuperoscParams::new(2.5, 12).unwrap();
        let x = c(0.7, 0.0);
        let r = 3.0;
        let d = shifted_jet(&p, x, r, 8);
        let fs = coefficients(&p).unwrap();
        let mut fact = 1.0;
        for (m, dm) in d.iter().enumerate() {
            if m > 0 {
                fact *= m as f64;
            }
            let got = dm * fact / r.powi(m as i32);
            let want: Complex64 = fs
                .coefficients
                .iter()
                .zip(&fs.frequencies)
                .map(|(cj, &k)| cj * (I * k).powu(m as u32) * (I * k * x).exp())
                .sum();
            assert!(
                (got - want).norm() < 1e-8 * (1.0 + want.norm()),
                "m={m}: {got} {want}"
            );
        }
        // zero of the generating factor: cos(w) + i a sin(w) vanishes off the real axis for |a|<1
        let q = SuperoscParams::new(0.0, 4).unwrap();
        let z = c(4.0 * std::f64::consts::FRAC_PI_2, 0.0);
        let d = shifted_jet(&q, z, 1.0, 6);
        assert!((d[0] - evaluate_product(z, &q)).norm() < 1e-14);
    }

    #[test]
    fn ap_norm_examples() {
        assert_eq!(
            ap_norm_estimate(|_| c(0.0, 0.0), 1.0, 1.0, 3.0, 16).unwrap(),
            0.0
        );
        let a = 2.0;
        let v = ap_norm_estimate(|z| (I * a * z).exp(), 1.0, a, 10.0, 32).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let p = SuperoscParams::new(2.0, 10).unwrap();
        let v = ap_norm_estimate(|z| evaluate_product(z, &p), 1.0, 3.0, 10.0, 64).unwrap();
        assert!(v <= 1.0 + 1e-12);
        assert!(ap_norm_estimate(|z| z, 1.0, 1.0, 1.0, 4).is_err());
    }

    #[test]
    fn ap_norm_monotone_in_radius() {
        let p = SuperoscParams::new(3.0, 5).unwrap();
        let mut last = 0.0;
        for r in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let v = ap_norm_estimate(|z| evaluate_product(z, &p), 1.0, 2.0, r, 16).unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn random_gap_bound_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let r = 5.0 * rng.gen::<f64>().sqrt();
            let z = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
            let a = rng.gen_range(-5.0..5.0);
            let n = rng.gen_range(1..=500);
            let p = SuperoscParams::new(a, n).unwrap();
            let gap = (evaluate_product(z, &p) - (I * a * z).exp()).norm();
            let slack = 1e-13 * (p.alpha() * r + r).exp();
            assert!(gap <= gap_bound(z, &p) + slack, "z={z} a={a} n={n}");
        }
    }
}
