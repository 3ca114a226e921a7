//! Complex special functions: Gamma, Mittag-Leffler, the Bessel-type kernel
//! `E_nu(z) = sum_k (-1)^k (z/2)^{2k} / (k! Gamma(nu+k+1))`, and `sinc`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Truncation policy shared by the power-series evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEvalConfig {
    pub max_terms: usize,
    /// Absolute bound on the discarded tail.
    pub tail_tolerance: f64,
    /// `|z|` beyond which `e_nu` switches to the large-argument expansion.
    pub asymptotic_switch_radius: f64,
}

impl Default for SeriesEvalConfig {
    fn default() -> Self {
        Self {
            max_terms: 500,
            tail_tolerance: 1e-16,
            asymptotic_switch_radius: 20.0,
        }
    }
}

impl SeriesEvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(Error::invalid("max_terms must be at least 1"));
        }
        if !(self.tail_tolerance > 0.0) {
            return Err(Error::invalid("tail_tolerance must be positive"));
        }
        if !(self.asymptotic_switch_radius > 0.0) {
            return Err(Error::invalid("asymptotic_switch_radius must be positive"));
        }
        Ok(())
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_ln(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

fn nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// A logarithm of `Gamma(z)`. Off the right half-plane the imaginary part is
/// not the principal branch, but `exp` of the result is always `Gamma(z)`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "gamma",
            at: format!("{z}"),
        });
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - lanczos_ln(1.0 - z))
    } else {
        Ok(lanczos_ln(z))
    }
}

/// `ln Gamma(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    lanczos_ln(Complex64::new(x, 0.0)).re
}

/// `ln k!` for `k = 0..=n`, exact summation of logarithms for small `k`.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        if k <= 170 {
            acc += (k as f64).ln();
            out.push(acc);
        } else {
            out.push(ln_gamma_real(k as f64 + 1.0));
        }
    }
    out
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    let v = ln_gamma(z)?.exp();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Overflow(format!("gamma({z})")));
    }
    Ok(v)
}

/// Sums `sum_k t_k` where `|t_{k+1}/t_k|` is eventually nonincreasing, stopping
/// once the geometric majorant of the tail drops below `cfg.tail_tolerance`.
///
/// `next(k, t_k)` returns `t_{k+1}`.
fn ratio_series<F>(
    what: &'static str,
    first: Complex64,
    cfg: &SeriesEvalConfig,
    mut next: F,
) -> Result<Complex64>
where
    F: FnMut(usize, Complex64) -> Complex64,
{
    let mut acc = CompensatedSum::new();
    let mut term = first;
    for k in 0..cfg.max_terms {
        acc.add(term);
        let t1 = next(k, term);
        let t2 = next(k + 1, t1);
        let m1 = t1.norm();
        if m1 == 0.0 {
            return Ok(acc.value());
        }
        let r = t2.norm() / m1;
        if r < 1.0 && m1 / (1.0 - r) <= cfg.tail_tolerance {
            return Ok(acc.value());
        }
        term = t1;
    }
    Err(Error::NonConvergence {
        what,
        limit: cfg.max_terms,
    })
}

/// `E_{1/p,1}(zeta) = sum_k zeta^k / Gamma(k/p + 1)`.
pub fn mittag_leffler(p: f64, zeta: Complex64, cfg: &SeriesEvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    if !(p >= 1.0) {
        return Err(Error::invalid("mittag_leffler requires p >= 1"));
    }
    if zeta == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let v = ratio_series("mittag_leffler", Complex64::new(1.0, 0.0), cfg, |k, t| {
        let k = k as f64;
        let lr = ln_gamma_real(k / p + 1.0) - ln_gamma_real((k + 1.0) / p + 1.0);
        t * zeta * lr.exp()
    })?;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Overflow(format!("mittag_leffler({p}, {zeta})")));
    }
    Ok(v)
}

/// Power-series branch of `E_nu`, valid for every complex `z`.
pub fn e_nu_series(nu: f64, z: Complex64, cfg: &SeriesEvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    let g = gamma(Complex64::new(nu + 1.0, 0.0))?;
    let first = 1.0 / g;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(first);
    }
    let w = -(z * 0.5) * (z * 0.5);
    ratio_series("e_nu series", first, cfg, |k, t| {
        let k = k as f64;
        t * w / ((k + 1.0) * (nu + k + 1.0))
    })
}

/// Coefficients `a_0..a_{k_max}` of the large-argument expansion of Bessel
/// functions, `a_k(nu) = prod_{m<k} (4nu^2 - (2m+1)^2) / (8(m+1))`.
pub fn watson_coefficients(nu: f64, k_max: usize) -> Result<Vec<f64>> {
    if !nu.is_finite() {
        return Err(Error::invalid("nu must be finite"));
    }
    let mut a = Vec::with_capacity(k_max + 1);
    a.push(1.0);
    let four_nu2 = 4.0 * nu * nu;
    for k in 0..k_max {
        let m = (2 * k + 1) as f64;
        let next = a[k] * (four_nu2 - m * m) / (8.0 * (k + 1) as f64);
        a.push(next);
    }
    Ok(a)
}

/// Large-argument branch of `E_nu` for real `y > 0`.
///
/// The order `M` grows until both `|a_{2M}|/y^{2M}` and `|a_{2M+1}|/y^{2M+1}`
/// fall below the tail tolerance; terms that start growing before that are
/// reported as non-convergence.
pub fn e_nu_asymptotic(nu: f64, y: f64, cfg: &SeriesEvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    if !(y > 0.0) {
        return Err(Error::Domain(format!(
            "asymptotic E_nu needs a positive real argument, got {y}"
        )));
    }
    let limit = cfg.max_terms.max(2);
    let a = watson_coefficients(nu, 2 * limit + 1)?;
    let inv = 1.0 / y;
    let mut even = CompensatedSum::new();
    let mut odd = CompensatedSum::new();
    let mut prev = f64::INFINITY;
    let mut pow = 1.0;
    let mut m = 0;
    loop {
        if m >= limit {
            return Err(Error::NonConvergence {
                what: "e_nu asymptotic",
                limit,
            });
        }
        let te = a[2 * m] * pow;
        let to = a[2 * m + 1] * pow * inv;
        let size = te.abs().max(to.abs());
        // Past the Debye threshold the remainder is bounded by the first omitted term.
        if 2.0 * m as f64 > nu - 0.5 && size <= cfg.tail_tolerance {
            break;
        }
        if 2.0 * m as f64 > nu + 0.5 && size > prev {
            return Err(Error::NonConvergence {
                what: "e_nu asymptotic",
                limit: m,
            });
        }
        prev = size;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        even.add(Complex64::new(sign * te, 0.0));
        odd.add(Complex64::new(sign * to, 0.0));
        pow *= inv * inv;
        m += 1;
    }
    let omega = y - nu * PI / 2.0 - PI / 4.0;
    let pref = (2.0 * inv).powf(nu + 0.5) / PI.sqrt();
    let v = pref * (omega.cos() * even.value().re - omega.sin() * odd.value().re);
    Ok(Complex64::new(v, 0.0))
}

/// `E_nu(z)`, choosing the series inside the switch radius and the asymptotic
/// expansion on the positive real axis beyond it.
pub fn e_nu(nu: f64, z: Complex64, cfg: &SeriesEvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    if !(nu > 0.0) {
        return Err(Error::invalid("nu must be positive"));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(1.0 / gamma(Complex64::new(nu + 1.0, 0.0))?);
    }
    if z.norm() <= cfg.asymptotic_switch_radius {
        return e_nu_series(nu, z, cfg);
    }
    if z.re > 0.0 && z.im.abs() <= 1e-14 * z.re {
        return e_nu_asymptotic(nu, z.re, cfg);
    }
    Err(Error::Domain(format!(
        "E_nu({z}) lies outside the series radius and off the positive real axis"
    )))
}

/// `sin(z)/z`, with the Taylor series near the removable singularity.
pub fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn gamma_small_values() {
        assert!(rel(gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-13);
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
    }

    #[test]
    fn gamma_against_reference() {
        let cases = [
            (
                c(2.5, 1.5),
                c(0.309_936_225_840_741_35, 0.734_084_273_621_481_34),
            ),
            (
                c(-3.7, 0.2),
                c(0.193_759_721_611_561_68, -0.018_836_662_733_468_16),
            ),
            (
                c(0.3, -4.0),
                c(0.001_164_643_684_811_490_6, -0.003_352_559_888_035_202_4),
            ),
            (
                c(10.0, 10.0),
                c(1_423.851_941_789_183_1, -3_496.081_973_307_944_6),
            ),
            (c(-10.5, 0.0), c(-2.640_121_820_547_716_3e-7, 0.0)),
        ];
        for (z, want) in cases {
            let got = gamma(z).unwrap();
            assert!(rel(got, want) < 1e-12, "gamma({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn gamma_poles() {
        for n in 0..5 {
            let err = gamma(c(-(n as f64), 0.0)).unwrap_err();
            assert!(matches!(err, Error::Pole { .. }));
        }
    }

    #[test]
    fn gamma_recurrence_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let z = c(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!(rel(lhs, rhs) < 1e-11, "z = {z}");
        }
    }

    #[test]
    fn mittag_leffler_values() {
        let cfg = SeriesEvalConfig::default();
        assert_eq!(mittag_leffler(1.0, c(0.0, 0.0), &cfg).unwrap(), c(1.0, 0.0));
        let e1 = mittag_leffler(1.0, c(1.0, 0.0), &cfg).unwrap();
        assert!(rel(e1, c(std::f64::consts::E, 0.0)) < 1e-14);
        // e (1 + erf 1)
        let half = mittag_leffler(2.0, c(1.0, 0.0), &cfg).unwrap();
        assert!(rel(half, c(5.008_980_080_762_283_5, 0.0)) < 1e-14);
        let z = c(0.3, -2.0);
        assert!(rel(mittag_leffler(1.0, z, &cfg).unwrap(), z.exp()) < 1e-13);
    }

    #[test]
    fn mittag_leffler_reports_nonconvergence() {
        let cfg = SeriesEvalConfig {
            max_terms: 5,
            ..Default::default()
        };
        assert!(matches!(
            mittag_leffler(1.0, c(10.0, 0.0), &cfg),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn e_nu_zero_and_half_integer_closed_forms() {
        let cfg = SeriesEvalConfig::default();
        let v = e_nu(0.5, c(0.0, 0.0), &cfg).unwrap();
        assert!((v.re - 2.0 / PI.sqrt()).abs() < 1e-15);
        for z in [c(PI / 2.0, 0.0), c(1.3, 0.7), c(-4.0, 2.0)] {
            let half = 2.0 * z.sin() / (z * PI.sqrt());
            assert!(rel(e_nu(0.5, z, &cfg).unwrap(), half) < 1e-13);
            let three_half = 4.0 / (z * z * PI.sqrt()) * (z.sin() / z - z.cos());
            assert!(rel(e_nu(1.5, z, &cfg).unwrap(), three_half) < 1e-12);
        }
        let v = e_nu(0.5, c(PI / 2.0, 0.0), &cfg).unwrap();
        assert!((v.re - 0.718_348_488_500_666_2).abs() < 1e-15);
    }

    #[test]
    fn e_nu_against_reference() {
        let cfg = SeriesEvalConfig::default();
        let cases = [
            (1.5, c(10.0, 0.0), c(0.017_708_092_486_281_466, 0.0)),
            (
                2.3,
                c(3.0, 2.0),
                c(0.159_782_038_268_169_77, -0.233_126_517_164_738_96),
            ),
            (1.118, c(25.0, 0.0), c(-0.008_376_386_074_074_142, 0.0)),
            (
                5f64.sqrt() / 2.0,
                c(30.0, 0.0),
                c(-0.004_919_977_351_852_927, 0.0),
            ),
        ];
        for (nu, z, want) in cases {
            let got = e_nu(nu, z, &cfg).unwrap();
            assert!(
                (got - want).norm() < 1e-12,
                "E_{nu}({z}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn e_nu_branches_agree_near_switch() {
        let cfg = SeriesEvalConfig::default();
        for nu in [0.5, 1.118, 1.5] {
            for i in 0..=20 {
                let y = 19.0 + 0.1 * i as f64;
                let s = e_nu_series(nu, c(y, 0.0), &cfg).unwrap();
                let a = e_nu_asymptotic(nu, y, &cfg).unwrap();
                assert!((s - a).norm() < 1e-7, "nu={nu} y={y}: {s} vs {a}");
            }
        }
        let s = e_nu_series(1.5, c(10.0, 0.0), &cfg).unwrap();
        let a = e_nu_asymptotic(1.5, 10.0, &cfg).unwrap();
        assert!((s - a).norm() < 1e-8);
    }

    #[test]
    fn e_nu_asymptotic_rejects_complex_argument() {
        let cfg = SeriesEvalConfig::default();
        assert!(matches!(
            e_nu(1.0, c(30.0, 5.0), &cfg),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            e_nu_asymptotic(1.0, -3.0, &cfg),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn e_nu_alternating_tail_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cfg = SeriesEvalConfig::default();
        for _ in 0..200 {
            let nu = rng.gen_range(0.1..3.0);
            let y: f64 = rng.gen_range(0.0..5.0);
            let full = e_nu_series(nu, c(y, 0.0), &cfg).unwrap().re;
            // Partial sums beyond the largest term bracket the value.
            let mut t = 1.0 / gamma(c(nu + 1.0, 0.0)).unwrap().re;
            let mut partial = 0.0;
            for k in 0..40 {
                partial += t;
                let next = t * -(y * y / 4.0) / ((k as f64 + 1.0) * (nu + k as f64 + 1.0));
                if (k as f64) > y {
                    assert!((full - partial).abs() <= next.abs() * (1.0 + 1e-9) + 1e-15);
                }
                t = next;
            }
        }
    }

    #[test]
    fn watson_coefficients_values() {
        let a = watson_coefficients(0.25, 3).unwrap();
        let want = [1.0, -0.09375, 0.051_269_531_25, -0.052_871_704_101_562_5];
        for (g, w) in a.iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        let half = watson_coefficients(0.5, 5).unwrap();
        assert_eq!(half[0], 1.0);
        assert!(half[1..].iter().all(|&x| x == 0.0));
        let three_half = watson_coefficients(1.5, 4).unwrap();
        assert_eq!(three_half[1], 1.0);
        assert!(three_half[2..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn sinc_values_and_bound() {
        assert_eq!(sinc(c(0.0, 0.0)), c(1.0, 0.0));
        assert!(sinc(c(PI, 0.0)).norm() < 1e-16);
        let x = 1e-6;
        assert_eq!(sinc(c(x, 0.0)).re, 1.0 - x * x / 6.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let z = c(rng.gen_range(-10.0..10.0), rng.gen_range(-5.0..5.0));
            assert!(sinc(z).norm() <= z.im.abs().exp() * (1.0 + 1e-14));
        }
    }
}
