//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The process exits 0 regardless of the outcome so that the report is always
//! printed in full; set `SUPERSHIFT_STRICT=1` to turn any FAIL into exit status 1.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supershift::evolution::{supershift_gap, GapGrid};
use supershift::fit::loglog_rate;
use supershift::fresnel::{default_eps_list, reference_suite, verify_suite, QuadratureConfig};
use supershift::operators::{
    apply_operator, apply_to_exponential, symbol_from_dispersion, DispersionSpec,
    EntireFunctionSeries,
};
use supershift::oracles::{split_step_evolve, GridSpec, Potential};
use supershift::propagators::{
    centrifugal_linearity_defect, default_probe_times, harmonic_evolve_closed,
    harmonic_evolve_kernel, harmonic_pde_residual, harmonic_windowed_closed,
    harmonic_windowed_superposition, singularity_probe, supershift_gap_centrifugal,
    supershift_gap_harmonic, CentrifugalSpec, HarmonicSpec,
};
use supershift::sequences::{evaluate_product, gap_bound, SuperoscParams};
use supershift::{Complex64, Result};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn bound_check() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut violations = 0;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..1000 {
        let r = 5.0 * rng.gen::<f64>().sqrt();
        let z = Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI));
        let a = rng.gen_range(-5.0..5.0);
        let n = rng.gen_range(1..=500);
        let p = SuperoscParams::new(a, n)?;
        let gap = (evaluate_product(z, &p) - (Complex64::i() * a * z).exp()).norm();
        let bound = gap_bound(z, &p);
        if gap > bound {
            violations += 1;
        }
        if bound > 0.0 {
            worst_ratio = worst_ratio.max(gap / bound);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        violations == 0 && secs < 10.0,
        format!(
            "{violations} violations in 1000 draws, max gap/bound {worst_ratio:.3}, {secs:.2} s"
        ),
    )
}

fn rate_check() -> Result<Outcome> {
    let start = Instant::now();
    let ns: Vec<usize> = (10..=640).step_by(10).collect();
    let grid = GapGrid::default();
    let rep = supershift_gap(&DispersionSpec::monomial(2), 2.0, &grid, &ns, 0, 0)?;
    let full = loglog_rate(&rep.ns, &rep.gaps, rep.ns.len()).slope;
    let secs = start.elapsed().as_secs_f64();
    outcome(
        (rep.fitted_rate + 1.0).abs() <= 0.15 && secs < 60.0,
        format!(
            "slope {:.4} over the last five N (all 64 points: {full:.4}), {secs:.1} s",
            rep.fitted_rate
        ),
    )
}

fn eigen_check() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let d = rng.gen_range(1..=6);
        let mut fact = 1.0;
        let mut g = Vec::new();
        for k in 0..=d {
            if k > 0 {
                fact *= k as f64;
            }
            g.push(rng.gen_range(-1.0..1.0) / fact);
        }
        let spec = DispersionSpec::polynomial_real(&g)?;
        let t = rng.gen_range(-1.0..1.0);
        let lam = Complex64::new(rng.gen_range(-2.0..2.0), 0.0);
        let f = EntireFunctionSeries::exponential(lam, 80);
        let out = apply_operator(&symbol_from_dispersion(&spec, t, 256)?, &f)?;
        let s = apply_to_exponential(&spec, t, lam)?;
        for (o, v) in out.taylor_coeffs.iter().zip(&f.taylor_coeffs) {
            worst = worst.max((o - s * v).norm());
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max coefficient deviation {worst:.2e} over 50 draws"),
    )
}

fn fresnel_check() -> Result<Outcome> {
    let suite = reference_suite()?;
    let rep = verify_suite(&suite, &default_eps_list())?;
    outcome(
        rep.max_oracle_deviation <= 1e-6 && rep.max_angle_deviation <= 1e-8,
        format!(
            "{} integrands, oracle deviation {:.2e}, angle spread {:.2e}",
            suite.len(),
            rep.max_oracle_deviation,
            rep.max_angle_deviation
        ),
    )
}

fn harmonic_two_route_check() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let q = QuadratureConfig::default();
    let margin = 0.2;
    let mut worst_route: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    let mut res_fail = 0;
    let mut drawn = 0;
    while drawn < 50 {
        let t = rng.gen_range(margin..PI - margin);
        if (t - FRAC_PI_2).abs() < margin {
            continue;
        }
        drawn += 1;
        let lambda = rng.gen_range(-2.0..2.0);
        let x = rng.gen_range(-2.0..2.0);
        let c = harmonic_evolve_closed(lambda, t, x)?;
        let k = harmonic_evolve_kernel(lambda, t, x, &q)?;
        worst_route = worst_route.max((c - k).norm() / c.norm().max(1.0));
        let r = harmonic_pde_residual(lambda, t, x, 1e-3)?.norm();
        worst_res = worst_res.max(r);
        if r > 1e-4 {
            res_fail += 1;
        }
    }
    outcome(
        worst_route <= 1e-6 && res_fail == 0,
        format!(
            "kernel vs closed {worst_route:.2e}; residual at h=1e-3 max {worst_res:.2e} ({res_fail}/50 above 1e-4)"
        ),
    )
}

fn harmonic_supershift_check() -> Result<Outcome> {
    let grid = GapGrid {
        t_min: 0.2,
        t_max: 1.3,
        nt: 12,
        x_min: -2.0,
        x_max: 2.0,
        nx: 41,
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (mu, nu) in [(0, 0), (0, 1)] {
        let rep =
            supershift_gap_harmonic(2.0, &grid, &[20, 320], mu, nu, &HarmonicSpec::default())?;
        let ratio = rep.gaps[0] / rep.gaps[1];
        ok &= ratio >= 8.0;
        parts.push(format!(
            "({mu},{nu}): {:.3e} -> {:.3e}, ratio {ratio:.1}",
            rep.gaps[0], rep.gaps[1]
        ));
    }
    outcome(ok, parts.join("; "))
}

fn centrifugal_check() -> Result<Outcome> {
    let spec = CentrifugalSpec::new(1.0)?;
    let q = QuadratureConfig {
        tolerance: 1e-6,
        ..Default::default()
    };
    let grid = GapGrid {
        t_min: 0.5,
        t_max: 1.5,
        nt: 6,
        x_min: 0.5,
        x_max: 2.0,
        nx: 7,
    };
    let ns = [10, 20, 40, 80, 160];
    let rep = supershift_gap_centrifugal(&spec, 2.0, &grid, &ns, &q)?;
    let decreasing = rep.gaps.windows(2).all(|w| w[1] < w[0]);
    let tight = QuadratureConfig::default();
    let defect =
        centrifugal_linearity_defect(&spec, &SuperoscParams::new(2.0, 1)?, 1.0, 1.0, &tight)?;
    let gaps: Vec<String> = rep.gaps.iter().map(|g| format!("{g:.3e}")).collect();
    outcome(
        decreasing && defect <= 1e-8,
        format!(
            "gaps [{}] for N = {ns:?}, rate {:.3}; linearity defect {defect:.2e}",
            gaps.join(", "),
            rep.fitted_rate
        ),
    )
}

fn probe_check() -> Result<Outcome> {
    let ts = default_probe_times(10);
    let mut ok = true;
    let mut parts = Vec::new();
    for (lambda, x) in [(0.0, 0.0), (1.0, 0.7), (-1.5, 1.2)] {
        let r = singularity_probe(lambda, x, &ts)?;
        ok &= (r.fitted_exponent + 0.5).abs() <= 0.02 && r.blow_up;
        parts.push(format!("({lambda},{x}): {:.4}", r.fitted_exponent));
    }
    outcome(ok, format!("fitted exponents {}", parts.join(", ")))
}

fn split_step_check() -> Result<Outcome> {
    let sigma = 4.0;
    let g = GridSpec {
        window: sigma,
        ..Default::default()
    };
    let params = SuperoscParams::new(2.0, 8)?;
    let mut worst: f64 = 0.0;
    let mut drift: f64 = 0.0;
    for t in [0.25, 0.5, 1.0] {
        let lambda = 1.5;
        let wave = split_step_evolve(
            Potential::Harmonic,
            |x| Complex64::new(0.0, lambda * x).exp(),
            t,
            &g,
        )?;
        let sup = split_step_evolve(
            Potential::Harmonic,
            |x| evaluate_product(Complex64::new(x, 0.0), &params),
            t,
            &g,
        )?;
        for f in [&wave, &sup] {
            drift = drift
                .max(f.max_step_mass_drift)
                .max((f.mass_final - f.mass_initial).abs() / f.mass_initial);
        }
        for k in 0..wave.xs.len() {
            let x = wave.xs[k];
            if x.abs() > sigma {
                continue;
            }
            let c = harmonic_windowed_closed(lambda, sigma, t, x)?;
            worst = worst.max((wave.values[k] - c).norm());
            let s = harmonic_windowed_superposition(&params, sigma, t, x)?;
            worst = worst.max((sup.values[k] - s).norm() / s.norm().max(1.0));
        }
    }
    outcome(
        worst <= 1e-3 && drift <= 1e-10,
        format!("max interior deviation {worst:.2e} for t <= 1, mass drift {drift:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 9] = [
        ("error bound of F_N", bound_check),
        ("convergence rate", rate_check),
        ("exponential eigen-relation", eigen_check),
        ("Fresnel oracle equivalence", fresnel_check),
        ("harmonic two-route agreement", harmonic_two_route_check),
        ("harmonic supershift", harmonic_supershift_check),
        ("centrifugal supershift", centrifugal_check),
        ("singularity probe", probe_check),
        ("split-step oracle agreement", split_step_check),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} criterion {}: {name}: {detail} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 && std::env::var("SUPERSHIFT_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
