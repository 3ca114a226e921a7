//! Contour-rotation value of `int_0^inf x^chi e^{-i phi x^2} G(x) dx` against the damping oracle.

use supershift::fresnel::{
    angle_independence_check, default_eps_list, epsilon_oracle, regularize_halfline,
    FresnelIntegrand, QuadratureConfig, SUITE_ANGLES,
};

fn main() -> supershift::Result<()> {
    let cases = [
        FresnelIntegrand::polynomial(0.0, 1.0, vec![1.0])?,
        FresnelIntegrand::plane_wave(0.5, -2.0, 1.5)?,
        FresnelIntegrand::gaussian(-0.5, 1.0, 0.2)?,
    ];
    for f in &cases {
        let v = regularize_halfline(f, &QuadratureConfig::default())?;
        let o = epsilon_oracle(f, &default_eps_list())?;
        let a = angle_independence_check(f, &SUITE_ANGLES)?;
        println!("{}", f.description);
        println!(
            "  contour {v}\n  oracle  {} (est. error {:.1e})\n  angle spread {:.1e}",
            o.value, o.error_estimate, a.max_deviation
        );
    }
    Ok(())
}
