//! Centrifugal-potential evolution of plane waves and of the superoscillating datum.

use supershift::evolution::GapGrid;
use supershift::fresnel::{default_eps_list, QuadratureConfig};
use supershift::propagators::{
    centrifugal_evolve, centrifugal_evolve_oracle, supershift_gap_centrifugal, CentrifugalSpec,
    Datum,
};

fn main() -> supershift::Result<()> {
    let spec = CentrifugalSpec::new(1.0)?;
    let q = QuadratureConfig::default();
    println!("u = {}, nu = {:.6}", spec.u, spec.nu);
    for (lambda, t, x) in [(1.0, 0.5, 1.0), (-2.0, 1.0, 0.7)] {
        let c = centrifugal_evolve(&spec, lambda, t, x, &q)?;
        let o = centrifugal_evolve_oracle(
            &spec,
            &Datum::plane_wave(lambda),
            t,
            x,
            &default_eps_list(),
        )?;
        println!(
            "lambda={lambda} t={t} x={x}: contour {c}  damped {}",
            o.value
        );
    }
    let grid = GapGrid {
        t_min: 0.5,
        t_max: 1.5,
        nt: 3,
        x_min: 0.5,
        x_max: 2.0,
        nx: 4,
    };
    let rep = supershift_gap_centrifugal(&spec, 2.0, &grid, &[10, 20, 40, 80], &q)?;
    for (n, g) in rep.ns.iter().zip(&rep.gaps) {
        println!("N = {n:4}  gap = {g:.3e}");
    }
    Ok(())
}
