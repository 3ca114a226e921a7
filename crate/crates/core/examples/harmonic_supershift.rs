//! Harmonic-oscillator evolution: kernel against closed form, then the supershift gap.

use supershift::evolution::GapGrid;
use supershift::fresnel::QuadratureConfig;
use supershift::propagators::{
    harmonic_evolve_closed, harmonic_evolve_kernel, supershift_gap_harmonic, HarmonicSpec,
};

fn main() -> supershift::Result<()> {
    let q = QuadratureConfig::default();
    for (lambda, t, x) in [(1.0, 0.4, 0.5), (-0.7, 1.2, 1.5), (2.0, 2.5, -1.0)] {
        let c = harmonic_evolve_closed(lambda, t, x)?;
        let k = harmonic_evolve_kernel(lambda, t, x, &q)?;
        println!(
            "lambda={lambda} t={t} x={x}: closed {c}  kernel {k}  |diff| = {:.1e}",
            (c - k).norm()
        );
    }
    let grid = GapGrid {
        t_min: 0.2,
        t_max: 1.3,
        nt: 12,
        x_min: -2.0,
        x_max: 2.0,
        nx: 41,
    };
    let rep = supershift_gap_harmonic(
        2.0,
        &grid,
        &[20, 40, 80, 160, 320],
        0,
        0,
        &HarmonicSpec::default(),
    )?;
    for (n, g) in rep.ns.iter().zip(&rep.gaps) {
        println!("N = {n:4}  gap = {g:.3e}");
    }
    Ok(())
}
