//! Split-step evolution of a windowed plane wave in the harmonic trap, against the closed form.

use supershift::oracles::{split_step_evolve, GridSpec, Potential};
use supershift::propagators::harmonic_windowed_closed;
use supershift::Complex64;

fn main() -> supershift::Result<()> {
    let (lambda, sigma, t) = (1.5, 4.0, 1.0);
    let g = GridSpec {
        window: sigma,
        ..Default::default()
    };
    let field = split_step_evolve(
        Potential::Harmonic,
        |x| Complex64::new(0.0, lambda * x).exp(),
        t,
        &g,
    )?;
    let mut worst: f64 = 0.0;
    for (k, (&x, &v)) in field.xs.iter().zip(&field.values).enumerate() {
        if x.abs() > sigma {
            continue;
        }
        let c = harmonic_windowed_closed(lambda, sigma, t, x)?;
        worst = worst.max((v - c).norm());
        if k % 16 == 0 {
            println!("x = {x:6.3}: split-step {v:.9}  closed {c:.9}");
        }
    }
    println!(
        "max |diff| {worst:.2e}, step mass drift {:.1e}, tail energy {:.1e}",
        field.max_step_mass_drift, field.spectral_tail_energy
    );
    for w in &field.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
