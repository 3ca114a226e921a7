//! Growth of the harmonic plane-wave solution as `t` approaches `pi/2`.

use supershift::propagators::{default_probe_times, singularity_probe};

fn main() -> supershift::Result<()> {
    let rep = singularity_probe(1.0, 0.5, &default_probe_times(10))?;
    for k in 0..rep.ts.len() {
        println!(
            "|cos t| = {:.3e}  |phi| = {:.4e}",
            rep.cos_abs[k], rep.magnitudes[k]
        );
    }
    println!(
        "exponent {:.4}, blow-up: {}",
        rep.fitted_exponent, rep.blow_up
    );
    Ok(())
}
