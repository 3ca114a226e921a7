//! Supershift gap of the evolved sequence under `i d/dt psi = -d^2/dx^2 psi`.

use supershift::evolution::{supershift_gap, GapGrid};
use supershift::operators::DispersionSpec;

fn main() -> supershift::Result<()> {
    let spec = DispersionSpec::monomial(2);
    let ns: Vec<usize> = vec![10, 20, 40, 80, 160, 320];
    let rep = supershift_gap(&spec, 0.5, &GapGrid::default(), &ns, 0, 0)?;
    for (n, g) in rep.ns.iter().zip(&rep.gaps) {
        println!("N = {n:4}  gap = {g:.3e}");
    }
    println!("fitted rate {:.3}", rep.fitted_rate);
    Ok(())
}
