//! Symbol of `exp(t P(d/dx))` applied to an exponential, against the direct value.

use supershift::operators::{
    apply_operator, apply_to_exponential, growth_transport_check, symbol_from_dispersion,
    DispersionSpec, EntireFunctionSeries,
};
use supershift::Complex64;

fn main() -> supershift::Result<()> {
    let spec = DispersionSpec::monomial(2);
    let t = 0.3;
    let lambda = Complex64::new(1.5, 0.0);
    let sym = symbol_from_dispersion(&spec, t, 128)?;
    let f = EntireFunctionSeries::exponential(lambda, 96);
    let g = apply_operator(&sym, &f)?;
    let factor = apply_to_exponential(&spec, t, lambda)?;
    for x in [0.0, 0.7, -1.2] {
        let z = Complex64::new(x, 0.0);
        let direct = factor * (Complex64::i() * lambda * z).exp();
        println!(
            "x = {x:5.2}: series {}  direct {}  |diff| = {:.2e}",
            g.eval(z),
            direct,
            (g.eval(z) - direct).norm()
        );
    }
    let rep = growth_transport_check(&sym, &f, 2.0)?;
    println!(
        "fitted order {:.3}, bound holds: {}",
        rep.fitted_order, rep.bound_holds
    );
    Ok(())
}
