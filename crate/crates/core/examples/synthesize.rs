//! Builds `F_N(x, a)` and compares it with `e^{iax}` and the error bound.

use supershift::sequences::{
    coefficients, evaluate_product, evaluate_sum, gap_bound, SuperoscParams,
};
use supershift::Complex64;

fn main() -> supershift::Result<()> {
    let a = 2.0;
    for n in [10, 40, 160] {
        let p = SuperoscParams::new(a, n)?;
        let fs = coefficients(&p)?;
        println!(
            "N = {n}: sum |C_j| = {:.3e}, cancellation floor of the sum form {:.1e}",
            fs.abs_sum(),
            fs.abs_sum() * f64::EPSILON
        );
        for x in [-1.0, 0.0, 0.5, 1.0] {
            let z = Complex64::new(x, 0.0);
            let f = evaluate_product(z, &p);
            let gap = (f - Complex64::new(0.0, a * x).exp()).norm();
            let sum_dev = (evaluate_sum(z, &fs) - f).norm();
            println!(
                "  x = {x:5.2}  gap = {gap:.3e}  bound = {:.3e}  sum vs product = {sum_dev:.1e}",
                gap_bound(z, &p)
            );
        }
    }
    Ok(())
}
