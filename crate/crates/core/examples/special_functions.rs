//! Gamma, Mittag-Leffler and the kernel `E_nu` at a few points.

use supershift::special::{e_nu, gamma, mittag_leffler, sinc, SeriesEvalConfig};
use supershift::Complex64;

fn main() -> supershift::Result<()> {
    let cfg = SeriesEvalConfig::default();
    let z = Complex64::new(0.5, 1.0);
    println!("Gamma({z}) = {}", gamma(z)?);
    println!(
        "E_2(-1) = {}  (cos 1 = {})",
        mittag_leffler(2.0, Complex64::new(-1.0, 0.0), &cfg)?,
        1f64.cos()
    );
    for nu in [0.5, 1.0, 2.5] {
        for y in [1.0, 10.0, 40.0] {
            println!("E_{nu}({y}) = {}", e_nu(nu, Complex64::new(y, 0.0), &cfg)?);
        }
    }
    println!("sinc(2i) = {}", sinc(Complex64::new(0.0, 2.0)));
    Ok(())
}
