//! Complete elliptic integrals, the theta function θ₃ and the Airy function.
//!
//!     cargo run --example special_functions

use dswlab::specfun::{airy_ai, elliptic_e, elliptic_k, theta3, EllipticModulus};

fn main() -> dswlab::Result<()> {
    println!("{:>8} {:>20} {:>20} {:>12}", "s", "K(s)", "E(s)", "nome");
    for s in [0.0, 0.3, 0.7, 0.99, 0.999999] {
        let m = EllipticModulus::new(s)?;
        println!("{s:>8} {:>20.15} {:>20.15} {:>12.6e}", elliptic_k(s)?, elliptic_e(s)?, m.nome());
    }
    // Legendre's relation at s² = ½: 2EK - K² = π/2
    let s = 0.5f64.sqrt();
    let (k, e) = (elliptic_k(s)?, elliptic_e(s)?);
    println!("Legendre relation defect {:.1e}", 2.0 * e * k - k * k - std::f64::consts::FRAC_PI_2);

    for (z, q) in [(0.0, 0.1), (0.25, 0.5), (0.1, 0.7)] {
        println!("θ₃({z} | {q}) = {:.15}", theta3(z, q)?);
    }
    for z in [-5.0, 0.0, 2.0, 10.0] {
        println!("Ai({z}) = {:.15e}", airy_ai(z));
    }
    Ok(())
}
