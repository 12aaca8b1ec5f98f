//! Evaluate the building blocks and the full bundle at a few disk points.

use num_complex::Complex64;
use spiralmap::kernel::{gamma_curve, hg_eval, psi, q_arglog, uv_decompose, ConstructionParams, DiskPoint};

fn main() -> spiralmap::Result<()> {
    let params = ConstructionParams::new(0.3, 0.1, 0.5, 20.0)?;
    let s = Complex64::new(100.0, 1.0);
    let uv = uv_decompose(s, 0.3)?;
    println!("s = {s}");
    println!("  Psi(s)      = {:.12}", psi(s, 0.3)?);
    println!("  gamma(U(s)) = {:.12}", gamma_curve(uv.u)?);
    println!("  Q(s)        = {:.12e}", q_arglog(s)?);
    println!("  U = {:.9}, V = {:.9}", uv.u, uv.v);

    for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.2), Complex64::new(-0.9, 0.3)] {
        let b = hg_eval(&DiskPoint::new(z)?, &params)?;
        println!(
            "z = {z}: S = {:.6}, f = {:.9}, |omega| = {:.6}, J = {:.6e}",
            b.s,
            b.f,
            b.omega_abs(),
            b.jacobian
        );
    }
    Ok(())
}
