//! Degree of f on circles, about image points inside and outside.

use num_complex::Complex64;
use spiralmap::kernel::{hg_eval, ConstructionParams, DiskPoint};
use spiralmap::verify::winding::{default_probes, winding_degree_adaptive, winding_number};

fn main() -> spiralmap::Result<()> {
    let params = ConstructionParams::new(0.3, 0.1, 0.5, 8.0)?;
    for r in [0.5, 0.9, 0.99, 0.999] {
        let probes = default_probes(&params, r)?;
        println!("r = {r}: {}", winding_degree_adaptive(&params, r, 4096, &probes)?.summary_line());
    }
    let outside = hg_eval(&DiskPoint::new(Complex64::new(0.0, 0.95))?, &params)?.f;
    println!("about f(0.95i) on r = 0.5: {:.3e}", winding_number(&params, 0.5, 8192, outside)?);
    Ok(())
}
