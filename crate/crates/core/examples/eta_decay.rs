//! Estimate eta(A) for growing A and compare with 1 / (alpha log A).

use std::f64::consts::FRAC_PI_2;

use spiralmap::verify::eta::eta_estimate;
use spiralmap::verify::StripRegion;

fn main() -> spiralmap::Result<()> {
    let alpha = 0.3;
    for a in [1e1, 1e2, 1e3, 1e4, 1e5] {
        let region = StripRegion::with_default_truncation(a, FRAC_PI_2, 50_000, 42)?;
        let est = eta_estimate(&region, alpha, 50_000)?;
        println!(
            "A = {a:>8}: eta_hat = {:.6}, eta alpha log A = {:.4}, witness {:.4} / {:.4}",
            est.eta_hat,
            est.eta_hat * alpha * a.ln(),
            est.witness.0,
            est.witness.1
        );
    }
    Ok(())
}
