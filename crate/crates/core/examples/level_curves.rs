//! V along level curves of U decreases strictly in y.

use std::f64::consts::FRAC_PI_2;

use spiralmap::verify::level_curves::{level_curve_monotonicity, u_values_for, v_along_level_curve};
use spiralmap::verify::StripRegion;

fn main() -> spiralmap::Result<()> {
    let alpha = 0.3;
    let region = StripRegion::with_default_truncation(1e3, FRAC_PI_2, 1, 0)?;
    let us = u_values_for(&region, alpha, &[1.2, 2.0, 5.0]);
    for &u in &us {
        let curve = v_along_level_curve(alpha, &region, u, 9)?;
        println!("U = {u:.4}");
        for (x, y, v) in curve {
            println!("    x = {x:>14.4}  y = {y:>8.4}  V = {v:.9}");
        }
    }
    println!("{}", level_curve_monotonicity(alpha, &region, &us, 201)?.summary_line());
    Ok(())
}
