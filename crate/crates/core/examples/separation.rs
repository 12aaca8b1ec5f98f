//! Case-wise separation minima of the spiral map on a truncated strip.

use std::f64::consts::FRAC_PI_2;

use spiralmap::verify::separation::{combine_cases, separation_profile};
use spiralmap::verify::StripRegion;

fn main() -> spiralmap::Result<()> {
    for a in [10.0, 1e3] {
        let region = StripRegion::with_default_truncation(a, FRAC_PI_2, 20_000, 42)?;
        let cases = separation_profile(&region, 0.3, 20_000)?;
        for c in &cases {
            println!("A = {a}: {}", c.summary_line());
        }
        println!("A = {a}: {}", combine_cases(&cases).summary_line());
    }
    Ok(())
}
