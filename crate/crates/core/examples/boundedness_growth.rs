//! f stays bounded while Im h grows like eps loglog towards z = 1.

use spiralmap::kernel::ConstructionParams;
use spiralmap::verify::radial::{boundedness_scan, h_growth, nested_sups, radial_trace};

fn main() -> spiralmap::Result<()> {
    let params = ConstructionParams::new(0.3, 0.1, 0.5, 8.0)?;
    let (sups, c_hat, _) = nested_sups(&params, 15)?;
    println!("max Im S^alpha on the scan: {c_hat:.6}");
    for t in radial_trace(&params, 15)? {
        println!(
            "m = {:>2}: sup|f| = {:<12.9} Im h = {:.9}  S = {:.4}",
            t.m,
            sups[t.m as usize - 1],
            t.h.im,
            t.s
        );
    }
    println!("{}", boundedness_scan(&params, 12)?.summary_line());
    println!("{}", h_growth(&params, 12)?.summary_line());
    Ok(())
}
