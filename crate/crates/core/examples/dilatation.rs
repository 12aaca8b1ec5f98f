//! Grid supremum of |omega| and the Jacobian floor, level by level.

use spiralmap::kernel::ConstructionParams;
use spiralmap::verify::dilatation::{dilatation_sup, jacobian_floor, level_sups};
use spiralmap::verify::grid::evaluate_grid;
use spiralmap::verify::GridSpec;

fn main() -> spiralmap::Result<()> {
    let params = ConstructionParams::new(0.3, 0.1, 0.5, 8.0)?;
    let grid = GridSpec::new(2048, 12, 8192, 42)?;
    let bundles = evaluate_grid(&params, &grid)?;
    for (m, sup) in level_sups(&grid, &bundles).iter().enumerate() {
        println!("level {:>2}: sup|omega| = {sup:.9}", m + 1);
    }
    println!("{}", dilatation_sup(&params, &grid)?.summary_line());
    println!("{}", jacobian_floor(&params, &grid)?.summary_line());
    Ok(())
}
