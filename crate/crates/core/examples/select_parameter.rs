//! Choose the shift A for several dilatation targets and show the search trace.

use spiralmap::construct::{analytic_a_hint, select_a};
use spiralmap::verify::GridSpec;

fn main() -> spiralmap::Result<()> {
    let grid = GridSpec::default();
    for k in [0.05, 0.1, 0.5, 0.9] {
        let hint = analytic_a_hint(k, 0.1, 0.3)?;
        let inst = select_a(k, 0.1, 0.3, &grid)?;
        println!(
            "k = {k}: hint {hint:.4}, A = {:.4}, K = {:.4}, sup|omega| = {:.6}",
            inst.params.a(),
            inst.params.max_dilatation(),
            inst.dilatation_sup_estimate
        );
        for (a, sup) in &inst.selection_trace {
            println!("    A = {a:<12.4} sup = {sup:.6}");
        }
    }
    Ok(())
}
