//! Decay rates of the strip expansions on a log-log scale.

use std::f64::consts::FRAC_PI_2;

use spiralmap::verify::asymptotics::{expansion_fits, geometric_probes};

fn main() -> spiralmap::Result<()> {
    for alpha in [0.2, 0.3, 0.4] {
        let (fits, q) = expansion_fits(alpha, &geometric_probes(1e2, 1e6, 17), FRAC_PI_2)?;
        println!("alpha = {alpha}");
        for f in fits {
            println!("    {:<42} slope {:?} (expected {:.4})", f.name, f.slope.map(|s| (s * 1e4).round() / 1e4), f.expected);
        }
        println!("    Q x log x from {:.6} to {:.6}", q[0], q[q.len() - 1]);
    }
    Ok(())
}
