//! Monotonicity of `V` along level curves of `U`.
//!
//! Since `U_x > 0` on the strip, each level set `U(x + iy) = u` is a graph
//! `x = X(u, y)`, found here by bisection.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::uv_decompose;

use super::grid::StripRegion;
use super::report::VerificationReport;

const BISECTION_STEPS: usize = 200;

/// Solves `U(x + iy) = u` for `x` in `[x_lo, x_hi]`.
pub fn level_curve_x(u: f64, y: f64, alpha: f64, x_lo: f64, x_hi: f64) -> Result<f64> {
    let err = || Error::RootBracketing { u, y, x_lo, x_hi };
    let f = |x: f64| uv_decompose(Complex64::new(x, y), alpha).map(|uv| uv.u - u);
    let (mut lo, mut hi) = (x_lo, x_hi);
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(err());
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `V(X(u, y) + iy)` at `n_y` heights spread over the open interval `(-b, b)`.
pub fn v_along_level_curve(
    alpha: f64,
    region: &StripRegion,
    u: f64,
    n_y: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    let (x_lo, x_hi) = (0.5 * region.a, 2.0 * region.x_max);
    (0..n_y)
        .map(|j| {
            let y = region.b * (2.0 * (j as f64 + 1.0) / (n_y as f64 + 1.0) - 1.0);
            let x = level_curve_x(u, y, alpha, x_lo, x_hi)?;
            let v = uv_decompose(Complex64::new(x, y), alpha)?.v;
            Ok((x, y, v))
        })
        .collect()
}

/// Samples each level curve at `n_y` heights and checks `V` strictly decreasing in `y`.
pub fn level_curve_monotonicity(
    alpha: f64,
    region: &StripRegion,
    u_values: &[f64],
    n_y: usize,
) -> Result<VerificationReport> {
    region.validate()?;
    let mut violations = 0usize;
    let mut worst = (f64::NEG_INFINITY, Complex64::default());
    for &u in u_values {
        let curve = v_along_level_curve(alpha, region, u, n_y)?;
        for w in curve.windows(2) {
            let dv = w[1].2 - w[0].2;
            if dv >= 0.0 {
                violations += 1;
            }
            if dv > worst.0 {
                worst = (dv, Complex64::new(w[1].0, w[1].1));
            }
        }
    }
    let mut r = VerificationReport::new("level_curve_monotonicity").witness_points(&[worst.1]);
    r.passed = !u_values.is_empty() && violations == 0;
    r.extremum = super::report::finite(worst.0);
    r.tolerance = 0.0;
    r.samples_used = (u_values.len() * n_y) as u64;
    r.seed = region.seed;
    r.note(format!(
        "{} level curves x {n_y} heights on A = {}, b = {}; extremum is the largest V step along increasing y; {violations} violations",
        u_values.len(),
        region.a,
        region.b
    ));
    Ok(r)
}

/// Level values `factor * A^alpha` for the given factors.
pub fn u_values_for(region: &StripRegion, alpha: f64, factors: &[f64]) -> Vec<f64> {
    factors.iter().map(|f| f * region.a.powf(alpha)).collect()
}
