//! Degree of `f` on circles `|z| = r` by summing principal argument increments.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::kernel::{hg_eval, ConstructionParams, DiskPoint};

use super::report::VerificationReport;

/// Largest admissible deviation of the argument sum from an integer.
pub const WINDING_RESIDUAL: f64 = 1e-3;
/// Sample counts are doubled up to this limit by the adaptive driver.
pub const MAX_WINDING_SAMPLES: usize = 1 << 22;

/// Images `f(r e^{i theta_j})`, `theta_j = 2 pi j / n`.
pub fn circle_image(params: &ConstructionParams, r: f64, n_samples: usize) -> Result<Vec<Complex64>> {
    if !(r > 0.0 && r < 1.0) {
        return Err(domain("winding", format!("radius {r} outside (0, 1)")));
    }
    if n_samples < 4 {
        return Err(domain("winding", "need at least 4 samples"));
    }
    (0..n_samples)
        .into_par_iter()
        .map(|j| {
            let theta = TAU * j as f64 / n_samples as f64;
            Ok(hg_eval(&DiskPoint::polar(1.0 - r, theta)?, params)?.f)
        })
        .collect()
}

/// Total argument change of `curve - w0` over the closed polygon, divided by `2 pi`.
pub fn winding_of_curve(curve: &[Complex64], w0: Complex64) -> Result<f64> {
    let mut total = 0.0;
    for j in 0..curve.len() {
        let a = curve[j] - w0;
        let b = curve[(j + 1) % curve.len()] - w0;
        if a == Complex64::default() {
            return Err(domain("winding", "probe lies on the curve"));
        }
        let inc = (b / a).arg();
        if inc.abs() > FRAC_PI_2 {
            return Err(Error::StepTooCoarse {
                increment: inc,
                n_samples: curve.len(),
            });
        }
        total += inc;
    }
    Ok(total / TAU)
}

pub fn winding_number(
    params: &ConstructionParams,
    r: f64,
    n_samples: usize,
    w0: Complex64,
) -> Result<f64> {
    winding_of_curve(&circle_image(params, r, n_samples)?, w0)
}

/// Degrees about every probe; passes iff each rounds to 1 within `1e-3`.
pub fn winding_degree(
    params: &ConstructionParams,
    r: f64,
    n_samples: usize,
    probes: &[Complex64],
) -> Result<VerificationReport> {
    let curve = circle_image(params, r, n_samples)?;
    let mut r_out = VerificationReport::new("winding_degree");
    let mut worst = (-1.0f64, probes.first().copied().unwrap_or_default());
    let mut all_one = !probes.is_empty();
    let mut degrees = Vec::with_capacity(probes.len());
    for &w0 in probes {
        let w = winding_of_curve(&curve, w0)?;
        let degree = w.round();
        let residual = (w - degree).abs();
        degrees.push(degree as i64);
        all_one &= degree == 1.0 && residual < WINDING_RESIDUAL;
        let dev = (w - 1.0).abs();
        if dev > worst.0 {
            worst = (dev, w0);
        }
    }
    r_out = r_out.witness_points(&[worst.1]);
    r_out.passed = all_one;
    r_out.extremum = worst.0.max(0.0);
    r_out.tolerance = WINDING_RESIDUAL;
    r_out.samples_used = n_samples as u64;
    r_out.note(format!("r = {r}, degrees {degrees:?}; extremum is max |winding - 1|"));
    Ok(r_out)
}

/// Doubles `n_samples` from `n_start` until no increment exceeds `pi/2`.
pub fn winding_degree_adaptive(
    params: &ConstructionParams,
    r: f64,
    n_start: usize,
    probes: &[Complex64],
) -> Result<VerificationReport> {
    let mut n = n_start.max(4);
    loop {
        match winding_degree(params, r, n, probes) {
            Err(Error::StepTooCoarse { .. }) if n < MAX_WINDING_SAMPLES => n *= 2,
            other => return other,
        }
    }
}

/// Default probes for a circle of radius `r`: `f(0)` and `f` at five points inside.
pub fn default_probes(params: &ConstructionParams, r: f64) -> Result<Vec<Complex64>> {
    let zs = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.3 * r),
        Complex64::new(0.5 * r, 0.0),
        Complex64::new(-0.5 * r, 0.0),
        Complex64::new(0.0, -0.5 * r),
        Complex64::from_polar(0.9 * r, 1.0),
    ];
    zs.iter()
        .map(|&z| Ok(hg_eval(&DiskPoint::new(z)?, params)?.f))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ConstructionParams {
        ConstructionParams::new(0.3, 0.1, 0.5, 20.0).unwrap()
    }

    #[test]
    fn unit_circle_polygon() {
        let curve: Vec<Complex64> = (0..64).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / 64.0)).collect();
        assert!((winding_of_curve(&curve, Complex64::new(0.1, 0.2)).unwrap() - 1.0).abs() < 1e-12);
        assert!(winding_of_curve(&curve, Complex64::new(3.0, 0.0)).unwrap().abs() < 1e-12);
        let coarse: Vec<Complex64> = (0..3).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / 3.0)).collect();
        assert!(matches!(
            winding_of_curve(&coarse, Complex64::default()),
            Err(Error::StepTooCoarse { .. })
        ));
    }

    #[test]
    fn degree_one_inside() {
        let p = params();
        let probes = default_probes(&p, 0.7).unwrap();
        let r = winding_degree(&p, 0.7, 2048, &probes).unwrap();
        assert!(r.passed, "{}", r.notes);
    }

    #[test]
    fn degree_zero_outside() {
        let p = params();
        let outside = hg_eval(&DiskPoint::new(Complex64::new(0.95, 0.0)).unwrap(), &p).unwrap().f;
        let w = winding_number(&p, 0.5, 2048, outside).unwrap();
        assert!(w.abs() < 1e-9, "{w}");
    }

    #[test]
    fn degree_stable_under_doubling() {
        let p = params();
        let w0 = default_probes(&p, 0.9).unwrap()[1];
        let a = winding_number(&p, 0.9, 1024, w0).unwrap();
        let b = winding_number(&p, 0.9, 2048, w0).unwrap();
        assert_eq!(a.round(), b.round());
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(circle_image(&params(), 1.0, 16).is_err());
        assert!(circle_image(&params(), 0.0, 16).is_err());
    }
}
