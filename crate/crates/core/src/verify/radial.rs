//! Boundedness of `f` and logarithmic growth of `h` towards the boundary.

use std::f64::consts::{FRAC_PI_2, LN_10};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{hg_eval, ppow, ConstructionParams, DiskPoint, HgfBundle};

use super::grid::{GridSpec, MAX_RADIAL_EXPONENT};
use super::report::VerificationReport;

/// Angles per radial level in the boundedness scan.
pub const SCAN_ANGULAR: usize = 4096;
/// Interior fill of the boundedness scan.
pub const SCAN_INTERIOR: usize = 4096;
/// Relative change of `sup |f|` allowed between the last three levels.
pub const CAUCHY_TOLERANCE: f64 = 1e-3;
/// Relative tolerance of the real-axis identity `|h - i eps loglog S| = S^{-alpha}`.
pub const RADIAL_IDENTITY_TOLERANCE: f64 = 1e-12;

fn check_m_max(m_max: u32) -> Result<()> {
    if !(3..=MAX_RADIAL_EXPONENT).contains(&m_max) {
        return Err(Error::InvalidGrid(format!(
            "m_max = {m_max} outside 3..={MAX_RADIAL_EXPONENT}"
        )));
    }
    Ok(())
}

/// `sup |f|` over the grid points with `|z| <= 1 - 10^{-m}`, for `m = 1..=m_max`,
/// together with the largest `Im S(z)^alpha` seen and the point attaining the last sup.
pub fn nested_sups(params: &ConstructionParams, m_max: u32) -> Result<(Vec<f64>, f64, Complex64)> {
    let grid = GridSpec::new(SCAN_ANGULAR, m_max, SCAN_INTERIOR, 0)?;
    let points = grid.points()?;
    let bundles: Vec<HgfBundle> = points.par_iter().map(|p| hg_eval(p, params)).collect::<Result<_>>()?;

    let mut c_hat = f64::NEG_INFINITY;
    for b in &bundles {
        c_hat = c_hat.max(ppow(b.s, params.alpha())?.im);
    }
    let interior = &bundles[grid.interior_offset()..];
    let mut running = interior.iter().fold((0.0f64, Complex64::default()), |acc, b| {
        if b.f.norm() > acc.0 {
            (b.f.norm(), b.z)
        } else {
            acc
        }
    });
    let mut sups = Vec::with_capacity(m_max as usize);
    for level in bundles[..grid.interior_offset()].chunks(SCAN_ANGULAR) {
        for b in level {
            if b.f.norm() > running.0 {
                running = (b.f.norm(), b.z);
            }
        }
        sups.push(running.0);
    }
    Ok((sups, c_hat, running.1))
}

/// Passes iff `sup |f|` changes by less than `1e-3` (relative) over the last
/// three radial levels and stays below `A0^{-alpha} e^{c} + 2 eps pi/2`, with
/// `c` the sampled maximum of `Im S^alpha`.
pub fn boundedness_scan(params: &ConstructionParams, m_max: u32) -> Result<VerificationReport> {
    check_m_max(m_max)?;
    let (sups, c_hat, witness) = nested_sups(params, m_max)?;
    let bound = params.a0().powf(-params.alpha()) * c_hat.exp() + 2.0 * params.eps() * FRAC_PI_2;
    let n = sups.len();
    let change = sups[n - 3..]
        .windows(2)
        .map(|w| (w[1] - w[0]).abs() / w[1])
        .fold(0.0, f64::max);
    let bounded = sups.iter().all(|&s| s <= bound);

    let mut r = VerificationReport::new("boundedness_scan").witness_points(&[witness]);
    r.passed = change < CAUCHY_TOLERANCE && bounded;
    r.extremum = change;
    r.tolerance = CAUCHY_TOLERANCE;
    r.samples_used = (SCAN_ANGULAR * n + SCAN_INTERIOR) as u64;
    r.note(format!(
        "sup|f| by level: {}; envelope {bound:.6e} (c_hat = {c_hat:.6e}){}",
        sups.iter().map(|s| format!("{s:.9e}")).collect::<Vec<_>>().join(", "),
        if bounded { "" } else { " EXCEEDED" }
    ));
    Ok(r)
}

/// One radial probe `r_m = 1 - 10^{-m}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSample {
    pub m: u32,
    pub s: f64,
    pub h: Complex64,
    /// `|h(r_m) - i eps loglog(A + m ln 10)|`.
    pub remainder: f64,
    /// `(A + m ln 10)^{-alpha}`.
    pub envelope: f64,
}

pub fn radial_trace(params: &ConstructionParams, m_max: u32) -> Result<Vec<RadialSample>> {
    (1..=m_max)
        .map(|m| {
            let b = hg_eval(&DiskPoint::radial(m)?, params)?;
            let model_s = params.a() + m as f64 * LN_10;
            let remainder = (b.h - Complex64::new(0.0, params.eps() * model_s.ln().ln())).norm();
            Ok(RadialSample {
                m,
                s: b.s.re,
                h: b.h,
                remainder,
                envelope: model_s.powf(-params.alpha()),
            })
        })
        .collect()
}

/// Checks along `r_m = 1 - 10^{-m}` that `Im h` is strictly increasing, that
/// `|h - i eps loglog(A + m ln 10)| = (A + m ln 10)^{-alpha}` to `1e-12` relative,
/// and that `|Re h| <= (A + m ln 10)^{-alpha}`.
pub fn h_growth(params: &ConstructionParams, m_max: u32) -> Result<VerificationReport> {
    check_m_max(m_max)?;
    let trace = radial_trace(params, m_max)?;
    let increasing = trace.windows(2).all(|w| w[1].h.im > w[0].h.im);
    let (worst_idx, worst) = trace
        .iter()
        .map(|t| (t.remainder - t.envelope).abs() / t.envelope)
        .enumerate()
        .fold((0, 0.0f64), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    let re_ok = trace
        .iter()
        .all(|t| t.h.re.abs() <= t.envelope * (1.0 + RADIAL_IDENTITY_TOLERANCE));

    let witness = Complex64::new(1.0 - 10f64.powi(-(trace[worst_idx].m as i32)), 0.0);
    let mut r = VerificationReport::new("h_growth").witness_points(&[witness]);
    r.passed = increasing && re_ok && worst <= RADIAL_IDENTITY_TOLERANCE;
    r.extremum = worst;
    r.tolerance = RADIAL_IDENTITY_TOLERANCE;
    r.samples_used = trace.len() as u64;
    r.note(format!(
        "Im h(r_m): {}{}",
        trace.iter().map(|t| format!("{:.9e}", t.h.im)).collect::<Vec<_>>().join(", "),
        if increasing { "" } else { " NOT increasing" }
    ));
    if !re_ok {
        r.note("|Re h| exceeded the envelope");
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_value_on_radius_is_exact() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 50.0).unwrap();
        for t in radial_trace(&p, 15).unwrap() {
            assert!((t.s - (50.0 + t.m as f64 * LN_10)).abs() <= 1e-13 * t.s);
            assert!((t.remainder - t.envelope).abs() <= 1e-12 * t.envelope);
        }
    }

    #[test]
    fn im_h_grows_between_six_and_twelve() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 50.0).unwrap();
        let t = radial_trace(&p, 12).unwrap();
        let diff = t[11].h.im - t[5].h.im;
        assert!(diff > 0.0);
        let s6 = 50.0 + 6.0 * LN_10;
        let s12 = 50.0 + 12.0 * LN_10;
        let log_part = 0.1 * (s12.ln().ln() - s6.ln().ln());
        let psi_part = -(s12.powf(-0.3) * s12.powf(0.3).sin()) + s6.powf(-0.3) * s6.powf(0.3).sin();
        assert!((diff - (log_part + psi_part)).abs() < 1e-12);
    }

    #[test]
    fn origin_value() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 30.0).unwrap();
        let b = hg_eval(&DiskPoint::new(Complex64::default()).unwrap(), &p).unwrap();
        assert!((b.f.norm() - 30f64.powf(-0.3)).abs() < 1e-15);
    }

    #[test]
    fn sup_decreases_with_a() {
        let sups: Vec<f64> = [20.0, 40.0, 80.0]
            .iter()
            .map(|&a| {
                let p = ConstructionParams::new(0.3, 0.1, 0.5, a).unwrap();
                *nested_sups(&p, 6).unwrap().0.last().unwrap()
            })
            .collect();
        assert!(sups[0] > sups[1] && sups[1] > sups[2], "{sups:?}");
    }

    #[test]
    fn scans_pass_for_moderate_a() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 50.0).unwrap();
        assert!(boundedness_scan(&p, 12).unwrap().passed);
        let r = h_growth(&p, 12).unwrap();
        assert!(r.passed, "{}", r.notes);
        assert!(h_growth(&p, 2).is_err());
    }
}
