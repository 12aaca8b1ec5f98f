//! Log-log decay rates of the strip expansions of `U`, `V`, `Psi` and `Q`.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::kernel::{gamma_curve, psi, q_arglog, uv_decompose};

use super::report::VerificationReport;

/// Allowed deviation of a fitted slope from its predicted exponent.
pub const SLOPE_TOLERANCE: f64 = 0.2;
/// Absolute residual bound used when a residual sits at the float noise floor.
pub const NOISE_RESIDUAL: f64 = 1e-13;
/// Maximal ratio between `Q x log x` and its median.
pub const Q_BOUND_FACTOR: f64 = 2.0;

/// One fitted expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub name: &'static str,
    pub expected: f64,
    /// `None` when the residuals are at the noise floor.
    pub slope: Option<f64>,
    pub max_residual: f64,
    pub passed: bool,
}

/// `n` points spaced geometrically from `lo` to `hi` inclusive.
pub fn geometric_probes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn fit(name: &'static str, expected: f64, abscissa: &[f64], residuals: &[f64], scales: &[f64]) -> SlopeFit {
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let noisy = residuals
        .iter()
        .zip(scales)
        .any(|(r, s)| *r <= 8.0 * f64::EPSILON * s.abs().max(1.0));
    if noisy {
        return SlopeFit {
            name,
            expected,
            slope: None,
            max_residual,
            passed: max_residual < NOISE_RESIDUAL,
        };
    }
    let slope = log_log_slope(abscissa, residuals);
    SlopeFit {
        name,
        expected,
        slope: Some(slope),
        max_residual,
        passed: (slope - expected).abs() <= SLOPE_TOLERANCE,
    }
}

/// Residual fits at height `y = b/2` for the probes `x_probes`.
///
/// * `U(s) - x^alpha`, slope against `x`, expected `-1`;
/// * `V(s) - (alpha log x - alpha y x^{alpha-1})`, slope against `x`, expected `-2`;
/// * `|Psi(s) - gamma(U(s))|`, slope against `U(s)`, expected `-1/alpha`.
///
/// Also returns the values of `Q(s) x log x`.
pub fn expansion_fits(alpha: f64, x_probes: &[f64], b: f64) -> Result<(Vec<SlopeFit>, Vec<f64>)> {
    if x_probes.len() < 3 || x_probes.iter().any(|&x| !(x > 2.0)) {
        return Err(domain("asymptotic_residuals", "need at least 3 probes, all > 2"));
    }
    let (lo, hi) = x_probes
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
    if (hi / lo).log10() < 4.0 - 1e-9 {
        return Err(domain("asymptotic_residuals", "probes must span at least 4 decades"));
    }
    let y = 0.5 * b;
    let n = x_probes.len();
    let (mut ru, mut rv, mut rp, mut us, mut qs) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    let (mut su, mut sv, mut sp) = (Vec::new(), Vec::new(), Vec::new());
    for &x in x_probes {
        let s = Complex64::new(x, y);
        let uv = uv_decompose(s, alpha)?;
        let xa = x.powf(alpha);
        ru.push((uv.u - xa).abs());
        su.push(xa);
        let v_model = alpha * x.ln() - alpha * y * x.powf(alpha - 1.0);
        rv.push((uv.v - v_model).abs());
        sv.push(v_model);
        let p = psi(s, alpha)?;
        rp.push((p - gamma_curve(uv.u)?).norm());
        sp.push(p.norm());
        us.push(uv.u);
        qs.push(q_arglog(s)? * x * x.ln());
    }
    Ok((
        vec![
            fit("U - x^alpha", -1.0, x_probes, &ru, &su),
            fit("V - (alpha log x - alpha y x^(alpha-1))", -2.0, x_probes, &rv, &sv),
            fit("Psi - gamma(U)", -1.0 / alpha, &us, &rp, &sp),
        ],
        qs,
    ))
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Passes iff every slope is within `0.2` of its exponent and `Q x log x`
/// stays within a factor 2 of its median.
pub fn asymptotic_residuals(alpha: f64, x_probes: &[f64], b: f64) -> Result<VerificationReport> {
    let (fits, qs) = expansion_fits(alpha, x_probes, b)?;
    let med = median(&qs);
    let q_ok = if med.abs() <= NOISE_RESIDUAL {
        qs.iter().all(|q| q.abs() < NOISE_RESIDUAL)
    } else {
        qs.iter()
            .all(|q| q / med <= Q_BOUND_FACTOR && q / med >= 1.0 / Q_BOUND_FACTOR)
    };
    let worst = fits
        .iter()
        .map(|f| f.slope.map_or(0.0, |s| (s - f.expected).abs()))
        .fold(0.0, f64::max);

    let mut r = VerificationReport::new("asymptotic_residuals").witness_points(&[Complex64::new(
        x_probes[0],
        0.5 * b,
    )]);
    r.passed = fits.iter().all(|f| f.passed) && q_ok;
    r.extremum = worst;
    r.tolerance = SLOPE_TOLERANCE;
    r.samples_used = x_probes.len() as u64;
    for f in &fits {
        match f.slope {
            Some(s) => r.note(format!("{}: slope {s:.4} (expected {:.4})", f.name, f.expected)),
            None => r.note(format!(
                "{}: residuals at noise floor, max {:.3e}",
                f.name, f.max_residual
            )),
        }
    }
    let (qmin, qmax) = qs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &q| (a.min(q), b.max(q)));
    r.note(format!(
        "Q x log x in [{qmin:.6e}, {qmax:.6e}], median {med:.6e}{}",
        if q_ok { "" } else { " FAILED" }
    ));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn slope_of_power_law() {
        let xs = geometric_probes(1.0, 1e4, 9);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-1.5)).collect();
        assert!((log_log_slope(&xs, &ys) + 1.5).abs() < 1e-12);
    }

    #[test]
    fn u_slope_near_minus_one() {
        let xs = geometric_probes(1e2, 1e6, 17);
        let (fits, _) = expansion_fits(0.3, &xs, FRAC_PI_2).unwrap();
        let s = fits[0].slope.unwrap();
        assert!((-1.2..=-0.8).contains(&s), "{s}");
    }

    #[test]
    fn real_axis_residuals_vanish() {
        let xs = geometric_probes(1e2, 1e6, 9);
        let (fits, qs) = expansion_fits(0.3, &xs, 0.0).unwrap();
        assert_eq!(fits[1].max_residual, 0.0);
        assert!(fits.iter().all(|f| f.slope.is_none() && f.passed));
        assert!(qs.iter().all(|&q| q == 0.0));
    }

    #[test]
    fn q_product_bounded() {
        let xs = geometric_probes(1e2, 1e6, 9);
        let (_, qs) = expansion_fits(0.3, &xs, FRAC_PI_2).unwrap();
        let med = median(&qs);
        assert!(qs.iter().all(|q| q / med < 2.0 && q / med > 0.5));
    }

    #[test]
    fn probe_span_enforced() {
        assert!(expansion_fits(0.3, &geometric_probes(1e2, 1e5, 9), 1.0).is_err());
        assert!(expansion_fits(0.3, &[1.0, 1e3, 1e6], 1.0).is_err());
    }
}
