//! The full certification suite run by `spiralmap verify`.

use std::f64::consts::FRAC_PI_2;

use log::info;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::ConstructionParams;

use super::asymptotics::{asymptotic_residuals, geometric_probes};
use super::dilatation::dilatation_sup;
use super::eta::eta_estimate;
use super::grid::{GridSpec, StripRegion};
use super::injectivity::injectivity_pairs;
use super::level_curves::{level_curve_monotonicity, u_values_for};
use super::radial::{boundedness_scan, h_growth};
use super::report::VerificationReport;
use super::separation::{combine_cases, separation_profile};
use super::winding::{default_probes, winding_degree_adaptive};

/// Report names in suite order.
pub const SUITE: [&str; 8] = [
    "dilatation_sup",
    "injectivity_pairs",
    "winding_degree",
    "boundedness_scan",
    "h_growth",
    "level_curve_monotonicity",
    "asymptotic_residuals",
    "separation_profile",
];

/// Radii of the winding circles.
pub const WINDING_RADII: [f64; 3] = [0.5, 0.9, 0.99];
const WINDING_START_SAMPLES: usize = 4096;
/// Level values, as multiples of `A0^alpha`.
pub const LEVEL_FACTORS: [f64; 5] = [1.2, 1.5, 2.0, 3.0, 5.0];
pub const LEVEL_HEIGHTS: usize = 201;
const ASYMPTOTIC_PROBES: usize = 17;

/// Knobs shared by every certifier in the suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub grid: GridSpec,
    /// Pair count for the injectivity and separation scans.
    pub pairs: usize,
    /// Evaluation budget of the stability modulus estimator.
    pub eta_budget: usize,
    /// Right end of the truncated strip; `None` means `1000 A0`.
    pub strip_x_max: Option<f64>,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            pairs: 10_000,
            eta_budget: 20_000,
            strip_x_max: None,
            seed: 42,
        }
    }
}

impl SuiteOptions {
    /// The image strip `S(D)` of an instance, truncated at `strip_x_max`.
    pub fn strip(&self, params: &ConstructionParams) -> Result<StripRegion> {
        let a0 = params.a0();
        let x_max = self.strip_x_max.unwrap_or(1000.0 * a0);
        StripRegion::new(a0, params.b(), x_max, self.pairs, self.seed)
    }
}

/// True iff `name` selects the report `report`. A filter matches a report
/// name exactly or as its leading `_`-separated word.
pub fn filter_matches(name: &str, report: &str) -> bool {
    report == name || report.split('_').next() == Some(name)
}

/// Checks a `--only` filter against the suite names.
pub fn validate_filter(name: &str) -> Result<()> {
    if SUITE.iter().any(|r| filter_matches(name, r)) {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "--only {name} matches none of {}",
            SUITE.join(", ")
        )))
    }
}

fn run_one(name: &str, params: &ConstructionParams, opts: &SuiteOptions) -> Result<VerificationReport> {
    let alpha = params.alpha();
    match name {
        "dilatation_sup" => dilatation_sup(params, &opts.grid),
        "injectivity_pairs" => {
            let est = eta_estimate(&opts.strip(params)?, alpha, opts.eta_budget)?;
            let mut r = injectivity_pairs(params, est.eta_hat, opts.pairs, opts.seed.wrapping_add(1))?;
            if let Some(w) = est.warning {
                r.note(w);
            }
            Ok(r)
        }
        "winding_degree" => {
            let mut out = VerificationReport::new("winding_degree");
            out.passed = true;
            out.extremum = 0.0;
            for &radius in &WINDING_RADII {
                let probes = default_probes(params, radius)?;
                let r = winding_degree_adaptive(params, radius, WINDING_START_SAMPLES, &probes)?;
                out.passed &= r.passed;
                if r.extremum >= out.extremum {
                    out.extremum = r.extremum;
                    out.witness = r.witness.clone();
                }
                out.tolerance = r.tolerance;
                out.samples_used += r.samples_used;
                out.note(r.notes);
            }
            Ok(out)
        }
        "boundedness_scan" => boundedness_scan(params, opts.grid.m_max),
        "h_growth" => h_growth(params, opts.grid.m_max),
        "level_curve_monotonicity" => {
            let region = opts.strip(params)?;
            let us = u_values_for(&region, alpha, &LEVEL_FACTORS);
            level_curve_monotonicity(alpha, &region, &us, LEVEL_HEIGHTS)
        }
        "asymptotic_residuals" => {
            let probes = geometric_probes(1e2, 1e6, ASYMPTOTIC_PROBES);
            asymptotic_residuals(alpha, &probes, FRAC_PI_2)
        }
        "separation_profile" => Ok(combine_cases(&separation_profile(&opts.strip(params)?, alpha, opts.pairs)?)),
        other => Err(Error::InvalidGrid(format!("unknown report {other}"))),
    }
}

fn failed(name: &str, e: &Error) -> VerificationReport {
    let mut r = VerificationReport::new(name);
    r.passed = false;
    r.extremum = f64::MAX;
    r.note(format!("certifier error: {e}"));
    r
}

/// Runs the suite, or the reports selected by `only`.
///
/// Input errors (bad grid, bad filter) abort; a certifier that errors on a
/// valid instance yields a failed report carrying the error message.
pub fn run_suite(
    params: &ConstructionParams,
    opts: &SuiteOptions,
    only: Option<&str>,
) -> Result<Vec<VerificationReport>> {
    opts.grid.validate()?;
    if let Some(name) = only {
        validate_filter(name)?;
    }
    let mut reports = Vec::new();
    for name in SUITE {
        if only.is_some_and(|o| !filter_matches(o, name)) {
            continue;
        }
        info!("running {name}");
        let r = match run_one(name, params, opts) {
            Ok(r) => r,
            Err(e @ (Error::InvalidGrid(_) | Error::Config(_))) => return Err(e),
            Err(e) => failed(name, &e),
        };
        info!("{}", r.summary_line());
        reports.push(r);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_semantics() {
        assert!(filter_matches("dilatation", "dilatation_sup"));
        assert!(filter_matches("h_growth", "h_growth"));
        assert!(!filter_matches("growth", "h_growth"));
        assert!(validate_filter("winding").is_ok());
        assert!(validate_filter("nonsense").is_err());
    }

    #[test]
    fn only_dilatation_gives_one_report() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 20.0).unwrap();
        let opts = SuiteOptions {
            grid: GridSpec::new(128, 6, 256, 1).unwrap(),
            ..SuiteOptions::default()
        };
        let r = run_suite(&p, &opts, Some("dilatation")).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].name, "dilatation_sup");
    }
}
