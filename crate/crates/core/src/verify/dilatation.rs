//! Dilatation bound and Jacobian floor over a disk grid.

use crate::error::Result;
use crate::kernel::{ConstructionParams, HgfBundle};

use super::grid::{evaluate_grid, GridSpec};
use super::report::VerificationReport;

/// Slack allowed on the Jacobian ratio `J_f / |h'|^2` below `1 - k^2`.
pub const JACOBIAN_SLACK: f64 = 1e-10;

/// First index attaining the maximum of `key`.
pub(crate) fn argmax_by<T>(items: &[T], key: impl Fn(&T) -> f64) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, item) in items.iter().enumerate() {
        let v = key(item);
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

fn jacobian_ratio(b: &HgfBundle) -> f64 {
    b.jacobian / b.h_prime.norm_sqr()
}

/// Per-level supremum of `|omega|` on the radial levels of `grid`.
pub fn level_sups(grid: &GridSpec, bundles: &[HgfBundle]) -> Vec<f64> {
    bundles[..grid.interior_offset()]
        .chunks(grid.angular_count)
        .map(|c| c.iter().map(HgfBundle::omega_abs).fold(0.0, f64::max))
        .collect()
}

/// Builds the dilatation report from precomputed bundles.
pub(crate) fn dilatation_report(
    params: &ConstructionParams,
    grid: &GridSpec,
    bundles: &[HgfBundle],
) -> VerificationReport {
    let (idx, sup) = argmax_by(bundles, HgfBundle::omega_abs);
    let mut r = VerificationReport::new("dilatation_sup").witness_points(&[bundles[idx].z]);
    r.passed = sup <= params.k();
    r.extremum = sup;
    r.tolerance = params.k();
    r.samples_used = bundles.len() as u64;
    r.seed = grid.seed;
    r.note(format!(
        "sup |omega| over {} points ({} radial levels to 1-1e-{}); argmax index {}{}",
        bundles.len(),
        grid.m_max,
        grid.m_max,
        idx,
        grid.level_of(idx)
            .map(|m| format!(" on level m = {m}"))
            .unwrap_or_else(|| " in the interior".into())
    ));
    r
}

/// Supremum of `|omega(z)|` over the grid; passes iff it is at most `k`.
pub fn dilatation_sup(params: &ConstructionParams, grid: &GridSpec) -> Result<VerificationReport> {
    let bundles = evaluate_grid(params, grid)?;
    Ok(dilatation_report(params, grid, &bundles))
}

pub(crate) fn jacobian_report(
    params: &ConstructionParams,
    grid: &GridSpec,
    bundles: &[HgfBundle],
) -> VerificationReport {
    let (idx, neg_min) = argmax_by(bundles, |b| -jacobian_ratio(b));
    let floor = 1.0 - params.k() * params.k() - JACOBIAN_SLACK;
    let min = -neg_min;
    let mut r = VerificationReport::new("jacobian_floor").witness_points(&[bundles[idx].z]);
    r.passed = min >= floor;
    r.extremum = min;
    r.tolerance = floor;
    r.samples_used = bundles.len() as u64;
    r.seed = grid.seed;
    r.note("min J_f/|h'|^2 against 1 - k^2 - 1e-10");
    r
}

/// Minimum of `J_f / |h'|^2` over the grid; passes iff it is at least `1 - k^2 - 1e-10`.
pub fn jacobian_floor(params: &ConstructionParams, grid: &GridSpec) -> Result<VerificationReport> {
    let bundles = evaluate_grid(params, grid)?;
    Ok(jacobian_report(params, grid, &bundles))
}
