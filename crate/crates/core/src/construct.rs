//! Selection of an admissible shift `A` and assembly of certified instances.

use std::f64::consts::{FRAC_PI_2, LN_2};

use log::{debug, warn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{check_alpha, check_eps, check_k, product_modulus, ConstructionParams};
use crate::verify::dilatation::{dilatation_report, level_sups};
use crate::verify::grid::{evaluate_grid, GridSpec};

/// Largest shift the searches will try; keeps `log A0` far inside double range.
pub const A_SEARCH_CAP: f64 = 1e150;

/// Selection requires `sup |omega| <= SELECTION_MARGIN * k`.
pub const SELECTION_MARGIN: f64 = 0.98;

/// Bisection stops once the bracket ratio drops below this factor.
pub const BISECTION_RATIO: f64 = 1.01;

/// Smallest starting shift for `select_a`.
pub const MIN_START_A: f64 = 8.0;

const HINT_LADDER_START: f64 = 2.5;
const HINT_LADDER_STEP: f64 = 1.189_207_115_002_721; // 2^{1/4}
const HINT_STRIP_LENGTH: f64 = 50.0;
const HINT_NX: usize = 64;
const HINT_NY: usize = 33;

/// A certified construction instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingInstance {
    pub params: ConstructionParams,
    pub dilatation_sup_estimate: f64,
    /// `(A, sup |omega|)` for every candidate evaluated, ending with the selected `A`.
    pub selection_trace: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// `K = (1 + k) / (1 - k)`.
pub fn k_to_big_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k,
            bound: "0 <= k < 1",
        });
    }
    Ok((1.0 + k) / (1.0 - k))
}

/// Infimum of `alpha |Log s| e^{Im s^alpha} |1 - i s^{-alpha}|` over a lattice of
/// the strip `{A0 <= x <= A0 + 50, |y| < pi/2}`.
pub fn sampled_product_infimum(a: f64, alpha: f64) -> Result<f64> {
    let a0 = a - LN_2;
    let y_edge = FRAC_PI_2 * (1.0 - 1e-9);
    let mut inf = f64::INFINITY;
    for i in 0..HINT_NX {
        let x = a0 + HINT_STRIP_LENGTH * i as f64 / (HINT_NX - 1) as f64;
        for j in 0..HINT_NY {
            let y = y_edge * (2.0 * j as f64 / (HINT_NY - 1) as f64 - 1.0);
            inf = inf.min(product_modulus(Complex64::new(x, y), alpha)?);
        }
    }
    Ok(inf)
}

/// Smallest `A` on the ladder `2.5 * 2^{j/4}` whose sampled product infimum
/// reaches `eps (1 + 1/k)`.
pub fn analytic_a_hint(k: f64, eps: f64, alpha: f64) -> Result<f64> {
    check_k(k)?;
    check_eps(eps)?;
    check_alpha(alpha)?;
    let threshold = eps * (1.0 + 1.0 / k);
    let mut a = HINT_LADDER_START;
    while a <= A_SEARCH_CAP {
        if sampled_product_infimum(a, alpha)? >= threshold {
            return Ok(a);
        }
        a *= HINT_LADDER_STEP;
    }
    Err(Error::SearchExhausted {
        k,
        eps,
        alpha,
        cap: A_SEARCH_CAP,
    })
}

struct Candidate {
    sup: f64,
    warning: Option<String>,
}

fn evaluate_candidate(params: &ConstructionParams, grid: &GridSpec) -> Result<Candidate> {
    let bundles = match evaluate_grid(params, grid) {
        Ok(b) => b,
        Err(Error::DegenerateDenominator { .. }) => {
            return Ok(Candidate {
                sup: f64::INFINITY,
                warning: None,
            })
        }
        Err(e) => return Err(e),
    };
    let report = dilatation_report(params, grid, &bundles);
    let sups = level_sups(grid, &bundles);
    let argmax_level = bundles
        .iter()
        .position(|b| b.omega_abs() == report.extremum)
        .and_then(|i| grid.level_of(i));
    let warning = match (argmax_level, sups.as_slice()) {
        (Some(m), [.., inner, outer]) if m == grid.m_max && (outer - inner) > 1e-3 * outer => {
            Some(format!(
                "grid may be too coarse: sup |omega| at A = {} sits on the outermost level and still moved by {:.3e} from the previous level",
                params.a(),
                outer - inner
            ))
        }
        _ => None,
    };
    Ok(Candidate {
        sup: report.extremum,
        warning,
    })
}

/// Chooses `A` for `(k, eps, alpha)` and certifies `sup |omega| <= 0.98 k` on `grid`.
///
/// Starting from `max(analytic_a_hint, 8)`, `A` is doubled until the grid
/// supremum passes; if a failing candidate was seen, the last failing/first
/// passing bracket is bisected geometrically down to a ratio of 1.01.
pub fn select_a(k: f64, eps: f64, alpha: f64, grid: &GridSpec) -> Result<MappingInstance> {
    grid.validate()?;
    let hint = analytic_a_hint(k, eps, alpha)?;
    let limit = SELECTION_MARGIN * k;
    let base = ConstructionParams::new(alpha, eps, k, hint.max(MIN_START_A))?;

    let mut trace = Vec::new();
    let mut warnings = Vec::new();
    let mut eval = |a: f64, trace: &mut Vec<(f64, f64)>| -> Result<f64> {
        let c = evaluate_candidate(&base.with_a(a)?, grid)?;
        debug!("select_a: A = {a:.6e}, sup|omega| = {:.6e}", c.sup);
        trace.push((a, c.sup));
        if let Some(w) = c.warning {
            warn!("{w}");
            warnings.push(w);
        }
        Ok(c.sup)
    };

    let mut a = base.a();
    let mut last_fail = None;
    let mut sup = eval(a, &mut trace)?;
    while sup > limit {
        last_fail = Some(a);
        a *= 2.0;
        if a > A_SEARCH_CAP {
            return Err(Error::SearchExhausted {
                k,
                eps,
                alpha,
                cap: A_SEARCH_CAP,
            });
        }
        sup = eval(a, &mut trace)?;
    }

    let (mut pass_a, mut pass_sup) = (a, sup);
    if let Some(mut lo) = last_fail {
        while pass_a / lo > BISECTION_RATIO {
            let mid = (lo * pass_a).sqrt();
            let s = eval(mid, &mut trace)?;
            if s <= limit {
                pass_a = mid;
                pass_sup = s;
            } else {
                lo = mid;
            }
        }
    }
    if trace.last().map(|t| t.0) != Some(pass_a) {
        trace.push((pass_a, pass_sup));
    }

    Ok(MappingInstance {
        params: base.with_a(pass_a)?,
        dilatation_sup_estimate: pass_sup,
        selection_trace: trace,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_k_values() {
        assert!((k_to_big_k(1.0 / 3.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(k_to_big_k(0.0).unwrap(), 1.0);
        assert_eq!(k_to_big_k(0.5).unwrap(), 3.0);
        assert!(k_to_big_k(1.0).is_err());
        assert!(k_to_big_k(-0.1).is_err());
    }

    #[test]
    fn hint_monotone_in_k_and_eps() {
        let ks = [0.1, 0.3, 0.5, 0.7, 0.9, 0.99];
        let hints: Vec<f64> = ks.iter().map(|&k| analytic_a_hint(k, 0.1, 0.3).unwrap()).collect();
        assert!(hints.windows(2).all(|w| w[0] >= w[1]), "{hints:?}");
        for &k in &[0.1, 0.5, 0.9] {
            assert!(analytic_a_hint(k, 0.2, 0.3).unwrap() >= analytic_a_hint(k, 0.1, 0.3).unwrap());
        }
    }

    #[test]
    fn hint_meets_threshold_and_predecessor_does_not() {
        let (k, eps, alpha) = (0.5, 0.1, 0.3);
        let hint = analytic_a_hint(k, eps, alpha).unwrap();
        let threshold = eps * (1.0 + 1.0 / k);
        assert!(sampled_product_infimum(hint, alpha).unwrap() >= threshold);
        let prev = hint / HINT_LADDER_STEP;
        if prev >= HINT_LADDER_START {
            assert!(sampled_product_infimum(prev, alpha).unwrap() < threshold);
        }
    }

    #[test]
    fn hint_rejects_bad_input() {
        assert!(analytic_a_hint(1.0, 0.1, 0.3).is_err());
        assert!(analytic_a_hint(0.5, -0.1, 0.3).is_err());
        assert!(analytic_a_hint(0.5, 0.1, 0.5).is_err());
    }

    #[test]
    fn selection_is_deterministic_and_certified() {
        let grid = GridSpec::new(256, 8, 256, 3).unwrap();
        let a = select_a(0.1, 0.1, 0.3, &grid).unwrap();
        let b = select_a(0.1, 0.1, 0.3, &grid).unwrap();
        assert_eq!(a, b);
        assert!(a.dilatation_sup_estimate <= SELECTION_MARGIN * 0.1);
        let last = *a.selection_trace.last().unwrap();
        assert_eq!(last, (a.params.a(), a.dilatation_sup_estimate));
        assert!(a.params.a() >= analytic_a_hint(0.1, 0.1, 0.3).unwrap() / 2.0);
    }
}
