//! Pairwise injectivity of `f = T_eps o S` on random disk pairs.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::kernel::{hg_eval, psi, ConstructionParams, DiskPoint};

use super::report::VerificationReport;

/// Relative slack on the separation inequality.
pub const SEPARATION_SLACK: f64 = 0.05;
/// Relative slack on the contraction `|dQ| <= eta |dPsi|`.
pub const CONTRACTION_SLACK: f64 = 0.05;

/// Outcome of the pairwise scan, with the contraction check kept separate.
#[derive(Debug, Clone)]
pub struct InjectivityScan {
    pub report: VerificationReport,
    /// Largest `|dQ| / (eta |dPsi|)` seen.
    pub contraction_max: f64,
    pub contraction_violations: u64,
}

fn uniform_disk<R: Rng>(rng: &mut R) -> DiskPoint {
    let r = rng.random::<f64>().sqrt() * (1.0 - 1e-12);
    let theta = TAU * rng.random::<f64>();
    DiskPoint::new(Complex64::from_polar(r, theta)).expect("radius below one")
}

fn near_boundary<R: Rng>(rng: &mut R) -> DiskPoint {
    let m = rng.random_range(1..=12);
    let theta = TAU * rng.random::<f64>();
    DiskPoint::polar(10f64.powi(-m), theta).expect("defect in (0, 1]")
}

fn close_partner<R: Rng>(rng: &mut R, p: &DiskPoint) -> Option<DiskPoint> {
    let delta = (1e-6f64.ln() + (1e-1f64.ln() - 1e-6f64.ln()) * rng.random::<f64>()).exp();
    let z = p.z() + Complex64::from_polar(delta, TAU * rng.random::<f64>());
    DiskPoint::new(z).ok()
}

/// Draws the `i`-th pair: independent uniform, near-boundary, or close pair.
fn draw_pair<R: Rng>(rng: &mut R, i: usize) -> Option<(DiskPoint, DiskPoint)> {
    match i % 3 {
        0 => Some((uniform_disk(rng), uniform_disk(rng))),
        1 => Some((near_boundary(rng), near_boundary(rng))),
        _ => {
            let p = uniform_disk(rng);
            close_partner(rng, &p).map(|q| (p, q))
        }
    }
}

/// Checks `|f(z) - f(z')| >= (1 - 2 eps eta)(1 - 0.05)|Psi(S(z)) - Psi(S(z'))|`
/// and `f(z) != f(z')` on `n_pairs` random pairs.
pub fn injectivity_scan(
    params: &ConstructionParams,
    eta_hat: f64,
    n_pairs: usize,
    seed: u64,
) -> Result<InjectivityScan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let contraction = 1.0 - 2.0 * params.eps() * eta_hat;
    let required = contraction * (1.0 - SEPARATION_SLACK);

    let mut used = 0u64;
    let mut worst = (f64::INFINITY, Complex64::default(), Complex64::default());
    let mut coincident = 0u64;
    let mut contraction_max = 0.0f64;
    let mut contraction_violations = 0u64;

    for i in 0..n_pairs {
        let Some((p, q)) = draw_pair(&mut rng, i) else { continue };
        if p.z() == q.z() {
            continue;
        }
        let (bp, bq) = (hg_eval(&p, params)?, hg_eval(&q, params)?);
        used += 1;
        let df = (bp.f - bq.f).norm();
        let dpsi = (psi(bp.s, params.alpha())? - psi(bq.s, params.alpha())?).norm();
        let dq = (bp.s.ln().arg() - bq.s.ln().arg()).abs();
        if df == 0.0 {
            coincident += 1;
        }
        let ratio = if dpsi > 0.0 { df / dpsi } else { f64::INFINITY };
        let ratio = ratio / contraction.max(f64::MIN_POSITIVE);
        if ratio < worst.0 {
            worst = (ratio, p.z(), q.z());
        }
        if dpsi > 0.0 && eta_hat > 0.0 {
            let c = dq / (eta_hat * dpsi);
            contraction_max = contraction_max.max(c);
            if c > 1.0 + CONTRACTION_SLACK {
                contraction_violations += 1;
            }
        }
    }

    let mut r = VerificationReport::new("injectivity_pairs").witness_points(&[worst.1, worst.2]);
    r.extremum = super::report::finite(worst.0);
    r.tolerance = 1.0 - SEPARATION_SLACK;
    r.samples_used = used;
    r.seed = seed;
    r.passed = contraction > 0.0 && coincident == 0 && used > 0 && worst.0 * contraction >= required;
    r.note(format!(
        "eta_hat = {eta_hat:.6e}, 1 - 2 eps eta = {contraction:.6e}; extremum is min |df| / ((1 - 2 eps eta)|dPsi|)"
    ));
    if contraction <= 0.0 {
        r.note("2 eps eta >= 1: contraction argument does not apply");
    }
    if coincident > 0 {
        r.note(format!("{coincident} pairs with identical f values"));
    }
    r.note(format!(
        "contraction max |dQ|/(eta |dPsi|) = {contraction_max:.6e}, {contraction_violations} above 1 + {CONTRACTION_SLACK}"
    ));
    Ok(InjectivityScan {
        report: r,
        contraction_max,
        contraction_violations,
    })
}

pub fn injectivity_pairs(
    params: &ConstructionParams,
    eta_hat: f64,
    n_pairs: usize,
    seed: u64,
) -> Result<VerificationReport> {
    Ok(injectivity_scan(params, eta_hat, n_pairs, seed)?.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_points_have_distinct_images() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 20.0).unwrap();
        let z = Complex64::new(0.5, 0.3);
        let a = hg_eval(&DiskPoint::new(z).unwrap(), &p).unwrap();
        let b = hg_eval(&DiskPoint::new(z.conj()).unwrap(), &p).unwrap();
        assert!((a.f - b.f).norm() > 0.0);
        assert!((a.f.conj() - b.f).norm() > 1e-3, "f is not conjugate-symmetric");
    }

    #[test]
    fn small_contraction_passes() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 20.0).unwrap();
        let r = injectivity_pairs(&p, 1.5, 600, 5).unwrap();
        assert!(r.passed, "{}", r.summary_line());
        assert_eq!(r.witness.len(), 4);
    }

    #[test]
    fn too_large_eta_fails() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 20.0).unwrap();
        let r = injectivity_pairs(&p, 6.0, 30, 5).unwrap();
        assert!(!r.passed);
    }
}
