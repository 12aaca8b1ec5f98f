//! Estimation of the stability modulus
//! `eta(A) = sup |Q(s) - Q(t)| / |Psi(s) - Psi(t)|` over a truncated strip.
//!
//! Three quarters of the budget go to random starting pairs (half drawn
//! independently, half as close pairs at log-uniform separations), the rest
//! to coordinate-wise pattern refinement of the 32 best pairs in the
//! coordinates `(ln x_s, y_s, ln x_t, y_t)`, halving the step down to 1e-9.

use log::warn;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::kernel::{psi, q_arglog};

use super::grid::StripRegion;

/// Pairs closer than this are discarded.
pub const DIAGONAL_CUTOFF: f64 = 1e-9;
/// Number of best starting pairs handed to the refinement stage.
pub const REFINED_PAIRS: usize = 32;
/// Refinement stops for a pair once its step falls below this.
pub const MIN_STEP: f64 = 1e-9;
const INITIAL_STEP: f64 = 0.05;
const CLOSE_PAIR_MIN_SEPARATION: f64 = 1e-6;
const STABILITY_TOLERANCE: f64 = 0.01;

/// Result of one estimator run.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaEstimate {
    pub eta_hat: f64,
    pub witness: (Complex64, Complex64),
    pub evaluations: u64,
    /// Best value after each refinement round.
    pub rounds: Vec<f64>,
    /// Set when the last two rounds differ by more than 1%.
    pub warning: Option<String>,
}

/// `|Q(s) - Q(t)| / |Psi(s) - Psi(t)|`, or `None` for pairs closer than the cutoff.
pub fn eta_ratio(s: Complex64, t: Complex64, alpha: f64) -> Result<Option<f64>> {
    if (s - t).norm() < DIAGONAL_CUTOFF {
        return Ok(None);
    }
    let dpsi = (psi(s, alpha)? - psi(t, alpha)?).norm();
    if dpsi == 0.0 {
        return Err(domain("eta_ratio", format!("Psi(s) = Psi(t) for s = {s}, t = {t}")));
    }
    Ok(Some((q_arglog(s)? - q_arglog(t)?).abs() / dpsi))
}

#[derive(Clone, Copy)]
struct Pair {
    coords: [f64; 4],
    value: f64,
    step: f64,
}

fn to_points(c: &[f64; 4]) -> (Complex64, Complex64) {
    (
        Complex64::new(c[0].exp(), c[1]),
        Complex64::new(c[2].exp(), c[3]),
    )
}

fn from_points(s: Complex64, t: Complex64) -> [f64; 4] {
    [s.re.ln(), s.im, t.re.ln(), t.im]
}

fn close_partner<R: Rng>(region: &StripRegion, s: Complex64, rng: &mut R) -> Option<Complex64> {
    let (lo, hi) = (CLOSE_PAIR_MIN_SEPARATION.ln(), region.b.ln());
    let delta = (lo + (hi - lo) * rng.random::<f64>()).exp();
    let angle = std::f64::consts::TAU * rng.random::<f64>();
    let t = s + Complex64::from_polar(delta, angle);
    region.contains(t).then_some(t)
}

/// Estimates the truncated supremum on `region` with `budget` ratio evaluations.
pub fn eta_estimate(region: &StripRegion, alpha: f64, budget: usize) -> Result<EtaEstimate> {
    region.validate()?;
    if region.a < 1.0 {
        return Err(domain("eta_estimate", "strip must satisfy |s| > 1 (A >= 1)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(region.seed);
    let starts = (budget * 3 / 4).max(REFINED_PAIRS);
    let mut evaluations = 0u64;
    let mut pool: Vec<Pair> = Vec::with_capacity(starts);

    for i in 0..starts {
        let s = region.sample(&mut rng);
        let t = if i % 2 == 0 {
            region.sample(&mut rng)
        } else {
            match close_partner(region, s, &mut rng) {
                Some(t) => t,
                None => continue,
            }
        };
        evaluations += 1;
        if let Some(value) = eta_ratio(s, t, alpha)? {
            pool.push(Pair {
                coords: from_points(s, t),
                value,
                step: INITIAL_STEP,
            });
        }
    }
    // Stable sort keeps the earlier sample first among equal values.
    pool.sort_by(|a, b| b.value.total_cmp(&a.value));
    pool.truncate(REFINED_PAIRS);

    let refine_budget = (budget - budget * 3 / 4) as u64;
    let per_pair = (refine_budget / pool.len().max(1) as u64).max(8);
    let mut spent = vec![0u64; pool.len()];
    let mut rounds = Vec::new();
    let scales = [1.0, region.b, 1.0, region.b];

    loop {
        let mut active = false;
        for (pair, used) in pool.iter_mut().zip(spent.iter_mut()) {
            if pair.step < MIN_STEP || *used + 8 > per_pair {
                continue;
            }
            active = true;
            let mut improved = false;
            for axis in 0..4 {
                for dir in [1.0, -1.0] {
                    let mut trial = pair.coords;
                    trial[axis] += dir * pair.step * scales[axis];
                    let (s, t) = to_points(&trial);
                    if !region.contains(s) || !region.contains(t) {
                        continue;
                    }
                    *used += 1;
                    evaluations += 1;
                    if let Some(v) = eta_ratio(s, t, alpha)? {
                        if v > pair.value {
                            pair.coords = trial;
                            pair.value = v;
                            improved = true;
                            break;
                        }
                    }
                }
            }
            if !improved {
                pair.step *= 0.5;
            }
        }
        if !active {
            break;
        }
        rounds.push(pool.iter().map(|p| p.value).fold(0.0, f64::max));
    }

    let best = pool
        .iter()
        .enumerate()
        .fold(None::<(usize, f64)>, |acc, (i, p)| match acc {
            Some((_, v)) if v >= p.value => acc,
            _ => Some((i, p.value)),
        });
    let (eta_hat, witness) = match best {
        Some((i, v)) => (v, to_points(&pool[i].coords)),
        None => return Err(domain("eta_estimate", "no admissible pairs sampled")),
    };

    let warning = match rounds.as_slice() {
        [.., prev, last] if (last - prev).abs() > STABILITY_TOLERANCE * last.abs() => {
            let w = format!(
                "eta refinement not stabilised: last rounds {prev:.6e} -> {last:.6e}"
            );
            warn!("{w}");
            Some(w)
        }
        _ => None,
    };

    Ok(EtaEstimate {
        eta_hat,
        witness,
        evaluations,
        rounds,
        warning,
    })
}
