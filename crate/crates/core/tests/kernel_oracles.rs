//! Closed forms against finite differences and algebraic identities.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spiralmap::kernel::{
    hg_eval, psi, q_arglog, strip_map, t_eps, uv_decompose, ConstructionParams, DiskPoint,
};

fn params() -> ConstructionParams {
    ConstructionParams::new(0.3, 0.1, 0.5, 8.0).unwrap()
}

fn random_points(n: usize, r_max: f64, seed: u64) -> Vec<DiskPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = r_max * rng.random::<f64>().sqrt();
            DiskPoint::new(Complex64::from_polar(r, TAU * rng.random::<f64>())).unwrap()
        })
        .collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn derivatives_match_central_differences() {
    let p = params();
    for pt in random_points(100, 0.9, 3) {
        let z = pt.z();
        let delta = 1e-5 * (1.0 - z.norm());
        let at = |w: Complex64| hg_eval(&DiskPoint::new(w).unwrap(), &p).unwrap();
        let (plus, minus) = (at(z + delta), at(z - delta));
        let fd_h = (plus.h - minus.h) / (2.0 * delta);
        let fd_g = (plus.g - minus.g) / (2.0 * delta);
        let b = at(z);
        assert!(rel(b.h_prime, fd_h) < 1e-7, "h' at {z}: {}", rel(b.h_prime, fd_h));
        assert!(rel(b.g_prime, fd_g) < 1e-7, "g' at {z}: {}", rel(b.g_prime, fd_g));
    }
}

#[test]
fn omega_is_ratio_of_derivatives() {
    let p = params();
    for pt in random_points(100, 0.9, 4) {
        let b = hg_eval(&pt, &p).unwrap();
        assert!(rel(b.omega, b.g_prime / b.h_prime) < 1e-10);
    }
}

#[test]
fn jacobian_identity() {
    let p = params();
    for pt in random_points(100, 0.999, 5) {
        let b = hg_eval(&pt, &p).unwrap();
        let expect = b.h_prime.norm_sqr() * (1.0 - b.omega_abs().powi(2));
        assert!((b.jacobian - expect).abs() <= 1e-12 * b.h_prime.norm_sqr());
    }
}

proptest! {
    #[test]
    fn psi_from_uv(x in 2.5f64..1e8, t in -0.999f64..0.999, alpha in 0.01f64..0.49) {
        let s = Complex64::new(x, t * FRAC_PI_2);
        let uv = uv_decompose(s, alpha).unwrap();
        let rebuilt = Complex64::new(-uv.v, -uv.u).exp();
        let direct = psi(s, alpha).unwrap();
        // The phase U is large, so the error scales with |U| ulps.
        prop_assert!((rebuilt - direct).norm() <= 1e-15 * uv.u.max(1.0) * 8.0 * direct.norm());
    }

    #[test]
    fn f_is_t_eps_of_s(r in 0.0f64..0.999_999, theta in 0.0f64..TAU, a in 2.1f64..1e4) {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, a).unwrap();
        let pt = DiskPoint::polar(1.0 - r, theta).unwrap();
        let b = hg_eval(&pt, &p).unwrap();
        let t = t_eps(strip_map(&pt, a), &p).unwrap();
        prop_assert!((b.f - t).norm() <= 1e-14 * t.norm().max(1.0));
        let recombined = b.h + b.g.conj();
        prop_assert!((b.f - recombined).norm() <= 1e-12 * b.h.norm().max(1.0));
    }

    #[test]
    fn f_within_envelope(m in 1u32..=15, theta in 0.0f64..TAU, a in 2.1f64..1e4) {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, a).unwrap();
        let b = hg_eval(&DiskPoint::polar(10f64.powi(-(m as i32)), theta).unwrap(), &p).unwrap();
        // |Psi(s)| = |s|^{-alpha} e^{Im s^alpha} and |Q| < pi / 2.
        let im_pow = (0.3 * b.s.ln()).exp().im;
        let bound = b.s.norm().powf(-0.3) * im_pow.exp() + 0.1 * std::f64::consts::PI;
        prop_assert!(b.f.norm() <= bound * (1.0 + 1e-12));
        prop_assert!(q_arglog(b.s).unwrap().abs() < FRAC_PI_2);
    }
}
