//! Closed-form evaluation of the spiral map, its perturbation and the harmonic
//! mapping built from them.
//!
//! All logarithms and powers use the principal branch, `Arg` in `(-pi, pi]`,
//! and `s^alpha = exp(alpha * Log s)`. Every function is pure; results are
//! bitwise deterministic for identical inputs.

use std::f64::consts::{FRAC_PI_2, LN_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A point of the complex plane.
pub type ComplexValue = Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Parameters of one instance of the construction.
///
/// `alpha` is the spiral exponent, `eps` the weight of the logarithmic
/// perturbation, `k` the target dilatation bound, `a` the horizontal shift of
/// the strip map and `b` the strip half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ConstructionParams {
    alpha: f64,
    eps: f64,
    k: f64,
    a: f64,
    b: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    eps: f64,
    k: f64,
    #[serde(rename = "A")]
    a: f64,
    #[serde(default = "default_b")]
    b: f64,
}

fn default_b() -> f64 {
    FRAC_PI_2
}

impl TryFrom<RawParams> for ConstructionParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        ConstructionParams::new(raw.alpha, raw.eps, raw.k, raw.a)?.with_b(raw.b)
    }
}

impl From<ConstructionParams> for RawParams {
    fn from(p: ConstructionParams) -> Self {
        RawParams {
            alpha: p.alpha,
            eps: p.eps,
            k: p.k,
            a: p.a,
            b: p.b,
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            bound: "0 < alpha < 1/2",
        });
    }
    Ok(())
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            bound: "eps > 0",
        });
    }
    Ok(())
}

pub(crate) fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k,
            bound: "0 < k < 1",
        });
    }
    Ok(())
}

impl ConstructionParams {
    /// Validates the parameter ranges; `b` defaults to `pi/2`.
    pub fn new(alpha: f64, eps: f64, k: f64, a: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_eps(eps)?;
        check_k(k)?;
        if !(a > 2.0 && a.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "A",
                value: a,
                bound: "A > 2",
            });
        }
        Ok(Self {
            alpha,
            eps,
            k,
            a,
            b: FRAC_PI_2,
        })
    }

    pub fn with_b(mut self, b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "b",
                value: b,
                bound: "b > 0",
            });
        }
        self.b = b;
        Ok(self)
    }

    /// Same parameters with a different shift `A`.
    pub fn with_a(self, a: f64) -> Result<Self> {
        Self::new(self.alpha, self.eps, self.k, a)?.with_b(self.b)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Left edge of the strip containing `S(D)`: `A - log 2`.
    pub fn a0(&self) -> f64 {
        self.a - LN_2
    }

    /// `(1 - alpha) / alpha`, greater than one for every admissible alpha.
    pub fn beta(&self) -> f64 {
        (1.0 - self.alpha) / self.alpha
    }

    /// Maximal dilatation `K = (1 + k) / (1 - k)`.
    pub fn max_dilatation(&self) -> f64 {
        (1.0 + self.k) / (1.0 - self.k)
    }
}

/// Values of `U(s) = Re(s^alpha) + alpha Arg s` and `V(s) = alpha log|s| - Im(s^alpha)`,
/// so that `Psi(s) = exp(-V - iU)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UvPair {
    pub u: f64,
    pub v: f64,
}

/// A point of the unit disk carried together with `1 - z`.
///
/// `S(z)` depends only on `1 - z`; keeping it separately avoids cancellation
/// for points close to `z = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    z: Complex64,
    one_minus_z: Complex64,
}

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() >= 1.0 {
            return Err(domain("disk point", format!("|z| >= 1 for z = {z}")));
        }
        Ok(Self {
            z,
            one_minus_z: Complex64::new(1.0, 0.0) - z,
        })
    }

    /// The point `(1 - defect) e^{i theta}` with `1 - z` formed without cancellation.
    pub fn polar(defect: f64, theta: f64) -> Result<Self> {
        if !(defect > 0.0 && defect <= 1.0) {
            return Err(domain(
                "disk point",
                format!("radial defect {defect} outside (0, 1]"),
            ));
        }
        let r = 1.0 - defect;
        let (sin, cos) = theta.sin_cos();
        let half = (0.5 * theta).sin();
        let one_minus_z = Complex64::new(defect * cos + 2.0 * half * half, -r * sin);
        Ok(Self {
            z: Complex64::new(r * cos, r * sin),
            one_minus_z,
        })
    }

    /// `z = 1 - 10^{-m}` on the positive real axis.
    pub fn radial(m: u32) -> Result<Self> {
        Self::polar(10f64.powi(-(m as i32)), 0.0)
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn one_minus_z(&self) -> Complex64 {
        self.one_minus_z
    }
}

fn require_right_half_plane(op: &'static str, s: Complex64) -> Result<()> {
    if !(s.re > 0.0 && s.re.is_finite() && s.im.is_finite()) {
        return Err(domain(op, format!("Re s <= 0 for s = {s}")));
    }
    Ok(())
}

/// Principal power `exp(alpha Log s)`.
pub fn ppow(s: Complex64, alpha: f64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(domain("ppow", "non-finite base"));
    }
    if s.im == 0.0 && s.re <= 0.0 {
        return Err(domain("ppow", format!("s = {s} on the closed negative real axis")));
    }
    Ok((alpha * s.ln()).exp())
}

/// `S(z) = A - Log(1 - z)`.
pub fn s_map(z: Complex64, a: f64) -> Result<Complex64> {
    Ok(strip_map(&DiskPoint::new(z)?, a))
}

/// `S` evaluated from the stored `1 - z`.
pub fn strip_map(p: &DiskPoint, a: f64) -> Complex64 {
    a - p.one_minus_z.ln()
}

/// `Q(s) = Arg Log s`, defined where `Re s > 0` and `|s| > 1`.
pub fn q_arglog(s: Complex64) -> Result<f64> {
    require_right_half_plane("Q", s)?;
    let log_s = s.ln();
    if log_s.re <= 0.0 {
        return Err(domain("Q", format!("|s| <= 1 for s = {s}")));
    }
    Ok(log_s.arg())
}

pub fn uv_decompose(s: Complex64, alpha: f64) -> Result<UvPair> {
    require_right_half_plane("uv_decompose", s)?;
    let log_s = s.ln();
    let p = (alpha * log_s).exp();
    Ok(UvPair {
        u: p.re + alpha * log_s.im,
        v: alpha * log_s.re - p.im,
    })
}

/// The logarithmic spiral map `Psi(s) = s^{-alpha} exp(-i s^alpha)`.
pub fn psi(s: Complex64, alpha: f64) -> Result<Complex64> {
    require_right_half_plane("psi", s)?;
    let log_s = s.ln();
    let p = (alpha * log_s).exp();
    Ok((-alpha * log_s).exp() * (-I * p).exp())
}

/// `Psi'(s) = -(i alpha e^{-i s^alpha} / s)(1 - i s^{-alpha})`.
pub fn psi_prime(s: Complex64, alpha: f64) -> Result<Complex64> {
    require_right_half_plane("psi_prime", s)?;
    let log_s = s.ln();
    let p = (alpha * log_s).exp();
    let p_inv = (-alpha * log_s).exp();
    Ok(-(I * alpha * (-I * p).exp() / s) * (1.0 - I * p_inv))
}

/// The model spiral `gamma(u) = u^{-1} e^{-iu}`.
pub fn gamma_curve(u: f64) -> Result<Complex64> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(domain("gamma", format!("u = {u} <= 0")));
    }
    Ok(Complex64::from_polar(1.0 / u, -u))
}

/// `T_eps(s) = Psi(s) - 2 eps Q(s)`.
pub fn t_eps(s: Complex64, params: &ConstructionParams) -> Result<Complex64> {
    Ok(psi(s, params.alpha)? - 2.0 * params.eps * q_arglog(s)?)
}

/// Everything the construction defines at one disk point, from a single evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HgfBundle {
    pub z: Complex64,
    pub s: Complex64,
    /// Analytic part `Psi(S) + i eps Log Log S`.
    pub h: Complex64,
    /// Co-analytic part `i eps Log Log S`.
    pub g: Complex64,
    /// `Psi(S) - 2 eps Arg Log S`, which equals `h + conj(g)`.
    pub f: Complex64,
    pub h_prime: Complex64,
    pub g_prime: Complex64,
    /// Closed form `i eps / (S Log S Psi'(S) + i eps)`.
    pub omega: Complex64,
    /// `|h'|^2 - |g'|^2`.
    pub jacobian: f64,
}

impl HgfBundle {
    pub fn omega_abs(&self) -> f64 {
        self.omega.norm()
    }
}

pub fn hg_eval(p: &DiskPoint, params: &ConstructionParams) -> Result<HgfBundle> {
    let s = strip_map(p, params.a);
    let log_s = s.ln();
    if !(s.re > 0.0 && log_s.re > 0.0) {
        return Err(domain("hg_eval", format!("Log S(z) not in the right half-plane, S = {s}")));
    }
    let loglog = log_s.ln();
    let psi_s = psi(s, params.alpha)?;
    let dpsi = psi_prime(s, params.alpha)?;
    let ieps = I * params.eps;

    let g = ieps * loglog;
    let h = psi_s + g;
    let f = psi_s - 2.0 * params.eps * log_s.arg();

    let s_prime = 1.0 / p.one_minus_z;
    let log_term = ieps / (s * log_s);
    let g_prime = log_term * s_prime;
    let h_prime = (dpsi + log_term) * s_prime;

    let denom = s * log_s * dpsi + ieps;
    if denom.norm() <= f64::MIN_POSITIVE || !denom.re.is_finite() || !denom.im.is_finite() {
        return Err(Error::DegenerateDenominator {
            re: p.z.re,
            im: p.z.im,
        });
    }
    let omega = ieps / denom;
    let jacobian = h_prime.norm_sqr() - g_prime.norm_sqr();

    Ok(HgfBundle {
        z: p.z,
        s,
        h,
        g,
        f,
        h_prime,
        g_prime,
        omega,
        jacobian,
    })
}

/// Closed-form `(h'(z), g'(z))`.
pub fn hg_derivatives(p: &DiskPoint, params: &ConstructionParams) -> Result<(Complex64, Complex64)> {
    let b = hg_eval(p, params)?;
    Ok((b.h_prime, b.g_prime))
}

/// Closed-form dilatation and the Jacobian `|h'|^2 - |g'|^2`.
pub fn omega_eval(p: &DiskPoint, params: &ConstructionParams) -> Result<(Complex64, f64)> {
    let b = hg_eval(p, params)?;
    Ok((b.omega, b.jacobian))
}

/// Modulus of the product `S Log S Psi'(S)` written out factor by factor:
/// `alpha |Log s| e^{Im s^alpha} |1 - i s^{-alpha}|`.
pub fn product_modulus(s: Complex64, alpha: f64) -> Result<f64> {
    require_right_half_plane("product_modulus", s)?;
    let log_s = s.ln();
    let p = (alpha * log_s).exp();
    let p_inv = (-alpha * log_s).exp();
    Ok(alpha * log_s.norm() * p.im.exp() * (1.0 - I * p_inv).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, LN_10, PI, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn ppow_principal_values() {
        assert_eq!(ppow(c(1.0, 0.0), 0.3).unwrap(), c(1.0, 0.0));
        assert!((ppow(c(4.0, 0.0), 0.5).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        let r = ppow(c(0.0, 1.0), 0.5).unwrap();
        assert!((r - c(SQRT_2 / 2.0, SQRT_2 / 2.0)).norm() < 1e-15);
        assert!(ppow(c(0.0, 0.0), 0.5).is_err());
        assert!(ppow(c(-2.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn strip_map_values() {
        assert_eq!(s_map(c(0.0, 0.0), 10.0).unwrap(), c(10.0, 0.0));
        let near = strip_map(&DiskPoint::radial(3).unwrap(), 10.0);
        assert!((near.re - (10.0 + 3.0 * LN_10)).abs() < 1e-12);
        assert_eq!(near.im, 0.0);
        let at_i = s_map(c(0.0, 0.999_999_999), 10.0).unwrap();
        assert!((at_i - c(10.0 - 0.5 * LN_2, PI / 4.0)).norm() < 1e-8);
        assert!(s_map(c(1.0, 0.0), 10.0).is_err());
        assert!(s_map(c(0.6, 0.8), 10.0).is_err());
    }

    #[test]
    fn polar_point_matches_direct_subtraction() {
        for &(d, t) in &[(0.5, 1.0), (0.1, 3.0), (0.25, -2.0), (0.01, 0.001)] {
            let p = DiskPoint::polar(d, t).unwrap();
            let direct = 1.0 - p.z();
            assert!((p.one_minus_z() - direct).norm() < 1e-15);
        }
    }

    #[test]
    fn q_arglog_values() {
        assert_eq!(q_arglog(c(7.0, 0.0)).unwrap(), 0.0);
        let s = Complex64::from_polar(E, 1.0);
        assert!((q_arglog(s).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!(q_arglog(c(0.5, 0.0)).is_err());
        assert!(q_arglog(c(-3.0, 1.0)).is_err());
    }

    #[test]
    fn uv_on_real_axis() {
        let uv = uv_decompose(c(1.0, 0.0), 0.37).unwrap();
        assert_eq!((uv.u, uv.v), (1.0, 0.0));
        let x: f64 = 123.0;
        let uv = uv_decompose(c(x, 0.0), 0.3).unwrap();
        assert!((uv.u - x.powf(0.3)).abs() < 1e-13);
        assert!((uv.v - 0.3 * x.ln()).abs() < 1e-15);
    }

    #[test]
    fn psi_values() {
        let one = psi(c(1.0, 0.0), 0.3).unwrap();
        assert!((one - c(1f64.cos(), -1f64.sin())).norm() < 1e-15);
        for &x in &[2.0, 17.0, 1e4] {
            let m = psi(c(x, 0.0), 0.3).unwrap().norm();
            assert!((m - x.powf(-0.3)).abs() < 1e-14 * m.max(1.0));
        }
        assert!(psi(c(0.0, 1.0), 0.3).is_err());
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_curve(PI).unwrap() - c(-1.0 / PI, 0.0)).norm() < 1e-16);
        assert!((gamma_curve(2.0 * PI).unwrap() - c(0.5 / PI, 0.0)).norm() < 1e-16);
        assert!((gamma_curve(PI / 2.0).unwrap() - c(0.0, -2.0 / PI)).norm() < 1e-16);
        assert!(gamma_curve(0.0).is_err());
        assert!(gamma_curve(-1.0).is_err());
    }

    #[test]
    fn t_eps_is_real_translate_of_psi() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 10.0).unwrap();
        assert_eq!(t_eps(c(5.0, 0.0), &p).unwrap(), psi(c(5.0, 0.0), 0.3).unwrap());
        let s = c(40.0, 1.0);
        let t = t_eps(s, &p).unwrap();
        let expect = psi(s, 0.3).unwrap() - 0.2 * q_arglog(s).unwrap();
        assert_eq!(t, expect);
        assert_eq!(t.im, psi(s, 0.3).unwrap().im);
    }

    #[test]
    fn param_validation() {
        assert!(ConstructionParams::new(0.6, 0.1, 0.5, 10.0).is_err());
        assert!(ConstructionParams::new(0.3, 0.0, 0.5, 10.0).is_err());
        assert!(ConstructionParams::new(0.3, 0.1, 1.0, 10.0).is_err());
        assert!(ConstructionParams::new(0.3, 0.1, 0.5, 2.0).is_err());
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 10.0).unwrap();
        assert_eq!(p.a0(), 10.0 - LN_2);
        assert!(p.beta() > 1.0);
        assert!((p.max_dilatation() - 3.0).abs() < 1e-15);
        assert!(p.with_b(0.0).is_err());
    }

    #[test]
    fn params_json_round_trip() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 12.5).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"A\":12.5"));
        let back: ConstructionParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<ConstructionParams>(
            r#"{"alpha":0.7,"eps":0.1,"k":0.5,"A":10}"#
        )
        .is_err());
    }

    #[test]
    fn hg_at_origin() {
        let a = E.exp();
        let p = ConstructionParams::new(0.3, 0.1, 0.5, a).unwrap();
        let b = hg_eval(&DiskPoint::new(c(0.0, 0.0)).unwrap(), &p).unwrap();
        assert!((b.g - c(0.0, 0.1)).norm() < 1e-15);
        assert_eq!(b.f, psi(c(a, 0.0), 0.3).unwrap());
        assert!((b.g_prime - c(0.0, 0.1 / (a * a.ln()))).norm() < 1e-16);
        assert!((b.jacobian - b.h_prime.norm_sqr() * (1.0 - b.omega.norm_sqr())).abs() <= 1e-12 * b.jacobian);
    }

    #[test]
    fn real_axis_collapse_is_exact() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 20.0).unwrap();
        for &r in &[0.1, 0.5, 0.9, 0.999] {
            let pt = DiskPoint::new(c(r, 0.0)).unwrap();
            let b = hg_eval(&pt, &p).unwrap();
            assert_eq!(b.s.im, 0.0);
            assert_eq!(q_arglog(b.s).unwrap(), 0.0);
            assert_eq!(b.f.im, psi(b.s, 0.3).unwrap().im);
        }
    }

    #[test]
    fn derivative_difference_is_psi_prime_times_s_prime() {
        let p = ConstructionParams::new(0.3, 0.1, 0.5, 20.0).unwrap();
        let pt = DiskPoint::new(c(0.3, -0.6)).unwrap();
        let b = hg_eval(&pt, &p).unwrap();
        let expect = psi_prime(b.s, 0.3).unwrap() / pt.one_minus_z();
        assert!(close(b.h_prime - b.g_prime, expect, 1e-13));
    }

    #[test]
    fn product_modulus_matches_direct_product() {
        for &s in &[c(10.0, 1.0), c(3.5, -1.5), c(500.0, 0.2)] {
            let direct = (s * s.ln() * psi_prime(s, 0.3).unwrap()).norm();
            let m = product_modulus(s, 0.3).unwrap();
            assert!((m - direct).abs() <= 1e-13 * direct);
        }
    }

    // Reference values computed at 50 significant digits and frozen here.
    #[test]
    fn high_precision_reference_values() {
        let q = q_arglog(c(100.0, 1.0)).unwrap();
        assert!((q - 0.002_171_373_044_623_207_3).abs() <= 1e-15 * q);
        let cases = [
            (c(100.0, 1.0), c(-0.169_193_197_666_939_03, 0.189_717_429_965_691_14), c(0.002_781_683_051_034_304_5, 0.001_430_560_225_668_346_8)),
            (c(20.0, 0.3), c(-0.319_900_138_510_858_66, -0.258_997_326_924_207_87), c(-0.004_562_526_509_844_016, 0.015_698_043_089_531_501)),
        ];
        for (s, p, dp) in cases {
            assert!(close(psi(s, 0.3).unwrap(), p, 1e-14), "{s}");
            assert!(close(psi_prime(s, 0.3).unwrap(), dp, 1e-13), "{s}");
        }
    }

    #[test]
    fn psi_prime_matches_central_difference() {
        let s = c(20.0, 0.3);
        let hstep = 1e-6;
        let fd = (psi(s + hstep, 0.3).unwrap() - psi(s - hstep, 0.3).unwrap()) / (2.0 * hstep);
        assert!(close(psi_prime(s, 0.3).unwrap(), fd, 1e-7));
    }

    #[test]
    fn psi_prime_two_term_form() {
        for &s in &[c(3.0, 1.0), c(20.0, 0.3), c(1e4, -1.5)] {
            let e = (-I * ppow(s, 0.3).unwrap()).exp();
            let two_term = -0.3 * ppow(s, -1.3).unwrap() * e - I * 0.3 / s * e;
            assert!(close(psi_prime(s, 0.3).unwrap(), two_term, 1e-13));
        }
    }

    #[test]
    fn psi_prime_large_x_asymptotics() {
        let x = 1e6;
        let ratio = psi_prime(c(x, 0.0), 0.3).unwrap().norm() * x / 0.3;
        assert!((ratio - (1.0 + x.powf(-0.6)).sqrt()).abs() < 1e-13);
        assert!((ratio - 1.0).abs() < 2e-4);
    }
}
