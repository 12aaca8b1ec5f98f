//! Disk sampling grids and strip regions.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{hg_eval, ConstructionParams, DiskPoint, HgfBundle};

/// Largest radial exponent `m` for which `1 - 10^{-m}` is still distinct from 1
/// with room to spare in double precision.
pub const MAX_RADIAL_EXPONENT: u32 = 15;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// A disk sampling grid: `angular_count` equispaced angles on each radius
/// `1 - 10^{-m}`, `m = 1..=m_max`, followed by `interior_count` points of a
/// sunflower fill whose rotation is drawn from `seed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub angular_count: usize,
    pub m_max: u32,
    pub interior_count: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            angular_count: 1024,
            m_max: 12,
            interior_count: 4096,
            seed: 42,
        }
    }
}

impl GridSpec {
    pub fn new(angular_count: usize, m_max: u32, interior_count: usize, seed: u64) -> Result<Self> {
        let g = Self {
            angular_count,
            m_max,
            interior_count,
            seed,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.angular_count == 0 {
            return Err(Error::InvalidGrid("angular_count must be positive".into()));
        }
        if self.interior_count == 0 {
            return Err(Error::InvalidGrid("interior_count must be positive".into()));
        }
        if self.m_max == 0 || self.m_max > MAX_RADIAL_EXPONENT {
            return Err(Error::InvalidGrid(format!(
                "m_max = {} outside 1..={MAX_RADIAL_EXPONENT}",
                self.m_max
            )));
        }
        Ok(())
    }

    /// Twice the angular and interior resolution, same radial levels.
    pub fn refined(&self) -> Self {
        Self {
            angular_count: 2 * self.angular_count,
            interior_count: 2 * self.interior_count,
            ..self.clone()
        }
    }

    pub fn radii(&self) -> Vec<f64> {
        (1..=self.m_max).map(|m| 1.0 - 10f64.powi(-(m as i32))).collect()
    }

    pub fn len(&self) -> usize {
        self.angular_count * self.m_max as usize + self.interior_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the first interior point; earlier indices are on radial levels.
    pub fn interior_offset(&self) -> usize {
        self.angular_count * self.m_max as usize
    }

    /// Radial level (`m`) of a point index, `None` for interior points.
    pub fn level_of(&self, index: usize) -> Option<u32> {
        (index < self.interior_offset()).then(|| (index / self.angular_count) as u32 + 1)
    }

    /// All points in deterministic order: radial level, then angle index, then interior.
    pub fn points(&self) -> Result<Vec<DiskPoint>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.len());
        for m in 1..=self.m_max {
            let defect = 10f64.powi(-(m as i32));
            for j in 0..self.angular_count {
                let theta = TAU * j as f64 / self.angular_count as f64;
                out.push(DiskPoint::polar(defect, theta)?);
            }
        }
        let phase = ChaCha8Rng::seed_from_u64(self.seed).random::<f64>() * TAU;
        let n = self.interior_count as f64;
        for i in 0..self.interior_count {
            let r = ((i as f64 + 0.5) / n).sqrt();
            let theta = phase + GOLDEN_ANGLE * i as f64;
            let (sin, cos) = theta.sin_cos();
            out.push(DiskPoint::new(num_complex::Complex64::new(r * cos, r * sin))?);
        }
        Ok(out)
    }
}

/// Evaluates the full bundle at every grid point; output order follows `points()`.
pub fn evaluate_grid(params: &ConstructionParams, grid: &GridSpec) -> Result<Vec<HgfBundle>> {
    let points = grid.points()?;
    points.par_iter().map(|p| hg_eval(p, params)).collect()
}

/// The truncated strip `{A < x < x_max, |y| < b}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripRegion {
    #[serde(rename = "A")]
    pub a: f64,
    pub b: f64,
    pub x_max: f64,
    pub sample_count: usize,
    pub seed: u64,
}

impl StripRegion {
    pub fn new(a: f64, b: f64, x_max: f64, sample_count: usize, seed: u64) -> Result<Self> {
        let r = Self {
            a,
            b,
            x_max,
            sample_count,
            seed,
        };
        r.validate()?;
        Ok(r)
    }

    /// Strip `{x > a, |y| < b}` truncated at `x_max = 1000 a`.
    pub fn with_default_truncation(a: f64, b: f64, sample_count: usize, seed: u64) -> Result<Self> {
        Self::new(a, b, 1e3 * a, sample_count, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a < self.x_max && self.x_max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "strip needs 0 < A < x_max, got A = {}, x_max = {}",
                self.a, self.x_max
            )));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::InvalidGrid(format!("strip half-width b = {} <= 0", self.b)));
        }
        if self.sample_count == 0 {
            return Err(Error::InvalidGrid("sample_count must be positive".into()));
        }
        Ok(())
    }

    pub fn contains(&self, s: num_complex::Complex64) -> bool {
        s.re > self.a && s.re < self.x_max && s.im.abs() < self.b
    }

    /// A point with `ln x` uniform on `(ln A, ln x_max)` and `y` uniform on `(-b, b)`.
    pub(crate) fn sample<R: Rng>(&self, rng: &mut R) -> num_complex::Complex64 {
        let (lo, hi) = (self.a.ln(), self.x_max.ln());
        let x = (lo + (hi - lo) * rng.random::<f64>()).exp().clamp(
            self.a * (1.0 + 1e-15),
            self.x_max * (1.0 - 1e-15),
        );
        let y = self.b * (2.0 * rng.random::<f64>() - 1.0);
        num_complex::Complex64::new(x, y)
    }
}
