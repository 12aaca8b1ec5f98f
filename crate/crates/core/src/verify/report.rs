use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Outcome of one certifier.
///
/// `passed` is true exactly when `extremum` satisfies the certifier's
/// inequality against `tolerance`; `witness` holds the flattened
/// `[re, im, ...]` coordinates of the extremal point or pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub passed: bool,
    pub extremum: f64,
    pub witness: Vec<f64>,
    pub tolerance: f64,
    pub samples_used: u64,
    pub seed: u64,
    pub notes: String,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: false,
            extremum: 0.0,
            witness: Vec::new(),
            tolerance: 0.0,
            samples_used: 0,
            seed: 0,
            notes: String::new(),
        }
    }

    pub fn witness_points(mut self, points: &[Complex64]) -> Self {
        self.witness = points.iter().flat_map(|p| [p.re, p.im]).collect();
        self
    }

    pub fn note(&mut self, text: impl AsRef<str>) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
    }

    /// One human-readable status line.
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] {}: extremum = {:.6e}, tolerance = {:.6e}, samples = {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.extremum,
            self.tolerance,
            self.samples_used
        )
    }
}

/// JSON-safe float: non-finite values are mapped to the largest finite value of the same sign.
pub(crate) fn finite(x: f64) -> f64 {
    if x.is_nan() {
        f64::MAX
    } else {
        x.clamp(f64::MIN, f64::MAX)
    }
}
