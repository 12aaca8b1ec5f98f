use thiserror::Error;

/// Errors raised by kernel evaluation, parameter selection and certification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain on which the operation is single-valued.
    #[error("{op}: argument outside domain ({reason})")]
    Domain { op: &'static str, reason: String },

    #[error("invalid parameter {name} = {value}: {bound}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        bound: &'static str,
    },

    /// The dilatation denominator vanished; A was chosen too small.
    #[error("degenerate dilatation denominator at z = {re} + {im}i (A too small)")]
    DegenerateDenominator { re: f64, im: f64 },

    #[error("no admissible A <= {cap:e} found for k = {k}, eps = {eps}, alpha = {alpha}")]
    SearchExhausted {
        k: f64,
        eps: f64,
        alpha: f64,
        cap: f64,
    },

    #[error("winding step too coarse: increment {increment} exceeds pi/2 with {n_samples} samples")]
    StepTooCoarse { increment: f64, n_samples: usize },

    #[error("level curve U = {u} not bracketed at y = {y} on [{x_lo}, {x_hi}]")]
    RootBracketing { u: f64, y: f64, x_lo: f64, x_hi: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        op,
        reason: reason.into(),
    }
}
