//! A bounded, globally univalent, quasiconformal harmonic mapping
//! `f = h + conj(g)` on the unit disk whose analytic part `h` is unbounded,
//! together with numerical certifiers for each of its properties.
//!
//! * [`kernel`]: closed-form evaluation on principal branches.
//! * [`construct`]: choice of the shift `A` for a target dilatation `k`.
//! * [`verify`]: grid, pair and curve certifiers producing JSON reports.
//! * [`cli`]: the `spiralmap` command-line frontend.

pub mod cli;
pub mod construct;
pub mod error;
pub mod kernel;
pub mod verify;

pub use construct::{select_a, MappingInstance};
pub use error::{Error, Result};
pub use kernel::{ComplexValue, ConstructionParams, DiskPoint, HgfBundle};
pub use verify::{GridSpec, StripRegion, VerificationReport};
