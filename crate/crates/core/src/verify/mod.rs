//! Numerical certifiers for the construction and for the separation properties of the spiral map.
//!
//! Every certifier returns a [`VerificationReport`]; grid and pair scans are
//! parallel maps whose reductions run in index order, so reports are
//! reproducible under any thread count.

pub mod asymptotics;
pub mod dilatation;
pub mod eta;
pub mod grid;
pub mod injectivity;
pub mod level_curves;
pub mod radial;
pub mod report;
pub mod separation;
pub mod suite;
pub mod winding;

pub use asymptotics::asymptotic_residuals;
pub use dilatation::{dilatation_sup, jacobian_floor};
pub use eta::{eta_estimate, EtaEstimate};
pub use grid::{evaluate_grid, GridSpec, StripRegion};
pub use injectivity::injectivity_pairs;
pub use level_curves::level_curve_monotonicity;
pub use radial::{boundedness_scan, h_growth};
pub use report::VerificationReport;
pub use separation::separation_profile;
pub use winding::winding_degree;
