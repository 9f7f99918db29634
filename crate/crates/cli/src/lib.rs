//! Command-line front end for `fbbounds-core`: CSV curve generation,
//! single-point evaluation, exact oracles for explicit codes, and seeded
//! Monte-Carlo checks of the achievability specialisations.

pub mod app;
pub mod codewords;
pub mod csv;
pub mod error;
pub mod montecarlo;

use rayon::prelude::*;

use fbbounds_core::{curve_point, CurvePoint, CurveRequest};

pub use error::{CliError, Result};

/// [`fbbounds_core::run_curve`] evaluated across threads. Output order is the
/// request's `(n, bound)` order regardless of scheduling.
pub fn run_curve_parallel(req: &CurveRequest) -> fbbounds_core::Result<Vec<CurvePoint>> {
    req.validate()?;
    let pairs: Vec<_> = req.pairs().collect();
    pairs.par_iter().map(|&(n, b)| curve_point(req, n, b)).collect()
}
