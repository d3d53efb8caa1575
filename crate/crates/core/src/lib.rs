//! Exact confidence regions from plausibility functions.
//!
//! A sampling model is written as `T = a(U, θ)` with an unobservable
//! auxiliary variable `U`. A valid predictive random set `S` for `U` turns the
//! observed `t` into a plausibility function `pl_t(θ) = f_S(u(t, θ))`, and
//! `{θ : pl_t(θ) > α}` is a confidence region with coverage at least `1 − α`
//! (exactly `1 − α` for the continuous models shipped here).
//!
//! Modules:
//! - [`numerics`]: special functions, distributions, root finding, seeded streams
//! - [`im`]: random sets, associations, plausibility, validity diagnostics
//! - [`models`]: power-law process, exponential regression, lognormal, location-scale
//! - [`regions`]: intervals, grid level sets and baseline regions
//! - [`coverage`]: repeated-sampling harness

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coverage;
pub mod error;
pub mod im;
pub mod io;
pub mod models;
pub mod numerics;
pub mod regions;

pub use coverage::{run_coverage, uniformity_check, CoverageReport, CoverageSpec, Method, ModelSpec};
pub use error::{Error, Result};
pub use im::{Assertion, Association, Contour, PlausibilityCurve, PredictiveRandomSet, ValidityReport};
pub use numerics::RngState;
pub use regions::{Ellipse2D, GridBounds, GridRegion2D, Interval1D, Rect2D, Region};
