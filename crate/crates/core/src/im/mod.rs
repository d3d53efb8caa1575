//! Predictive random sets and the plausibility functions they induce.

pub mod association;
pub mod plausibility;
pub mod prs;
pub mod validity;

pub use association::{Association, ScalarCdfAssociation};
pub use plausibility::{fixed_s_region, plausibility_point, plausibility_set, Assertion, CurveMeta, PlausibilityCurve};
pub use prs::{
    contour_box, contour_box_n, contour_default, contour_h, AuxSampler, Contour, ContourEstimate, PredictiveRandomSet,
    ShrunkenDefault, Squared, UniformCube,
};
pub use validity::{ks_uniform, validity_diagnostic, KsStatistics, ValidityReport, KS_CRITICAL};
