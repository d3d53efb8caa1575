//! Sampling models with their statistics, associations and plausibility
//! functions.

pub mod expreg;
pub mod locscale;
pub mod lognormal;
pub mod powerlaw;

pub use expreg::{
    expreg_cdf_per_theta, expreg_information, expreg_interval, expreg_loglik, expreg_mle, expreg_peak, expreg_pl,
    expreg_pl_per_theta, expreg_sample, expreg_score, expreg_wald_interval, ExpRegAssociation, ExpRegData, PivotTable,
    DEFAULT_TABLE_SIZE,
};
pub use locscale::{locscale_pl, locscale_sample, BaseDist, LocScaleAssociation};
pub use lognormal::{
    lognormal_auto_bounds, lognormal_mle_region, lognormal_naive_region, lognormal_pl, lognormal_region,
    lognormal_sample, lognormal_stats, LognormalAssociation, LognormalStats,
};
pub use powerlaw::{
    powerlaw_interval, powerlaw_mle, powerlaw_peak, powerlaw_pl, powerlaw_sample, powerlaw_statistic,
    PowerLawAssociation, PowerLawData,
};
