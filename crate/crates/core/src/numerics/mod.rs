//! Special functions, distributions, root finding and random streams.

pub mod dist;
pub mod rng;
pub mod roots;
pub mod special;

pub use dist::{
    chisq_cdf, chisq_quantile, gamma_cdf, gamma_pdf, gamma_quantile, gamma_sf, logistic_cdf, logistic_quantile,
    norm_cdf, norm_pdf, norm_quantile, norm_sf, student_t_cdf, student_t_quantile,
};
pub use rng::{child_seed, derive_stream, mix64, RngState};
