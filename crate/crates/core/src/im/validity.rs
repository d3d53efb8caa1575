//! Kolmogorov-type checks that `f_S(U)` is stochastically no smaller than
//! `Unif(0, 1)`.

use super::prs::{AuxSampler, Contour};
use crate::error::{Error, Result};
use crate::numerics::RngState;

/// 1% Kolmogorov critical constant; the band is `KS_CRITICAL / √N`.
pub const KS_CRITICAL: f64 = 1.63;

/// Minimum number of draws for [`validity_diagnostic`].
pub const MIN_DRAWS: usize = 1000;

/// One- and two-sided Kolmogorov distances between an empirical CDF and the
/// uniform CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsStatistics {
    /// `sup_x (F_N(x) − x)`: large when values pile up near zero.
    pub ks_plus: f64,
    /// `sup_x |F_N(x) − x|`.
    pub ks_two_sided: f64,
    pub n: usize,
}

impl KsStatistics {
    pub fn band(&self) -> f64 {
        KS_CRITICAL / (self.n as f64).sqrt()
    }
}

/// Computes the statistics of `values` against `Unif(0, 1)`; sorts in place.
pub fn ks_uniform(values: &mut [f64]) -> KsStatistics {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len() as f64;
    let mut plus: f64 = 0.0;
    let mut minus: f64 = 0.0;
    for (i, &v) in values.iter().enumerate() {
        plus = plus.max((i + 1) as f64 / n - v);
        minus = minus.max(v - i as f64 / n);
    }
    KsStatistics { ks_plus: plus, ks_two_sided: plus.max(minus), n: values.len() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub stats: KsStatistics,
    /// `ks_plus <= 1.63 / √N`.
    pub pass: bool,
    /// Two-sided statistic also inside the band, i.e. consistent with an
    /// exact set.
    pub exact: bool,
}

/// Draws `n` auxiliary points, evaluates the contour at each and tests the
/// result against the uniform distribution.
pub fn validity_diagnostic(
    contour: &dyn Contour,
    sampler: &dyn AuxSampler,
    n: usize,
    rng: &mut RngState,
) -> Result<ValidityReport> {
    if n < MIN_DRAWS {
        return Err(Error::domain(format!("validity diagnostic needs at least {MIN_DRAWS} draws, got {n}")));
    }
    if let Some(d) = contour.dim() {
        if d != sampler.dim() {
            return Err(Error::domain(format!("contour has dimension {d}, sampler {}", sampler.dim())));
        }
    }
    let mut u = vec![0.0; sampler.dim()];
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        sampler.sample(rng, &mut u);
        values.push(contour.contour(&u)?);
    }
    Ok(report(ks_uniform(&mut values)))
}

pub(crate) fn report(stats: KsStatistics) -> ValidityReport {
    let band = stats.band();
    ValidityReport { stats, pass: stats.ks_plus <= band, exact: stats.ks_two_sided <= band }
}
