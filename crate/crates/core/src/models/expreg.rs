//! Exponential regression through the origin: `Y_i ~ Exp(mean e^{θ x_i})`.
//!
//! The statistic is the MLE `T = θ̂`, whose distribution `G_θ` has no closed
//! form. Because `ln Y_i = θx_i + ε_i`, the score at `θ + d` on data drawn at
//! `θ` equals the score at `d` on data drawn at 0 with the same noise, so
//! `θ̂ − θ` is a pivot and `G_θ(t) = G_0(t − θ)`. One Monte Carlo table of
//! `G_0` therefore serves every `(t, θ)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::im::{Association, ScalarCdfAssociation};
use crate::numerics::roots::{newton_bisect, Tolerance};
use crate::numerics::{derive_stream, norm_quantile, RngState};
use crate::regions::Interval1D;

/// Minimum Monte Carlo size of a [`PivotTable`].
pub const MIN_TABLE_SIZE: usize = 1000;

/// Default number of pivot draws.
pub const DEFAULT_TABLE_SIZE: usize = 10_000;

/// Covariates and positive responses. All nonzero covariates share one sign.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpRegData {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl ExpRegData {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        validate_covariates(&x)?;
        if x.len() != y.len() {
            return Err(Error::domain(format!("x has {} entries but y has {}", x.len(), y.len())));
        }
        if let Some(&bad) = y.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::domain(format!("responses must be positive and finite, got {bad}")));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

/// Checks that covariates are finite, not all zero, and of one sign.
pub fn validate_covariates(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if let Some(&bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!("covariates must be finite, got {bad}")));
    }
    let pos = x.iter().any(|&v| v > 0.0);
    let neg = x.iter().any(|&v| v < 0.0);
    match (pos, neg) {
        (false, false) => Err(Error::domain("covariates are all zero; slope is not identifiable")),
        (true, true) => {
            Err(Error::domain("covariates of mixed sign make the score non-monotone; all x must share one sign"))
        }
        _ => Ok(()),
    }
}

/// `ℓ(θ) = −Σ (θx_i + e^{ln y_i − θx_i})`.
pub fn expreg_loglik(theta: f64, data: &ExpRegData) -> f64 {
    -data.x.iter().zip(&data.y).map(|(&x, &y)| theta * x + (y.ln() - theta * x).exp()).sum::<f64>()
}

/// `ℓ'(θ) = Σ (e^{ln y_i − θx_i} − 1)·x_i`.
pub fn expreg_score(theta: f64, data: &ExpRegData) -> f64 {
    score_and_slope(theta, &data.x, &data.y).0
}

/// Score and its derivative `−Σ x_i² e^{ln y_i − θx_i}` (strictly negative).
fn score_and_slope(theta: f64, x: &[f64], y: &[f64]) -> (f64, f64) {
    let mut s = 0.0;
    let mut ds = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let w = yi * (-theta * xi).exp();
        s += (w - 1.0) * xi;
        ds -= xi * xi * w;
    }
    (s, ds)
}

/// Observed information `Σ x_i² y_i e^{−θx_i}` at `theta`.
pub fn expreg_information(theta: f64, data: &ExpRegData) -> f64 {
    -score_and_slope(theta, &data.x, &data.y).1
}

/// Unique root of the score.
///
/// The root lies between the smallest and largest single-observation roots
/// `ln(y_i) / x_i` (every summand of the score is nonnegative at the former
/// and nonpositive at the latter), which gives a bracket without search; a
/// safeguarded Newton iteration then runs inside it.
pub fn expreg_mle(data: &ExpRegData) -> Result<f64> {
    mle_raw(&data.x, &data.y)
}

fn mle_raw(x: &[f64], y: &[f64]) -> Result<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let (mut sxl, mut sxx) = (0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        if xi != 0.0 {
            let r = yi.ln() / xi;
            lo = lo.min(r);
            hi = hi.max(r);
            sxl += xi * (yi.ln() + EULER_GAMMA);
            sxx += xi * xi;
        }
    }
    if lo == hi {
        return Ok(lo);
    }
    let f_scale: f64 = x.iter().map(|v| v.abs()).sum();
    let tol = Tolerance { f_tol: 1e-13 * f_scale, x_tol: 1e-15 };
    // `-score` is increasing in θ.
    let start = (sxl / sxx).clamp(lo, hi);
    newton_bisect(
        |theta| {
            let (s, ds) = score_and_slope(theta, x, y);
            Ok((-s, -ds))
        },
        start,
        lo,
        hi,
        tol,
    )
    .map_err(|e| match e {
        Error::Convergence { detail, .. } => Error::Convergence { routine: "expreg_mle", detail },
        other => other,
    })
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `y_i = e^{θx_i}·E_i` with `E_i` standard exponential draws from `rng`.
pub fn expreg_sample(theta: f64, x: &[f64], rng: &mut RngState) -> Vec<f64> {
    x.iter().map(|&xi| (theta * xi).exp() * rng.exponential(1.0)).collect()
}

/// Sorted Monte Carlo draws of the pivot `D = θ̂ − θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PivotTable {
    sorted: Vec<f64>,
    seed: u64,
}

impl PivotTable {
    /// Draw `j` is the MLE of a dataset simulated at `θ = 0` from stream
    /// `derive_stream(seed, j)`. Draws are computed in parallel.
    pub fn build(x: &[f64], b: usize, seed: u64) -> Result<Self> {
        validate_covariates(x)?;
        if b < MIN_TABLE_SIZE {
            return Err(Error::domain(format!("pivot table needs B >= {MIN_TABLE_SIZE}, got {b}")));
        }
        let mut sorted: Vec<f64> = (0..b as u64)
            .into_par_iter()
            .map(|j| {
                let y = expreg_sample(0.0, x, &mut derive_stream(seed, j));
                mle_raw(x, &y).map_err(|e| Error::Replicate { replicate: j, seed, source: Box::new(e) })
            })
            .collect::<Result<_>>()?;
        sorted.sort_by(|a, b| a.total_cmp(b));
        Ok(Self { sorted, seed })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn draws(&self) -> &[f64] {
        &self.sorted
    }

    /// `#{D_j <= d}`.
    pub fn count_le(&self, d: f64) -> usize {
        self.sorted.partition_point(|&v| v <= d)
    }

    /// Empirical CDF `Ĝ_0(d) = #{D_j <= d} / B`.
    pub fn cdf(&self, d: f64) -> f64 {
        self.count_le(d) as f64 / self.len() as f64
    }

    /// The `k`-th order statistic, 1-based.
    pub fn order_stat(&self, k: usize) -> f64 {
        self.sorted[k - 1]
    }

    /// Type-1 (left-continuous inverse) empirical quantile.
    pub fn quantile(&self, p: f64) -> f64 {
        let b = self.len();
        let k = ((p * b as f64).ceil() as usize).clamp(1, b);
        self.sorted[k - 1]
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }
}

/// `pl_t(θ) = 1 − |2Ĝ_0(t − θ) − 1|`.
pub fn expreg_pl(t: f64, theta: f64, table: &PivotTable) -> f64 {
    pl_from_count(table.count_le(t - theta), table.len())
}

/// `1 − |2c/B − 1| = 2·min(c, B − c)/B`, computed from integers so that
/// `pl = α` ties resolve the same way everywhere.
fn pl_from_count(c: usize, b: usize) -> f64 {
    (2 * c.min(b - c)) as f64 / b as f64
}

/// `{θ : pl_t(θ) > α}` from order statistics.
///
/// With `k` the smallest and `j` the largest count `c = #{D <= t − θ}` whose
/// plausibility exceeds `α`, the set is `(t − D_(j+1), t − D_(k)]`; it is
/// reported as the open interval between those points. For `B` large the
/// indices are `k = ⌊αB/2⌋ + 1` and `j + 1 = ⌈(1 − α/2)B⌉`.
pub fn expreg_interval(t: f64, alpha: f64, table: &PivotTable) -> Result<Interval1D> {
    crate::numerics::dist::check_open_unit(alpha, "alpha")?;
    let b = table.len();
    if alpha * (b as f64) < 1.0 {
        return Err(Error::Resolution { alpha_b: alpha * b as f64 });
    }
    let inside = |c: usize| pl_from_count(c, b) > alpha;
    let mut k = ((0.5 * alpha * b as f64).floor() as usize + 1).min(b / 2);
    while k > 1 && inside(k - 1) {
        k -= 1;
    }
    while !inside(k) {
        k += 1;
        if k > b / 2 {
            return Err(Error::EmptyRegion { max_pl: pl_from_count(b / 2, b), alpha });
        }
    }
    // Counts are symmetric about B/2, so the largest inside count is B − k.
    let m = b - k + 1;
    Interval1D::new(t - table.order_stat(m), t - table.order_stat(k), alpha, true)
}

/// Where `pl_t` attains its maximum.
pub fn expreg_peak(t: f64, table: &PivotTable) -> f64 {
    t - table.median()
}

/// Wald interval `θ̂ ± z_{1−α/2} / √I(θ̂)` with observed information.
pub fn expreg_wald_interval(data: &ExpRegData, alpha: f64) -> Result<Interval1D> {
    crate::numerics::dist::check_open_unit(alpha, "alpha")?;
    let theta = expreg_mle(data)?;
    let info = expreg_information(theta, data);
    if !(info > 0.0 && info.is_finite()) {
        return Err(Error::Convergence {
            routine: "expreg_wald_interval",
            detail: format!("observed information {info} is not positive"),
        });
    }
    let half = norm_quantile(1.0 - 0.5 * alpha)? / info.sqrt();
    Interval1D::new(theta - half, theta + half, alpha, false)
}

/// `Ĝ_θ(t)` by direct re-simulation at `θ`, using the same streams as
/// [`PivotTable::build`] with `seed` (common random numbers).
pub fn expreg_cdf_per_theta(t: f64, theta: f64, x: &[f64], b: usize, seed: u64) -> Result<f64> {
    validate_covariates(x)?;
    let hits = (0..b as u64)
        .into_par_iter()
        .map(|j| {
            let y = expreg_sample(theta, x, &mut derive_stream(seed, j));
            Ok(usize::from(mle_raw(x, &y)? <= t))
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(hits as f64 / b as f64)
}

/// `pl_t(θ)` from [`expreg_cdf_per_theta`].
pub fn expreg_pl_per_theta(t: f64, theta: f64, x: &[f64], b: usize, seed: u64) -> Result<f64> {
    let g = expreg_cdf_per_theta(t, theta, x, b, seed)?;
    Ok(pl_from_count((g * b as f64).round() as usize, b))
}

/// `T = θ + Ĝ_0⁻¹(U)` backed by a pivot table.
#[derive(Debug, Clone, Copy)]
pub struct ExpRegAssociation<'a> {
    pub table: &'a PivotTable,
}

impl Association for ExpRegAssociation<'_> {
    type Stat = f64;
    type Param = f64;

    fn aux_dim(&self) -> usize {
        1
    }

    fn forward(&self, u: &[f64], theta: &f64) -> Result<f64> {
        Ok(theta + self.table.quantile(u[0]))
    }

    fn inverse(&self, t: &f64, theta: &f64) -> Result<Vec<f64>> {
        Ok(vec![self.cdf(*t, *theta)?])
    }
}

impl ScalarCdfAssociation for ExpRegAssociation<'_> {
    fn cdf(&self, t: f64, theta: f64) -> Result<f64> {
        if !(t.is_finite() && theta.is_finite()) {
            return Err(Error::domain("expreg statistic and parameter must be finite"));
        }
        Ok(self.table.cdf(t - theta))
    }

    fn theta_for_cdf(&self, t: f64, p: f64) -> Result<f64> {
        Ok(t - self.table.quantile(p))
    }
}
