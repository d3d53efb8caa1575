//! Auxiliary-variable representations `T = a(U, θ)` of sampling models.

use crate::error::Result;
use crate::numerics::RngState;

/// A sampling model written as `T = a(U, θ)` with `U` uniform on `(0, 1)^d`.
///
/// Implementations must make [`Association::inverse`] total on the model's
/// valid domain: for every statistic and parameter there is exactly one
/// auxiliary point `u(t, θ)` solving `t = a(u, θ)`.
pub trait Association {
    type Stat;
    type Param;

    fn aux_dim(&self) -> usize;

    /// `a(u, θ)`.
    fn forward(&self, u: &[f64], theta: &Self::Param) -> Result<Self::Stat>;

    /// The unique `u` with `a(u, θ) = t`.
    fn inverse(&self, t: &Self::Stat, theta: &Self::Param) -> Result<Vec<f64>>;

    /// Draws `T` at `θ` by pushing a uniform auxiliary draw through `forward`.
    fn sample_stat(&self, theta: &Self::Param, rng: &mut RngState) -> Result<Self::Stat> {
        let mut u = vec![0.0; self.aux_dim()];
        rng.fill_uniform(&mut u);
        self.forward(&u, theta)
    }
}

/// Scalar statistic and parameter, with `u(t, θ) = F_θ(t)` for a continuous
/// CDF that is monotone in `θ`.
pub trait ScalarCdfAssociation: Association<Stat = f64, Param = f64> {
    /// `F_θ(t)`.
    fn cdf(&self, t: f64, theta: f64) -> Result<f64>;

    /// The `θ` solving `F_θ(t) = p`.
    fn theta_for_cdf(&self, t: f64, p: f64) -> Result<f64>;
}
