//! Location-scale families `Y_i = μ + σ·F⁻¹(U_i)` with the n-dimensional
//! box random set, giving `pl_y(μ, σ) = 1 − (max_i |2F((y_i − μ)/σ) − 1|)^n`.

use crate::error::{Error, Result};
use crate::im::Association;
use crate::numerics::{logistic_cdf, logistic_quantile, norm_quantile, norm_sf, RngState};

/// Symmetric base distribution `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseDist {
    Normal,
    Logistic,
}

impl BaseDist {
    /// `F(−|z|)`, the smaller tail.
    fn lower_tail(self, z: f64) -> Result<f64> {
        match self {
            BaseDist::Normal => norm_sf(z.abs()),
            BaseDist::Logistic => Ok(logistic_cdf(-z.abs())),
        }
    }

    pub fn cdf(self, z: f64) -> Result<f64> {
        let tail = self.lower_tail(z)?;
        Ok(if z < 0.0 { tail } else { 1.0 - tail })
    }

    pub fn quantile(self, p: f64) -> Result<f64> {
        match self {
            BaseDist::Normal => norm_quantile(p),
            BaseDist::Logistic => logistic_quantile(p),
        }
    }
}

fn check_param(mu: f64, sigma: f64) -> Result<()> {
    if !mu.is_finite() || !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("need finite mu and positive sigma, got ({mu}, {sigma})")));
    }
    Ok(())
}

/// Box-set plausibility of `(μ, σ)` for observations `y`.
pub fn locscale_pl(y: &[f64], mu: f64, sigma: f64, base: BaseDist) -> Result<f64> {
    check_param(mu, sigma)?;
    if y.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut m = 0.0f64;
    for &v in y {
        m = m.max(1.0 - 2.0 * base.lower_tail((v - mu) / sigma)?);
    }
    Ok(1.0 - m.powi(y.len() as i32))
}

pub fn locscale_sample(n: usize, mu: f64, sigma: f64, base: BaseDist, rng: &mut RngState) -> Result<Vec<f64>> {
    check_param(mu, sigma)?;
    (0..n).map(|_| Ok(mu + sigma * base.quantile(rng.uniform())?)).collect()
}

/// `Y = μ + σ·F⁻¹(U)` coordinatewise, with `U` uniform on `(0, 1)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocScaleAssociation {
    pub n: usize,
    pub base: BaseDist,
}

impl Association for LocScaleAssociation {
    type Stat = Vec<f64>;
    type Param = (f64, f64);

    fn aux_dim(&self) -> usize {
        self.n
    }

    fn forward(&self, u: &[f64], theta: &(f64, f64)) -> Result<Vec<f64>> {
        check_param(theta.0, theta.1)?;
        u.iter().map(|&ui| Ok(theta.0 + theta.1 * self.base.quantile(ui)?)).collect()
    }

    fn inverse(&self, y: &Vec<f64>, theta: &(f64, f64)) -> Result<Vec<f64>> {
        check_param(theta.0, theta.1)?;
        if y.len() != self.n {
            return Err(Error::domain(format!("expected {} observations, got {}", self.n, y.len())));
        }
        y.iter().map(|&v| self.base.cdf((v - theta.0) / theta.1)).collect()
    }
}
