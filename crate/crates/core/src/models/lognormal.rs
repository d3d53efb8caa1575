//! Two-parameter lognormal model, analysed on the log scale.
//!
//! With `y = ln x`, the minimal sufficient statistics `T1 = ȳ` and
//! `T2 = Σ(y_i − ȳ)²` are independent, and the association
//! `T1 = μ + σ/√n · Φ⁻¹(U1)`, `T2 = σ² · F⁻¹_{χ²(n−1)}(U2)` has a unique
//! auxiliary inverse. Under the box random set the plausibility is
//! `1 − max{|2Φ(√n(t1 − μ)/σ) − 1|, |2F(t2/σ²) − 1|}²`.

use crate::error::{Error, Result};
use crate::im::Association;
use crate::numerics::special::gamma_pq;
use crate::numerics::{chisq_quantile, norm_cdf, norm_quantile, norm_sf, student_t_quantile, RngState};
use crate::regions::{extract_grid_region, Ellipse2D, GridBounds, GridRegion2D, Rect2D};

/// `(n, ȳ, Σ(y − ȳ)²)` of log-scale observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LognormalStats {
    pub n: usize,
    pub t1: f64,
    pub t2: f64,
}

impl LognormalStats {
    pub fn new(n: usize, t1: f64, t2: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: n });
        }
        if !t1.is_finite() || !(t2 > 0.0 && t2.is_finite()) {
            return Err(Error::domain(format!("need finite t1 and positive t2, got ({t1}, {t2})")));
        }
        Ok(Self { n, t1, t2 })
    }

    /// Maximum likelihood estimate `(ȳ, T2 / n)`.
    pub fn mle(&self) -> (f64, f64) {
        (self.t1, self.t2 / self.n as f64)
    }
}

/// Sufficient statistics of log-scale data `y`.
pub fn lognormal_stats(y: &[f64]) -> Result<LognormalStats> {
    if y.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: y.len() });
    }
    if let Some(&bad) = y.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!("observations must be finite, got {bad}")));
    }
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let ss = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    if !(ss > 0.0) {
        return Err(Error::domain("all observations are equal; sum of squares is zero"));
    }
    LognormalStats::new(y.len(), mean, ss)
}

/// Converts positive raw observations to the log scale.
pub fn log_observations(x: &[f64]) -> Result<Vec<f64>> {
    x.iter()
        .map(|&v| {
            if v > 0.0 && v.is_finite() {
                Ok(v.ln())
            } else {
                Err(Error::domain(format!("lognormal observations must be positive, got {v}")))
            }
        })
        .collect()
}

fn check_param(mu: f64, sigma2: f64) -> Result<()> {
    if !mu.is_finite() || !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::domain(format!("need finite mu and positive sigma2, got ({mu}, {sigma2})")));
    }
    Ok(())
}

/// Box-set plausibility of `(μ, σ²)`.
///
/// Each `|2F − 1|` is computed from the smaller tail so that values near the
/// edge of the region keep full relative precision.
pub fn lognormal_pl(stats: &LognormalStats, mu: f64, sigma2: f64) -> Result<f64> {
    check_param(mu, sigma2)?;
    let z = (stats.t1 - mu) * (stats.n as f64).sqrt() / sigma2.sqrt();
    let a = 1.0 - 2.0 * norm_sf(z.abs())?;
    let (p, q) = gamma_pq(0.5 * (stats.n - 1) as f64, 0.5 * stats.t2 / sigma2)?;
    let b = 1.0 - 2.0 * p.min(q);
    let m = a.max(b);
    Ok(1.0 - m * m)
}

/// `T1 = μ + σ/√n·Φ⁻¹(U1)`, `T2 = σ²·F⁻¹_{χ²(n−1)}(U2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LognormalAssociation {
    pub n: usize,
}

impl Association for LognormalAssociation {
    type Stat = (f64, f64);
    type Param = (f64, f64);

    fn aux_dim(&self) -> usize {
        2
    }

    fn forward(&self, u: &[f64], theta: &(f64, f64)) -> Result<(f64, f64)> {
        let (mu, sigma2) = *theta;
        check_param(mu, sigma2)?;
        let n = self.n as f64;
        Ok((mu + (sigma2 / n).sqrt() * norm_quantile(u[0])?, sigma2 * chisq_quantile(u[1], n - 1.0)?))
    }

    fn inverse(&self, t: &(f64, f64), theta: &(f64, f64)) -> Result<Vec<f64>> {
        let (mu, sigma2) = *theta;
        check_param(mu, sigma2)?;
        if !(t.1 > 0.0) {
            return Err(Error::domain(format!("t2 must be positive, got {}", t.1)));
        }
        let n = self.n as f64;
        Ok(vec![norm_cdf((t.0 - mu) * n.sqrt() / sigma2.sqrt())?, crate::numerics::chisq_cdf(t.1 / sigma2, n - 1.0)?])
    }
}

/// `n` draws of `N(μ, σ²)`, i.e. log-scale lognormal observations.
pub fn lognormal_sample(n: usize, mu: f64, sigma2: f64, rng: &mut RngState) -> Vec<f64> {
    let sd = sigma2.sqrt();
    (0..n).map(|_| mu + sd * rng.normal()).collect()
}

/// Wald ellipse around the MLE with the expected information
/// `diag(n/σ̂², n/(2σ̂⁴))` and radius `χ²_{1−α, 2} = −2 ln α`.
pub fn lognormal_mle_region(stats: &LognormalStats, alpha: f64) -> Result<Ellipse2D> {
    crate::numerics::dist::check_open_unit(alpha, "alpha")?;
    let (mu_hat, s2_hat) = stats.mle();
    let n = stats.n as f64;
    Ok(Ellipse2D {
        center: (mu_hat, s2_hat),
        quad: [[n / s2_hat, 0.0], [0.0, n / (2.0 * s2_hat * s2_hat)]],
        radius_sq: -2.0 * alpha.ln(),
        alpha,
    })
}

/// Product of the equal-tailed `t` interval for `μ` and `χ²` interval for
/// `σ²`, each at level `1 − α/2` (Bonferroni).
pub fn lognormal_naive_region(stats: &LognormalStats, alpha: f64) -> Result<Rect2D> {
    crate::numerics::dist::check_open_unit(alpha, "alpha")?;
    let n = stats.n as f64;
    let df = n - 1.0;
    let s = (stats.t2 / df).sqrt();
    let half = student_t_quantile(1.0 - 0.25 * alpha, df)? * s / n.sqrt();
    Ok(Rect2D {
        x: (stats.t1 - half, stats.t1 + half),
        y: (stats.t2 / chisq_quantile(1.0 - 0.25 * alpha, df)?, stats.t2 / chisq_quantile(0.25 * alpha, df)?),
        alpha,
    })
}

/// A window containing `{pl > α}` with 10% padding on every side.
///
/// `pl > α` means both `|2F − 1| < r = √(1 − α)`, which bounds `σ²` through
/// the `χ²` term and then `μ` through the normal term at the largest `σ²`.
pub fn lognormal_auto_bounds(stats: &LognormalStats, alpha: f64) -> Result<GridBounds> {
    crate::numerics::dist::check_open_unit(alpha, "alpha")?;
    let r = (1.0 - alpha).sqrt();
    let df = (stats.n - 1) as f64;
    let s2_lo = stats.t2 / chisq_quantile(0.5 * (1.0 + r), df)?;
    let s2_hi = stats.t2 / chisq_quantile(0.5 * (1.0 - r), df)?;
    let half = (s2_hi / stats.n as f64).sqrt() * norm_quantile(0.5 * (1.0 + r))?;
    let pad_y = 0.1 * (s2_hi - s2_lo);
    GridBounds::new(stats.t1 - 1.1 * half, stats.t1 + 1.1 * half, (s2_lo - pad_y).max(0.5 * s2_lo), s2_hi + pad_y)
}

/// Grid level set `{(μ, σ²) : pl > α}` with axes named `mu` and `sigma2`.
pub fn lognormal_region(
    stats: &LognormalStats,
    alpha: f64,
    bounds: Option<GridBounds>,
    resolution: (usize, usize),
) -> Result<GridRegion2D> {
    let bounds = match bounds {
        Some(b) => b,
        None => lognormal_auto_bounds(stats, alpha)?,
    };
    if !(bounds.y_min > 0.0) {
        return Err(Error::domain("sigma2 axis must be strictly positive"));
    }
    Ok(extract_grid_region(|mu, s2| lognormal_pl(stats, mu, s2), alpha, bounds, resolution)?
        .with_axis_names("mu", "sigma2"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::im::{plausibility_point, PredictiveRandomSet};
    use crate::numerics::{chisq_cdf, derive_stream};
    use crate::regions::region_area;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn stats_of_small_sample() {
        let s = lognormal_stats(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.n, 3);
        assert_abs_diff_eq!(s.t1, 1.0);
        assert_abs_diff_eq!(s.t2, 2.0);
        assert!(lognormal_stats(&[1.0, 1.0]).is_err());
        assert!(lognormal_stats(&[1.0]).is_err());
    }

    #[test]
    fn pl_at_centre_is_one() {
        // At μ = t1 and σ² with t2/σ² at the χ² median, both terms vanish.
        let s = LognormalStats::new(10, 0.3, 7.0).unwrap();
        let sigma2 = 7.0 / chisq_quantile(0.5, 9.0).unwrap();
        assert_abs_diff_eq!(lognormal_pl(&s, 0.3, sigma2).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_code_paths_agree() {
        let s = LognormalStats::new(25, -0.4, 30.0).unwrap();
        let assoc = LognormalAssociation { n: 25 };
        let set = PredictiveRandomSet::box2d();
        for &(mu, s2) in &[(-0.4, 1.2), (0.1, 0.8), (-0.9, 2.5), (0.0, 1.0)] {
            let direct = lognormal_pl(&s, mu, s2).unwrap();
            let generic = plausibility_point(&assoc, &set, &(s.t1, s.t2), &(mu, s2)).unwrap();
            assert_abs_diff_eq!(direct, generic, epsilon = 1e-12);
        }
    }

    #[test]
    fn pl_formula_by_hand() {
        let s = LognormalStats::new(4, 1.0, 3.0).unwrap();
        let (mu, s2) = (1.5, 2.0f64);
        let a = (2.0 * norm_cdf((1.0 - mu) * 2.0 / s2.sqrt()).unwrap() - 1.0).abs();
        let b = (2.0 * chisq_cdf(3.0 / s2, 3.0).unwrap() - 1.0).abs();
        assert_abs_diff_eq!(lognormal_pl(&s, mu, s2).unwrap(), 1.0 - a.max(b).powi(2), epsilon = 1e-13);
    }

    #[test]
    fn invalid_parameters() {
        let s = LognormalStats::new(4, 1.0, 3.0).unwrap();
        assert!(lognormal_pl(&s, 0.0, 0.0).is_err());
        assert!(lognormal_pl(&s, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn region_contains_mle_and_lies_in_bounds() {
        let mut rng = derive_stream(8, 0);
        let y = lognormal_sample(25, 0.0, 1.0, &mut rng);
        let s = lognormal_stats(&y).unwrap();
        let region = lognormal_region(&s, 0.1, None, (200, 200)).unwrap();
        let centre = (s.t1, s.t2 / chisq_quantile(0.5, 24.0).unwrap());
        assert!(region.contains(centre.0, centre.1));
        assert!(region_area(&region) > 0.0);
        assert_eq!(region.axis_names, ("mu".to_string(), "sigma2".to_string()));
    }

    #[test]
    fn tiny_bounds_are_clipped() {
        let s = LognormalStats::new(25, 0.0, 24.0).unwrap();
        let b = GridBounds::new(-0.01, 0.01, 0.99, 1.01).unwrap();
        assert!(matches!(lognormal_region(&s, 0.1, Some(b), (32, 32)), Err(Error::BoundsClipped(_))));
    }

    #[test]
    fn grid_area_matches_monte_carlo() {
        // Area of {pl > α} by uniform sampling over the same window.
        let s = LognormalStats::new(25, 0.2, 22.0).unwrap();
        let alpha = 0.1;
        let region = lognormal_region(&s, alpha, None, (400, 400)).unwrap();
        let b = region.bounds;
        let mut rng = derive_stream(99, 0);
        let draws = 200_000;
        let hits = (0..draws)
            .filter(|_| {
                let mu = b.x_min + (b.x_max - b.x_min) * rng.uniform();
                let s2 = b.y_min + (b.y_max - b.y_min) * rng.uniform();
                lognormal_pl(&s, mu, s2).unwrap() > alpha
            })
            .count();
        let mc = b.area() * hits as f64 / draws as f64;
        assert!((region_area(&region) - mc).abs() / mc < 0.02);
    }

    #[test]
    fn baselines() {
        let s = LognormalStats::new(25, 0.0, 24.0).unwrap();
        let e = lognormal_mle_region(&s, 0.1).unwrap();
        assert_abs_diff_eq!(e.radius_sq, 4.605170185988091, epsilon = 1e-12);
        assert!(e.contains(0.0, 0.96));
        let r = lognormal_naive_region(&s, 0.1).unwrap();
        assert!(r.contains(0.0, 1.0));
        assert!(r.y.0 < 24.0 / 24.0 && r.y.1 > 1.0);
    }

    #[test]
    fn association_round_trip() {
        let assoc = LognormalAssociation { n: 12 };
        let theta = (0.5, 2.0);
        let t = assoc.forward(&[0.3, 0.8], &theta).unwrap();
        let u = assoc.inverse(&t, &theta).unwrap();
        assert_abs_diff_eq!(u[0], 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(u[1], 0.8, epsilon = 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn affine_equivariance(a in -3.0f64..3.0, b in 0.2f64..5.0, mu in -1.0f64..1.0, s2 in 0.3f64..3.0, seed in 0u64..500) {
            let y = lognormal_sample(10, 0.0, 1.0, &mut derive_stream(seed, 0));
            let moved: Vec<f64> = y.iter().map(|v| a + b * v).collect();
            let s = lognormal_stats(&y).unwrap();
            let sm = lognormal_stats(&moved).unwrap();
            let p = lognormal_pl(&s, mu, s2).unwrap();
            let pm = lognormal_pl(&sm, a + b * mu, b * b * s2).unwrap();
            prop_assert!((p - pm).abs() <= 1e-9);
        }

        #[test]
        fn location_equivariance(c in -10.0f64..10.0, mu in -1.0f64..1.0, s2 in 0.3f64..3.0, seed in 0u64..500) {
            let y = lognormal_sample(15, 0.0, 1.0, &mut derive_stream(seed, 2));
            let shifted: Vec<f64> = y.iter().map(|v| v + c).collect();
            let p = lognormal_pl(&lognormal_stats(&y).unwrap(), mu, s2).unwrap();
            let q = lognormal_pl(&lognormal_stats(&shifted).unwrap(), mu + c, s2).unwrap();
            prop_assert!((p - q).abs() <= 1e-12, "{p} vs {q}");
        }

        #[test]
        fn inverse_is_total(t1 in -50.0f64..50.0, t2 in 1e-3f64..1e3, mu in -50.0f64..50.0, s2 in 1e-3f64..1e3) {
            let u = LognormalAssociation { n: 9 }.inverse(&(t1, t2), &(mu, s2)).unwrap();
            prop_assert!(u.iter().all(|v| (0.0..=1.0).contains(v)));
        }

        #[test]
        fn pl_in_unit_interval(mu in -2.0f64..2.0, s2 in 0.05f64..10.0) {
            let s = LognormalStats::new(8, 0.1, 5.0).unwrap();
            let p = lognormal_pl(&s, mu, s2).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
