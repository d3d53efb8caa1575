//! Power-law (Crow–AMSAA) process with mean function `m(y) = ψ·y^θ`.
//!
//! Inference is on the shape `θ` through `T = Σ_{i<n} ln(Y_n / Y_i)`, which is
//! `Gamma(n − 1, scale 1/θ)` whatever `ψ`. The association is
//! `T = F⁻¹_{n−1,1/θ}(U)` with the default predictive random set, giving
//! `pl_t(θ) = 1 − |2·F_{n−1,1}(θt) − 1|` and the closed-form interval
//! `(γ(α/2)/t, γ(1 − α/2)/t)` in terms of `Gamma(n − 1, 1)` quantiles.

use crate::error::{Error, Result};
use crate::im::{Association, ScalarCdfAssociation};
use crate::numerics::special::gamma_pq;
use crate::numerics::{gamma_quantile, RngState};
use crate::regions::Interval1D;

/// Ordered event times `0 < Y_1 < … < Y_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawData {
    times: Vec<f64>,
}

impl PowerLawData {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InsufficientData { needed: 2, got: times.len() });
        }
        if let Some(&bad) = times.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::domain(format!("event times must be positive and finite, got {bad}")));
        }
        if let Some(w) = times.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::domain(format!(
                "event times must be strictly increasing (found {} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { times })
    }

    pub fn n(&self) -> usize {
        self.times.len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }
}

/// `T = Σ_{i=1}^{n−1} ln(Y_n / Y_i) = n / θ̂`.
pub fn powerlaw_statistic(data: &PowerLawData) -> f64 {
    let last = *data.times.last().expect("at least two times");
    data.times[..data.n() - 1].iter().map(|&y| (last / y).ln()).sum()
}

/// Maximum likelihood estimates `(θ̂, ψ̂) = (n / T, n / Y_n^θ̂)`.
pub fn powerlaw_mle(data: &PowerLawData) -> (f64, f64) {
    let n = data.n() as f64;
    let theta = n / powerlaw_statistic(data);
    let psi = n / data.times.last().unwrap().powf(theta);
    (theta, psi)
}

fn check_inputs(t: f64, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("statistic t must be positive and finite, got {t}")));
    }
    Ok(())
}

/// `pl_t(θ) = 1 − |2F_{n−1,1}(θt) − 1|`, evaluated as `2·min(P, Q)`.
pub fn powerlaw_pl(t: f64, theta: f64, n: usize) -> Result<f64> {
    check_inputs(t, n)?;
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::domain(format!("shape theta must be positive, got {theta}")));
    }
    let (p, q) = gamma_pq((n - 1) as f64, theta * t)?;
    Ok(2.0 * p.min(q))
}

/// The `100(1 − α)%` plausibility interval in closed form.
pub fn powerlaw_interval(t: f64, n: usize, alpha: f64) -> Result<Interval1D> {
    check_inputs(t, n)?;
    let shape = (n - 1) as f64;
    let lo = gamma_quantile(0.5 * alpha, shape, 1.0)? / t;
    let hi = gamma_quantile(1.0 - 0.5 * alpha, shape, 1.0)? / t;
    Interval1D::new(lo, hi, alpha, true)
}

/// The `θ` of maximal plausibility, where `θt` is the `Gamma(n − 1, 1)` median.
pub fn powerlaw_peak(t: f64, n: usize) -> Result<f64> {
    check_inputs(t, n)?;
    Ok(gamma_quantile(0.5, (n - 1) as f64, 1.0)? / t)
}

/// Simulates the first `n` event times of the process.
///
/// Unit-rate Poisson arrivals `Γ_k` are mapped through `m⁻¹`, i.e.
/// `Y_k = (Γ_k / ψ)^{1/θ}`.
pub fn powerlaw_sample(theta: f64, psi: f64, n: usize, rng: &mut RngState) -> Result<PowerLawData> {
    if !(theta > 0.0 && psi > 0.0) {
        return Err(Error::domain("power-law parameters must be positive"));
    }
    let mut arrival = 0.0;
    let times = (0..n)
        .map(|_| {
            arrival += rng.exponential(1.0);
            (arrival / psi).powf(1.0 / theta)
        })
        .collect();
    PowerLawData::new(times)
}

/// `T = F⁻¹_{n−1,1/θ}(U)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerLawAssociation {
    pub n: usize,
}

impl PowerLawAssociation {
    fn shape(&self) -> f64 {
        (self.n - 1) as f64
    }
}

impl Association for PowerLawAssociation {
    type Stat = f64;
    type Param = f64;

    fn aux_dim(&self) -> usize {
        1
    }

    fn forward(&self, u: &[f64], theta: &f64) -> Result<f64> {
        gamma_quantile(u[0], self.shape(), 1.0 / theta)
    }

    fn inverse(&self, t: &f64, theta: &f64) -> Result<Vec<f64>> {
        Ok(vec![self.cdf(*t, *theta)?])
    }
}

impl ScalarCdfAssociation for PowerLawAssociation {
    fn cdf(&self, t: f64, theta: f64) -> Result<f64> {
        check_inputs(t, self.n)?;
        if !(theta > 0.0) {
            return Err(Error::domain(format!("shape theta must be positive, got {theta}")));
        }
        Ok(gamma_pq(self.shape(), theta * t)?.0)
    }

    fn theta_for_cdf(&self, t: f64, p: f64) -> Result<f64> {
        check_inputs(t, self.n)?;
        Ok(gamma_quantile(p, self.shape(), 1.0)? / t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::im::{fixed_s_region, plausibility_point, PredictiveRandomSet};
    use crate::numerics::derive_stream;
    use crate::regions::invert_unimodal;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E;

    #[test]
    fn mle_two_points() {
        let d = PowerLawData::new(vec![1.0, E]).unwrap();
        let (theta, psi) = powerlaw_mle(&d);
        assert_abs_diff_eq!(theta, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(psi, 2.0 / (E * E), epsilon = 1e-14);
        assert_abs_diff_eq!(powerlaw_statistic(&d), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn mle_five_points() {
        let d = PowerLawData::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let sum = (5.0f64 * 2.5 * (5.0 / 3.0) * 1.25).ln();
        assert_abs_diff_eq!(powerlaw_statistic(&d), sum, epsilon = 1e-14);
        assert_abs_diff_eq!(sum, 3.2596, epsilon = 1e-4);
        assert_abs_diff_eq!(powerlaw_mle(&d).0, 1.5339, epsilon = 1e-4);
    }

    #[test]
    fn rescaling_time_keeps_shape() {
        let d = PowerLawData::new(vec![0.3, 1.1, 2.0, 7.5]).unwrap();
        let scaled = PowerLawData::new(d.times().iter().map(|t| t * 13.7).collect()).unwrap();
        assert_abs_diff_eq!(powerlaw_mle(&d).0, powerlaw_mle(&scaled).0, epsilon = 1e-12);
    }

    #[test]
    fn data_validation() {
        assert!(matches!(PowerLawData::new(vec![1.0]), Err(Error::InsufficientData { .. })));
        assert!(PowerLawData::new(vec![1.0, 1.0]).is_err());
        assert!(PowerLawData::new(vec![0.0, 1.0]).is_err());
        assert!(PowerLawData::new(vec![2.0, 1.0]).is_err());
    }

    #[test]
    fn pl_peaks_at_median() {
        for n in [2, 5, 30] {
            let t = 2.7;
            let peak = powerlaw_peak(t, n).unwrap();
            assert_abs_diff_eq!(powerlaw_pl(t, peak, n).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pl_n2_closed_form() {
        // Gamma(1) is exponential: pl = 1 − |1 − 2e^{−θt}|.
        for &(t, theta) in &[(1.0f64, 0.3f64), (0.5, 2.0), (2.0, 0.1), (1.3, 1.7)] {
            let closed = 1.0 - (1.0 - 2.0 * (-theta * t).exp()).abs();
            assert_abs_diff_eq!(powerlaw_pl(t, theta, 2).unwrap(), closed, epsilon = 1e-14);
        }
    }

    #[test]
    fn generic_wiring_matches_direct_formula() {
        let assoc = PowerLawAssociation { n: 7 };
        for &theta in &[0.2, 0.9, 1.4, 3.0] {
            let direct = powerlaw_pl(4.2, theta, 7).unwrap();
            let generic = plausibility_point(&assoc, &PredictiveRandomSet::Default1D, &4.2, &theta).unwrap();
            assert_abs_diff_eq!(direct, generic, epsilon = 1e-14);
        }
    }

    #[test]
    fn interval_n2() {
        let iv = powerlaw_interval(1.0, 2, 0.1).unwrap();
        assert_abs_diff_eq!(iv.lo, -(0.95f64).ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(iv.hi, -(0.05f64).ln(), epsilon = 1e-12);
        assert_eq!(iv.csv_line(), "0.051293,2.995732,0.1");
    }

    #[test]
    fn interval_scales_inversely_with_t() {
        let a = powerlaw_interval(2.0, 6, 0.05).unwrap();
        let b = powerlaw_interval(6.0, 6, 0.05).unwrap();
        assert_abs_diff_eq!(a.lo / 3.0, b.lo, epsilon = 1e-12);
        assert_abs_diff_eq!(a.hi / 3.0, b.hi, epsilon = 1e-12);
    }

    #[test]
    fn interval_matches_numeric_inversion() {
        let (t, n, alpha) = (3.3, 9, 0.07);
        let closed = powerlaw_interval(t, n, alpha).unwrap();
        let numeric = invert_unimodal(|th| powerlaw_pl(t, th, n), alpha, (1e-3, 50.0), 1e-13).unwrap();
        assert!((numeric.lo - closed.lo).abs() <= 1e-8 * closed.lo);
        assert!((numeric.hi - closed.hi).abs() <= 1e-8 * closed.hi);
    }

    #[test]
    fn fixed_s_equals_closed_form() {
        let assoc = PowerLawAssociation { n: 11 };
        let fixed = fixed_s_region(&assoc, 5.5, 0.1).unwrap();
        let closed = powerlaw_interval(5.5, 11, 0.1).unwrap();
        assert_abs_diff_eq!(fixed.lo, closed.lo, epsilon = 1e-14);
        assert_abs_diff_eq!(fixed.hi, closed.hi, epsilon = 1e-14);
        assert!(!fixed.open && closed.open);
    }

    #[test]
    fn fixed_s_pinches_as_alpha_grows() {
        let assoc = PowerLawAssociation { n: 4 };
        let wide = fixed_s_region(&assoc, 2.0, 0.5).unwrap();
        let narrow = fixed_s_region(&assoc, 2.0, 0.999).unwrap();
        let center = powerlaw_peak(2.0, 4).unwrap();
        assert!(narrow.width() < 0.01 * wide.width());
        assert!(narrow.contains(center));
    }

    #[test]
    fn simulated_statistic_is_gamma() {
        let mut rng = derive_stream(77, 0);
        let mut pit: Vec<f64> = (0..100_000)
            .map(|_| {
                let d = powerlaw_sample(1.0, 3.0, 5, &mut rng).unwrap();
                crate::numerics::gamma_cdf(powerlaw_statistic(&d), 4.0, 1.0).unwrap()
            })
            .collect();
        let ks = crate::im::ks_uniform(&mut pit);
        assert!(ks.ks_two_sided <= ks.band(), "{ks:?}");
    }

    proptest::proptest! {
        #[test]
        fn inverse_is_total(t in 1e-4f64..1e4, theta in 1e-4f64..1e3, n in 2usize..200) {
            let u = PowerLawAssociation { n }.inverse(&t, &theta).unwrap()[0];
            proptest::prop_assert!((0.0..=1.0).contains(&u));
        }

        #[test]
        fn interval_nests_in_alpha(t in 0.01f64..100.0, n in 2usize..60, a in 0.01f64..0.5, gap in 0.01f64..0.45) {
            let wide = powerlaw_interval(t, n, a).unwrap();
            let narrow = powerlaw_interval(t, n, a + gap).unwrap();
            proptest::prop_assert!(wide.lo <= narrow.lo && narrow.hi <= wide.hi);
        }
    }

    #[test]
    fn association_round_trip() {
        let assoc = PowerLawAssociation { n: 6 };
        for &(u, theta) in &[(0.1, 0.5), (0.5, 2.0), (0.93, 7.0)] {
            let t = assoc.forward(&[u], &theta).unwrap();
            let back = assoc.inverse(&t, &theta).unwrap()[0];
            assert_abs_diff_eq!(back, u, epsilon = 1e-12);
            assert_abs_diff_eq!(assoc.forward(&[back], &theta).unwrap(), t, epsilon = 1e-9);
        }
    }
}
