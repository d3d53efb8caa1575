//! Distribution functions, densities and quantiles.
//!
//! Quantiles are computed by safeguarded Newton iteration on the matching CDF
//! (see [`super::roots::newton_bisect`]). Gamma and chi-square start from the
//! Wilson–Hilferty approximation; normal starts from Acklam's rational
//! approximation; Student-t starts from a one-term Cornish–Fisher expansion.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::roots::{expand_until, newton_bisect, Tolerance};
use super::special::{beta_reg, gamma_pq};
use crate::error::{Error, Result};

const QUANTILE_TOL: Tolerance = Tolerance { f_tol: 1e-15, x_tol: 4e-16 };

fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be finite, got {x}")))
    }
}

pub(crate) fn check_open_unit(q: f64, what: &str) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must lie strictly inside (0, 1), got {q}")))
    }
}

fn check_positive(v: f64, what: &str) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be positive and finite, got {v}")))
    }
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF Φ(x), computed as `½·Q(½, x²/2)` on the lower side.
pub fn norm_cdf(x: f64) -> Result<f64> {
    check_finite(x, "normal CDF argument")?;
    let (p, q) = gamma_pq(0.5, 0.5 * x * x)?;
    Ok(if x < 0.0 { 0.5 * q } else { 0.5 + 0.5 * p })
}

/// Upper tail 1 − Φ(x) without cancellation.
pub fn norm_sf(x: f64) -> Result<f64> {
    norm_cdf(-x)
}

/// Inverse of the standard normal CDF.
pub fn norm_quantile(q: f64) -> Result<f64> {
    check_open_unit(q, "normal quantile level")?;
    if q == 0.5 {
        return Ok(0.0);
    }
    // Work in the lower tail and reflect, so the target never loses digits.
    let (lower, sign) = if q < 0.5 { (q, -1.0) } else { (1.0 - q, 1.0) };
    let mut x = acklam(lower);
    for _ in 0..4 {
        let err = norm_cdf(x)? - lower;
        let u = err / norm_pdf(x);
        if !u.is_finite() {
            break;
        }
        // Halley step
        let next = x - u / (1.0 + 0.5 * x * u);
        if (next - x).abs() <= 1e-16 * x.abs() {
            x = next;
            break;
        }
        x = next;
    }
    // `x` approximates the lower-tail quantile, which is <= 0.
    Ok(-sign * x)
}

/// Acklam's rational approximation to the lower-tail normal quantile, `p <= 0.5`.
#[allow(clippy::excessive_precision)]
fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00, 3.754408661907416e+00];
    if p < 0.02425 {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Gamma density with the given shape and scale.
pub fn gamma_pdf(t: f64, shape: f64, scale: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    if t == 0.0 {
        return match shape.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => f64::INFINITY,
            Some(std::cmp::Ordering::Equal) => 1.0 / scale,
            _ => 0.0,
        };
    }
    let z = t / scale;
    ((shape - 1.0) * z.ln() - z - ln_gamma(shape)).exp() / scale
}

/// Gamma CDF: the regularized lower incomplete gamma at `t / scale`.
pub fn gamma_cdf(t: f64, shape: f64, scale: f64) -> Result<f64> {
    check_positive(shape, "gamma shape")?;
    check_positive(scale, "gamma scale")?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain(format!("gamma CDF argument must be >= 0, got {t}")));
    }
    Ok(gamma_pq(shape, t / scale)?.0)
}

/// Gamma upper tail `1 − F(t)`.
pub fn gamma_sf(t: f64, shape: f64, scale: f64) -> Result<f64> {
    check_positive(shape, "gamma shape")?;
    check_positive(scale, "gamma scale")?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain(format!("gamma CDF argument must be >= 0, got {t}")));
    }
    Ok(gamma_pq(shape, t / scale)?.1)
}

/// Inverse of [`gamma_cdf`] in its first argument.
pub fn gamma_quantile(q: f64, shape: f64, scale: f64) -> Result<f64> {
    check_open_unit(q, "gamma quantile level")?;
    check_positive(shape, "gamma shape")?;
    check_positive(scale, "gamma scale")?;
    Ok(scale * standard_gamma_quantile(q, shape)?)
}

fn standard_gamma_quantile(q: f64, shape: f64) -> Result<f64> {
    let z = norm_quantile(q)?;
    let c = 1.0 / (9.0 * shape);
    let wh = shape * (1.0 - c + z * c.sqrt()).powi(3);
    let x0 = if wh > 0.0 && wh.is_finite() {
        wh
    } else {
        // Small-q behaviour: P(a, x) ≈ x^a / Γ(a + 1).
        ((q.ln() + ln_gamma(shape + 1.0)) / shape).exp()
    };
    // Residual on whichever tail is smaller keeps upper quantiles accurate.
    let upper = q > 0.5;
    let target = if upper { 1.0 - q } else { q };
    let residual = move |x: f64| -> Result<(f64, f64)> {
        let (p, qq) = gamma_pq(shape, x)?;
        let value = if upper { target - qq } else { p - target };
        Ok((value, gamma_pdf(x, shape, 1.0)))
    };
    let hi = expand_until(0.0, x0.max(1e-300) * 2.0, 2000, |x| Ok(residual(x)?.0 >= 0.0))?;
    newton_bisect(residual, x0, 0.0, hi, QUANTILE_TOL)
}

/// Chi-square CDF with `df` degrees of freedom.
pub fn chisq_cdf(x: f64, df: f64) -> Result<f64> {
    check_positive(df, "chi-square degrees of freedom")?;
    gamma_cdf(x, 0.5 * df, 2.0)
}

/// Inverse of [`chisq_cdf`].
pub fn chisq_quantile(q: f64, df: f64) -> Result<f64> {
    check_positive(df, "chi-square degrees of freedom")?;
    gamma_quantile(q, 0.5 * df, 2.0)
}

/// Student-t density.
pub fn student_t_pdf(t: f64, df: f64) -> f64 {
    let log_norm = ln_gamma(0.5 * (df + 1.0)) - ln_gamma(0.5 * df) - 0.5 * (df * PI).ln();
    (log_norm - 0.5 * (df + 1.0) * (t * t / df).ln_1p()).exp()
}

/// Student-t CDF via the incomplete beta function.
pub fn student_t_cdf(t: f64, df: f64) -> Result<f64> {
    check_finite(t, "Student-t CDF argument")?;
    check_positive(df, "Student-t degrees of freedom")?;
    let tail = student_t_tail(t.abs(), df)?;
    Ok(if t < 0.0 { tail } else { 1.0 - tail })
}

/// `P(T > t)` for `t >= 0`.
fn student_t_tail(t: f64, df: f64) -> Result<f64> {
    let x = df / (df + t * t);
    Ok(0.5 * beta_reg(0.5 * df, 0.5, x)?)
}

/// Inverse of the Student-t CDF.
pub fn student_t_quantile(q: f64, df: f64) -> Result<f64> {
    check_open_unit(q, "Student-t quantile level")?;
    check_positive(df, "Student-t degrees of freedom")?;
    if q == 0.5 {
        return Ok(0.0);
    }
    let tail = if q > 0.5 { 1.0 - q } else { q };
    let z = norm_quantile(1.0 - tail)?;
    let x0 = z + (z * z * z + z) / (4.0 * df);
    // Residual is increasing in t on t >= 0.
    let residual = |t: f64| -> Result<(f64, f64)> { Ok((tail - student_t_tail(t, df)?, student_t_pdf(t, df))) };
    let hi = expand_until(0.0, x0.max(1.0), 2000, |t| Ok(residual(t)?.0 >= 0.0))?;
    let t = newton_bisect(residual, x0, 0.0, hi, QUANTILE_TOL)?;
    Ok(if q > 0.5 { t } else { -t })
}

/// Standard logistic CDF.
pub fn logistic_cdf(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Standard logistic quantile `ln(q / (1 − q))`.
pub fn logistic_quantile(q: f64) -> Result<f64> {
    check_open_unit(q, "logistic quantile level")?;
    Ok((q / (1.0 - q)).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Composite Simpson integral of the normal density over `[0, x]`.
    fn simpson_norm(x: f64) -> f64 {
        let n = 200_000;
        let h = x / n as f64;
        let mut s = norm_pdf(0.0) + norm_pdf(x);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * norm_pdf(i as f64 * h);
        }
        0.5 + s * h / 3.0
    }

    /// Plain bisection on a monotone CDF, independent of the Newton path.
    fn bisection_oracle(cdf: impl Fn(f64) -> f64, q: f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn norm_cdf_values() {
        assert_eq!(norm_cdf(0.0).unwrap(), 0.5);
        assert_abs_diff_eq!(simpson_norm(1.959964), 0.975, epsilon = 1e-6);
        assert_abs_diff_eq!(norm_cdf(1.959964).unwrap(), simpson_norm(1.959964), epsilon = 1e-12);
        for &x in &[0.5, 1.0, 2.0] {
            assert_abs_diff_eq!(norm_cdf(-x).unwrap(), 1.0 - norm_cdf(x).unwrap(), epsilon = 1e-15);
        }
        assert!(norm_cdf(f64::NAN).is_err());
        assert!(norm_cdf(f64::INFINITY).is_err());
    }

    #[test]
    fn norm_quantile_values() {
        assert_eq!(norm_quantile(0.5).unwrap(), 0.0);
        let oracle = bisection_oracle(|x| norm_cdf(x).unwrap(), 0.975, -10.0, 10.0);
        assert_abs_diff_eq!(oracle, 1.959964, epsilon = 1e-6);
        assert_abs_diff_eq!(norm_quantile(0.975).unwrap(), oracle, epsilon = 1e-12);
        for &q in &[1e-12, 1e-6, 0.01, 0.2, 0.7, 0.999, 1.0 - 1e-9] {
            let x = norm_quantile(q).unwrap();
            assert_abs_diff_eq!(norm_cdf(x).unwrap(), q, epsilon = 1e-10);
        }
        assert!(norm_quantile(0.0).is_err());
        assert!(norm_quantile(1.0).is_err());
    }

    #[test]
    fn gamma_cdf_values() {
        assert_abs_diff_eq!(gamma_cdf(2f64.ln(), 1.0, 1.0).unwrap(), 0.5, epsilon = 1e-15);
        // Integer shape: Poisson sum 1 − e^{−t}(1 + t).
        assert_abs_diff_eq!(gamma_cdf(1.0, 2.0, 1.0).unwrap(), 1.0 - 2.0 * (-1f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(gamma_cdf(1.0, 2.0, 1.0).unwrap(), 0.2642411, epsilon = 1e-7);
        for &(t, k, s) in &[(3.0, 2.5, 0.5), (0.2, 0.7, 3.0), (40.0, 24.0, 1.5)] {
            assert_abs_diff_eq!(gamma_cdf(t, k, s).unwrap(), gamma_cdf(t / s, k, 1.0).unwrap(), epsilon = 1e-15);
        }
        assert!(gamma_cdf(1.0, 0.0, 1.0).is_err());
        assert!(gamma_cdf(1.0, 1.0, -2.0).is_err());
    }

    #[test]
    fn gamma_quantile_values() {
        assert_abs_diff_eq!(gamma_quantile(0.95, 1.0, 1.0).unwrap(), -(0.05f64).ln(), epsilon = 1e-12);
        let oracle = bisection_oracle(|x| gamma_cdf(x, 24.0, 1.0).unwrap(), 0.5, 0.0, 100.0);
        assert_abs_diff_eq!(oracle, 23.67, epsilon = 0.01);
        assert_abs_diff_eq!(gamma_quantile(0.5, 24.0, 1.0).unwrap(), oracle, epsilon = 1e-10);
        assert!(gamma_quantile(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn chisq_identities() {
        for &x in &[0.1, 1.0, 4.0, 20.0] {
            assert_abs_diff_eq!(chisq_cdf(x, 2.0).unwrap(), -(-x / 2.0f64).exp_m1(), epsilon = 1e-14);
        }
        assert_abs_diff_eq!(chisq_quantile(0.9, 2.0).unwrap(), 4.60517, epsilon = 1e-5);
        assert_abs_diff_eq!(chisq_quantile(0.9, 2.0).unwrap(), -2.0 * 0.1f64.ln(), epsilon = 1e-12);
        for &q in &[0.001, 0.05, 0.5, 0.95, 0.999] {
            let x = chisq_quantile(q, 24.0).unwrap();
            assert_abs_diff_eq!(chisq_cdf(x, 24.0).unwrap(), q, epsilon = 1e-10);
        }
    }

    #[test]
    fn student_t_values() {
        for &df in &[1.0, 3.0, 24.0] {
            assert_eq!(student_t_quantile(0.5, df).unwrap(), 0.0);
        }
        let cauchy = (PI * 0.475).tan();
        assert_abs_diff_eq!(student_t_quantile(0.975, 1.0).unwrap(), cauchy, epsilon = 1e-8);
        assert_abs_diff_eq!(cauchy, 12.7062, epsilon = 1e-4);
        for &q in &[0.6, 0.95, 0.999] {
            assert_abs_diff_eq!(student_t_quantile(q, 1e6).unwrap(), norm_quantile(q).unwrap(), epsilon = 1e-3);
        }
        for &q in &[0.01, 0.3, 0.9, 0.975] {
            let t = student_t_quantile(q, 24.0).unwrap();
            assert_abs_diff_eq!(student_t_cdf(t, 24.0).unwrap(), q, epsilon = 1e-12);
        }
        assert!(student_t_quantile(1.2, 3.0).is_err());
    }

    #[test]
    fn logistic_round_trip() {
        for &q in &[0.01, 0.5, 0.93] {
            assert_abs_diff_eq!(logistic_cdf(logistic_quantile(q).unwrap()), q, epsilon = 1e-15);
        }
    }
}
