//! Plausibility of points and sets, tabulated curves, and fixed-set regions.

use std::io::Write;

use rayon::prelude::*;

use super::association::{Association, ScalarCdfAssociation};
use super::prs::Contour;
use crate::error::{Error, Result};
use crate::regions::Interval1D;

/// `pl_t(θ)`: the contour evaluated at the auxiliary point `u(t, θ)`.
///
/// Since `Θ_t(S) ∋ θ` exactly when `S ∋ u(t, θ)`, the plausibility of a
/// singleton is the probability that the random set catches `u(t, θ)`.
pub fn plausibility_point<A, C>(assoc: &A, prs: &C, t: &A::Stat, theta: &A::Param) -> Result<f64>
where
    A: Association + ?Sized,
    C: Contour + ?Sized,
{
    let u = assoc.inverse(t, theta).map_err(|e| match e {
        Error::Domain(msg) | Error::Model(msg) => Error::Model(format!("auxiliary inverse undefined: {msg}")),
        other => other,
    })?;
    prs.contour(&u)
}

/// A subset of a scalar parameter space.
#[derive(Debug, Clone, PartialEq)]
pub enum Assertion {
    Point(f64),
    /// Closed interval `[lo, hi]`.
    Interval {
        lo: f64,
        hi: f64,
    },
    Points(Vec<f64>),
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const SCAN_POINTS: usize = 1001;

/// `pl(A) = sup_{θ ∈ A} pl(θ)` for a consonant plausibility function.
///
/// For an interval and `unimodal = true` the supremum is located by
/// golden-section search; otherwise a uniform scan of the interval is used.
pub fn plausibility_set<F>(pl: F, assertion: &Assertion, unimodal: bool) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    match assertion {
        Assertion::Point(theta) => pl(*theta),
        Assertion::Points(points) => {
            if points.is_empty() {
                return Err(Error::domain("assertion is empty"));
            }
            points.iter().try_fold(0.0f64, |m, &p| Ok(m.max(pl(p)?)))
        }
        &Assertion::Interval { lo, hi } => {
            if !(lo <= hi) {
                return Err(Error::domain(format!("assertion interval [{lo}, {hi}] is empty")));
            }
            if lo == hi {
                return pl(lo);
            }
            let edges = pl(lo)?.max(pl(hi)?);
            let interior = if unimodal {
                golden_max(&pl, lo, hi)?
            } else {
                let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
                (1..SCAN_POINTS - 1).try_fold(0.0f64, |m, i| Ok::<f64, Error>(m.max(pl(lo + step * i as f64)?)))?
            };
            Ok(edges.max(interior))
        }
    }
}

fn golden_max<F>(f: &F, mut a: f64, mut b: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = fc.max(fd);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c)?;
            best = best.max(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d)?;
            best = best.max(fd);
        }
    }
    Ok(best)
}

/// Provenance written in the `#` header of a curve CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CurveMeta {
    pub model: String,
    pub t: Option<f64>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
    pub mc_size: Option<usize>,
}

/// Tabulated `(θ, pl)` pairs over a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PlausibilityCurve {
    points: Vec<(f64, f64)>,
    pub meta: CurveMeta,
}

impl PlausibilityCurve {
    /// Evaluates `pl` on `grid` (in parallel; the result does not depend on
    /// how the grid is split).
    pub fn tabulate<F>(grid: &[f64], pl: F, meta: CurveMeta) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        if grid.is_empty() {
            return Err(Error::domain("curve grid is empty"));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("curve grid must be strictly increasing"));
        }
        let values: Vec<f64> = grid.par_iter().map(|&x| pl(x)).collect::<Result<_>>()?;
        for &v in &values {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!("plausibility {v} outside [0, 1]")));
            }
        }
        Ok(Self { points: grid.iter().copied().zip(values).collect(), meta })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// The tabulated point of maximal plausibility (first one on ties).
    pub fn argmax(&self) -> (f64, f64) {
        self.points.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best })
    }

    /// Linear interpolation inside the tabulated range.
    pub fn interpolate(&self, theta: f64) -> Result<f64> {
        let first = self.points[0].0;
        let last = self.points[self.points.len() - 1].0;
        if !(theta >= first && theta <= last) {
            return Err(Error::domain(format!("{theta} outside tabulated range [{first}, {last}]")));
        }
        let idx = self.points.partition_point(|p| p.0 < theta);
        if idx < self.points.len() && self.points[idx].0 == theta {
            return Ok(self.points[idx].1);
        }
        let (x0, y0) = self.points[idx - 1];
        let (x1, y1) = self.points[idx];
        Ok(y0 + (y1 - y0) * (theta - x0) / (x1 - x0))
    }

    /// Supremum over the assertion using the tabulated values; interval ends
    /// are interpolated.
    pub fn plausibility_set(&self, assertion: &Assertion) -> Result<f64> {
        match assertion {
            &Assertion::Interval { lo, hi } => {
                if !(lo <= hi) {
                    return Err(Error::domain(format!("assertion interval [{lo}, {hi}] is empty")));
                }
                let ends = self.interpolate(lo)?.max(self.interpolate(hi)?);
                Ok(self.points.iter().filter(|p| p.0 >= lo && p.0 <= hi).fold(ends, |m, p| m.max(p.1)))
            }
            other => plausibility_set(|x| self.interpolate(x), other, false),
        }
    }

    /// Writes `theta,pl` CSV preceded by a `#` metadata block.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(|| "NA".to_string(), |x| x.to_string())
        }
        writeln!(out, "# model={}", self.meta.model)?;
        writeln!(out, "# t={}", opt(&self.meta.t))?;
        writeln!(out, "# n={}", opt(&self.meta.n))?;
        writeln!(out, "# alpha={}", opt(&self.meta.alpha))?;
        writeln!(out, "# seed={}", opt(&self.meta.seed))?;
        writeln!(out, "# mc_size={}", opt(&self.meta.mc_size))?;
        writeln!(out, "theta,pl")?;
        for (theta, pl) in &self.points {
            writeln!(out, "{theta},{pl}")?;
        }
        Ok(())
    }
}

/// `Θ_t(S)` for the smallest default-set realization with probability `1 − α`:
/// the closed set `{θ : α/2 <= F_θ(t) <= 1 − α/2}`.
pub fn fixed_s_region<A>(assoc: &A, t: f64, alpha: f64) -> Result<Interval1D>
where
    A: ScalarCdfAssociation + ?Sized,
{
    crate::numerics::dist::check_open_unit(alpha, "alpha")?;
    let a = assoc.theta_for_cdf(t, 0.5 * alpha)?;
    let b = assoc.theta_for_cdf(t, 1.0 - 0.5 * alpha)?;
    Interval1D::new(a.min(b), a.max(b), alpha, false)
}
