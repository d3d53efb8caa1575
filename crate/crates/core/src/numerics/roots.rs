//! Safeguarded one-dimensional root finding.

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;

/// Stopping rule for [`newton_bisect`] and [`bisect`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Stop once `|f(x)| <= f_tol`.
    pub f_tol: f64,
    /// Stop once the bracket is narrower than `x_tol * max(1, |x|)`.
    pub x_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { f_tol: 0.0, x_tol: 1e-15 }
    }
}

/// Finds a root of an increasing function on `[lo, hi]` with Newton steps,
/// falling back to bisection whenever a step leaves the current bracket.
///
/// `f` returns `(value, derivative)`. Requires `f(lo) <= 0 <= f(hi)`.
pub fn newton_bisect<F>(f: F, x0: f64, mut lo: f64, mut hi: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    if !(lo < hi) {
        return Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let mut x = if x0 > lo && x0 < hi { x0 } else { 0.5 * (lo + hi) };
    for _ in 0..MAX_ITER {
        let (fx, dfx) = f(x)?;
        if fx.abs() <= tol.f_tol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= tol.x_tol * x.abs().max(1.0) {
            return Ok(0.5 * (lo + hi));
        }
        let step = x - fx / dfx;
        let next = if step.is_finite() && step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(Error::Convergence {
        routine: "newton_bisect",
        detail: format!("no convergence in {MAX_ITER} iterations; bracket [{lo}, {hi}]"),
    })
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Returns the final bracket `(a, b)` with `f(a)` and `f(b)` of opposite
/// sign (zero counts as the sign of `f(hi)`).
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    let lo_negative = f_lo < 0.0;
    if lo_negative == (f_hi < 0.0) {
        return Err(Error::Bracket(format!("no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})")));
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= x_tol || mid == lo || mid == hi {
            return Ok((lo, hi));
        }
        if (f(mid)? < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Doubles `step` away from `start` until `accept(x)` holds; returns that `x`.
pub fn expand_until<F>(start: f64, step: f64, max_doublings: usize, accept: F) -> Result<f64>
where
    F: Fn(f64) -> Result<bool>,
{
    let mut width = step;
    for _ in 0..max_doublings {
        let x = start + width;
        if accept(x)? {
            return Ok(x);
        }
        width *= 2.0;
    }
    Err(Error::Convergence {
        routine: "bracket expansion",
        detail: format!("no bracket within {max_doublings} doublings from {start}"),
    })
}
