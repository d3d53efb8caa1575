use std::io::Write;

use crate::error::{Error, Result};
use crate::numerics::roots::bisect;

/// A scalar confidence region `(lo, hi)` or `[lo, hi]` at level `1 − alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval1D {
    pub lo: f64,
    pub hi: f64,
    pub alpha: f64,
    /// Open for plausibility regions `{pl > α}`, closed for fixed-set regions.
    pub open: bool,
}

impl Interval1D {
    pub fn new(lo: f64, hi: f64, alpha: f64, open: bool) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::domain(format!("interval needs lo < hi, got ({lo}, {hi})")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(Self { lo, hi, alpha, open })
    }

    pub fn level(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, theta: f64) -> bool {
        if self.open {
            self.lo < theta && theta < self.hi
        } else {
            self.lo <= theta && theta <= self.hi
        }
    }

    /// The one-line `lo,hi,alpha` export (endpoints to six decimals).
    pub fn csv_line(&self) -> String {
        format!("{:.6},{:.6},{}", self.lo, self.hi, self.alpha)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "lo,hi,alpha")?;
        writeln!(out, "{}", self.csv_line())?;
        Ok(())
    }
}

const PEAK_SCAN: usize = 257;

/// Cuts a unimodal plausibility curve at height `alpha`.
///
/// Both bracket ends must have `pl < alpha`. The peak is located by a uniform
/// scan refined with golden-section search; each flank is then bisected until
/// the crossing is localized to `tol`, and the midpoint of the final bracket
/// is reported.
pub fn invert_unimodal<F>(pl: F, alpha: f64, bracket: (f64, f64), tol: f64) -> Result<Interval1D>
where
    F: Fn(f64) -> Result<f64>,
{
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::Bracket(format!("invalid bracket ({lo}, {hi})")));
    }
    let (pl_lo, pl_hi) = (pl(lo)?, pl(hi)?);
    if !(pl_lo < alpha && pl_hi < alpha) {
        return Err(Error::Bracket(format!(
            "bracket ends must have pl < {alpha}; got pl({lo}) = {pl_lo}, pl({hi}) = {pl_hi}; widen the bracket"
        )));
    }
    let (peak, max_pl) = locate_peak(&pl, lo, hi)?;
    if !(max_pl > alpha) {
        return Err(Error::EmptyRegion { max_pl, alpha });
    }
    // Sign of membership in the strict set {pl > α}; points with pl = α are outside.
    let excess = |x: f64| -> Result<f64> { Ok(if pl(x)? > alpha { 1.0 } else { -1.0 }) };
    let (a, b) = bisect(excess, lo, peak, tol)?;
    let left = 0.5 * (a + b);
    let (c, d) = bisect(excess, peak, hi, tol)?;
    let right = 0.5 * (c + d);
    Interval1D::new(left, right, alpha, true)
}

/// Finds an interior point of near-maximal plausibility.
pub fn locate_peak<F>(pl: &F, lo: f64, hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let step = (hi - lo) / (PEAK_SCAN - 1) as f64;
    let mut best = (lo, f64::NEG_INFINITY);
    let mut best_i = 0;
    for i in 0..PEAK_SCAN {
        let x = lo + step * i as f64;
        let v = pl(x)?;
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    // Golden-section refinement between the scan neighbours.
    let mut a = lo + step * best_i.saturating_sub(1) as f64;
    let mut b = lo + step * (best_i + 1).min(PEAK_SCAN - 1) as f64;
    const G: f64 = 0.618_033_988_749_894_9;
    for _ in 0..100 {
        if b - a <= 1e-14 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        let c = b - G * (b - a);
        let d = a + G * (b - a);
        let (fc, fd) = (pl(c)?, pl(d)?);
        if fc > best.1 {
            best = (c, fc);
        }
        if fd > best.1 {
            best = (d, fd);
        }
        if fc >= fd {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(best)
}

/// Expands geometrically from `peak` until `pl < alpha / 10` on both sides.
///
/// With `positive` the left end approaches zero by halving (`peak / 2^k`) and
/// the right end grows by doubling; otherwise both ends move by `step·2^k`.
pub fn auto_bracket<F>(pl: F, peak: f64, alpha: f64, step: f64, positive: bool) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let target = alpha / 10.0;
    if positive && !(peak > 0.0) {
        return Err(Error::domain(format!("positive-domain peak must be > 0, got {peak}")));
    }
    let mut left = None;
    let mut right = None;
    for k in 1..=200 {
        let factor = 2f64.powi(k);
        if left.is_none() {
            let x = if positive { peak / factor } else { peak - step * factor };
            if pl(x)? < target {
                left = Some(x);
            }
        }
        if right.is_none() {
            let x = if positive { peak * factor } else { peak + step * factor };
            if pl(x)? < target {
                right = Some(x);
            }
        }
        if let (Some(l), Some(r)) = (left, right) {
            return Ok((l, r));
        }
    }
    Err(Error::Bracket(format!("could not bracket pl < {target} around {peak}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symmetric_tent() {
        let pl = |x: f64| Ok((1.0 - x.abs()).max(0.0));
        let iv = invert_unimodal(pl, 0.5, (-2.0, 2.0), 1e-12).unwrap();
        assert_abs_diff_eq!(iv.lo, -0.5, epsilon = 1e-11);
        assert_abs_diff_eq!(iv.hi, 0.5, epsilon = 1e-11);
        assert!(iv.open && iv.contains(0.0) && !iv.contains(0.5 + 1e-9));
        assert_abs_diff_eq!(iv.level(), 0.5);
    }

    #[test]
    fn bracket_and_empty_errors() {
        let pl = |x: f64| Ok((1.0 - x.abs()).max(0.0));
        assert!(matches!(invert_unimodal(pl, 0.5, (-0.2, 2.0), 1e-9), Err(Error::Bracket(_))));
        let low = |x: f64| Ok(0.3 * (1.0 - x.abs()).max(0.0));
        assert!(matches!(invert_unimodal(low, 0.5, (-2.0, 2.0), 1e-9), Err(Error::EmptyRegion { .. })));
    }

    #[test]
    fn step_function_endpoints_bracket_jumps() {
        // Jumps at -0.37 and 0.81 by direct construction.
        let pl = |x: f64| Ok(if x > -0.37 && x < 0.81 { 0.9 } else { 0.01 });
        let iv = invert_unimodal(pl, 0.05, (-3.0, 3.0), 1e-10).unwrap();
        assert!((iv.lo + 0.37).abs() <= 1e-10);
        assert!((iv.hi - 0.81).abs() <= 1e-10);
    }

    #[test]
    fn level_equal_to_alpha_is_outside() {
        // Plateau at exactly α between the jumps at ±1 and ±0.5.
        let pl = |x: f64| {
            Ok(if x.abs() < 0.5 {
                1.0
            } else if x.abs() < 1.0 {
                0.25
            } else {
                0.0
            })
        };
        let iv = invert_unimodal(pl, 0.25, (-2.0, 2.0), 1e-12).unwrap();
        assert!((iv.lo + 0.5).abs() <= 1e-12 && (iv.hi - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn csv_line_format() {
        let iv = Interval1D::new(0.0512932943875505, 2.995732273553991, 0.1, true).unwrap();
        assert_eq!(iv.csv_line(), "0.051293,2.995732,0.1");
    }

    #[test]
    fn auto_bracket_positive_domain() {
        let pl = |x: f64| Ok((1.0 - (x.ln()).abs()).max(0.0));
        let (l, r) = auto_bracket(pl, 1.0, 0.05, 0.0, true).unwrap();
        assert!(l > 0.0 && pl(l).unwrap() < 0.005 && pl(r).unwrap() < 0.005);
    }

    #[test]
    fn interval_validation() {
        assert!(Interval1D::new(1.0, 1.0, 0.1, true).is_err());
        assert!(Interval1D::new(0.0, 1.0, 1.0, true).is_err());
    }
}
