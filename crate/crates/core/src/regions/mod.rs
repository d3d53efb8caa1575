//! Concrete confidence regions: intervals, grid level sets, and the ellipse
//! and rectangle baselines.

pub mod grid;
pub mod interval;

pub use grid::{evaluate_grid, extract_grid_region, region_area, GridBounds, GridRegion2D};
pub use interval::{auto_bracket, invert_unimodal, locate_peak, Interval1D};

/// `{p : (p − c)ᵀ Q (p − c) <= r²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse2D {
    pub center: (f64, f64),
    pub quad: [[f64; 2]; 2],
    pub radius_sq: f64,
    pub alpha: f64,
}

impl Ellipse2D {
    pub fn quadratic_form(&self, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - self.center.0, y - self.center.1);
        let q = &self.quad;
        dx * (q[0][0] * dx + q[0][1] * dy) + dy * (q[1][0] * dx + q[1][1] * dy)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.quadratic_form(x, y) <= self.radius_sq
    }
}

/// Closed rectangle `[x.0, x.1] × [y.0, y.1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect2D {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub alpha: f64,
}

impl Rect2D {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.x.0 <= x && x <= self.x.1 && self.y.0 <= y && y <= self.y.1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Interval(Interval1D),
    Grid(GridRegion2D),
    Ellipse(Ellipse2D),
    Rect(Rect2D),
}

impl Region {
    /// Membership of a parameter point; scalar regions read `theta[0]`.
    pub fn contains(&self, theta: &[f64]) -> bool {
        match self {
            Region::Interval(iv) => iv.contains(theta[0]),
            Region::Grid(g) => g.contains(theta[0], theta[1]),
            Region::Ellipse(e) => e.contains(theta[0], theta[1]),
            Region::Rect(r) => r.contains(theta[0], theta[1]),
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            Region::Interval(iv) => iv.alpha,
            Region::Grid(g) => g.alpha,
            Region::Ellipse(e) => e.alpha,
            Region::Rect(r) => r.alpha,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_and_rect_membership() {
        let e = Ellipse2D { center: (1.0, 2.0), quad: [[1.0, 0.0], [0.0, 4.0]], radius_sq: 1.0, alpha: 0.1 };
        assert!(e.contains(1.0, 2.0));
        assert!(e.contains(2.0, 2.0));
        assert!(!e.contains(1.0, 2.6));
        let r = Rect2D { x: (0.0, 1.0), y: (0.0, 2.0), alpha: 0.1 };
        assert!(Region::Rect(r).contains(&[1.0, 2.0]));
        assert!(!Region::Rect(r).contains(&[1.1, 0.5]));
    }
}
