//! Level sets of two-parameter plausibility functions on regular grids.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Minimum cells per axis accepted by [`extract_grid_region`].
pub const MIN_RESOLUTION: usize = 32;

/// Evaluation window `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl GridBounds {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_min < x_max && y_min < y_max) || ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::domain(format!("invalid grid bounds [{x_min}, {x_max}] x [{y_min}, {y_max}]")));
        }
        Ok(Self { x_min, x_max, y_min, y_max })
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }
}

/// Cell-centred mask of `{pl > α}`.
///
/// Cell `(ix, iy)` covers `[x_min + ix·dx, x_min + (ix+1)·dx) × …` and is
/// evaluated at its centre. Storage is row-major with `iy` the row.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRegion2D {
    pub bounds: GridBounds,
    pub nx: usize,
    pub ny: usize,
    pub alpha: f64,
    pub axis_names: (String, String),
    values: Vec<f64>,
    mask: Vec<bool>,
    boundary_cells: Vec<(usize, usize)>,
}

impl GridRegion2D {
    /// Builds a region from an explicit mask; no edge check is applied.
    pub fn from_mask(bounds: GridBounds, nx: usize, ny: usize, alpha: f64, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != nx * ny {
            return Err(Error::domain(format!("mask has {} cells, expected {}", mask.len(), nx * ny)));
        }
        let values = mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
        let boundary_cells = boundary(&mask, nx, ny);
        Ok(Self { bounds, nx, ny, alpha, axis_names: ("x".into(), "y".into()), values, mask, boundary_cells })
    }

    pub fn with_axis_names(mut self, x: &str, y: &str) -> Self {
        self.axis_names = (x.to_string(), y.to_string());
        self
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (
            (self.bounds.x_max - self.bounds.x_min) / self.nx as f64,
            (self.bounds.y_max - self.bounds.y_min) / self.ny as f64,
        )
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> (f64, f64) {
        let (dx, dy) = self.cell_size();
        (self.bounds.x_min + (ix as f64 + 0.5) * dx, self.bounds.y_min + (iy as f64 + 0.5) * dy)
    }

    pub fn inside(&self, ix: usize, iy: usize) -> bool {
        self.mask[iy * self.nx + ix]
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Inside cells with at least one 4-neighbour outside, in scan order.
    pub fn boundary_cells(&self) -> &[(usize, usize)] {
        &self.boundary_cells
    }

    pub fn cell_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Mask lookup for the cell containing `(x, y)`; false outside the bounds.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (dx, dy) = self.cell_size();
        let fx = (x - self.bounds.x_min) / dx;
        let fy = (y - self.bounds.y_min) / dy;
        if !(fx >= 0.0 && fy >= 0.0) {
            return false;
        }
        let (ix, iy) = (fx as usize, fy as usize);
        ix < self.nx && iy < self.ny && self.inside(ix, iy)
    }

    /// True when an inside cell lies in the outer ring of the grid.
    pub fn touches_edge(&self) -> bool {
        let (nx, ny) = (self.nx, self.ny);
        (0..nx).any(|ix| self.inside(ix, 0) || self.inside(ix, ny - 1))
            || (0..ny).any(|iy| self.inside(0, iy) || self.inside(nx - 1, iy))
    }

    /// True when every inside cell of `self` is inside `other` (same grid).
    pub fn is_subset_of(&self, other: &GridRegion2D) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    /// Writes `x,y,pl,inside` rows (header uses the axis names).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{},{},pl,inside", self.axis_names.0, self.axis_names.1)?;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let (x, y) = self.cell_center(ix, iy);
                writeln!(out, "{x},{y},{},{}", self.value(ix, iy), u8::from(self.inside(ix, iy)))?;
            }
        }
        Ok(())
    }
}

fn boundary(mask: &[bool], nx: usize, ny: usize) -> Vec<(usize, usize)> {
    let at = |ix: usize, iy: usize| mask[iy * nx + ix];
    let mut cells = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            if !at(ix, iy) {
                continue;
            }
            let edge = ix == 0 || iy == 0 || ix + 1 == nx || iy + 1 == ny;
            if edge || !at(ix - 1, iy) || !at(ix + 1, iy) || !at(ix, iy - 1) || !at(ix, iy + 1) {
                cells.push((ix, iy));
            }
        }
    }
    cells
}

/// Evaluates `pl` at every cell centre and keeps the cells with `pl > alpha`.
///
/// Rows are evaluated in parallel. Fails with [`Error::BoundsClipped`] when the
/// level set touches the outer ring of cells.
pub fn extract_grid_region<F>(pl: F, alpha: f64, bounds: GridBounds, resolution: (usize, usize)) -> Result<GridRegion2D>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let region = evaluate_grid(pl, alpha, bounds, resolution)?;
    if region.touches_edge() {
        return Err(Error::BoundsClipped(format!(
            "[{}, {}] x [{}, {}]",
            bounds.x_min, bounds.x_max, bounds.y_min, bounds.y_max
        )));
    }
    Ok(region)
}

/// Like [`extract_grid_region`] but keeps a mask that reaches the edge, for
/// level sets that are unbounded in some direction.
pub fn evaluate_grid<F>(pl: F, alpha: f64, bounds: GridBounds, resolution: (usize, usize)) -> Result<GridRegion2D>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let (nx, ny) = resolution;
    if nx < MIN_RESOLUTION || ny < MIN_RESOLUTION {
        return Err(Error::domain(format!(
            "grid resolution must be at least {MIN_RESOLUTION} per axis, got {nx} x {ny}"
        )));
    }
    let dx = (bounds.x_max - bounds.x_min) / nx as f64;
    let dy = (bounds.y_max - bounds.y_min) / ny as f64;
    let rows: Vec<Vec<f64>> = (0..ny)
        .into_par_iter()
        .map(|iy| {
            let y = bounds.y_min + (iy as f64 + 0.5) * dy;
            (0..nx).map(|ix| pl(bounds.x_min + (ix as f64 + 0.5) * dx, y)).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = rows.into_iter().flatten().collect();
    let mask: Vec<bool> = values.iter().map(|&v| v > alpha).collect();
    let boundary_cells = boundary(&mask, nx, ny);
    Ok(GridRegion2D { bounds, nx, ny, alpha, axis_names: ("x".into(), "y".into()), values, mask, boundary_cells })
}

/// Cell-counting area of the mask.
pub fn region_area(region: &GridRegion2D) -> f64 {
    let (dx, dy) = region.cell_size();
    region.cell_count() as f64 * dx * dy
}
