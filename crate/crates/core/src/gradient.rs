//! Sobel gradient of a scalar grid.
//!
//! Kernels (row index increasing downward):
//!
//! ```text
//! Fx = [-1 0 +1; -2 0 +2; -1 0 +1]     Fy = [+1 +2 +1; 0 0 0; -1 -2 -1]
//! ```
//!
//! Both responses are divided by 8 so a field rising by one unit per cell
//! yields a gradient of exactly 1 per cell. `Fy` is positive when values
//! decrease with increasing row index.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::ScalarGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    pub n_rows: usize,
    pub n_cols: usize,
    pub tx: Vec<f64>,
    pub ty: Vec<f64>,
    pub mag: Vec<f64>,
    /// Radians in `[-π, π)`.
    pub dir: Vec<f64>,
    /// False on the border and wherever the 3×3 stencil touches a masked cell.
    pub valid: Vec<bool>,
}

impl GradientField {
    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.n_cols + col
    }

    pub fn len(&self) -> usize {
        self.mag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mag.is_empty()
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// Magnitudes of valid cells, in raster order.
    pub fn valid_magnitudes(&self) -> Vec<f64> {
        self.mag
            .iter()
            .zip(&self.valid)
            .filter_map(|(&m, &v)| v.then_some(m))
            .collect()
    }
}

/// `atan2` folded into `[-π, π)`.
#[inline]
pub fn direction(tx: f64, ty: f64) -> f64 {
    let d = ty.atan2(tx);
    if d >= PI {
        d - 2.0 * PI
    } else {
        d
    }
}

/// True when the full 3×3 neighborhood of `(r, c)` is inside the grid and valid.
#[inline]
pub(crate) fn full_neighborhood(grid: &ScalarGrid, r: usize, c: usize) -> bool {
    if r == 0 || c == 0 || r + 1 >= grid.n_rows() || c + 1 >= grid.n_cols() {
        return false;
    }
    (r - 1..=r + 1).all(|rr| (c - 1..=c + 1).all(|cc| grid.is_valid(rr, cc)))
}

pub fn sobel_gradient(grid: &ScalarGrid) -> Result<GradientField> {
    sobel_gradient_with(grid, Exec::default())
}

pub fn sobel_gradient_with(grid: &ScalarGrid, exec: Exec) -> Result<GradientField> {
    let (n_rows, n_cols) = (grid.n_rows(), grid.n_cols());
    if n_rows < 3 || n_cols < 3 {
        return Err(Error::Size(format!(
            "gradient needs at least 3x3 cells, grid is {n_rows}x{n_cols}"
        )));
    }
    let n = n_rows * n_cols;
    // (tx, ty, valid) per cell
    let mut cells = vec![(0.0f64, 0.0f64, false); n];
    exec.for_each_row(&mut cells, n_cols, |r, row| {
        for (c, cell) in row.iter_mut().enumerate() {
            if !full_neighborhood(grid, r, c) {
                continue;
            }
            let v = |dr: usize, dc: usize| grid.value(r + dr - 1, c + dc - 1);
            let gx = (v(0, 2) - v(0, 0)) + 2.0 * (v(1, 2) - v(1, 0)) + (v(2, 2) - v(2, 0));
            let gy = (v(0, 0) - v(2, 0)) + 2.0 * (v(0, 1) - v(2, 1)) + (v(0, 2) - v(2, 2));
            *cell = (gx / 8.0, gy / 8.0, true);
        }
    });

    let mut field = GradientField {
        n_rows,
        n_cols,
        tx: Vec::with_capacity(n),
        ty: Vec::with_capacity(n),
        mag: Vec::with_capacity(n),
        dir: Vec::with_capacity(n),
        valid: Vec::with_capacity(n),
    };
    for (tx, ty, ok) in cells {
        field.tx.push(tx);
        field.ty.push(ty);
        field.mag.push(if ok { tx.hypot(ty) } else { 0.0 });
        field.dir.push(if ok { direction(tx, ty) } else { 0.0 });
        field.valid.push(ok);
    }
    Ok(field)
}
