//! Gridded scalar fields on a uniform equirectangular lattice.

use crate::error::{Error, Result};

/// Default ground distance of one grid step (0.05° products).
pub const DEFAULT_KM_PER_PX: f64 = 5.0;

/// A 2-D scalar field with a validity mask.
///
/// Row `r`, column `c` sits at the cell center `(lat0 + r·d_lat, lon0 + c·d_lon)`.
/// Values are stored as `f32` (the on-disk precision); numeric consumers widen
/// to `f64` and must only read cells where [`ScalarGrid::is_valid`] holds.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    n_rows: usize,
    n_cols: usize,
    pub lat0: f64,
    pub lon0: f64,
    pub d_lat: f64,
    pub d_lon: f64,
    pub km_per_px: f64,
    values: Vec<f32>,
    valid: Vec<bool>,
}

impl ScalarGrid {
    pub fn new(n_rows: usize, n_cols: usize, values: Vec<f32>, valid: Vec<bool>) -> Result<Self> {
        let n = n_rows
            .checked_mul(n_cols)
            .ok_or_else(|| Error::Size(format!("{n_rows}x{n_cols} overflows")))?;
        if values.len() != n || valid.len() != n {
            return Err(Error::Size(format!(
                "{n_rows}x{n_cols} grid needs {n} cells, got {} values and {} mask entries",
                values.len(),
                valid.len()
            )));
        }
        Ok(Self {
            n_rows,
            n_cols,
            lat0: 0.0,
            lon0: 0.0,
            d_lat: 0.05,
            d_lon: 0.05,
            km_per_px: DEFAULT_KM_PER_PX,
            values,
            valid,
        })
    }

    /// All cells valid.
    pub fn from_values(n_rows: usize, n_cols: usize, values: Vec<f32>) -> Result<Self> {
        let valid = vec![true; values.len()];
        Self::new(n_rows, n_cols, values, valid)
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, f: impl Fn(usize, usize) -> f32) -> Self {
        let values = (0..n_rows * n_cols).map(|i| f(i / n_cols, i % n_cols)).collect();
        Self::from_values(n_rows, n_cols, values).expect("shape is consistent by construction")
    }

    pub fn with_geometry(mut self, lat0: f64, lon0: f64, d_lat: f64, d_lon: f64) -> Result<Self> {
        if !(d_lat > 0.0 && d_lon > 0.0) {
            return Err(Error::Argument(format!(
                "grid spacing must be positive (d_lat={d_lat}, d_lon={d_lon})"
            )));
        }
        self.lat0 = lat0;
        self.lon0 = lon0;
        self.d_lat = d_lat;
        self.d_lon = d_lon;
        Ok(self)
    }

    pub fn with_km_per_px(mut self, km_per_px: f64) -> Result<Self> {
        if !(km_per_px.is_finite() && km_per_px > 0.0) {
            return Err(Error::Argument(format!("km_per_px must be positive, got {km_per_px}")));
        }
        self.km_per_px = km_per_px;
        Ok(self)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.n_cols + col
    }

    #[inline]
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[self.index(row, col)] as f64
    }

    #[inline]
    pub fn is_valid(&self, row: usize, col: usize) -> bool {
        self.valid[self.index(row, col)]
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn valid(&self) -> &[bool] {
        &self.valid
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// Cell center of `(row, col)` as `(lon, lat)`.
    pub fn to_lon_lat(&self, row: usize, col: usize) -> (f64, f64) {
        (
            self.lon0 + col as f64 * self.d_lon,
            self.lat0 + row as f64 * self.d_lat,
        )
    }

    /// Nearest cell to `(lon, lat)`, or `None` outside the grid.
    pub fn to_row_col(&self, lon: f64, lat: f64) -> Option<(usize, usize)> {
        let r = ((lat - self.lat0) / self.d_lat).round();
        let c = ((lon - self.lon0) / self.d_lon).round();
        if r < 0.0 || c < 0.0 || r >= self.n_rows as f64 || c >= self.n_cols as f64 {
            return None;
        }
        Some((r as usize, c as usize))
    }
}
