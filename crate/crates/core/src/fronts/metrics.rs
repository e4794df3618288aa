//! Per-front length, width, intensity and offshore distance.

use super::{FrontRecord, FrontSet};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gradient::GradientField;
use crate::grid::ScalarGrid;
use crate::morphology::{distance_to_background, distance_to_features, BitMask};

/// Distance rasters shared by all fronts of one day.
#[derive(Debug, Clone)]
pub struct MetricMaps {
    zone: BitMask,
    /// distance from zone pixels to the nearest non-zone pixel
    to_background: Vec<f64>,
    /// distance to the nearest masked (land) cell, if the grid has any
    to_land: Option<Vec<f64>>,
}

impl MetricMaps {
    pub fn new(zone: &BitMask, grid: &ScalarGrid, exec: Exec) -> Self {
        let to_background = distance_to_background(zone, exec).into_iter().map(f64::sqrt).collect();
        let land: Vec<bool> = grid.valid().iter().map(|&v| !v).collect();
        let to_land = land
            .iter()
            .any(|&l| l)
            .then(|| distance_to_features(&land, grid.n_rows(), grid.n_cols(), exec));
        Self {
            zone: zone.clone(),
            to_background,
            to_land,
        }
    }

    pub fn measure(&self, front: &FrontRecord, field: &GradientField, grid: &ScalarGrid) -> Result<FrontRecord> {
        if front.is_empty() {
            return Err(Error::Argument("cannot measure an empty front".into()));
        }
        let km = grid.km_per_px;
        let n = front.len() as f64;
        let (mut width, mut intensity, mut offshore) = (0.0, 0.0, 0.0);
        for &p in &front.points {
            if !self.zone.get(p) {
                return Err(Error::Consistency(format!(
                    "front point ({}, {}) lies outside the frontal zone",
                    p.0, p.1
                )));
            }
            let i = p.0 * grid.n_cols() + p.1;
            width += 2.0 * self.to_background[i] - 1.0;
            intensity += field.mag[i] / km;
            if let Some(land) = &self.to_land {
                offshore += land[i];
            }
        }
        let steps: f64 = front
            .points
            .windows(2)
            .map(|w| {
                if w[0].0 != w[1].0 && w[0].1 != w[1].1 {
                    std::f64::consts::SQRT_2
                } else {
                    1.0
                }
            })
            .sum();
        let width_px = width / n;
        Ok(FrontRecord {
            id: front.id,
            points: front.points.clone(),
            length_km: steps * km,
            width_km: width_px * km,
            width_px,
            intensity_c_per_km: intensity / n,
            offshore_km: self.to_land.as_ref().map(|_| offshore / n * km),
        })
    }
}

pub fn front_metrics(front: &FrontRecord, zone: &BitMask, field: &GradientField, grid: &ScalarGrid) -> Result<FrontRecord> {
    MetricMaps::new(zone, grid, Exec::Sequential).measure(front, field, grid)
}

/// Measures every front of a day.
pub fn measure_all(fs: &FrontSet, zone: &BitMask, field: &GradientField, grid: &ScalarGrid, exec: Exec) -> Result<FrontSet> {
    let maps = MetricMaps::new(zone, grid, exec);
    let fronts = exec
        .map_slice(&fs.fronts, |f| maps.measure(f, field, grid))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(FrontSet {
        fronts,
        source_day: fs.source_day,
    })
}
