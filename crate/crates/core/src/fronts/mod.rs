//! Vector fronts: tracing the skeleton into polylines, merging fragments,
//! deleting rings and measuring each front.

mod merge;
mod metrics;
mod rings;
mod vectorize;

pub use merge::{fill_gap, merge_and_fill, merge_seeded, MERGE_RADIUS};
pub use metrics::{front_metrics, measure_all, MetricMaps};
pub use rings::{delete_rings, is_ring_free};
pub use vectorize::{vectorize, MIN_LEN_PX};

/// Grid index `(row, col)`.
pub type Pixel = (usize, usize);

/// One front: an ordered 8-connected polyline of grid cells plus its metrics.
///
/// `id == 0` means no track id has been assigned yet.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrontRecord {
    pub id: u64,
    pub points: Vec<Pixel>,
    pub length_km: f64,
    pub width_km: f64,
    /// Width in grid steps; tracking compares distances in pixels.
    pub width_px: f64,
    pub intensity_c_per_km: f64,
    /// `None` when the grid has no land cells.
    pub offshore_km: Option<f64>,
}

impl FrontRecord {
    pub fn from_points(points: Vec<Pixel>) -> Self {
        Self {
            points,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn head(&self) -> Option<Pixel> {
        self.points.first().copied()
    }

    pub fn tail(&self) -> Option<Pixel> {
        self.points.last().copied()
    }
}

/// All fronts detected on one day.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrontSet {
    pub fronts: Vec<FrontRecord>,
    pub source_day: Option<chrono::NaiveDate>,
}

impl FrontSet {
    pub fn new(fronts: Vec<FrontRecord>) -> Self {
        Self {
            fronts,
            source_day: None,
        }
    }

    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    pub fn total_points(&self) -> usize {
        self.fronts.iter().map(FrontRecord::len).sum()
    }

    /// Drops fronts with fewer than `min_len_px` points.
    pub fn retain_min_len(&mut self, min_len_px: usize) {
        self.fronts.retain(|f| f.len() >= min_len_px);
    }
}

/// Chebyshev adjacency (the 3×3 neighborhood, including the cell itself).
#[inline]
pub fn in_3x3(a: Pixel, b: Pixel) -> bool {
    a.0.abs_diff(b.0) <= 1 && a.1.abs_diff(b.1) <= 1
}

/// Consecutive points 8-adjacent and distinct, no pixel repeated.
pub fn is_simple_path(points: &[Pixel]) -> bool {
    let steps_ok = points.windows(2).all(|w| w[0] != w[1] && in_3x3(w[0], w[1]));
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    steps_ok && sorted.len() == points.len()
}
