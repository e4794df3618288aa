//! Binary morphology on frontal zones: erosion/dilation with the full 3×3
//! square, the maximum-disk skeleton, skeleton graphs, exact Euclidean
//! distance transforms and discrete skeleton evolution (DSE) pruning.

mod dse;
mod edt;
mod graph;
mod skeleton;

pub use dse::{branch_weights, dse_trim, dse_trim_with, DiskCover, DEFAULT_DSE_T};
pub use edt::{distance_to_background, distance_to_features, squared_distance_to_features};
pub use graph::{build_skeleton_graph, neighbors, Branch, SkeletonGraph};
pub use skeleton::{mdm_skeleton, mdm_skeleton_with, thin_redundant};

use crate::exec::Exec;
use crate::fronts::Pixel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMask {
    pub n_rows: usize,
    pub n_cols: usize,
    pub bits: Vec<bool>,
}

impl BitMask {
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            bits: vec![false; n_rows * n_cols],
        }
    }

    pub fn from_bits(n_rows: usize, n_cols: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), n_rows * n_cols, "bit count does not match shape");
        Self { n_rows, n_cols, bits }
    }

    pub fn from_pixels(n_rows: usize, n_cols: usize, pixels: impl IntoIterator<Item = Pixel>) -> Self {
        let mut m = Self::new(n_rows, n_cols);
        for p in pixels {
            m.set(p, true);
        }
        m
    }

    /// Parses rows of `#`/`.` (anything other than `#` is background).
    pub fn from_ascii(rows: &[&str]) -> Self {
        let n_cols = rows.first().map_or(0, |r| r.len());
        let bits = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), n_cols, "ragged ascii mask");
                r.bytes().map(|b| b == b'#')
            })
            .collect();
        Self::from_bits(rows.len(), n_cols, bits)
    }

    #[inline]
    pub fn get(&self, (r, c): Pixel) -> bool {
        r < self.n_rows && c < self.n_cols && self.bits[r * self.n_cols + c]
    }

    /// Signed lookup; anything outside the grid is background.
    #[inline]
    pub fn get_signed(&self, r: isize, c: isize) -> bool {
        r >= 0 && c >= 0 && self.get((r as usize, c as usize))
    }

    #[inline]
    pub fn set(&mut self, (r, c): Pixel, v: bool) {
        self.bits[r * self.n_cols + c] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Set pixels in raster order.
    pub fn pixels(&self) -> impl Iterator<Item = Pixel> + '_ {
        let n_cols = self.n_cols;
        self.bits
            .iter()
            .enumerate()
            .filter_map(move |(i, &b)| b.then_some((i / n_cols, i % n_cols)))
    }

    pub fn is_subset_of(&self, other: &BitMask) -> bool {
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn difference(&self, other: &BitMask) -> BitMask {
        let bits = self.bits.iter().zip(&other.bits).map(|(&a, &b)| a && !b).collect();
        BitMask::from_bits(self.n_rows, self.n_cols, bits)
    }

    pub fn union_with(&mut self, other: &BitMask) {
        for (a, &b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn to_ascii(&self) -> String {
        let mut s = String::with_capacity((self.n_cols + 1) * self.n_rows);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                s.push(if self.get((r, c)) { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }
}

/// Erosion by the 3×3 square; the outside of the grid counts as background.
pub fn erode(mask: &BitMask, exec: Exec) -> BitMask {
    let mut out = BitMask::new(mask.n_rows, mask.n_cols);
    exec.for_each_row(&mut out.bits, mask.n_cols, |r, row| {
        let r = r as isize;
        for (c, bit) in row.iter_mut().enumerate() {
            let c = c as isize;
            *bit = mask.get_signed(r, c)
                && (-1..=1).all(|dr| (-1..=1).all(|dc| mask.get_signed(r + dr, c + dc)));
        }
    });
    out
}

/// Dilation by the 3×3 square, clipped to the grid.
pub fn dilate(mask: &BitMask, exec: Exec) -> BitMask {
    let mut out = BitMask::new(mask.n_rows, mask.n_cols);
    exec.for_each_row(&mut out.bits, mask.n_cols, |r, row| {
        let r = r as isize;
        for (c, bit) in row.iter_mut().enumerate() {
            let c = c as isize;
            *bit = (-1..=1).any(|dr| (-1..=1).any(|dc| mask.get_signed(r + dr, c + dc)));
        }
    });
    out
}

pub fn open(mask: &BitMask, exec: Exec) -> BitMask {
    dilate(&erode(mask, exec), exec)
}
