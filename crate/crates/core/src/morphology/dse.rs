//! Discrete skeleton evolution.
//!
//! Each skeleton pixel `s` carries the disk `U(s, r(s))` with `r(s)` the
//! Euclidean distance from `s` to the nearest non-zone pixel. The
//! reconstruction `R(S)` is the union of those disks. A branch's weight is the
//! number of pixels that `R` loses when the branch is removed, and the
//! lightest branch is pruned greedily while its weight stays at or below `t`.

use std::collections::{BTreeMap, HashMap};

use super::graph::{build_skeleton_graph, Branch};
use super::{distance_to_background, BitMask};
use crate::exec::Exec;
use crate::fronts::Pixel;

pub const DEFAULT_DSE_T: f64 = 20.0;

/// Coverage counts of the disk reconstruction of a skeleton.
#[derive(Debug, Clone)]
pub struct DiskCover {
    n_rows: usize,
    n_cols: usize,
    /// squared disk radius per grid cell (0 outside the zone)
    radius_sq: Vec<f64>,
    offsets: BTreeMap<u64, Vec<(isize, isize)>>,
    cover: Vec<u32>,
}

impl DiskCover {
    pub fn new(skeleton: &BitMask, zone: &BitMask, exec: Exec) -> Self {
        let radius_sq = distance_to_background(zone, exec);
        let mut dc = DiskCover {
            n_rows: zone.n_rows,
            n_cols: zone.n_cols,
            radius_sq,
            offsets: BTreeMap::new(),
            cover: vec![0; zone.n_rows * zone.n_cols],
        };
        for p in skeleton.pixels() {
            dc.ensure_offsets(p);
        }
        for p in skeleton.pixels() {
            for i in dc.disk(p).collect::<Vec<_>>() {
                dc.cover[i] += 1;
            }
        }
        dc
    }

    fn ensure_offsets(&mut self, p: Pixel) {
        let r2 = self.radius_sq[p.0 * self.n_cols + p.1];
        self.offsets.entry(r2 as u64).or_insert_with(|| {
            let r = r2.sqrt().floor() as isize;
            let mut v = Vec::new();
            for dr in -r..=r {
                for dc in -r..=r {
                    if ((dr * dr + dc * dc) as f64) <= r2 {
                        v.push((dr, dc));
                    }
                }
            }
            v
        });
    }

    /// Grid indices of the disk around `p`, clipped to the grid.
    fn disk(&self, p: Pixel) -> impl Iterator<Item = usize> + '_ {
        let r2 = self.radius_sq[p.0 * self.n_cols + p.1] as u64;
        let (r, c) = (p.0 as isize, p.1 as isize);
        let (n_rows, n_cols) = (self.n_rows as isize, self.n_cols as isize);
        self.offsets[&r2].iter().filter_map(move |&(dr, dc)| {
            let (nr, nc) = (r + dr, c + dc);
            (nr >= 0 && nc >= 0 && nr < n_rows && nc < n_cols).then(|| (nr * n_cols + nc) as usize)
        })
    }

    /// `|R(S)|`.
    pub fn area(&self) -> usize {
        self.cover.iter().filter(|&&c| c > 0).count()
    }

    /// Pixels covered only by disks centered on `pixels`.
    pub fn weight(&self, pixels: &[Pixel]) -> usize {
        let mut local: HashMap<usize, u32> = HashMap::new();
        for &p in pixels {
            for i in self.disk(p) {
                *local.entry(i).or_default() += 1;
            }
        }
        local.iter().filter(|(&i, &n)| self.cover[i] == n).count()
    }

    pub fn remove(&mut self, pixels: &[Pixel]) {
        for &p in pixels {
            for i in self.disk(p).collect::<Vec<_>>() {
                self.cover[i] -= 1;
            }
        }
    }
}

/// Current branches of `skeleton` with their weights.
pub fn branch_weights(skeleton: &BitMask, zone: &BitMask) -> Vec<(Branch, usize)> {
    let cover = DiskCover::new(skeleton, zone, Exec::Sequential);
    build_skeleton_graph(skeleton)
        .branches
        .into_iter()
        .map(|b| {
            let w = cover.weight(b.removable());
            (b, w)
        })
        .collect()
}

pub fn dse_trim(skeleton: &BitMask, zone: &BitMask, t: f64) -> BitMask {
    dse_trim_with(skeleton, zone, t, Exec::default())
}

pub fn dse_trim_with(skeleton: &BitMask, zone: &BitMask, t: f64, exec: Exec) -> BitMask {
    let mut skel = skeleton.clone();
    let mut cover = DiskCover::new(&skel, zone, exec);
    loop {
        let graph = build_skeleton_graph(&skel);
        if graph.branches.is_empty() {
            return skel;
        }
        let weights = exec.map_slice(&graph.branches, |b| cover.weight(b.removable()));
        let (best, &w) = weights
            .iter()
            .enumerate()
            .min_by_key(|&(i, w)| (*w, graph.branches[i].endpoint()))
            .expect("non-empty branch list");
        if w as f64 > t {
            return skel;
        }
        let removable = graph.branches[best].removable();
        cover.remove(removable);
        for &p in removable {
            skel.set(p, false);
        }
    }
}
