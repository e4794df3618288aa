//! Depth-first tracing of a skeleton into simple polylines.

use super::{FrontRecord, FrontSet, Pixel};
use crate::morphology::{neighbors, BitMask};

/// Fronts shorter than this many points are dropped (100 km at 5 km/px).
pub const MIN_LEN_PX: usize = 20;

/// Extends `path` from its last pixel through unvisited pixels, stopping after
/// an intersection pixel is appended.
fn walk(mask: &BitMask, visited: &mut BitMask, path: &mut Vec<Pixel>, degree_of: &impl Fn(Pixel) -> usize) {
    loop {
        let cur = *path.last().expect("walk starts from a seeded path");
        if path.len() > 1 && degree_of(cur) >= 3 {
            return;
        }
        let Some(next) = neighbors(mask, cur).find(|&n| !visited.get(n)) else {
            return;
        };
        visited.set(next, true);
        path.push(next);
    }
}

/// Traces every 8-connected component of `skeleton` into ordered simple
/// paths. Components with intersection pixels are split there, each
/// intersection going to the first path that reaches it. Paths are seeded from
/// endpoints first (raster order), then from whatever remains.
pub fn vectorize(skeleton: &BitMask, min_len_px: usize) -> FrontSet {
    let degree_of = |p: Pixel| neighbors(skeleton, p).count();
    let mut visited = BitMask::new(skeleton.n_rows, skeleton.n_cols);
    let endpoints: Vec<Pixel> = skeleton.pixels().filter(|&p| degree_of(p) == 1).collect();
    let seeds = endpoints.into_iter().chain(skeleton.pixels());

    let mut fronts = Vec::new();
    for seed in seeds {
        if visited.get(seed) {
            continue;
        }
        visited.set(seed, true);
        let mut forward = vec![seed];
        walk(skeleton, &mut visited, &mut forward, &degree_of);
        // seeds in the middle of a chain also extend backwards
        let mut backward = vec![seed];
        if degree_of(seed) < 3 || forward.len() == 1 {
            walk(skeleton, &mut visited, &mut backward, &degree_of);
        }
        let mut points: Vec<Pixel> = backward.into_iter().skip(1).rev().collect();
        points.extend(forward);
        fronts.push(FrontRecord::from_points(points));
    }
    let mut set = FrontSet::new(fronts);
    set.retain_min_len(min_len_px);
    set
}
