//! Pixel graph of a one-pixel skeleton.
//!
//! Adjacency is 8-connectivity with redundant diagonals removed: a diagonal
//! neighbor is not linked when one of the two cells orthogonally adjacent to
//! both is itself set, because the pixels are already joined through that
//! cell. Connectivity is unchanged, but corners of staircases and T-junctions
//! no longer inflate degrees.

use std::collections::HashSet;

use super::BitMask;
use crate::fronts::Pixel;

const OFFSETS: [(isize, isize); 8] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];

/// Linked neighbors of `p` in `mask`, in fixed raster offset order.
pub fn neighbors(mask: &BitMask, p: Pixel) -> impl Iterator<Item = Pixel> + '_ {
    let (r, c) = (p.0 as isize, p.1 as isize);
    OFFSETS.iter().filter_map(move |&(dr, dc)| {
        let (nr, nc) = (r + dr, c + dc);
        if !mask.get_signed(nr, nc) {
            return None;
        }
        if dr != 0 && dc != 0 && (mask.get_signed(r, nc) || mask.get_signed(nr, c)) {
            return None;
        }
        Some((nr as usize, nc as usize))
    })
}

#[inline]
pub(crate) fn degree(mask: &BitMask, p: Pixel) -> usize {
    neighbors(mask, p).count()
}

/// A path from an endpoint to the first intersection reached, both included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub path: Vec<Pixel>,
}

impl Branch {
    pub fn endpoint(&self) -> Pixel {
        self.path[0]
    }

    pub fn junction(&self) -> Pixel {
        *self.path.last().expect("branch paths hold at least two pixels")
    }

    /// Pixels deleted when the branch is pruned (the junction stays).
    pub fn removable(&self) -> &[Pixel] {
        &self.path[..self.path.len() - 1]
    }

    /// Number of pixels on the branch.
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SkeletonGraph {
    /// All skeleton pixels, raster order.
    pub pixels: Vec<Pixel>,
    pub degree: Vec<usize>,
    pub isolated: Vec<Pixel>,
    pub endpoints: Vec<Pixel>,
    pub connections: Vec<Pixel>,
    pub intersections: Vec<Pixel>,
    pub branches: Vec<Branch>,
}

/// Walks from endpoint `start` through degree-2 pixels. Returns the branch if
/// an intersection is reached before another endpoint.
fn trace_branch(mask: &BitMask, start: Pixel) -> Option<Branch> {
    let mut path = vec![start];
    let mut seen = HashSet::from([start]);
    let mut prev: Option<Pixel> = None;
    let mut cur = start;
    loop {
        let next: Vec<Pixel> = neighbors(mask, cur).filter(|&n| Some(n) != prev).collect();
        if cur != start {
            match next.len() {
                0 => return None,
                1 => {}
                _ => return Some(Branch { path }),
            }
        }
        let n = *next.first()?;
        if !seen.insert(n) {
            return None;
        }
        path.push(n);
        prev = Some(cur);
        cur = n;
    }
}

pub fn build_skeleton_graph(skeleton: &BitMask) -> SkeletonGraph {
    let mut g = SkeletonGraph::default();
    for p in skeleton.pixels() {
        let d = degree(skeleton, p);
        g.pixels.push(p);
        g.degree.push(d);
        match d {
            0 => g.isolated.push(p),
            1 => g.endpoints.push(p),
            2 => g.connections.push(p),
            _ => g.intersections.push(p),
        }
    }
    if !g.intersections.is_empty() {
        g.branches = g
            .endpoints
            .iter()
            .filter_map(|&e| trace_branch(skeleton, e))
            .collect();
    }
    g
}
