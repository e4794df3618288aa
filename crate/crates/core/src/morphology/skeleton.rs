//! Maximum-disk skeleton: the union over `k` of `E_k − open(E_k)`, where
//! `E_k` is the zone eroded `k` times by the 3×3 square.

use super::{dilate, erode, BitMask};
use crate::exec::Exec;

pub fn mdm_skeleton(zone: &BitMask) -> BitMask {
    mdm_skeleton_with(zone, Exec::default())
}

pub fn mdm_skeleton_with(zone: &BitMask, exec: Exec) -> BitMask {
    let mut skeleton = BitMask::new(zone.n_rows, zone.n_cols);
    let mut eroded = zone.clone();
    while !eroded.is_empty() {
        let next = erode(&eroded, exec);
        let opened = dilate(&next, exec);
        skeleton.union_with(&eroded.difference(&opened));
        eroded = next;
    }
    skeleton
}

const RING: [(isize, isize); 8] = [(-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1)];

/// Collapses locally thick skeleton runs to one pixel. The maximum-disk
/// skeleton of a zone an even number of pixels wide is two pixels thick.
///
/// Raster passes, repeated until stable, remove every simple pixel (one
/// 8-connected neighbour set, one 4-connected background run touching it)
/// with at least three set neighbours. Straight and diagonal lines and their
/// ends have at most two neighbours and are never touched; simplicity keeps
/// the component and hole counts unchanged.
pub fn thin_redundant(skeleton: &BitMask) -> BitMask {
    let mut out = skeleton.clone();
    loop {
        let mut changed = false;
        for (r, c) in skeleton.pixels() {
            if !out.get((r, c)) {
                continue;
            }
            let ring: [bool; 8] = RING.map(|(dr, dc)| out.get_signed(r as isize + dr, c as isize + dc));
            if ring.iter().filter(|&&b| b).count() >= 3 && is_simple(&ring) {
                out.set((r, c), false);
                changed = true;
            }
        }
        if !changed {
            return out;
        }
    }
}

/// `ring` lists the 8 neighbours clockwise from the top-left corner.
fn is_simple(ring: &[bool; 8]) -> bool {
    let set: Vec<(isize, isize)> = (0..8).filter(|&i| ring[i]).map(|i| RING[i]).collect();
    if set.is_empty() || !single_component(&set) {
        return false;
    }
    // consecutive ring cells are 4-adjacent, so background components are
    // circular runs; count those containing an edge neighbour (odd index)
    let start = match (0..8).find(|&i| ring[i]) {
        Some(i) => i,
        None => return false,
    };
    let mut runs = 0;
    let mut in_run = false;
    let mut touches = false;
    for k in 1..=8 {
        let i = (start + k) % 8;
        if !ring[i] {
            in_run = true;
            touches |= i % 2 == 1;
        } else if in_run {
            runs += usize::from(touches);
            in_run = false;
            touches = false;
        }
    }
    runs == 1
}

fn single_component(offsets: &[(isize, isize)]) -> bool {
    let mut seen = vec![false; offsets.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..offsets.len() {
            let (a, b) = (offsets[i], offsets[j]);
            if !seen[j] && (a.0 - b.0).abs() <= 1 && (a.1 - b.1).abs() <= 1 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}
