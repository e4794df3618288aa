//! Ring deletion.
//!
//! A front whose head sits in its tail's 3×3 neighborhood is a closed ring and
//! is dropped. Otherwise the first point from the head that sits in the tail's
//! neighborhood (ignoring the tail and the two points before it) marks a
//! partial ring, and everything after that point is cut off.

use super::{in_3x3, FrontRecord, FrontSet};

/// Points at the end of a path that are always near the tail and are not
/// tested for partial rings.
const TAIL_EXCLUSION: usize = 3;

fn is_closed(f: &FrontRecord) -> bool {
    match (f.head(), f.tail()) {
        (Some(h), Some(t)) => in_3x3(h, t),
        _ => true,
    }
}

fn partial_ring_cut(f: &FrontRecord) -> Option<usize> {
    let tail = f.tail()?;
    let n = f.len().saturating_sub(TAIL_EXCLUSION);
    f.points[..n].iter().position(|&p| in_3x3(p, tail))
}

pub fn is_ring_free(f: &FrontRecord) -> bool {
    !is_closed(f) && partial_ring_cut(f).is_none()
}

pub fn delete_rings(fs: &FrontSet) -> FrontSet {
    let mut fronts = fs.fronts.clone();
    loop {
        if let Some(i) = fronts.iter().position(is_closed) {
            fronts.remove(i);
            continue;
        }
        let cut = fronts
            .iter()
            .enumerate()
            .find_map(|(i, f)| partial_ring_cut(f).map(|k| (i, k)));
        match cut {
            Some((i, k)) => fronts[i].points.truncate(k + 1),
            None => break,
        }
    }
    FrontSet {
        fronts,
        source_day: fs.source_day,
    }
}
