//! Front identity across consecutive days.
//!
//! Fronts are compared in pixel units. The distance between two fronts is the
//! mean, over the points of the longer front, of the Euclidean distance to the
//! nearest point of the shorter one. A previous-day front hands its id to the
//! closest next-day candidate that passes the point-count ratio gate, provided
//! that distance does not exceed the mean of the two widths.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fronts::{FrontRecord, FrontSet, Pixel};

pub const DEFAULT_LENGTH_RATIO: f64 = 0.5;

/// Picks `(longer, shorter)`; equal counts are ordered by point list so the
/// result does not depend on argument order.
fn longer_shorter<'a>(a: &'a [Pixel], b: &'a [Pixel]) -> (&'a [Pixel], &'a [Pixel]) {
    use std::cmp::Ordering::*;
    match a.len().cmp(&b.len()) {
        Greater => (a, b),
        Less => (b, a),
        Equal => {
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        }
    }
}

pub fn front_distance(a: &FrontRecord, b: &FrontRecord) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("front distance needs non-empty fronts".into()));
    }
    Ok(point_set_distance(&a.points, &b.points))
}

fn point_set_distance(a: &[Pixel], b: &[Pixel]) -> f64 {
    let (long, short) = longer_shorter(a, b);
    let total: f64 = long
        .iter()
        .map(|p| {
            short
                .iter()
                .map(|q| {
                    let dr = p.0 as f64 - q.0 as f64;
                    let dc = p.1 as f64 - q.1 as f64;
                    dr * dr + dc * dc
                })
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    total / long.len() as f64
}

/// `min(N, M) / max(N, M) >= ratio`.
pub fn passes_length_ratio(n: usize, m: usize, ratio: f64) -> bool {
    let (lo, hi) = if n <= m { (n, m) } else { (m, n) };
    hi > 0 && lo as f64 / hi as f64 >= ratio
}

/// Ids for `next` given the id'd `prev` day. Unmatched next-day fronts draw
/// fresh ids from `next_id`. Returns ids in `next` order.
pub fn match_day_pair(prev: &FrontSet, next: &FrontSet, ratio: f64, next_id: &mut u64) -> Vec<u64> {
    match_day_pair_with(prev, next, ratio, next_id, Exec::default())
}

pub fn match_day_pair_with(prev: &FrontSet, next: &FrontSet, ratio: f64, next_id: &mut u64, exec: Exec) -> Vec<u64> {
    let mut ids = vec![0u64; next.len()];
    for p in &prev.fronts {
        if p.is_empty() {
            continue;
        }
        let candidates: Vec<usize> = (0..next.len())
            .filter(|&q| ids[q] == 0 && !next.fronts[q].is_empty())
            .filter(|&q| passes_length_ratio(p.len(), next.fronts[q].len(), ratio))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let dists = exec.map_slice(&candidates, |&q| point_set_distance(&p.points, &next.fronts[q].points));
        let (k, &d) = dists
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("candidates are non-empty");
        let q = candidates[k];
        if d <= (p.width_px + next.fronts[q].width_px) / 2.0 {
            ids[q] = p.id;
        }
    }
    for id in ids.iter_mut().filter(|id| **id == 0) {
        *id = *next_id;
        *next_id += 1;
    }
    ids
}

/// |A ∩ B| / |A ∪ B|, 1 when both are empty.
pub fn iou(a: &BTreeSet<u64>, b: &BTreeSet<u64>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrackSet {
    /// Per day, the id of each front in index order.
    pub assignments: Vec<Vec<u64>>,
    pub next_id: u64,
    /// Number of days each id was seen.
    pub lifetimes: BTreeMap<u64, usize>,
    /// IoU of id sets for each adjacent day pair.
    pub iou: Vec<f64>,
}

impl TrackSet {
    /// `id -> [(day, front_index)]`.
    pub fn tracks(&self) -> BTreeMap<u64, Vec<(usize, usize)>> {
        let mut out: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
        for (day, ids) in self.assignments.iter().enumerate() {
            for (i, &id) in ids.iter().enumerate() {
                out.entry(id).or_default().push((day, i));
            }
        }
        out
    }

    /// `lifetime -> number of ids`.
    pub fn lifetime_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &l in self.lifetimes.values() {
            *h.entry(l).or_default() += 1;
        }
        h
    }
}

/// Tracks fronts over a day sequence; the fronts of `days` get their ids set.
pub fn track_sequence(days: &mut [FrontSet], ratio: f64) -> TrackSet {
    track_sequence_with(days, ratio, Exec::default())
}

pub fn track_sequence_with(days: &mut [FrontSet], ratio: f64, exec: Exec) -> TrackSet {
    let mut ts = TrackSet {
        next_id: 1,
        ..Default::default()
    };
    for d in 0..days.len() {
        let ids = if d == 0 {
            let ids: Vec<u64> = (0..days[0].len() as u64).map(|i| i + 1).collect();
            ts.next_id = ids.len() as u64 + 1;
            ids
        } else {
            let (before, after) = days.split_at_mut(d);
            match_day_pair_with(&before[d - 1], &after[0], ratio, &mut ts.next_id, exec)
        };
        for (f, &id) in days[d].fronts.iter_mut().zip(&ids) {
            f.id = id;
            *ts.lifetimes.entry(id).or_default() += 1;
        }
        if d > 0 {
            let a: BTreeSet<u64> = ts.assignments[d - 1].iter().copied().collect();
            let b: BTreeSet<u64> = ids.iter().copied().collect();
            ts.iou.push(iou(&a, &b));
        }
        ts.assignments.push(ids);
    }
    ts
}
