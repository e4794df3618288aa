//! Merging fronts whose ends lie close together, filling the gap
//! diagonal-first.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use super::{FrontRecord, FrontSet, Pixel};
use crate::gradient::GradientField;

pub const MERGE_RADIUS: usize = 3;

/// Cells strictly between `a` and `b`, stepping diagonally while both
/// coordinates differ and straight afterwards.
pub fn fill_gap(a: Pixel, b: Pixel) -> Vec<Pixel> {
    let mut out = Vec::new();
    let (mut r, mut c) = (a.0 as isize, a.1 as isize);
    let (br, bc) = (b.0 as isize, b.1 as isize);
    loop {
        r += (br - r).signum();
        c += (bc - c).signum();
        if (r, c) == (br, bc) {
            return out;
        }
        out.push((r as usize, c as usize));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Head,
    Tail,
}

fn end_of(f: &FrontRecord, e: End) -> Pixel {
    match e {
        End::Head => f.points[0],
        End::Tail => *f.points.last().expect("fronts are non-empty"),
    }
}

/// Circular mean gradient direction over the three points nearest `end`.
fn end_direction(f: &FrontRecord, e: End, field: &GradientField) -> Option<f64> {
    let n = f.points.len().min(3);
    let pts: Vec<Pixel> = match e {
        End::Head => f.points[..n].to_vec(),
        End::Tail => f.points[f.points.len() - n..].to_vec(),
    };
    let (mut s, mut c, mut k) = (0.0, 0.0, 0);
    for (r, col) in pts {
        let i = field.index(r, col);
        if field.valid[i] {
            s += field.dir[i].sin();
            c += field.dir[i].cos();
            k += 1;
        }
    }
    (k > 0).then(|| s.atan2(c))
}

fn circular_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % (2.0 * PI);
    d.min(2.0 * PI - d)
}

struct Candidate {
    q: usize,
    p_end: End,
    q_end: End,
    dist_sq: usize,
    dir_diff: f64,
    fill: Vec<Pixel>,
}

impl Candidate {
    /// Nearer first, then more similar direction, then lower index, head
    /// before tail.
    fn beats(&self, other: &Candidate) -> bool {
        let order = |c: &Candidate| (c.q, c.p_end == End::Tail, c.q_end == End::Tail);
        match (self.dist_sq, self.dir_diff).partial_cmp(&(other.dist_sq, other.dir_diff)) {
            Some(std::cmp::Ordering::Less) => true,
            Some(std::cmp::Ordering::Equal) => order(self) < order(other),
            _ => false,
        }
    }
}

/// Joins front `p` at `p_end` to front `q` at `q_end` with the fill between.
fn join(p: &FrontRecord, p_end: End, q: &FrontRecord, q_end: End, fill: &[Pixel]) -> Vec<Pixel> {
    let mut p_pts = p.points.clone();
    let mut q_pts = q.points.clone();
    // orient so p runs into the joint and q runs away from it
    if p_end == End::Head {
        p_pts.reverse();
    }
    if q_end == End::Tail {
        q_pts.reverse();
    }
    let mut out = p_pts;
    out.extend_from_slice(fill);
    out.extend(q_pts);
    out
}

/// Repeatedly merges the nearest end-to-end pair within Chebyshev `radius`.
///
/// Fronts are scanned in index order; for the first front with admissible
/// partners the nearest one (squared Euclidean distance between the joining
/// ends, then smallest gradient-direction difference, then lowest index) is
/// merged into it and the scan restarts. A pair is admissible only when its
/// fill cells are free, so merged fronts stay simple and disjoint.
///
/// A merge only removes end positions and only occupies cells, so fronts
/// before the merged one still have no partner and the restarted scan can
/// resume at the merged front.
pub fn merge_and_fill(fs: &FrontSet, radius: usize, field: &GradientField) -> FrontSet {
    merge_seeded(fs, radius, field, 0)
}

/// As [`merge_and_fill`], but a pair is admissible only when at least one of
/// the two fronts has `min_seed_len` points or more.
pub fn merge_seeded(fs: &FrontSet, radius: usize, field: &GradientField, min_seed_len: usize) -> FrontSet {
    let mut slots: Vec<Option<FrontRecord>> = fs.fronts.iter().filter(|f| !f.is_empty()).cloned().map(Some).collect();
    let mut occupied: HashSet<Pixel> = slots.iter().flatten().flat_map(|f| f.points.iter().copied()).collect();
    // fronts are disjoint, so each end pixel belongs to one slot
    let mut ends: HashMap<Pixel, usize> = HashMap::new();
    for (i, f) in slots.iter().enumerate() {
        let f = f.as_ref().expect("all slots filled");
        ends.insert(end_of(f, End::Head), i);
        ends.insert(end_of(f, End::Tail), i);
    }
    let r = radius as isize;

    let mut p = 0;
    while p < slots.len() {
        let Some(front_p) = slots[p].as_ref() else {
            p += 1;
            continue;
        };
        let mut best: Option<Candidate> = None;
        for p_end in [End::Head, End::Tail] {
            let a = end_of(front_p, p_end);
            for dr in -r..=r {
                for dc in -r..=r {
                    let (br, bc) = (a.0 as isize + dr, a.1 as isize + dc);
                    if br < 0 || bc < 0 {
                        continue;
                    }
                    let b = (br as usize, bc as usize);
                    let Some(&q) = ends.get(&b) else { continue };
                    if q == p {
                        continue;
                    }
                    let front_q = slots[q].as_ref().expect("indexed slots are live");
                    if front_p.len() < min_seed_len && front_q.len() < min_seed_len {
                        continue;
                    }
                    for q_end in [End::Head, End::Tail] {
                        if end_of(front_q, q_end) != b {
                            continue;
                        }
                        let fill = fill_gap(a, b);
                        if fill.iter().any(|x| occupied.contains(x)) {
                            continue;
                        }
                        let dir_diff = match (end_direction(front_p, p_end, field), end_direction(front_q, q_end, field)) {
                            (Some(x), Some(y)) => circular_diff(x, y),
                            _ => PI,
                        };
                        let (dr, dc) = (dr.unsigned_abs(), dc.unsigned_abs());
                        let cand = Candidate {
                            q,
                            p_end,
                            q_end,
                            dist_sq: dr * dr + dc * dc,
                            dir_diff,
                            fill,
                        };
                        if best.as_ref().is_none_or(|b| cand.beats(b)) {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
        let Some(c) = best else {
            p += 1;
            continue;
        };
        let fp = slots[p].take().expect("live");
        let fq = slots[c.q].take().expect("live");
        for f in [&fp, &fq] {
            ends.remove(&end_of(f, End::Head));
            ends.remove(&end_of(f, End::Tail));
        }
        let merged = FrontRecord {
            id: fp.id,
            points: join(&fp, c.p_end, &fq, c.q_end, &c.fill),
            ..Default::default()
        };
        occupied.extend(c.fill.iter().copied());
        let new_ends = [end_of(&merged, End::Head), end_of(&merged, End::Tail)];
        for e in new_ends {
            ends.insert(e, p);
        }
        let grown_seed = min_seed_len > 0 && merged.len() >= min_seed_len;
        slots[p] = Some(merged);
        // a front that just became a seed may pair with earlier short fronts
        if grown_seed {
            for e in new_ends {
                for dr in -r..=r {
                    for dc in -r..=r {
                        let (br, bc) = (e.0 as isize + dr, e.1 as isize + dc);
                        if br >= 0 && bc >= 0 {
                            if let Some(&o) = ends.get(&(br as usize, bc as usize)) {
                                p = p.min(o);
                            }
                        }
                    }
                }
            }
        }
    }
    FrontSet {
        fronts: slots.into_iter().flatten().collect(),
        source_day: fs.source_day,
    }
}
