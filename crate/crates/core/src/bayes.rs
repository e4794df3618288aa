//! Frontal-zone classification.
//!
//! Gradient magnitudes are split by two percentile thresholds into frontal,
//! non-frontal and undetermined cells. Each undetermined cell `E` is then
//! resolved by comparing `P(fact|front)·P(front)` against
//! `P(fact|non)·P(non)`:
//!
//! * the prior is linear in the magnitude between the lower and upper
//!   thresholds;
//! * the likelihood counts how many stronger (resp. weaker) cells have a local
//!   degree of edge (LDE) and block deviation (BD) within a tolerance of `E`'s.
//!
//! LDE and BD come from the eight raw field values around `E`, labelled
//!
//! ```text
//! A B C
//! D E F
//! G H I
//! ```
//!
//! and evaluated over the opposing pairs A–I, B–H, C–G and D–F.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gradient::{sobel_gradient_with, GradientField};
use crate::grid::ScalarGrid;

pub const DEFAULT_P_HI: f64 = 0.10;
pub const DEFAULT_P_LO: f64 = 0.20;
pub const DEFAULT_LDE_BD_TOL: f64 = 0.1;

/// Upper and lower magnitude thresholds taken from the descending CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub u_u: f64,
    pub u_l: f64,
    pub p_hi: f64,
    pub p_lo: f64,
}

impl Thresholds {
    pub fn is_degenerate(&self) -> bool {
        self.u_u == self.u_l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Zone {
    Frontal,
    Undetermined,
    NonFrontal,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZoneMask {
    pub n_rows: usize,
    pub n_cols: usize,
    pub labels: Vec<Zone>,
}

impl ZoneMask {
    pub fn count(&self, zone: Zone) -> usize {
        self.labels.iter().filter(|&&z| z == zone).count()
    }

    /// Frontal cells as a bit mask.
    pub fn frontal(&self) -> crate::morphology::BitMask {
        crate::morphology::BitMask::from_bits(
            self.n_rows,
            self.n_cols,
            self.labels.iter().map(|&z| z == Zone::Frontal).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborStats {
    pub lde: f64,
    pub bd: f64,
}

/// 1-based rank `ceil(p·n)`, clamped to `[1, n]`.
///
/// A relative slack of 1e-9 absorbs products such as `0.1 × 30` that land a
/// hair above an integer in binary floating point.
pub(crate) fn percentile_rank(p: f64, n: usize) -> usize {
    let x = p * n as f64;
    let k = (x - 1e-9 * x.abs().max(1.0)).ceil();
    (k.max(1.0) as usize).min(n)
}

pub fn thresholds_from_cdf(field: &GradientField, p_hi: f64, p_lo: f64) -> Result<Thresholds> {
    if !(p_hi > 0.0 && p_hi <= p_lo && p_lo < 1.0) {
        return Err(Error::Argument(format!(
            "percentiles must satisfy 0 < p_hi <= p_lo < 1 (p_hi={p_hi}, p_lo={p_lo})"
        )));
    }
    let mut mags = field.valid_magnitudes();
    if mags.is_empty() {
        return Err(Error::EmptyField);
    }
    mags.sort_unstable_by(|a, b| b.total_cmp(a));
    let n = mags.len();
    Ok(Thresholds {
        u_u: mags[percentile_rank(p_hi, n) - 1],
        u_l: mags[percentile_rank(p_lo, n) - 1],
        p_hi,
        p_lo,
    })
}

pub fn classify_three_way(field: &GradientField, th: &Thresholds) -> ZoneMask {
    let labels = field
        .mag
        .iter()
        .zip(&field.valid)
        .map(|(&m, &ok)| {
            if !ok {
                Zone::Invalid
            } else if m > th.u_u {
                Zone::Frontal
            } else if m < th.u_l {
                Zone::NonFrontal
            } else {
                Zone::Undetermined
            }
        })
        .collect();
    ZoneMask {
        n_rows: field.n_rows,
        n_cols: field.n_cols,
        labels,
    }
}

/// `(P(front), P(non))` for a magnitude inside the undetermined band.
pub fn prior(t_e: f64, th: &Thresholds) -> Result<(f64, f64)> {
    if th.is_degenerate() {
        return Err(Error::DegenerateThresholds(th.u_u));
    }
    let p_front = ((t_e - th.u_l) / (th.u_u - th.u_l)).clamp(0.0, 1.0);
    Ok((p_front, 1.0 - p_front))
}

/// LDE and BD of a center cell from its eight neighbors `[A, B, C, D, F, G, H, I]`.
///
/// A flat neighborhood carries no edge evidence and maps to `(0.5, 0.0)`.
pub fn lde_bd(v: &[f64; 8]) -> NeighborStats {
    let v_max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let v_min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let range = v_max - v_min;
    if range == 0.0 {
        return NeighborStats { lde: 0.5, bd: 0.0 };
    }
    let mean = v.iter().sum::<f64>() / 8.0;
    let mut lde = 0.0;
    let mut bd = 0.0;
    for (a, b) in [(0, 7), (1, 6), (2, 5), (3, 4)] {
        let diff = (v[a] - v[b]).abs();
        lde += 4.0 / 7.0 * (v_max - mean - diff) / range + 0.5;
        bd += diff / range;
    }
    NeighborStats {
        lde: lde / 4.0,
        bd: bd / 4.0,
    }
}

/// The eight neighbors of `(r, c)` in `[A, B, C, D, F, G, H, I]` order.
#[inline]
pub(crate) fn neighbors8(grid: &ScalarGrid, r: usize, c: usize) -> [f64; 8] {
    [
        grid.value(r - 1, c - 1),
        grid.value(r - 1, c),
        grid.value(r - 1, c + 1),
        grid.value(r, c - 1),
        grid.value(r, c + 1),
        grid.value(r + 1, c - 1),
        grid.value(r + 1, c),
        grid.value(r + 1, c + 1),
    ]
}

/// LDE/BD for every cell with a valid gradient (those have complete
/// neighborhoods); `None` elsewhere.
pub fn neighbor_stats_field(grid: &ScalarGrid, field: &GradientField, exec: Exec) -> Vec<Option<NeighborStats>> {
    let n_cols = field.n_cols;
    exec.map_range(field.len(), |i| {
        field.valid[i].then(|| lde_bd(&neighbors8(grid, i / n_cols, i % n_cols)))
    })
}

/// `(P(fact|front), P(fact|non))` for one cell by direct counting over all
/// valid cells. An empty reference set gives likelihood 1.
pub fn likelihood(cell: usize, field: &GradientField, all_stats: &[Option<NeighborStats>], tol: f64) -> (f64, f64) {
    let s = all_stats[cell].expect("likelihood of a cell without neighbor stats");
    let t = field.mag[cell];
    let (mut f, mut f_lde, mut f_bd) = (0usize, 0usize, 0usize);
    let (mut nf, mut nf_lde, mut nf_bd) = (0usize, 0usize, 0usize);
    for (j, o) in all_stats.iter().enumerate() {
        let Some(o) = o else { continue };
        let m = field.mag[j];
        let close_lde = (o.lde - s.lde).abs() < tol;
        let close_bd = (o.bd - s.bd).abs() < tol;
        if m > t {
            f += 1;
            f_lde += close_lde as usize;
            f_bd += close_bd as usize;
        } else if m < t {
            nf += 1;
            nf_lde += close_lde as usize;
            nf_bd += close_bd as usize;
        }
    }
    (ratio_product(f_lde, f_bd, f), ratio_product(nf_lde, nf_bd, nf))
}

#[inline]
fn ratio_product(a: usize, b: usize, n: usize) -> f64 {
    if n == 0 {
        1.0
    } else {
        (a as f64 / n as f64) * (b as f64 / n as f64)
    }
}

/// Frontal iff `l_front·p_front >= l_non·p_non`.
pub fn bayes_decide(prior: (f64, f64), likelihood: (f64, f64)) -> Zone {
    if likelihood.0 * prior.0 >= likelihood.1 * prior.1 {
        Zone::Frontal
    } else {
        Zone::NonFrontal
    }
}

/// Fenwick tree over value ranks.
struct Fenwick(Vec<u32>);

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick(vec![0; n + 1])
    }

    fn add(&mut self, i: usize) {
        let mut i = i + 1;
        while i < self.0.len() {
            self.0[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Count of inserted ranks in `[0, i)`.
    fn prefix(&self, mut i: usize) -> usize {
        let mut s = 0;
        while i > 0 {
            s += self.0[i] as usize;
            i &= i - 1;
        }
        s
    }

    fn range(&self, lo: usize, hi: usize) -> usize {
        if hi <= lo {
            0
        } else {
            self.prefix(hi) - self.prefix(lo)
        }
    }
}

/// Sorted coordinate axis for one statistic.
struct Axis {
    sorted: Vec<f64>,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>) -> Self {
        let mut sorted: Vec<f64> = values.collect();
        sorted.sort_unstable_by(|a, b| a.total_cmp(b));
        sorted.dedup();
        Axis { sorted }
    }

    fn rank(&self, x: f64) -> usize {
        self.sorted.partition_point(|&v| v < x)
    }

    /// Rank interval of values `v` with `|v - x| < tol`; the predicate is
    /// monotone in `v` so the set is contiguous.
    fn window(&self, x: f64, tol: f64) -> (usize, usize) {
        let lo = self.sorted.partition_point(|&v| v - x <= -tol);
        let hi = self.sorted.partition_point(|&v| v - x < tol);
        (lo, hi)
    }
}

/// Counts for all query cells at once; equal to calling [`likelihood`] per cell.
fn batch_likelihood(
    field: &GradientField,
    stats: &[Option<NeighborStats>],
    queries: &[usize],
    tol: f64,
    exec: Exec,
) -> Vec<(f64, f64)> {
    struct Item {
        mag: f64,
        lde_rank: usize,
        bd_rank: usize,
    }
    let lde_axis = Axis::new(stats.iter().flatten().map(|s| s.lde));
    let bd_axis = Axis::new(stats.iter().flatten().map(|s| s.bd));
    let mut items: Vec<Item> = stats
        .iter()
        .enumerate()
        .filter_map(|(i, s)| {
            s.map(|s| Item {
                mag: field.mag[i],
                lde_rank: lde_axis.rank(s.lde),
                bd_rank: bd_axis.rank(s.bd),
            })
        })
        .collect();
    items.sort_unstable_by(|a, b| a.mag.total_cmp(&b.mag));

    // (mag, lde window, bd window) per query
    let windows = exec.map_slice(queries, |&q| {
        let s = stats[q].expect("query cell without neighbor stats");
        (field.mag[q], lde_axis.window(s.lde, tol), bd_axis.window(s.bd, tol))
    });

    let mut order: Vec<usize> = (0..queries.len()).collect();
    order.sort_unstable_by(|&a, &b| windows[a].0.total_cmp(&windows[b].0));

    let sweep = |ascending: bool| -> Vec<f64> {
        let mut out = vec![0.0; queries.len()];
        let mut lde_tree = Fenwick::new(lde_axis.sorted.len());
        let mut bd_tree = Fenwick::new(bd_axis.sorted.len());
        let mut inserted = 0usize;
        let item_iter: Box<dyn Iterator<Item = &Item>> = if ascending {
            Box::new(items.iter())
        } else {
            Box::new(items.iter().rev())
        };
        let mut item_iter = item_iter.peekable();
        let query_iter: Box<dyn Iterator<Item = &usize>> = if ascending {
            Box::new(order.iter())
        } else {
            Box::new(order.iter().rev())
        };
        for &qi in query_iter {
            let (t, (l0, l1), (b0, b1)) = windows[qi];
            while let Some(item) = item_iter.peek() {
                let beyond = if ascending { item.mag < t } else { item.mag > t };
                if !beyond {
                    break;
                }
                lde_tree.add(item.lde_rank);
                bd_tree.add(item.bd_rank);
                inserted += 1;
                item_iter.next();
            }
            out[qi] = ratio_product(lde_tree.range(l0, l1), bd_tree.range(b0, b1), inserted);
        }
        out
    };
    let front = sweep(false);
    let non = sweep(true);
    front.into_iter().zip(non).collect()
}

/// Resolves every undetermined cell of `three_way` with the Bayesian rule.
///
/// When the thresholds coincide the undetermined band has no spread to build a
/// prior from, and it is declared non-frontal.
pub fn resolve_bayesian(
    grid: &ScalarGrid,
    field: &GradientField,
    th: &Thresholds,
    three_way: &ZoneMask,
    tol: f64,
    exec: Exec,
) -> ZoneMask {
    let mut labels = three_way.labels.clone();
    let queries: Vec<usize> = (0..labels.len())
        .filter(|&i| labels[i] == Zone::Undetermined)
        .collect();
    if th.is_degenerate() {
        for &q in &queries {
            labels[q] = Zone::NonFrontal;
        }
    } else if !queries.is_empty() {
        let stats = neighbor_stats_field(grid, field, exec);
        let likes = batch_likelihood(field, &stats, &queries, tol, exec);
        let decisions = exec.map_range(queries.len(), |k| {
            let p = prior(field.mag[queries[k]], th).expect("thresholds are not degenerate");
            bayes_decide(p, likes[k])
        });
        for (&q, z) in queries.iter().zip(decisions) {
            labels[q] = z;
        }
    }
    ZoneMask {
        n_rows: three_way.n_rows,
        n_cols: three_way.n_cols,
        labels,
    }
}

/// Double-threshold hysteresis: undetermined cells become frontal iff they
/// are 8-connected to a frontal cell through undetermined cells.
pub fn resolve_hysteresis(three_way: &ZoneMask) -> ZoneMask {
    let (n_rows, n_cols) = (three_way.n_rows, three_way.n_cols);
    let mut labels = three_way.labels.clone();
    let mut queue: VecDeque<usize> = (0..labels.len()).filter(|&i| labels[i] == Zone::Frontal).collect();
    while let Some(i) = queue.pop_front() {
        let (r, c) = (i / n_cols, i % n_cols);
        for rr in r.saturating_sub(1)..=(r + 1).min(n_rows - 1) {
            for cc in c.saturating_sub(1)..=(c + 1).min(n_cols - 1) {
                let j = rr * n_cols + cc;
                if labels[j] == Zone::Undetermined {
                    labels[j] = Zone::Frontal;
                    queue.push_back(j);
                }
            }
        }
    }
    for z in labels.iter_mut() {
        if *z == Zone::Undetermined {
            *z = Zone::NonFrontal;
        }
    }
    ZoneMask { n_rows, n_cols, labels }
}

/// Parameters of the zone classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZoneParams {
    pub p_hi: f64,
    pub p_lo: f64,
    pub lde_bd_tol: f64,
}

impl Default for ZoneParams {
    fn default() -> Self {
        Self {
            p_hi: DEFAULT_P_HI,
            p_lo: DEFAULT_P_LO,
            lde_bd_tol: DEFAULT_LDE_BD_TOL,
        }
    }
}

/// Gradient, thresholds, three-way split and Bayesian resolution in one call.
pub fn detect_frontal_zone(grid: &ScalarGrid, params: &ZoneParams) -> Result<ZoneMask> {
    detect_frontal_zone_with(grid, params, Exec::default()).map(|(zone, _)| zone)
}

/// As [`detect_frontal_zone`], also returning the gradient field.
pub fn detect_frontal_zone_with(
    grid: &ScalarGrid,
    params: &ZoneParams,
    exec: Exec,
) -> Result<(ZoneMask, GradientField)> {
    let field = sobel_gradient_with(grid, exec)?;
    let th = thresholds_from_cdf(&field, params.p_hi, params.p_lo)?;
    let three = classify_three_way(&field, &th);
    let zone = resolve_bayesian(grid, &field, &th, &three, params.lde_bd_tol, exec);
    Ok((zone, field))
}
