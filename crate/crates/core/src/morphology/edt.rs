//! Exact Euclidean distance transform (Felzenszwalb–Huttenlocher lower
//! envelope of parabolas, one pass per axis).

use super::BitMask;
use crate::exec::Exec;

/// 1-D squared distance transform of `f` (0 at features, `INF` elsewhere).
/// Only finite samples enter the lower envelope.
fn dt_1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let mut k: Option<usize> = None;
    for q in 0..f.len() {
        if f[q].is_infinite() {
            continue;
        }
        let Some(mut kk) = k else {
            k = Some(0);
            v[0] = q;
            z[0] = f64::NEG_INFINITY;
            z[1] = f64::INFINITY;
            continue;
        };
        loop {
            let p = v[kk];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64);
            if s <= z[kk] {
                // z[0] is -INF, so this never underflows
                kk -= 1;
                continue;
            }
            kk += 1;
            v[kk] = q;
            z[kk] = s;
            z[kk + 1] = f64::INFINITY;
            break;
        }
        k = Some(kk);
    }
    if k.is_none() {
        out.iter_mut().for_each(|o| *o = f64::INFINITY);
        return;
    }
    let mut k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let d = q as f64 - p as f64;
        *o = d * d + f[p];
    }
}

/// Squared Euclidean distance from every cell to the nearest `true` cell of
/// `features` (a `rows × cols` raster). `INF` when there are no features.
pub fn squared_distance_to_features(features: &[bool], rows: usize, cols: usize, exec: Exec) -> Vec<f64> {
    assert_eq!(features.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    // columns first, stored transposed so each pass works on contiguous rows
    let mut colwise = vec![0.0; rows * cols];
    exec.for_each_row(&mut colwise, rows, |c, out| {
        let f: Vec<f64> = (0..rows)
            .map(|r| if features[r * cols + c] { 0.0 } else { f64::INFINITY })
            .collect();
        let mut v = vec![0; rows];
        let mut z = vec![0.0; rows + 1];
        dt_1d(&f, out, &mut v, &mut z);
    });
    let mut result = vec![0.0; rows * cols];
    exec.for_each_row(&mut result, cols, |r, out| {
        let f: Vec<f64> = (0..cols).map(|c| colwise[c * rows + r]).collect();
        let mut v = vec![0; cols];
        let mut z = vec![0.0; cols + 1];
        dt_1d(&f, out, &mut v, &mut z);
    });
    result
}

/// Euclidean distance to the nearest feature cell; `INF` when none exist.
pub fn distance_to_features(features: &[bool], rows: usize, cols: usize, exec: Exec) -> Vec<f64> {
    let mut d = squared_distance_to_features(features, rows, cols, exec);
    d.iter_mut().for_each(|x| *x = x.sqrt());
    d
}

/// Squared distance from every set pixel of `mask` to the nearest unset pixel,
/// treating everything outside the grid as unset. Unset pixels get 0.
pub fn distance_to_background(mask: &BitMask, exec: Exec) -> Vec<f64> {
    let (rows, cols) = (mask.n_rows + 2, mask.n_cols + 2);
    let mut bg = vec![true; rows * cols];
    for (r, c) in mask.pixels() {
        bg[(r + 1) * cols + c + 1] = false;
    }
    let padded = squared_distance_to_features(&bg, rows, cols, exec);
    let mut out = Vec::with_capacity(mask.n_rows * mask.n_cols);
    for r in 0..mask.n_rows {
        out.extend_from_slice(&padded[(r + 1) * cols + 1..(r + 1) * cols + 1 + mask.n_cols]);
    }
    out
}
