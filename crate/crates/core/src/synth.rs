//! Synthetic fields with known fronts.
//!
//! A field is `base + Σ amplitude·tanh(d(cell, curve)/half_width) + noise`,
//! where `d` is the signed distance from the cell centre to a polyline given
//! in `(row, col)` pixel coordinates. Noise is Gaussian from a SplitMix64
//! stream transformed by Box–Muller, drawn in raster order, so a seed fixes
//! the field bit for bit.

use std::path::Path;

use serde_json::{json, Value};

use crate::config::parse_pairs;
use crate::error::{Error, Result};
use crate::fronts::FrontSet;
use crate::grid::ScalarGrid;

pub type Polyline = Vec<(f64, f64)>;

/// SplitMix64 (Steele, Lea & Flood), 64-bit state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Standard normal deviates, two per Box–Muller draw.
#[derive(Debug, Clone)]
pub struct Gaussian {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl Gaussian {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::new(seed),
            spare: None,
        }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.rng.next_f64();
        let u2 = self.rng.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let a = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * a.sin());
        r * a.cos()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n_rows: usize,
    pub n_cols: usize,
    pub curves: Vec<Polyline>,
    pub amplitude: f64,
    pub half_width: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    pub base: f64,
    /// `(lat0, lon0, d_lat, d_lon)`.
    pub geometry: (f64, f64, f64, f64),
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_rows: 200,
            n_cols: 200,
            curves: Vec::new(),
            amplitude: 2.0,
            half_width: 2.0,
            noise_sigma: 0.05,
            seed: 0,
            base: 20.0,
            geometry: (0.0, 0.0, 0.05, 0.05),
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Argument(m));
        if self.n_rows < 3 || self.n_cols < 3 {
            return bad(format!("grid must be at least 3x3, got {}x{}", self.n_rows, self.n_cols));
        }
        let at_least = |x: f64, lo: f64| x >= lo;
        if !at_least(self.amplitude, 0.0) || !at_least(self.half_width, 1.0) || !at_least(self.noise_sigma, 0.0) {
            return bad("need amplitude >= 0, half_width >= 1, noise_sigma >= 0".into());
        }
        for c in &self.curves {
            if c.len() < 2 {
                return bad("each curve needs at least 2 points".into());
            }
            let (rmax, cmax) = ((self.n_rows - 1) as f64, (self.n_cols - 1) as f64);
            if c.iter().any(|&(r, col)| !(0.0..=rmax).contains(&r) || !(0.0..=cmax).contains(&col)) {
                return bad("curve point outside the grid".into());
            }
        }
        Ok(())
    }

    /// Parses `key = value` text. `curve = r,c; r,c; ...` may repeat.
    pub fn parse(text: &str) -> Result<Self> {
        let pairs = parse_pairs(text).map_err(|(l, m)| Error::Config(format!("line {l}: {m}")))?;
        let mut s = SynthSpec::default();
        for (line, k, v) in pairs {
            let err = || Error::Config(format!("line {line}: {k}: cannot parse {v:?}"));
            let num = || v.parse::<f64>().map_err(|_| err());
            match k.as_str() {
                "n_rows" => s.n_rows = v.parse().map_err(|_| err())?,
                "n_cols" => s.n_cols = v.parse().map_err(|_| err())?,
                "amplitude" => s.amplitude = num()?,
                "half_width" => s.half_width = num()?,
                "noise_sigma" => s.noise_sigma = num()?,
                "seed" => s.seed = v.parse().map_err(|_| err())?,
                "base" => s.base = num()?,
                "lat0" => s.geometry.0 = num()?,
                "lon0" => s.geometry.1 = num()?,
                "d_lat" => s.geometry.2 = num()?,
                "d_lon" => s.geometry.3 = num()?,
                "curve" => {
                    let pts = v
                        .split(';')
                        .map(|p| {
                            let (r, c) = p.split_once(',').ok_or_else(err)?;
                            Ok((
                                r.trim().parse().map_err(|_| err())?,
                                c.trim().parse().map_err(|_| err())?,
                            ))
                        })
                        .collect::<Result<Vec<(f64, f64)>>>()?;
                    s.curves.push(pts);
                }
                _ => return Err(Error::Config(format!("line {line}: unknown key {k:?}"))),
            }
        }
        s.validate()?;
        Ok(s)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) | Error::Argument(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    let cross = dx * (p.1 - a.1) - dy * (p.0 - a.0);
    ((p.0 - qx).hypot(p.1 - qy), cross)
}

/// Unsigned distance from `p` to the polyline.
pub fn polyline_distance(p: (f64, f64), curve: &[(f64, f64)]) -> f64 {
    match curve {
        [] => f64::INFINITY,
        [a] => (p.0 - a.0).hypot(p.1 - a.1),
        _ => curve
            .windows(2)
            .map(|w| segment_distance(p, w[0], w[1]).0)
            .fold(f64::INFINITY, f64::min),
    }
}

/// Distance to the polyline, negative on the left of the nearest segment
/// (positive cross product in `(row, col)` order).
pub fn signed_distance(p: (f64, f64), curve: &[(f64, f64)]) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    for w in curve.windows(2) {
        let d = segment_distance(p, w[0], w[1]);
        if d.0 < best.0 {
            best = d;
        }
    }
    if best.1 > 0.0 {
        -best.0
    } else {
        best.0
    }
}

pub fn synth_field(spec: &SynthSpec) -> Result<(ScalarGrid, Vec<Polyline>)> {
    spec.validate()?;
    let mut noise = Gaussian::new(spec.seed);
    let mut values = Vec::with_capacity(spec.n_rows * spec.n_cols);
    for r in 0..spec.n_rows {
        for c in 0..spec.n_cols {
            let p = (r as f64, c as f64);
            let mut v = spec.base;
            for curve in &spec.curves {
                v += spec.amplitude * (signed_distance(p, curve) / spec.half_width).tanh();
            }
            if spec.noise_sigma > 0.0 {
                v += spec.noise_sigma * noise.sample();
            }
            values.push(v as f32);
        }
    }
    let (lat0, lon0, d_lat, d_lon) = spec.geometry;
    let grid = ScalarGrid::from_values(spec.n_rows, spec.n_cols, values)?.with_geometry(lat0, lon0, d_lat, d_lon)?;
    Ok((grid, spec.curves.clone()))
}

/// Samples each polyline at spacing ≤ 1 px, vertices included.
pub fn densify(curves: &[Polyline]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for c in curves {
        if let Some(&first) = c.first() {
            out.push(first);
        }
        for w in c.windows(2) {
            let (a, b) = (w[0], w[1]);
            let steps = (a.0 - b.0).hypot(a.1 - b.1).ceil().max(1.0) as usize;
            for i in 1..=steps {
                let t = i as f64 / steps as f64;
                out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
            }
        }
    }
    out
}

pub const RECALL_RADIUS_PX: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthScore {
    /// Mean distance from detected points to the nearest truth curve, px;
    /// missing when nothing was detected.
    pub loc_error: Option<f64>,
    /// Fraction of densified truth points within 2 px of a detected point.
    pub recall: f64,
}

pub fn truth_score(detected: &FrontSet, truth: &[Polyline]) -> TruthScore {
    let pts: Vec<(f64, f64)> = detected
        .fronts
        .iter()
        .flat_map(|f| f.points.iter().map(|&(r, c)| (r as f64, c as f64)))
        .collect();
    if pts.is_empty() {
        return TruthScore {
            loc_error: None,
            recall: 0.0,
        };
    }
    let loc = pts
        .iter()
        .map(|&p| truth.iter().map(|c| polyline_distance(p, c)).fold(f64::INFINITY, f64::min))
        .sum::<f64>()
        / pts.len() as f64;
    let dense = densify(truth);
    let hit = dense
        .iter()
        .filter(|&&t| pts.iter().any(|&p| (p.0 - t.0).hypot(p.1 - t.1) <= RECALL_RADIUS_PX))
        .count();
    TruthScore {
        loc_error: Some(loc),
        recall: if dense.is_empty() { 0.0 } else { hit as f64 / dense.len() as f64 },
    }
}

pub fn truth_to_json(curves: &[Polyline]) -> Value {
    json!({
        "curves": curves
            .iter()
            .map(|c| c.iter().map(|&(r, col)| json!([r, col])).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    })
}

pub fn write_truth(curves: &[Polyline], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(&truth_to_json(curves)).expect("JSON values always serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_truth(path: impl AsRef<Path>) -> Result<Vec<Polyline>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::format(path, e.line(), e.to_string()))?;
    let bad = || Error::format(path, 0, "expected {\"curves\": [[[row, col], ...], ...]}");
    doc.get("curves")
        .and_then(Value::as_array)
        .ok_or_else(bad)?
        .iter()
        .map(|c| {
            c.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|p| match p.as_array().map(|a| a.as_slice()) {
                    Some([r, col]) => Ok((r.as_f64().ok_or_else(bad)?, col.as_f64().ok_or_else(bad)?)),
                    _ => Err(bad()),
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fronts::FrontRecord;
    use crate::gradient::sobel_gradient;

    fn vertical(col: f64, n: usize) -> Polyline {
        vec![(0.0, col), ((n - 1) as f64, col)]
    }

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 1234567, from the reference C implementation
        let mut r = SplitMix64::new(1234567);
        assert_eq!(r.next_u64(), 6457827717110365317);
        assert_eq!(r.next_u64(), 3203168211198807973);
        assert_eq!(r.next_u64(), 9817491932198370423);
    }

    #[test]
    fn gaussian_moments() {
        let mut g = Gaussian::new(7);
        let xs: Vec<f64> = (0..200_000).map(|_| g.sample()).collect();
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(m.abs() < 0.01 && (v - 1.0).abs() < 0.01, "mean {m} var {v}");
    }

    #[test]
    fn zero_amplitude_is_constant() {
        let spec = SynthSpec {
            n_rows: 10,
            n_cols: 12,
            curves: vec![vertical(5.0, 10)],
            amplitude: 0.0,
            noise_sigma: 0.0,
            ..Default::default()
        };
        let (g, _) = synth_field(&spec).unwrap();
        assert!(g.values().iter().all(|&v| v == 20.0));
    }

    #[test]
    fn step_peaks_on_its_column() {
        let spec = SynthSpec {
            n_rows: 30,
            n_cols: 40,
            curves: vec![vertical(17.0, 30)],
            noise_sigma: 0.0,
            ..Default::default()
        };
        let (g, _) = synth_field(&spec).unwrap();
        let f = sobel_gradient(&g).unwrap();
        for r in 1..29 {
            let row: Vec<f64> = (1..39).map(|c| f.mag[f.index(r, c)]).collect();
            let best = (1..39).max_by(|&a, &b| row[a - 1].total_cmp(&row[b - 1])).unwrap();
            assert_eq!(best, 17, "row {r}");
        }
    }

    #[test]
    fn seed_determinism() {
        let spec = SynthSpec {
            n_rows: 20,
            n_cols: 20,
            curves: vec![vertical(9.0, 20)],
            seed: 99,
            ..Default::default()
        };
        let (a, _) = synth_field(&spec).unwrap();
        let (b, _) = synth_field(&spec).unwrap();
        assert!(a.values().iter().zip(b.values()).all(|(x, y)| x.to_bits() == y.to_bits()));
        let (c, _) = synth_field(&SynthSpec { seed: 100, ..spec }).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn signed_distance_sides() {
        let c = vertical(5.0, 11);
        assert_eq!(signed_distance((3.0, 8.0), &c), -3.0);
        assert_eq!(signed_distance((3.0, 2.0), &c), 3.0);
        assert_eq!(signed_distance((3.0, 5.0), &c), 0.0);
    }

    #[test]
    fn scoring() {
        let truth = vec![vec![(0.0, 5.0), (10.0, 5.0)]];
        let on: Vec<(usize, usize)> = (0..=10).map(|r| (r, 5)).collect();
        let s = truth_score(&FrontSet::new(vec![FrontRecord::from_points(on)]), &truth);
        assert_eq!(s, TruthScore { loc_error: Some(0.0), recall: 1.0 });

        let off: Vec<(usize, usize)> = (0..=10).map(|r| (r, 6)).collect();
        let s = truth_score(&FrontSet::new(vec![FrontRecord::from_points(off)]), &truth);
        assert_eq!(s.loc_error, Some(1.0));

        let s = truth_score(&FrontSet::default(), &truth);
        assert_eq!(s, TruthScore { loc_error: None, recall: 0.0 });
    }

    #[test]
    fn spec_parsing() {
        let s = SynthSpec::parse(
            "n_rows = 50\nn_cols = 60\nseed = 3\ncurve = 0,10; 49,10\ncurve = 5,0; 5,20; 30,59\nnoise_sigma = 0\n",
        )
        .unwrap();
        assert_eq!((s.n_rows, s.n_cols, s.seed, s.curves.len()), (50, 60, 3, 2));
        assert_eq!(s.curves[1][2], (30.0, 59.0));
        assert!(SynthSpec::parse("curve = 0,10; 80,10\n").is_ok());
        assert!(SynthSpec::parse("n_rows = 10\ncurve = 0,10; 80,10\n").is_err());
        assert!(SynthSpec::parse("colour = red").is_err());
        assert!(SynthSpec::parse("curve = 1;2").is_err());
    }

    #[test]
    fn truth_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("truth.json");
        let curves = vec![vec![(0.0, 1.5), (2.0, 3.0)], vec![(4.0, 4.0), (5.0, 6.25)]];
        write_truth(&curves, &p).unwrap();
        assert_eq!(read_truth(&p).unwrap(), curves);
    }
}
