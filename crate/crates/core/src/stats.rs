//! Daily, seasonal and spectral summaries of front metrics.

use chrono::{Datelike, NaiveDate};

use crate::error::{Error, Result};
use crate::fronts::FrontSet;

#[derive(Debug, Clone, PartialEq)]
pub struct DailySummary {
    pub date: Option<NaiveDate>,
    pub count: usize,
    /// Length-weighted mean, °C/km.
    pub intensity: Option<f64>,
    /// Length-weighted mean, km.
    pub width_km: Option<f64>,
    /// Plain mean, km.
    pub length_km: Option<f64>,
    /// Length-weighted mean over fronts with a defined offshore distance, km.
    pub offshore_km: Option<f64>,
}

fn weighted_mean(pairs: impl Iterator<Item = (f64, f64)>) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for (v, w) in pairs {
        num += v * w;
        den += w;
    }
    (den > 0.0).then(|| num / den)
}

pub fn daily_summary(fs: &FrontSet) -> DailySummary {
    let f = &fs.fronts;
    let count = f.len();
    let plain = |v: &dyn Fn(&crate::fronts::FrontRecord) -> f64| {
        (count > 0).then(|| f.iter().map(v).sum::<f64>() / count as f64)
    };
    DailySummary {
        date: fs.source_day,
        count,
        intensity: weighted_mean(f.iter().map(|x| (x.intensity_c_per_km, x.length_km))),
        width_km: weighted_mean(f.iter().map(|x| (x.width_km, x.length_km))),
        length_km: plain(&|x| x.length_km),
        offshore_km: weighted_mean(f.iter().filter_map(|x| x.offshore_km.map(|o| (o, x.length_km)))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Season {
    Spring,
    Summer,
    Fall,
    Winter,
}

impl Season {
    pub fn of(date: NaiveDate) -> Season {
        match date.month() {
            3..=5 => Season::Spring,
            6..=8 => Season::Summer,
            9..=11 => Season::Fall,
            _ => Season::Winter,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Season::Spring => "MAM",
            Season::Summer => "JJA",
            Season::Fall => "SON",
            Season::Winter => "DJF",
        }
    }

    pub const ALL: [Season; 4] = [Season::Spring, Season::Summer, Season::Fall, Season::Winter];
}

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

pub fn mean_std(values: &[f64]) -> Option<MeanStd> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some(MeanStd {
        mean,
        std: var.sqrt(),
        n: values.len(),
    })
}

pub const METRICS: [&str; 5] = ["count", "intensity", "width_km", "length_km", "offshore_km"];

impl DailySummary {
    /// Metric by name, in [`METRICS`] order.
    pub fn metric(&self, name: &str) -> Option<f64> {
        match name {
            "count" => Some(self.count as f64),
            "intensity" => self.intensity,
            "width_km" => self.width_km,
            "length_km" => self.length_km,
            "offshore_km" => self.offshore_km,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeasonalReport {
    pub season: Season,
    pub days: usize,
    /// `(metric name, stats)`; metrics missing on every day are omitted.
    pub metrics: Vec<(&'static str, MeanStd)>,
}

/// Groups days by season (MAM, JJA, SON, DJF). Undated days are skipped;
/// seasons without days are absent from the result.
pub fn seasonal_aggregate(series: &[DailySummary]) -> Vec<SeasonalReport> {
    Season::ALL
        .iter()
        .filter_map(|&season| {
            let days: Vec<&DailySummary> = series
                .iter()
                .filter(|d| d.date.map(Season::of) == Some(season))
                .collect();
            if days.is_empty() {
                return None;
            }
            let metrics = METRICS
                .iter()
                .filter_map(|&m| {
                    let vals: Vec<f64> = days.iter().filter_map(|d| d.metric(m)).collect();
                    mean_std(&vals).map(|s| (m, s))
                })
                .collect();
            Some(SeasonalReport {
                season,
                days: days.len(),
                metrics,
            })
        })
        .collect()
}

/// Fills gaps by linear interpolation; leading/trailing gaps take the nearest
/// known value.
pub fn interpolate_missing(series: &[Option<f64>]) -> Result<Vec<f64>> {
    let known: Vec<usize> = (0..series.len()).filter(|&i| series[i].is_some()).collect();
    let (Some(&first), Some(&last)) = (known.first(), known.last()) else {
        return Err(Error::Argument("series has no values".into()));
    };
    let mut out = vec![0.0; series.len()];
    for (i, o) in out.iter_mut().enumerate() {
        *o = match series[i] {
            Some(v) => v,
            None if i < first => series[first].unwrap(),
            None if i > last => series[last].unwrap(),
            None => {
                let k = known.partition_point(|&j| j < i);
                let (a, b) = (known[k - 1], known[k]);
                let (va, vb) = (series[a].unwrap(), series[b].unwrap());
                va + (vb - va) * (i - a) as f64 / (b - a) as f64
            }
        };
    }
    Ok(out)
}

/// One-sided power spectrum of the mean-removed series at `k/N`,
/// `k = 0..=N/2`, scaled so the powers sum to `N·variance`.
pub fn periodogram(series: &[Option<f64>]) -> Result<Vec<(f64, f64)>> {
    if series.len() < 2 {
        return Err(Error::Argument(format!("periodogram needs at least 2 samples, got {}", series.len())));
    }
    let x = interpolate_missing(series)?;
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = x.iter().map(|v| v - mean).collect();
    // twiddles indexed by (k·t) mod N
    let table: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let a = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .collect();
    Ok((0..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, &v) in x.iter().enumerate() {
                let (c, s) = table[(k * t) % n];
                re += v * c;
                im -= v * s;
            }
            let mut p = (re * re + im * im) / n as f64;
            if k != 0 && 2 * k != n {
                p *= 2.0;
            }
            (k as f64 / n as f64, p)
        })
        .collect())
}

/// Ordinary least squares `y = slope·x + intercept`.
pub fn linear_trend(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(Error::Argument("linear trend needs at least 2 points".into()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Argument("linear trend needs at least 2 distinct x values".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}
