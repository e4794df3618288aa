//! End-to-end runs: one day, a day sequence, climatology, synthetic truth.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde_json::json;

use crate::bayes::{classify_three_way, resolve_bayesian, resolve_hysteresis, thresholds_from_cdf, ZoneMask};
use crate::config::{Config, Method};
use crate::error::{Error, Result};
use crate::fronts::{delete_rings, measure_all, merge_seeded, vectorize, FrontSet};
use crate::gradient::{sobel_gradient_with, GradientField};
use crate::grid::ScalarGrid;
use crate::io::{read_fronts_geojson, read_grid, write_fronts_geojson, write_grid, Encoding, GridFormat, DEFAULT_FILL};
use crate::morphology::{dse_trim_with, mdm_skeleton_with, thin_redundant, BitMask};
use crate::stats::{daily_summary, linear_trend, periodogram, seasonal_aggregate, DailySummary, METRICS};
use crate::synth::{read_truth, synth_field, truth_score, write_truth, Polyline, SynthSpec, TruthScore};
use crate::tracking::{track_sequence_with, TrackSet};

/// Intermediate products of one detection.
#[derive(Debug, Clone)]
pub struct Detection {
    pub field: GradientField,
    pub zone: ZoneMask,
    pub skeleton: BitMask,
    pub fronts: FrontSet,
}

/// Runs the configured method on one grid. Front ids are their indices.
pub fn detect(grid: &ScalarGrid, cfg: &Config) -> Result<Detection> {
    cfg.validate()?;
    let exec = cfg.exec;
    let field = sobel_gradient_with(grid, exec)?;
    let th = thresholds_from_cdf(&field, cfg.p_hi, cfg.p_lo)?;
    let three = classify_three_way(&field, &th);
    let zone = match cfg.method {
        Method::Bfdt => resolve_bayesian(grid, &field, &th, &three, cfg.lde_bd_tol, exec),
        Method::Gradient => resolve_hysteresis(&three),
    };
    let frontal = zone.frontal();
    let skeleton = thin_redundant(&mdm_skeleton_with(&frontal, exec));
    let mut fronts = match cfg.method {
        Method::Bfdt => {
            let trimmed = dse_trim_with(&skeleton, &frontal, cfg.dse_t, exec);
            // pieces shorter than the length filter survive until merging,
            // but only a front that already passes it can absorb them
            let v = vectorize(&trimmed, 1);
            let merged = merge_seeded(&v, cfg.merge_radius, &field, cfg.min_len_px);
            let mut ringless = delete_rings(&merged);
            ringless.retain_min_len(cfg.min_len_px);
            ringless
        }
        Method::Gradient => vectorize(&skeleton, cfg.min_len_px),
    };
    // merge fill may step outside the zone; those cells count as zone
    let mut measured_zone = frontal.clone();
    for f in &fronts.fronts {
        for &p in &f.points {
            measured_zone.set(p, true);
        }
    }
    fronts = measure_all(&fronts, &measured_zone, &field, grid, exec)?;
    for (i, f) in fronts.fronts.iter_mut().enumerate() {
        f.id = i as u64;
    }
    Ok(Detection {
        field,
        zone,
        skeleton,
        fronts,
    })
}

/// Frontal cells as 1, other valid cells as 0, invalid cells as fill.
pub fn zone_grid(zone: &ZoneMask, grid: &ScalarGrid) -> Result<ScalarGrid> {
    let frontal = zone.frontal();
    let values = (0..grid.len())
        .map(|i| if frontal.bits[i] { 1.0 } else { 0.0 })
        .collect();
    let mut out = ScalarGrid::new(grid.n_rows(), grid.n_cols(), values, grid.valid().to_vec())?
        .with_geometry(grid.lat0, grid.lon0, grid.d_lat, grid.d_lon)?;
    out.km_per_px = grid.km_per_px;
    Ok(out)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn manifest(cfg: &Config, command: &str, inputs: &[&Path]) -> String {
    let mut s = format!("command = {command}\n");
    for p in inputs {
        let _ = writeln!(s, "input = {}", p.display());
    }
    s.push_str(&cfg.manifest());
    s
}

fn load(input: &Path, format: GridFormat, cfg: &Config) -> Result<ScalarGrid> {
    read_grid(input, format)?.with_km_per_px(cfg.km_per_px)
}

/// Writes `fronts.geojson`, `zone.fgrid` and `manifest.txt` into `out_dir`.
pub fn run_detect(input: &Path, format: GridFormat, cfg: &Config, out_dir: &Path) -> Result<Detection> {
    let grid = load(input, format, cfg)?;
    let det = detect(&grid, cfg)?;
    create_dir(out_dir)?;
    write_fronts_geojson(&det.fronts.fronts, &grid, out_dir.join("fronts.geojson"))?;
    write_grid(&zone_grid(&det.zone, &grid)?, out_dir.join("zone.fgrid"), Encoding::Ascii, DEFAULT_FILL)?;
    write_text(&out_dir.join("manifest.txt"), &manifest(cfg, "detect", &[input]))?;
    Ok(det)
}

/// Finds `YYYY-MM-DD` or `YYYYMMDD` in a file name.
pub fn date_from_name(name: &str) -> Option<NaiveDate> {
    let b = name.as_bytes();
    let digits = |s: &[u8]| s.iter().all(u8::is_ascii_digit);
    for i in 0..b.len() {
        if i + 10 <= b.len() && digits(&b[i..i + 4]) && b[i + 4] == b'-' && digits(&b[i + 5..i + 7]) && b[i + 7] == b'-' && digits(&b[i + 8..i + 10]) {
            if let Ok(d) = NaiveDate::parse_from_str(&name[i..i + 10], "%Y-%m-%d") {
                return Some(d);
            }
        }
        let standalone = |j: usize| j >= b.len() || !b[j].is_ascii_digit();
        if i + 8 <= b.len() && digits(&b[i..i + 8]) && (i == 0 || !b[i - 1].is_ascii_digit()) && standalone(i + 8) {
            if let Ok(d) = NaiveDate::parse_from_str(&name[i..i + 8], "%Y%m%d") {
                return Some(d);
            }
        }
    }
    None
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "day".into())
}

/// Output of a tracking run.
#[derive(Debug, Clone)]
pub struct TrackRun {
    pub days: Vec<FrontSet>,
    pub tracks: TrackSet,
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    #[cfg(feature = "parallel")]
    if let Some(n) = jobs {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Argument(format!("cannot start {n} worker threads: {e}")))?;
        return Ok(pool.install(f));
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    Ok(f())
}

/// Detects each day (days in parallel), then tracks sequentially. Writes one
/// `fronts_<stem>.geojson` per day, `tracks.json`, `iou.csv`,
/// `lifetimes.csv` and `manifest.txt`. `jobs` caps the worker count.
pub fn run_track(inputs: &[PathBuf], format: GridFormat, cfg: &Config, out_dir: &Path, jobs: Option<usize>) -> Result<TrackRun> {
    if inputs.is_empty() {
        return Err(Error::Argument("tracking needs at least one input".into()));
    }
    let detected = with_pool(jobs, || {
        cfg.exec.map_slice(inputs, |p| -> Result<(ScalarGrid, FrontSet)> {
            let grid = load(p, format, cfg)?;
            let mut fs = detect(&grid, cfg)?.fronts;
            fs.source_day = date_from_name(&stem(p));
            Ok((grid, fs))
        })
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (grids, mut days): (Vec<ScalarGrid>, Vec<FrontSet>) = detected.into_iter().unzip();
    let tracks = track_sequence_with(&mut days, cfg.length_ratio, cfg.exec);

    create_dir(out_dir)?;
    let names: Vec<String> = inputs.iter().enumerate().map(|(i, p)| format!("fronts_{i:04}_{}.geojson", stem(p))).collect();
    for ((name, fs), grid) in names.iter().zip(&days).zip(&grids) {
        write_fronts_geojson(&fs.fronts, grid, out_dir.join(name))?;
    }
    let doc = json!({
        "days": names,
        "tracks": tracks.tracks().iter().map(|(id, occ)| json!({
            "id": id,
            "occurrences": occ.iter().map(|&(d, i)| json!([d, i])).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    text.push('\n');
    write_text(&out_dir.join("tracks.json"), &text)?;

    let mut iou = String::from("day_from,day_to,iou\n");
    for (d, v) in tracks.iou.iter().enumerate() {
        let _ = writeln!(iou, "{},{},{}", d, d + 1, v);
    }
    write_text(&out_dir.join("iou.csv"), &iou)?;
    let mut life = String::from("lifetime_days,count\n");
    for (l, n) in tracks.lifetime_histogram() {
        let _ = writeln!(life, "{l},{n}");
    }
    write_text(&out_dir.join("lifetimes.csv"), &life)?;
    let paths: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
    write_text(&out_dir.join("manifest.txt"), &manifest(cfg, "track", &paths))?;
    Ok(TrackRun { days, tracks })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

pub fn daily_csv(series: &[DailySummary]) -> String {
    let mut s = String::from("date,count,intensity,width_km,length_km,offshore_km\n");
    for d in series {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            d.date.map_or_else(|| "NA".to_string(), |x| x.to_string()),
            d.count,
            fmt_opt(d.intensity),
            fmt_opt(d.width_km),
            fmt_opt(d.length_km),
            fmt_opt(d.offshore_km)
        );
    }
    s
}

/// Metric series on a daily axis. When every day is dated the axis is the
/// full calendar span (gaps missing); otherwise it is the file order.
fn daily_axis(series: &[DailySummary]) -> Vec<Option<&DailySummary>> {
    let dates: Option<Vec<NaiveDate>> = series.iter().map(|d| d.date).collect();
    match dates.as_deref() {
        Some([first, .., last]) if first <= last => {
            let span = (*last - *first).num_days() as usize + 1;
            let mut axis = vec![None; span];
            for d in series {
                axis[(d.date.unwrap() - *first).num_days() as usize] = Some(d);
            }
            axis
        }
        _ => series.iter().map(Some).collect(),
    }
}

/// Reads every `*.geojson` in `fronts_dir` (name order, dates from names) and
/// writes `daily.csv`, `seasonal.csv`, `spectral.csv` and `trend.csv`.
pub fn run_stats(fronts_dir: &Path, out_dir: &Path) -> Result<Vec<DailySummary>> {
    let mut files: Vec<PathBuf> = fs::read_dir(fronts_dir)
        .map_err(|e| Error::io(fronts_dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "geojson"))
        .collect();
    if files.is_empty() {
        return Err(Error::Argument(format!("{}: no .geojson files", fronts_dir.display())));
    }
    files.sort();
    let mut series = Vec::with_capacity(files.len());
    for p in &files {
        let records = read_fronts_geojson(p)?.iter().map(|f| f.to_record()).collect();
        let mut fs = FrontSet::new(records);
        fs.source_day = date_from_name(&stem(p));
        series.push(daily_summary(&fs));
    }
    series.sort_by_key(|d| d.date);

    create_dir(out_dir)?;
    write_text(&out_dir.join("daily.csv"), &daily_csv(&series))?;

    let mut seasonal = String::from("season,days,metric,mean,std\n");
    for rep in seasonal_aggregate(&series) {
        for (m, st) in &rep.metrics {
            let _ = writeln!(seasonal, "{},{},{},{},{}", rep.season.label(), rep.days, m, st.mean, st.std);
        }
    }
    write_text(&out_dir.join("seasonal.csv"), &seasonal)?;

    let axis = daily_axis(&series);
    let mut spectral = String::from("metric,frequency_per_day,power\n");
    let mut trend = String::from("metric,slope_per_day,intercept\n");
    for m in METRICS {
        let values: Vec<Option<f64>> = axis.iter().map(|d| d.and_then(|d| d.metric(m))).collect();
        if let Ok(p) = periodogram(&values) {
            for (f, v) in p {
                let _ = writeln!(spectral, "{m},{f},{v}");
            }
        }
        let pts: Vec<(f64, f64)> = values.iter().enumerate().filter_map(|(i, v)| v.map(|y| (i as f64, y))).collect();
        match linear_trend(&pts) {
            Ok((s, i)) => {
                let _ = writeln!(trend, "{m},{s},{i}");
            }
            Err(_) => {
                let _ = writeln!(trend, "{m},NA,NA");
            }
        }
    }
    write_text(&out_dir.join("spectral.csv"), &spectral)?;
    write_text(&out_dir.join("trend.csv"), &trend)?;
    Ok(series)
}

/// Path of the truth file written next to a synthetic grid.
pub fn truth_path(grid_path: &Path) -> PathBuf {
    grid_path.with_extension("truth.json")
}

/// Writes the field (binary fgrid) to `out` and its truth curves beside it.
pub fn run_synth(spec: &SynthSpec, out: &Path) -> Result<(ScalarGrid, Vec<Polyline>)> {
    let (grid, truth) = synth_field(spec)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        create_dir(dir)?;
    }
    write_grid(&grid, out, Encoding::Binary, DEFAULT_FILL)?;
    write_truth(&truth, truth_path(out))?;
    Ok((grid, truth))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodScore {
    pub method: Method,
    pub fronts: usize,
    /// Length-weighted mean intensity, °C/km.
    pub intensity: Option<f64>,
    pub score: TruthScore,
}

pub fn compare_methods(grid: &ScalarGrid, truth: &[Polyline], cfg: &Config) -> Result<Vec<MethodScore>> {
    [Method::Bfdt, Method::Gradient]
        .into_iter()
        .map(|method| {
            let det = detect(grid, &Config { method, ..cfg.clone() })?;
            Ok(MethodScore {
                method,
                fronts: det.fronts.len(),
                intensity: daily_summary(&det.fronts).intensity,
                score: truth_score(&det.fronts, truth),
            })
        })
        .collect()
}

/// Runs both methods against a truth file and writes `compare.csv`.
pub fn run_compare(input: &Path, format: GridFormat, truth: &Path, cfg: &Config, out_dir: &Path) -> Result<Vec<MethodScore>> {
    let grid = load(input, format, cfg)?;
    let curves = read_truth(truth)?;
    let scores = compare_methods(&grid, &curves, cfg)?;
    create_dir(out_dir)?;
    let mut s = String::from("method,fronts,intensity_c_per_km,loc_error_px,recall\n");
    for m in &scores {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            m.method.as_str(),
            m.fronts,
            fmt_opt(m.intensity),
            fmt_opt(m.score.loc_error),
            m.score.recall
        );
    }
    write_text(&out_dir.join("compare.csv"), &s)?;
    write_text(&out_dir.join("manifest.txt"), &manifest(cfg, "compare", &[input, truth]))?;
    Ok(scores)
}
