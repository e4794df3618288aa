//! File formats: the native `fgrid` raster, plain CSV rasters, and GeoJSON
//! front collections.
//!
//! `fgrid` layout (newline-terminated ASCII header, little-endian payload):
//!
//! ```text
//! FGRID 1
//! <nrows> <ncols>
//! <lat0> <lon0> <dlat> <dlon>
//! fill <value>
//! binary | ascii
//! <payload>
//! ```
//!
//! The payload is `nrows·ncols` row-major `f32` values, either raw bytes or
//! whitespace-separated decimals. Cells whose bits equal the fill value are
//! masked out; NaN cells are masked as well.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fronts::FrontRecord;
use crate::grid::ScalarGrid;

pub const DEFAULT_FILL: f32 = -9999.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Binary,
    Ascii,
}

/// Geometry for CSV rasters, which carry values only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvGeometry {
    pub lat0: f64,
    pub lon0: f64,
    pub d_lat: f64,
    pub d_lon: f64,
    pub fill: Option<f32>,
}

impl Default for CsvGeometry {
    fn default() -> Self {
        Self {
            lat0: 0.0,
            lon0: 0.0,
            d_lat: 0.05,
            d_lon: 0.05,
            fill: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridFormat {
    Fgrid,
    Csv(CsvGeometry),
}

pub fn read_grid(path: impl AsRef<Path>, format: GridFormat) -> Result<ScalarGrid> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    match format {
        GridFormat::Fgrid => parse_fgrid(path, &bytes),
        GridFormat::Csv(geom) => parse_csv(path, &bytes, geom),
    }
}

#[inline]
fn is_fill(v: f32, fill: f32) -> bool {
    v.to_bits() == fill.to_bits() || v.is_nan()
}

fn next_line<'a>(path: &Path, bytes: &'a [u8], pos: &mut usize, line_no: usize) -> Result<&'a str> {
    if *pos >= bytes.len() {
        return Err(Error::format(path, line_no, "unexpected end of header"));
    }
    let rest = &bytes[*pos..];
    let end = rest.iter().position(|&b| b == b'\n').unwrap_or(rest.len());
    *pos += end + 1;
    std::str::from_utf8(&rest[..end])
        .map(|s| s.trim_end_matches('\r'))
        .map_err(|_| Error::format(path, line_no, "header is not valid UTF-8"))
}

fn parse_fields<T: std::str::FromStr>(path: &Path, line: &str, line_no: usize, n: usize, what: &str) -> Result<Vec<T>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != n {
        return Err(Error::format(
            path,
            line_no,
            format!("expected {n} fields ({what}), found {:?}", line),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<T>()
                .map_err(|_| Error::format(path, line_no, format!("cannot parse {f:?} ({what})")))
        })
        .collect()
}

fn parse_fgrid(path: &Path, bytes: &[u8]) -> Result<ScalarGrid> {
    let mut pos = 0;
    let magic = next_line(path, bytes, &mut pos, 1)?;
    if magic.trim() != "FGRID 1" {
        return Err(Error::format(path, 1, format!("expected \"FGRID 1\", found {magic:?}")));
    }
    let dims: Vec<usize> = parse_fields(path, next_line(path, bytes, &mut pos, 2)?, 2, 2, "nrows ncols")?;
    let geo: Vec<f64> = parse_fields(path, next_line(path, bytes, &mut pos, 3)?, 3, 4, "lat0 lon0 dlat dlon")?;
    let fill_line = next_line(path, bytes, &mut pos, 4)?;
    let fill = match fill_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["fill", v] => v
            .parse::<f32>()
            .map_err(|_| Error::format(path, 4, format!("cannot parse fill value {v:?}")))?,
        _ => return Err(Error::format(path, 4, format!("expected \"fill <value>\", found {fill_line:?}"))),
    };
    let encoding = match next_line(path, bytes, &mut pos, 5)?.trim() {
        "binary" => Encoding::Binary,
        "ascii" => Encoding::Ascii,
        other => return Err(Error::format(path, 5, format!("expected binary or ascii, found {other:?}"))),
    };

    let (n_rows, n_cols) = (dims[0], dims[1]);
    let n = n_rows * n_cols;
    let payload = if pos <= bytes.len() { &bytes[pos..] } else { &[][..] };
    let values: Vec<f32> = match encoding {
        Encoding::Binary => {
            if payload.len() != 4 * n {
                return Err(Error::Size(format!(
                    "{}: header declares {n_rows}x{n_cols} = {n} cells ({} bytes), payload has {} bytes",
                    path.display(),
                    4 * n,
                    payload.len()
                )));
            }
            payload
                .chunks_exact(4)
                .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
                .collect()
        }
        Encoding::Ascii => {
            let text = std::str::from_utf8(payload)
                .map_err(|_| Error::format(path, 6, "ascii payload is not valid UTF-8"))?;
            let mut values = Vec::with_capacity(n);
            for (i, line) in text.lines().enumerate() {
                for tok in line.split_whitespace() {
                    let v = tok
                        .parse::<f32>()
                        .map_err(|_| Error::format(path, 6 + i, format!("cannot parse value {tok:?}")))?;
                    values.push(v);
                }
            }
            if values.len() != n {
                return Err(Error::Size(format!(
                    "{}: header declares {n_rows}x{n_cols} = {n} cells, payload has {}",
                    path.display(),
                    values.len()
                )));
            }
            values
        }
    };
    let valid = values.iter().map(|&v| !is_fill(v, fill)).collect();
    ScalarGrid::new(n_rows, n_cols, values, valid)?.with_geometry(geo[0], geo[1], geo[2], geo[3])
}

fn parse_csv(path: &Path, bytes: &[u8], geom: CsvGeometry) -> Result<ScalarGrid> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::format(path, 1, "not valid UTF-8"))?;
    let mut values = Vec::new();
    let mut valid = Vec::new();
    let mut n_cols = None;
    let mut n_rows = 0;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut count = 0;
        for field in line.split(',') {
            let field = field.trim();
            let (v, ok) = if field.is_empty() {
                (f32::NAN, false)
            } else {
                let v = field
                    .parse::<f32>()
                    .map_err(|_| Error::format(path, i + 1, format!("cannot parse value {field:?}")))?;
                (v, !geom.fill.is_some_and(|f| is_fill(v, f)) && !v.is_nan())
            };
            values.push(v);
            valid.push(ok);
            count += 1;
        }
        match n_cols {
            None => n_cols = Some(count),
            Some(c) if c != count => {
                return Err(Error::Size(format!(
                    "{}: line {} has {count} columns, expected {c}",
                    path.display(),
                    i + 1
                )))
            }
            _ => {}
        }
        n_rows += 1;
    }
    ScalarGrid::new(n_rows, n_cols.unwrap_or(0), values, valid)?.with_geometry(
        geom.lat0,
        geom.lon0,
        geom.d_lat,
        geom.d_lon,
    )
}

/// Serializes a grid; masked cells are written as `fill`.
pub fn grid_to_fgrid_bytes(grid: &ScalarGrid, encoding: Encoding, fill: f32) -> Vec<u8> {
    let mut out = format!(
        "FGRID 1\n{} {}\n{} {} {} {}\nfill {}\n{}\n",
        grid.n_rows(),
        grid.n_cols(),
        grid.lat0,
        grid.lon0,
        grid.d_lat,
        grid.d_lon,
        fill,
        match encoding {
            Encoding::Binary => "binary",
            Encoding::Ascii => "ascii",
        }
    )
    .into_bytes();
    let cells = grid
        .values()
        .iter()
        .zip(grid.valid())
        .map(|(&v, &ok)| if ok { v } else { fill });
    match encoding {
        Encoding::Binary => {
            for v in cells {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        Encoding::Ascii => {
            let n_cols = grid.n_cols().max(1);
            for (i, v) in cells.enumerate() {
                out.extend_from_slice(v.to_string().as_bytes());
                out.push(if (i + 1) % n_cols == 0 { b'\n' } else { b' ' });
            }
        }
    }
    out
}

pub fn write_grid(grid: &ScalarGrid, path: impl AsRef<Path>, encoding: Encoding, fill: f32) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, grid_to_fgrid_bytes(grid, encoding, fill)).map_err(|e| Error::io(path, e))
}

/// Builds the GeoJSON FeatureCollection for a set of fronts.
pub fn fronts_to_geojson(fronts: &[FrontRecord], grid: &ScalarGrid) -> Result<Value> {
    let mut features = Vec::with_capacity(fronts.len());
    for f in fronts {
        if f.is_empty() {
            return Err(Error::Argument(format!("front {} has no points", f.id)));
        }
        let coords: Vec<Value> = f
            .points
            .iter()
            .map(|&(r, c)| {
                let (lon, lat) = grid.to_lon_lat(r, c);
                json!([lon, lat])
            })
            .collect();
        let mut props = Map::new();
        props.insert("id".into(), json!(f.id));
        props.insert("length_km".into(), json!(f.length_km));
        props.insert("width_km".into(), json!(f.width_km));
        props.insert("intensity_c_per_km".into(), json!(f.intensity_c_per_km));
        props.insert(
            "offshore_km".into(),
            f.offshore_km.map_or(Value::Null, |v| json!(v)),
        );
        features.push(json!({
            "type": "Feature",
            "geometry": { "type": "LineString", "coordinates": coords },
            "properties": props,
        }));
    }
    Ok(json!({ "type": "FeatureCollection", "features": features }))
}

pub fn write_fronts_geojson(fronts: &[FrontRecord], grid: &ScalarGrid, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let doc = fronts_to_geojson(fronts, grid)?;
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// A front as read back from GeoJSON: lon/lat coordinates plus metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontFeature {
    pub id: u64,
    pub coordinates: Vec<[f64; 2]>,
    pub length_km: f64,
    pub width_km: f64,
    pub intensity_c_per_km: f64,
    pub offshore_km: Option<f64>,
}

impl FrontFeature {
    /// Metric-only record (no grid points) for aggregation.
    pub fn to_record(&self) -> FrontRecord {
        FrontRecord {
            id: self.id,
            length_km: self.length_km,
            width_km: self.width_km,
            intensity_c_per_km: self.intensity_c_per_km,
            offshore_km: self.offshore_km,
            ..Default::default()
        }
    }
}

pub fn read_fronts_geojson(path: impl AsRef<Path>) -> Result<Vec<FrontFeature>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc: Value =
        serde_json::from_str(&text).map_err(|e| Error::format(path, e.line(), e.to_string()))?;
    let bad = |msg: &str| Error::format(path, 0, msg.to_string());
    let features = doc
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"features\" array"))?;
    let num = |props: &Value, key: &str| -> Result<f64> {
        props
            .get(key)
            .and_then(Value::as_f64)
            .ok_or_else(|| bad(&format!("feature property {key:?} missing or not a number")))
    };
    features
        .iter()
        .map(|feat| {
            let props = feat.get("properties").ok_or_else(|| bad("feature without properties"))?;
            let coordinates = feat
                .pointer("/geometry/coordinates")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("feature without LineString coordinates"))?
                .iter()
                .map(|p| match (p.get(0).and_then(Value::as_f64), p.get(1).and_then(Value::as_f64)) {
                    (Some(x), Some(y)) => Ok([x, y]),
                    _ => Err(bad("malformed coordinate")),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FrontFeature {
                id: props.get("id").and_then(Value::as_u64).unwrap_or(0),
                coordinates,
                length_km: num(props, "length_km")?,
                width_km: num(props, "width_km")?,
                intensity_c_per_km: num(props, "intensity_c_per_km")?,
                offshore_km: props.get("offshore_km").and_then(Value::as_f64),
            })
        })
        .collect()
}
