//! Run configuration: flat `key = value` text, `#` comments.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::bayes::{DEFAULT_LDE_BD_TOL, DEFAULT_P_HI, DEFAULT_P_LO};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fronts::{MERGE_RADIUS, MIN_LEN_PX};
use crate::grid::DEFAULT_KM_PER_PX;
use crate::morphology::DEFAULT_DSE_T;
use crate::tracking::DEFAULT_LENGTH_RATIO;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Bayesian zone detection with full morphological refinement.
    #[default]
    Bfdt,
    /// Hysteresis thresholding without DSE, merging or ring deletion.
    Gradient,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bfdt => "bfdt",
            Method::Gradient => "gradient",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bfdt" => Ok(Method::Bfdt),
            "gradient" => Ok(Method::Gradient),
            _ => Err(Error::Config(format!("unknown method {s:?} (expected bfdt or gradient)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub p_hi: f64,
    pub p_lo: f64,
    pub lde_bd_tol: f64,
    pub dse_t: f64,
    pub merge_radius: usize,
    pub min_len_px: usize,
    pub length_ratio: f64,
    pub km_per_px: f64,
    pub method: Method,
    pub exec: Exec,
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    }
}

impl Default for Config {
    fn default() -> Self {
        Self {
            p_hi: DEFAULT_P_HI,
            p_lo: DEFAULT_P_LO,
            lde_bd_tol: DEFAULT_LDE_BD_TOL,
            dse_t: DEFAULT_DSE_T,
            merge_radius: MERGE_RADIUS,
            min_len_px: MIN_LEN_PX,
            length_ratio: DEFAULT_LENGTH_RATIO,
            km_per_px: DEFAULT_KM_PER_PX,
            method: Method::Bfdt,
            exec: Exec::default(),
        }
    }
}

pub const KEYS: [&str; 9] = [
    "p_hi",
    "p_lo",
    "lde_bd_tol",
    "dse_t",
    "merge_radius",
    "min_len_px",
    "length_ratio",
    "km_per_px",
    "method",
];

/// `(line number, key, value)`.
pub type Pair = (usize, String, String);

/// Splits `key = value` lines, skipping blanks and `#` comments.
/// Errors carry the offending line number.
pub fn parse_pairs(text: &str) -> std::result::Result<Vec<Pair>, (usize, String)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err((i + 1, format!("expected `key = value`, got {line:?}")));
        };
        out.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

impl Config {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "p_hi" => self.p_hi = parse_num(key, value)?,
            "p_lo" => self.p_lo = parse_num(key, value)?,
            "lde_bd_tol" => self.lde_bd_tol = parse_num(key, value)?,
            "dse_t" => self.dse_t = parse_num(key, value)?,
            "merge_radius" => self.merge_radius = parse_num(key, value)?,
            "min_len_px" => self.min_len_px = parse_num(key, value)?,
            "length_ratio" => self.length_ratio = parse_num(key, value)?,
            "km_per_px" => self.km_per_px = parse_num(key, value)?,
            "method" => self.method = value.parse()?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies every pair of a config text on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let pairs = parse_pairs(text).map_err(|(line, msg)| Error::Config(format!("line {line}: {msg}")))?;
        for (line, k, v) in pairs {
            self.set(&k, &v).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {line}: {m}")),
                other => other,
            })?;
        }
        Ok(())
    }

    /// Defaults overridden by the file at `path`, validated.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Config::default();
        cfg.apply_file(path)?;
        cfg.validate().map_err(|e| with_path(e, path))?;
        Ok(cfg)
    }

    /// Applies the `key = value` lines of `path` without validating, so later
    /// overrides can still repair the combination.
    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_text(&text).map_err(|e| with_path(e, path))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.p_hi > 0.0 && self.p_hi <= self.p_lo && self.p_lo < 1.0) {
            return bad(format!("need 0 < p_hi <= p_lo < 1, got p_hi={} p_lo={}", self.p_hi, self.p_lo));
        }
        for (k, v) in [
            ("lde_bd_tol", self.lde_bd_tol),
            ("dse_t", self.dse_t),
            ("length_ratio", self.length_ratio),
            ("km_per_px", self.km_per_px),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{k} must be positive, got {v}"));
            }
        }
        if self.length_ratio > 1.0 {
            return bad(format!("length_ratio must be at most 1, got {}", self.length_ratio));
        }
        if self.merge_radius == 0 || self.min_len_px == 0 {
            return bad("merge_radius and min_len_px must be positive".into());
        }
        Ok(())
    }

    /// Every key with its effective value, one `key = value` per line.
    pub fn manifest(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p_hi = {}", self.p_hi);
        let _ = writeln!(s, "p_lo = {}", self.p_lo);
        let _ = writeln!(s, "lde_bd_tol = {}", self.lde_bd_tol);
        let _ = writeln!(s, "dse_t = {}", self.dse_t);
        let _ = writeln!(s, "merge_radius = {}", self.merge_radius);
        let _ = writeln!(s, "min_len_px = {}", self.min_len_px);
        let _ = writeln!(s, "length_ratio = {}", self.length_ratio);
        let _ = writeln!(s, "km_per_px = {}", self.km_per_px);
        let _ = writeln!(s, "method = {}", self.method.as_str());
        s
    }
}
