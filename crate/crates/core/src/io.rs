//! Plain-text file formats.
//!
//! * Grid files (`ccwsim-grid v1`): magic line, `<ncols> <nrows> <ncats>`,
//!   then one line per row, top row first, codes separated by whitespace.
//! * Hard data: `row,col,facies` per line (0-based), `#` starts a comment line.
//! * Run configuration: `key = value` per line, `#` comments.
//! * Grid images: ASCII PGM (`P2`), codes spread evenly over 0..=255.
//! * Metrics: CSV with a header row.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{CategoricalGrid, HardDataSet, HardDatum, RealPlane};
use crate::metrics::{AnodiResult, ConnectivitySeries, VariogramSeries};
use crate::simulator::{FaciesMode, ScoringMode, SimConfig};

pub const GRID_MAGIC: &str = "ccwsim-grid v1";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(io_err(path))
}

// ---------------------------------------------------------------- grids

/// Parses grid-file text; `origin` only labels error messages.
pub fn parse_grid(text: &str, origin: &Path) -> Result<CategoricalGrid> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim_end() == GRID_MAGIC => {}
        Some((n, l)) => {
            return Err(parse_err(origin, n, format!("expected `{GRID_MAGIC}`, found `{}`", l.trim())))
        }
        None => return Err(parse_err(origin, 1, "empty file")),
    }
    let (hn, header) = lines.next().ok_or_else(|| parse_err(origin, 2, "missing dimension line"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(origin, hn, format!("bad dimension line `{header}`: {e}")))?;
    let [ncols, nrows, ncats] = dims[..] else {
        return Err(parse_err(origin, hn, format!("expected `<ncols> <nrows> <ncats>`, found `{header}`")));
    };
    if ncats == 0 || ncats > CategoricalGrid::MAX_FACIES {
        return Err(parse_err(
            origin,
            hn,
            format!("ncats must be in 1..={}", CategoricalGrid::MAX_FACIES),
        ));
    }

    let mut cells = Vec::with_capacity(ncols * nrows);
    let mut rows = 0;
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if rows == nrows {
            return Err(parse_err(origin, n, format!("more than the declared {nrows} rows")));
        }
        let before = cells.len();
        for (k, tok) in line.split_whitespace().enumerate() {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(origin, n, format!("column {}: `{tok}` is not a code", k + 1)))?;
            if v >= ncats {
                return Err(parse_err(
                    origin,
                    n,
                    format!("column {}: code {v} out of range 0..{ncats}", k + 1),
                ));
            }
            cells.push(v as u8);
        }
        let got = cells.len() - before;
        if got != ncols {
            return Err(parse_err(origin, n, format!("expected {ncols} values, found {got}")));
        }
        rows += 1;
    }
    if rows != nrows {
        return Err(parse_err(
            origin,
            text.lines().count(),
            format!("expected {nrows} rows, found {rows}"),
        ));
    }
    CategoricalGrid::new(ncols, nrows, ncats, cells)
}

pub fn format_grid(grid: &CategoricalGrid) -> String {
    let mut out = String::with_capacity(grid.area() * 2 + 64);
    let _ = writeln!(out, "{GRID_MAGIC}");
    let _ = writeln!(out, "{} {} {}", grid.width(), grid.height(), grid.num_facies());
    for r in 0..grid.height() {
        for (i, c) in grid.row(r).iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{c}");
        }
        out.push('\n');
    }
    out
}

pub fn read_grid(path: impl AsRef<Path>) -> Result<CategoricalGrid> {
    let path = path.as_ref();
    parse_grid(&read_text(path)?, path)
}

pub fn write_grid(grid: &CategoricalGrid, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_grid(grid))
}

// ---------------------------------------------------------------- hard data

pub fn parse_hard_data(
    text: &str,
    origin: &Path,
    height: usize,
    width: usize,
    num_facies: usize,
) -> Result<HardDataSet> {
    let mut points = Vec::new();
    let mut first_seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [r, c, f] = fields[..] else {
            return Err(parse_err(origin, n, format!("expected `row,col,facies`, found `{line}`")));
        };
        let num = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(origin, n, format!("{what} `{s}` is not a non-negative integer")))
        };
        let (row, col, facies) = (num(r, "row")?, num(c, "col")?, num(f, "facies")?);
        if row >= height || col >= width {
            return Err(parse_err(
                origin,
                n,
                format!("({row}, {col}) outside the {height}x{width} grid"),
            ));
        }
        if facies >= num_facies {
            return Err(parse_err(
                origin,
                n,
                format!("facies {facies} out of range 0..{num_facies}"),
            ));
        }
        if let Some(prev) = first_seen.insert((row, col), n) {
            return Err(parse_err(
                origin,
                n,
                format!("duplicate coordinate ({row}, {col}), first given on line {prev}"),
            ));
        }
        points.push(HardDatum {
            row,
            col,
            facies: facies as u8,
        });
    }
    HardDataSet::new(points, height, width, num_facies)
}

pub fn read_hard_data(
    path: impl AsRef<Path>,
    height: usize,
    width: usize,
    num_facies: usize,
) -> Result<HardDataSet> {
    let path = path.as_ref();
    parse_hard_data(&read_text(path)?, path, height, width, num_facies)
}

pub fn format_hard_data(data: &HardDataSet) -> String {
    let mut out = String::from("# row,col,facies\n");
    for p in data.points() {
        let _ = writeln!(out, "{},{},{}", p.row, p.col, p.facies);
    }
    out
}

pub fn write_hard_data(data: &HardDataSet, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_hard_data(data))
}

// ---------------------------------------------------------------- images

/// Grey level of `code` when `ncats` codes are spread over 0..=255.
pub fn pgm_level(code: u8, ncats: usize) -> u8 {
    if ncats <= 1 {
        0
    } else {
        ((code as usize * 255 + (ncats - 1) / 2) / (ncats - 1)) as u8
    }
}

pub fn format_pgm(grid: &CategoricalGrid) -> String {
    let levels: Vec<u8> = grid.cells().iter().map(|&c| pgm_level(c, grid.num_facies())).collect();
    pgm_text(grid.width(), grid.height(), &levels)
}

fn pgm_text(width: usize, height: usize, levels: &[u8]) -> String {
    let mut out = format!("P2\n{width} {height}\n255\n");
    for row in levels.chunks(width.max(1)) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_pgm(grid: &CategoricalGrid, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_pgm(grid))
}

/// Writes a plane of values in `[0, 1]` as grey levels (clamped).
pub fn write_plane_pgm(plane: &RealPlane, path: impl AsRef<Path>) -> Result<()> {
    let levels: Vec<u8> = plane
        .values()
        .iter()
        .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    write_text(path.as_ref(), &pgm_text(plane.width(), plane.height(), &levels))
}

// ---------------------------------------------------------------- CSV

/// Tabular results with a fixed column order.
pub trait MetricsCsv {
    fn header(&self) -> Vec<String>;
    fn rows(&self) -> Vec<Vec<String>>;
}

pub fn format_csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(path: impl AsRef<Path>, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    write_text(path.as_ref(), &format_csv(header, rows))
}

pub fn write_metrics_csv<T: MetricsCsv + ?Sized>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    write_csv(path, &value.header(), &value.rows())
}

/// Shortest decimal that round-trips.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn strings(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

impl MetricsCsv for VariogramSeries {
    fn header(&self) -> Vec<String> {
        strings(&["lag", "gamma"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.lags
            .iter()
            .zip(&self.gamma)
            .map(|(h, g)| vec![h.to_string(), fmt_f64(*g)])
            .collect()
    }
}

impl MetricsCsv for ConnectivitySeries {
    fn header(&self) -> Vec<String> {
        strings(&["lag", "probability"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.lags
            .iter()
            .zip(&self.probability)
            .map(|(h, p)| vec![h.to_string(), p.map_or_else(|| "NA".to_string(), fmt_f64)])
            .collect()
    }
}

impl MetricsCsv for AnodiResult {
    fn header(&self) -> Vec<String> {
        strings(&[
            "level",
            "between_a",
            "between_b",
            "within_a",
            "within_b",
            "d_between",
            "d_within",
            "ratio",
            "weight",
        ])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows: Vec<Vec<String>> = self
            .levels
            .iter()
            .map(|l| {
                vec![
                    l.level.to_string(),
                    fmt_f64(l.between_a),
                    fmt_f64(l.between_b),
                    fmt_f64(l.within_a),
                    fmt_f64(l.within_b),
                    fmt_f64(l.d_between),
                    fmt_f64(l.d_within),
                    fmt_f64(l.ratio),
                    fmt_f64(l.weight),
                ]
            })
            .collect();
        let mut agg = vec![String::new(); 9];
        agg[0] = "aggregate".into();
        agg[7] = fmt_f64(self.r);
        agg[8] = fmt_f64(self.levels.iter().map(|l| l.weight).sum());
        rows.push(agg);
        rows
    }
}

// ---------------------------------------------------------------- config

pub const REQUIRED_KEYS: [&str; 8] = [
    "ti",
    "sg_size",
    "template",
    "overlap",
    "dwt_level",
    "candidates",
    "realizations",
    "seed",
];
pub const OPTIONAL_KEYS: [&str; 5] = ["hard_data", "scoring", "facies_mode", "min_cut", "out_dir"];

fn known_key(key: &str) -> bool {
    REQUIRED_KEYS.contains(&key) || OPTIONAL_KEYS.contains(&key)
}

/// Where a configuration value came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueSource {
    File { line: usize },
    Override,
}

/// Raw `key = value` pairs before validation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigEntries {
    origin: Option<PathBuf>,
    values: BTreeMap<String, (String, ValueSource)>,
}

impl ConfigEntries {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(parse_err(origin, n, format!("expected `key = value`, found `{line}`")));
            };
            let (k, v) = (k.trim(), v.trim());
            if !known_key(k) {
                return Err(parse_err(origin, n, format!("unknown key `{k}`")));
            }
            if let Some((_, ValueSource::File { line: prev })) =
                values.insert(k.to_string(), (v.to_string(), ValueSource::File { line: n }))
            {
                return Err(parse_err(origin, n, format!("key `{k}` already set on line {prev}")));
            }
        }
        Ok(Self {
            origin: Some(origin.to_path_buf()),
            values,
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_text(path)?, path)
    }

    /// Sets or replaces a value, returning the previous one.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<Option<String>> {
        if !known_key(key) {
            return Err(Error::config(key, "unknown key"));
        }
        Ok(self
            .values
            .insert(key.to_string(), (value.into(), ValueSource::Override))
            .map(|(v, _)| v))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(v, _)| v.as_str())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// Every effective value in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &ValueSource)> {
        self.values.iter().map(|(k, (v, s))| (k.as_str(), v.as_str(), s))
    }

    fn value_err(&self, key: &str, message: impl std::fmt::Display) -> Error {
        let location = match (&self.origin, self.values.get(key)) {
            (Some(p), Some((_, ValueSource::File { line }))) => format!(" ({}:{line})", p.display()),
            _ => String::new(),
        };
        Error::config(key, format!("{message}{location}"))
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::config(key, "missing required key"))
    }

    fn number<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.required(key)?;
        v.parse::<T>()
            .map_err(|e| self.value_err(key, format!("`{v}`: {e}")))
    }

    /// Validates into a run description. Hard data are not loaded.
    pub fn to_run_config(&self) -> Result<RunConfig> {
        for key in REQUIRED_KEYS {
            self.required(key)?;
        }
        let sg = self.required("sg_size")?;
        let (sg_height, sg_width) = parse_size(sg).ok_or_else(|| {
            self.value_err("sg_size", format!("`{sg}` is not `N` or `<rows>x<cols>`"))
        })?;
        let mut sim = SimConfig::new(0, 0, 0, 0);
        sim.sg_height = sg_height;
        sim.sg_width = sg_width;
        sim.template = self.number("template")?;
        sim.overlap = self.number("overlap")?;
        sim.dwt_level = self.number("dwt_level")?;
        sim.candidates = self.number("candidates")?;
        sim.realizations = self.number("realizations")?;
        sim.master_seed = self.number("seed")?;
        if let Some(v) = self.get("scoring") {
            sim.scoring = ScoringMode::from_str(v).map_err(|e| self.value_err("scoring", e))?;
        }
        if let Some(v) = self.get("facies_mode") {
            sim.facies_mode = FaciesMode::from_str(v).map_err(|e| self.value_err("facies_mode", e))?;
        }
        if let Some(v) = self.get("min_cut") {
            sim.min_cut = parse_bool(v).ok_or_else(|| self.value_err("min_cut", format!("`{v}` is not a boolean")))?;
        }
        sim.validate()?;
        let path = |key: &str| self.get(key).filter(|v| !v.is_empty()).map(PathBuf::from);
        Ok(RunConfig {
            sim,
            ti: PathBuf::from(self.required("ti")?),
            hard_data: path("hard_data"),
            out_dir: path("out_dir"),
        })
    }
}

fn parse_size(s: &str) -> Option<(usize, usize)> {
    match s.split_once(['x', 'X']) {
        Some((r, c)) => Some((r.trim().parse().ok()?, c.trim().parse().ok()?)),
        None => {
            let n = s.parse().ok()?;
            Some((n, n))
        }
    }
}

pub fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

/// A validated configuration file.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub sim: SimConfig,
    pub ti: PathBuf,
    pub hard_data: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

/// Reads and validates a configuration file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    ConfigEntries::read(path)?.to_run_config()
}
