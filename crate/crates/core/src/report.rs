//! Report records and table writers.
//!
//! Human-readable tables (CSV, Markdown) carry six significant digits;
//! JSON lines keep full precision and read back to identical values.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::finance::LevelizedMetric;
use crate::scenarios::{SweepRow, SWEEP_COLUMNS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Markdown,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Markdown => "md",
            Format::Jsonl => "jsonl",
        }
    }
}

/// One levelized result with the inputs it came from, for audit trails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub name: String,
    /// Discounted cost, USD. Absent for metrics that are not ratios.
    pub pv_cost: Option<f64>,
    /// Discounted energy, kWh.
    pub pv_energy: Option<f64>,
    /// USD/kWh
    pub value: f64,
    pub inputs_fingerprint: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    /// Set for results that need attention, e.g. a negative net LCOS.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

impl MetricRecord {
    pub fn from_metric(m: &LevelizedMetric, fingerprint: &str) -> Self {
        MetricRecord {
            name: m.name.clone(),
            pv_cost: Some(m.pv_cost),
            pv_energy: Some(m.pv_energy),
            value: m.value,
            inputs_fingerprint: fingerprint.to_string(),
            rate: None,
            flag: None,
        }
    }

    pub fn with_rate(mut self, rate: f64) -> Self {
        self.rate = Some(rate);
        self
    }
}

/// First 16 hex digits of the SHA-256 of the inputs' JSON form.
pub fn fingerprint<T: Serialize + ?Sized>(inputs: &T) -> Result<String> {
    let bytes = serde_json::to_vec(inputs)
        .map_err(|e| Error::Contract(format!("inputs do not serialize: {e}")))?;
    Ok(hex::encode(Sha256::digest(&bytes))[..16].to_string())
}

/// `x` rounded to six significant digits, printed without trailing zeros.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    let s = rounded.to_string();
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => sig6(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.headers.len() {
            return Err(Error::Contract(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.headers.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Contract(format!("csv encoding failed: {e}"));
        w.write_record(&self.headers).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Contract(format!("csv encoding failed: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Contract(e.to_string()))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("| {} |\n", self.headers.join(" | ")));
        // numbers right-aligned, text left-aligned, judged by the first row
        let rule: String = (0..self.headers.len())
            .map(|i| match self.rows.first().and_then(|r| r.get(i)) {
                Some(Cell::Text(_)) => "---|",
                _ => "---:|",
            })
            .collect();
        out.push_str(&format!("|{rule}\n"));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        out
    }
}

/// Headers of a rate-sweep table.
pub fn sweep_headers() -> Vec<String> {
    std::iter::once("r_pct")
        .chain(SWEEP_COLUMNS)
        .map(String::from)
        .collect()
}

/// Discount rate as a percentage, with binary round-off removed.
pub fn rate_pct(rate: f64) -> f64 {
    (rate * 100.0 * 1e9).round() / 1e9
}

pub fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(sweep_headers());
    for r in rows {
        let mut cells = vec![Cell::Num(rate_pct(r.rate))];
        cells.extend(r.values().map(Cell::Num));
        t.rows.push(cells);
    }
    t
}

/// One value of a multi-year case study in long format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyCell {
    pub year: i32,
    pub rate: f64,
    pub technology: String,
    pub bound: String,
    pub metric: String,
    pub value: f64,
}

/// Split a preset name like `vrb-lower` into technology and bound.
pub fn technology_and_bound(preset: &str) -> (String, String) {
    match preset.rsplit_once('-') {
        Some((t, b)) if matches!(b, "lower" | "upper") => (t.to_string(), b.to_string()),
        _ => (preset.to_string(), String::new()),
    }
}

pub fn plot_table(cells: &[CaseStudyCell]) -> Table {
    let mut t = Table::new(["year", "rate", "technology", "bound", "metric", "value"]);
    for c in cells {
        t.rows.push(vec![
            Cell::Text(c.year.to_string()),
            Cell::Num(c.rate),
            Cell::Text(c.technology.clone()),
            Cell::Text(c.bound.clone()),
            Cell::Text(c.metric.clone()),
            Cell::Num(c.value),
        ]);
    }
    t
}

/// Grid of one technology: a row per rate, a column per metric and year.
pub fn case_study_grid(cells: &[CaseStudyCell], technology: &str, bound: &str) -> Table {
    let mine: Vec<&CaseStudyCell> = cells
        .iter()
        .filter(|c| c.technology == technology && c.bound == bound)
        .collect();
    let mut columns: Vec<(String, i32)> = Vec::new();
    let mut rates: Vec<f64> = Vec::new();
    for c in &mine {
        if !columns.contains(&(c.metric.clone(), c.year)) {
            columns.push((c.metric.clone(), c.year));
        }
        if !rates.contains(&c.rate) {
            rates.push(c.rate);
        }
    }
    // metric order as first seen, years ascending within a metric
    let metric_order: Vec<String> = columns.iter().fold(Vec::new(), |mut acc, (m, _)| {
        if !acc.contains(m) {
            acc.push(m.clone());
        }
        acc
    });
    columns.sort_by_key(|(m, y)| (metric_order.iter().position(|x| x == m), *y));

    let mut t = Table::new(
        std::iter::once("d_pct".to_string()).chain(columns.iter().map(|(m, y)| format!("{m}_{y}"))),
    );
    for r in rates {
        let mut row = vec![Cell::Num(rate_pct(r))];
        for (m, y) in &columns {
            let v = mine
                .iter()
                .find(|c| c.rate == r && &c.metric == m && c.year == *y)
                .map_or(Cell::Text(String::new()), |c| Cell::Num(c.value));
            row.push(v);
        }
        t.rows.push(row);
    }
    t
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        let line = serde_json::to_string(item)
            .map_err(|e| Error::Contract(format!("record does not serialize: {e}")))?;
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Write `table` (csv/markdown) or `items` (jsonl) as `<dir>/<stem>.<ext>`
/// for each format, returning the paths written.
pub fn write_outputs<T: Serialize>(
    dir: &Path,
    stem: &str,
    formats: &[Format],
    table: &Table,
    items: &[T],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for &f in formats {
        let path = dir.join(format!("{stem}.{}", f.extension()));
        match f {
            Format::Csv => write_text(&path, &table.to_csv()?)?,
            Format::Markdown => write_text(&path, &table.to_markdown())?,
            Format::Jsonl => write_jsonl(&path, items)?,
        }
        written.push(path);
    }
    Ok(written)
}

pub fn records_table(records: &[MetricRecord]) -> Table {
    let mut t = Table::new([
        "name",
        "r_pct",
        "pv_cost_usd",
        "pv_energy_kwh",
        "value_usd_per_kwh",
        "flag",
        "inputs_fingerprint",
    ]);
    let opt = |v: Option<f64>| v.map_or(Cell::Text(String::new()), Cell::Num);
    for r in records {
        t.rows.push(vec![
            Cell::Text(r.name.clone()),
            opt(r.rate.map(rate_pct)),
            opt(r.pv_cost),
            opt(r.pv_energy),
            Cell::Num(r.value),
            Cell::Text(r.flag.clone().unwrap_or_default()),
            Cell::Text(r.inputs_fingerprint.clone()),
        ]);
    }
    t
}
