//! CSV tables with trailing `#` comment lines, and a minimal SVG line chart.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{ExpError, ExpResult};

/// Numeric cell: 17 significant digits, `.` decimal separator.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Written after the records as `# ` comment lines.
    pub footer: Vec<String>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width does not match header {:?}", self.header);
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.footer.push(line.into());
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let c = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[c].as_str()).collect())
    }

    /// Numeric view of a column; unparsable cells become NaN.
    pub fn numeric(&self, name: &str) -> Option<Vec<f64>> {
        Some(self.column(name)?.into_iter().map(|s| s.parse().unwrap_or(f64::NAN)).collect())
    }

    pub fn to_csv_string(&self) -> ExpResult<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| ExpError::config(format!("csv buffer: {e}")))?;
        let mut out = String::from_utf8(bytes).map_err(|e| ExpError::config(e.to_string()))?;
        for line in &self.footer {
            for part in line.lines() {
                out.push_str("# ");
                out.push_str(part);
                out.push('\n');
            }
        }
        Ok(out)
    }

    /// Parses text written by [`CsvTable::to_csv_string`].
    pub fn parse(text: &str) -> ExpResult<Self> {
        let mut records = Vec::new();
        let mut footer = Vec::new();
        let mut body = String::new();
        for line in text.lines() {
            match line.strip_prefix('#') {
                Some(c) => footer.push(c.strip_prefix(' ').unwrap_or(c).to_string()),
                None => {
                    body.push_str(line);
                    body.push('\n');
                }
            }
        }
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let header = r.headers()?.iter().map(String::from).collect();
        for rec in r.records() {
            records.push(rec?.iter().map(String::from).collect());
        }
        Ok(Self { header, rows: records, footer })
    }
}

pub fn write_csv(table: &CsvTable, path: &Path) -> ExpResult<()> {
    let text = table.to_csv_string()?;
    fs::write(path, text).map_err(|e| ExpError::io(path, e))
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Option<Self> {
        let vals: Vec<f64> = values.filter(|v| v.is_finite() && (!log || *v > 0.0)).map(|v| if log { v.log10() } else { v }).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            return None;
        }
        let (lo, hi) = if hi - lo < 1e-12 { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
        let (lo, hi) = if log { (lo.floor(), hi.ceil()) } else { (lo, hi) };
        Some(Self { lo, hi, log })
    }

    fn map(&self, v: f64) -> Option<f64> {
        if !v.is_finite() || (self.log && v <= 0.0) {
            return None;
        }
        let t = if self.log { v.log10() } else { v };
        Some((t - self.lo) / (self.hi - self.lo))
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let span = (self.hi - self.lo) as i64;
            let stride = (span / 8).max(1);
            (self.lo as i64..=self.hi as i64)
                .step_by(stride as usize)
                .map(|k| ((k as f64 - self.lo) / (self.hi - self.lo), format!("1e{k}")))
                .collect()
        } else {
            (0..=5)
                .map(|i| {
                    let t = i as f64 / 5.0;
                    (t, format!("{:.3}", self.lo + t * (self.hi - self.lo)))
                })
                .collect()
        }
    }
}

/// Single 800×600 line chart with one polyline per `y_cols` entry. Cells
/// that are not finite (or not positive on log axes) are skipped.
pub fn svg_string(table: &CsvTable, x_col: &str, y_cols: &[&str], log_log: bool) -> ExpResult<String> {
    let xs = table.numeric(x_col).ok_or_else(|| ExpError::config(format!("no column '{x_col}'")))?;
    let mut series = Vec::new();
    for name in y_cols {
        series.push((*name, table.numeric(name).ok_or_else(|| ExpError::config(format!("no column '{name}'")))?));
    }
    let x_axis = Axis::fit(xs.iter().cloned(), log_log);
    let y_axis = Axis::fit(series.iter().flat_map(|(_, v)| v.iter().cloned()), log_log);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let title = format!("{} vs {}{}", y_cols.join(", "), x_col, if log_log { " (log-log)" } else { "" });
    let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, escape(&title));
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);

    if let (Some(xa), Some(ya)) = (&x_axis, &y_axis) {
        for (t, label) in xa.ticks() {
            let x = LEFT + t * pw;
            let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/>"##, TOP + ph);
            let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, escape(&label));
        }
        for (t, label) in ya.ticks() {
            let y = TOP + (1.0 - t) * ph;
            let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##, LEFT + pw);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#, LEFT - 6.0, y + 4.0, escape(&label));
        }
        for (k, (name, ys)) in series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let pts: Vec<String> = xs
                .iter()
                .zip(ys)
                .filter_map(|(&x, &y)| Some((xa.map(x)?, ya.map(y)?)))
                .map(|(tx, ty)| format!("{:.2},{:.2}", LEFT + tx * pw, TOP + (1.0 - ty) * ph))
                .collect();
            if !pts.is_empty() {
                let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, pts.join(" "));
            }
            let ly = TOP + 20.0 + 20.0 * k as f64;
            let lx = LEFT + pw + 12.0;
            let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 24.0);
            let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#, lx + 30.0, ly + 4.0, escape(name));
        }
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 14.0, escape(x_col));
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_svg(table: &CsvTable, x_col: &str, y_cols: &[&str], path: &Path, log_log: bool) -> ExpResult<()> {
    let text = svg_string(table, x_col, y_cols, log_log)?;
    fs::write(path, text).map_err(|e| ExpError::io(path, e))
}
