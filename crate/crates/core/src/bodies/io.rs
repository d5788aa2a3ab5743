//! Plain-text body files.
//!
//! ```text
//! # optional comments
//! d 2
//! n 3
//! 0 0
//! 1 0
//! 0 1
//! ```
//!
//! Coordinates are written with 17 significant digits so that a save/load
//! round trip reproduces every vertex bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use super::VPolytope;
use crate::error::{Error, Result};
use crate::scalar::Real;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn header_value(line_no: usize, text: &str, key: &str) -> Result<usize> {
    let mut parts = text.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => v
            .parse::<usize>()
            .map_err(|e| parse_err(line_no, format!("bad value for '{key}': {e}"))),
        _ => Err(parse_err(line_no, format!("expected '{key} <int>', found '{text}'"))),
    }
}

/// Parses the body file format from a string.
pub fn parse_body<T: Real>(text: &str) -> Result<VPolytope<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, l) = lines.next().ok_or_else(|| parse_err(1, "missing 'd' header"))?;
    let dim = header_value(ln, l, "d")?;
    if dim == 0 {
        return Err(parse_err(ln, "dimension must be at least 1"));
    }
    let (ln, l) = lines.next().ok_or_else(|| parse_err(ln + 1, "missing 'n' header"))?;
    let count = header_value(ln, l, "n")?;
    if count == 0 {
        return Err(parse_err(ln, "a body needs at least one vertex"));
    }

    let mut coords = Vec::with_capacity(dim * count);
    let mut last_line = ln;
    for (ln, l) in lines {
        last_line = ln;
        if coords.len() == dim * count {
            return Err(parse_err(ln, format!("more than the declared {count} vertex rows")));
        }
        let row: Vec<&str> = l.split_whitespace().collect();
        if row.len() != dim {
            return Err(parse_err(ln, format!("expected {dim} coordinates, found {}", row.len())));
        }
        for tok in row {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(ln, format!("invalid number '{tok}'")))?;
            if !v.is_finite() {
                return Err(parse_err(ln, format!("non-finite coordinate '{tok}'")));
            }
            coords.push(T::lit(v));
        }
    }
    if coords.len() != dim * count {
        return Err(parse_err(
            last_line,
            format!("declared {count} vertices, found {}", coords.len() / dim),
        ));
    }
    VPolytope::from_flat(dim, coords)
}

/// Serializes a body; coordinates use 17 significant digits.
pub fn format_body<T: Real>(body: &VPolytope<T>) -> String {
    let mut out = String::new();
    writeln!(out, "d {}", body.ambient_dim()).unwrap();
    writeln!(out, "n {}", body.n_vertices()).unwrap();
    for v in body.vertices() {
        let row: Vec<String> = v.iter().map(|x| format!("{:.16e}", x.to_f64_lossy())).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn load_body<T: Real>(path: impl AsRef<Path>) -> Result<VPolytope<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    parse_body(&text)
}

pub fn save_body<T: Real>(body: &VPolytope<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_body(body))
        .map_err(|source| Error::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    #[test]
    fn single_point() {
        let b: VPolytope<f64> = parse_body("d 2\nn 1\n0 0\n").unwrap();
        assert_eq!(b.n_vertices(), 1);
        assert_eq!(b.vertex(0), &[0.0, 0.0]);
    }

    #[test]
    fn comments_blank_lines_crlf_and_scientific() {
        let text = "# header\r\nd 2\r\n\r\n# count\r\nn 2\r\n1e-3 -2.5E+1\r\n# mid\r\n  3 4  \r\n";
        let b: VPolytope<f64> = parse_body(text).unwrap();
        assert_eq!(b.vertex(0), &[1e-3, -25.0]);
        assert_eq!(b.vertex(1), &[3.0, 4.0]);
    }

    #[test]
    fn malformed_inputs_report_line_numbers() {
        let e = parse_body::<f64>("d 2\nn 1\n1 2 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_body::<f64>("d 2\nn 2\n1 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = parse_body::<f64>("n 2\nd 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_body::<f64>("d 1\nn 1\nabc\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_body::<f64>("d 1\nn 1\n1\n2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }));
        assert!(parse_body::<f64>("").is_err());
        assert!(parse_body::<f64>("d 1\nn 1\ninf\n").is_err());
    }

    #[test]
    fn save_load_round_trip_is_bit_exact() {
        let mut rng = RngStream::new(99, 0);
        let verts: Vec<Vec<f64>> =
            (0..5).map(|_| (0..3).map(|_| rng.gaussian() * 1e3).collect()).collect();
        let body = VPolytope::new(3, &verts).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("body.txt");
        save_body(&body, &path).unwrap();
        let back: VPolytope<f64> = load_body(&path).unwrap();
        assert_eq!(back, body);
    }

    #[test]
    fn missing_file_is_io_error() {
        let e = load_body::<f64>("/nonexistent/body.txt").unwrap_err();
        assert!(matches!(e, Error::Io { .. }));
    }
}
