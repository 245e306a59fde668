//! Matrix files: MatrixMarket (array and coordinate), headerless CSV and
//! JSON `{rows, cols, entries}`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarket,
    Csv,
    Json,
}

impl MatrixFormat {
    /// Guesses from the extension; anything unrecognized is MatrixMarket.
    pub fn from_path(path: &Path) -> MatrixFormat {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("csv") => MatrixFormat::Csv,
            Some("json") => MatrixFormat::Json,
            _ => MatrixFormat::MatrixMarket,
        }
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn number(tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(format!("not a number: {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(format!("non-finite entry {tok:?}")));
    }
    Ok(v)
}

fn count(tok: Option<&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| parse_err(format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(format!("bad {what}")))
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
}

pub fn parse_matrix_market(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| parse_err("empty file"))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err("missing %%MatrixMarket matrix header"));
    }
    let coordinate = match fields[2].as_str() {
        "array" => false,
        "coordinate" => true,
        other => return Err(parse_err(format!("unsupported layout {other}"))),
    };
    if !matches!(fields[3].as_str(), "real" | "integer" | "double") {
        return Err(parse_err(format!("unsupported field type {}", fields[3])));
    }
    let symmetry = match fields[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        other => return Err(parse_err(format!("unsupported symmetry {other}"))),
    };
    let mut body = lines.map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('%'));
    let size_line = body.next().ok_or_else(|| parse_err("missing size line"))?;
    let mut size = size_line.split_whitespace();
    let rows = count(size.next(), "row count")?;
    let cols = count(size.next(), "column count")?;
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err("symmetric storage needs a square matrix"));
    }
    let mut m = DenseMatrix::zeros(rows, cols);
    let mirror = |m: &mut DenseMatrix, i: usize, j: usize, v: f64| {
        m.set(i, j, v);
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => m.set(j, i, v),
                Symmetry::Skew => m.set(j, i, -v),
            }
        }
    };
    if coordinate {
        let nnz = count(size.next(), "entry count")?;
        for k in 0..nnz {
            let line = body.next().ok_or_else(|| parse_err(format!("expected {nnz} entries, got {k}")))?;
            let mut tok = line.split_whitespace();
            let i = count(tok.next(), "row index")?;
            let j = count(tok.next(), "column index")?;
            let v = number(tok.next().ok_or_else(|| parse_err("missing value"))?)?;
            if i == 0 || j == 0 || i > rows || j > cols {
                return Err(parse_err(format!("index ({i},{j}) out of range")));
            }
            mirror(&mut m, i - 1, j - 1, v);
        }
    } else {
        // column-major; symmetric storage lists the lower triangle only
        let values = body.flat_map(str::split_whitespace).map(number).collect::<Result<Vec<f64>>>()?;
        let mut it = values.into_iter();
        for j in 0..cols {
            let start = match symmetry {
                Symmetry::General => 0,
                Symmetry::Symmetric => j,
                Symmetry::Skew => j + 1,
            };
            for i in start..rows {
                let v = it.next().ok_or_else(|| parse_err("too few array entries"))?;
                mirror(&mut m, i, j, v);
            }
        }
        if it.next().is_some() {
            return Err(parse_err("too many array entries"));
        }
    }
    Ok(m)
}

pub fn parse_csv(text: &str) -> Result<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push(record.iter().map(number).collect::<Result<_>>()?);
    }
    if rows.is_empty() {
        return Err(parse_err("empty CSV"));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(parse_err("ragged CSV rows"));
    }
    Ok(DenseMatrix::from_rows(&rows))
}

pub fn parse_json(text: &str) -> Result<DenseMatrix> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<DenseMatrix> {
    match format {
        MatrixFormat::MatrixMarket => parse_matrix_market(text),
        MatrixFormat::Csv => parse_csv(text),
        MatrixFormat::Json => parse_json(text),
    }
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text, MatrixFormat::from_path(path))
}

/// Dense `array real general` with 17 significant digits.
pub fn to_matrix_market(m: &DenseMatrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix array real general\n");
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let _ = writeln!(out, "{:.16e}", m.get(i, j));
        }
    }
    out
}

pub fn to_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(m: &DenseMatrix) -> String {
    serde_json::to_string(m).expect("matrices serialize")
}

pub fn format_matrix(m: &DenseMatrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::MatrixMarket => to_matrix_market(m),
        MatrixFormat::Csv => to_csv(m),
        MatrixFormat::Json => to_json(m),
    }
}

pub fn write_matrix(path: &Path, m: &DenseMatrix) -> Result<()> {
    std::fs::write(path, format_matrix(m, MatrixFormat::from_path(path)))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_symmetric() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 4\n1 1 5\n2 1 4\n3 1 2\n3 2 -2\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m.get(0, 1), 4.0);
        assert_eq!(m.get(1, 2), -2.0);
        assert_eq!(m.get(2, 2), 0.0);
    }

    #[test]
    fn array_is_column_major() {
        let text = "%%MatrixMarket matrix array real general\n2 3\n1\n4\n2\n5\n3\n6\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m, DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]));
    }

    #[test]
    fn skew_array_fills_upper_triangle() {
        let text = "%%MatrixMarket matrix array real skew-symmetric\n3 3\n1\n2\n3\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m.get(1, 0), 1.0);
        assert_eq!(m.get(0, 1), -1.0);
        assert_eq!(m.get(2, 1), 3.0);
    }

    #[test]
    fn round_trips() {
        let m = DenseMatrix::from_rows(&[[0.1, -2.0 / 3.0], [1e-300, 7.0]]);
        assert_eq!(parse_matrix_market(&to_matrix_market(&m)).unwrap(), m);
        assert_eq!(parse_csv(&to_csv(&m)).unwrap(), m);
        assert_eq!(parse_json(&to_json(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_matrix_market("1 2\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n").is_err());
        assert!(parse_csv("1,2\n3\n").is_err());
        assert!(parse_csv("1,nan\n").is_err());
        assert!(parse_json(r#"{"rows":2,"cols":2,"entries":[1]}"#).is_err());
    }
}
