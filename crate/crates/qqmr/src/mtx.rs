//! Matrix Market reader for real matrices.
//!
//! Accepts `coordinate` and `array` formats with `real` or `integer` fields
//! and `general` or `symmetric` symmetry. Duplicates are summed, explicit
//! zeros kept, and symmetric storage is expanded.

use std::io::BufRead;
use std::path::Path;

use qqmr_core::CsrMatrix;

use crate::error::{AppError, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Coordinate,
    Array,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| AppError::io(path, e))?;
    parse_matrix_market(std::io::BufReader::new(file), path)
}

/// Parses from any reader; `path` only labels error messages.
pub fn parse_matrix_market(reader: impl BufRead, path: &Path) -> Result<CsrMatrix> {
    let err = |line: usize, msg: String| AppError::Parse { path: path.to_path_buf(), line, msg };
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (ln, header) = match lines.next() {
        Some((ln, l)) => (ln, l.map_err(|e| AppError::io(path, e))?),
        None => return Err(err(1, "empty file".into())),
    };
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(err(ln, format!("malformed header `{header}`")));
    }
    let format = match tokens[2].as_str() {
        "coordinate" => Format::Coordinate,
        "array" => Format::Array,
        f => return Err(err(ln, format!("unknown format `{f}`"))),
    };
    match tokens[3].as_str() {
        "real" | "integer" | "double" => {}
        f @ ("pattern" | "complex") => return Err(err(ln, format!("unsupported field `{f}`: only real matrices are read"))),
        f => return Err(err(ln, format!("unknown field `{f}`"))),
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        s => return Err(err(ln, format!("unsupported symmetry `{s}`"))),
    };

    let mut data = lines.filter_map(|(ln, l)| match l {
        Ok(l) => {
            let t = l.trim();
            (!t.is_empty() && !t.starts_with('%')).then(|| Ok((ln, t.to_string())))
        }
        Err(e) => Some(Err(AppError::io(path, e))),
    });

    let (ln, size) = data.next().ok_or_else(|| err(ln, "missing size line".into()))??;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| err(ln, format!("bad size entry `{t}`"))))
        .collect::<Result<_>>()?;
    let want = if format == Format::Coordinate { 3 } else { 2 };
    if dims.len() != want {
        return Err(err(ln, format!("expected {want} size fields, found {}", dims.len())));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if symmetric && rows != cols {
        return Err(err(ln, "symmetric matrix must be square".into()));
    }

    let mut entries = Vec::new();
    let mut push = |r: usize, c: usize, v: f64| {
        entries.push((r, c, v));
        if symmetric && r != c {
            entries.push((c, r, v));
        }
    };
    let parse_value = |ln: usize, t: &str| t.parse::<f64>().map_err(|_| err(ln, format!("bad value `{t}`")));

    match format {
        Format::Coordinate => {
            let nnz = dims[2];
            for k in 0..nnz {
                let (ln, line) = data.next().ok_or_else(|| err(ln, format!("expected {nnz} entries, found {k}")))??;
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 3 {
                    return Err(err(ln, format!("expected `row col value`, found `{line}`")));
                }
                let idx = |t: &str| t.parse::<usize>().map_err(|_| err(ln, format!("bad index `{t}`")));
                let (r, c) = (idx(f[0])?, idx(f[1])?);
                if r == 0 || c == 0 || r > rows || c > cols {
                    return Err(err(ln, format!("index ({r}, {c}) outside {rows}x{cols}")));
                }
                if symmetric && c > r {
                    return Err(err(ln, format!("entry ({r}, {c}) above the diagonal in symmetric storage")));
                }
                push(r - 1, c - 1, parse_value(ln, f[2])?);
            }
        }
        Format::Array => {
            // Column-major; symmetric storage lists the lower triangle only.
            for c in 0..cols {
                let start = if symmetric { c } else { 0 };
                for r in start..rows {
                    let (ln, line) = data.next().ok_or_else(|| err(ln, "too few array entries".into()))??;
                    let v = parse_value(ln, &line)?;
                    if v != 0.0 {
                        push(r, c, v);
                    }
                }
            }
        }
    }
    if let Some(extra) = data.next() {
        let (ln, _) = extra?;
        return Err(err(ln, "trailing data after the last entry".into()));
    }
    Ok(CsrMatrix::from_triplets(rows, cols, entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<CsrMatrix> {
        parse_matrix_market(s.as_bytes(), Path::new("t.mtx"))
    }

    #[test]
    fn diagonal() {
        let m = parse("%%MatrixMarket matrix coordinate real general\n% c\n2 2 2\n1 1 1.0\n2 2 2.0\n").unwrap();
        assert_eq!((m.get(0, 0), m.get(1, 1), m.get(0, 1), m.nnz()), (1.0, 2.0, 0.0, 2));
    }

    #[test]
    fn symmetric_expands() {
        let m = parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 4\n2 1 -3.5\n").unwrap();
        assert_eq!(m.get(1, 0), -3.5);
        assert_eq!(m.get(0, 1), -3.5);
    }

    #[test]
    fn duplicates_sum_and_zeros_stay() {
        let m = parse("%%MatrixMarket matrix coordinate integer general\n2 2 3\n1 2 1\n1 2 2\n2 1 0\n").unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn array_format() {
        let m = parse("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n").unwrap();
        assert_eq!((m.get(0, 0), m.get(1, 0), m.get(0, 1), m.get(1, 1)), (1.0, 2.0, 3.0, 4.0));
        let s = parse("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n4\n").unwrap();
        assert_eq!((s.get(0, 1), s.get(1, 0), s.get(1, 1)), (2.0, 2.0, 4.0));
    }

    #[test]
    fn rejects_with_line_numbers() {
        for (text, line, needle) in [
            ("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n", 1, "pattern"),
            ("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n", 1, "complex"),
            ("%%MatrixMarket vector coordinate real general\n", 1, "header"),
            ("%%MatrixMarket matrix coordinate real general\n%\n2 2 1\n3 1 1.0\n", 4, "outside"),
            ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 x\n", 3, "bad value"),
            ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n", 2, "expected 2 entries"),
        ] {
            match parse(text) {
                Err(AppError::Parse { line: l, msg, .. }) => {
                    assert_eq!(l, line, "{msg}");
                    assert!(msg.contains(needle), "{msg}");
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }
}
