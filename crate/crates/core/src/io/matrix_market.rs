use std::io::{BufRead, Write};

use super::fmt_scalar;
use crate::error::{Error, Result};
use crate::linalg::{SpdMatrix, Storage, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarketLayout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads a real MatrixMarket file (coordinate or array; general or
/// symmetric) and validates it as SPD. Coordinate input is stored as CSR,
/// array input as dense.
pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<SpdMatrix> {
    SpdMatrix::new(read_symmetric_matrix_market(reader)?)
}

/// As [`read_matrix_market`] but stops after the symmetry check.
pub fn read_symmetric_matrix_market<R: BufRead>(reader: R) -> Result<SymMatrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let (layout, symmetry) = parse_header(&header)?;

    let mut data = lines.filter_map(|(no, l)| match l {
        Ok(s) => {
            let t = s.trim();
            (!t.is_empty() && !t.starts_with('%')).then(|| Ok((no, t.to_string())))
        }
        Err(e) => Some(Err(e)),
    });

    let (size_line, size) = data.next().ok_or_else(|| parse_err(1, "missing size line"))??;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(size_line, format!("bad size field {t:?}")))
        })
        .collect::<Result<_>>()?;
    let want = if layout == MarketLayout::Coordinate { 3 } else { 2 };
    if dims.len() != want {
        return Err(parse_err(
            size_line,
            format!("expected {want} size fields, found {}", dims.len()),
        ));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if rows != cols || rows == 0 {
        return Err(parse_err(
            size_line,
            format!("matrix must be square and nonempty, got {rows}x{cols}"),
        ));
    }
    let n = rows;

    match layout {
        MarketLayout::Coordinate => {
            let nnz = dims[2];
            let mut triplets = Vec::with_capacity(nnz * 2);
            let mut seen = 0;
            for item in data {
                let (no, line) = item?;
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(parse_err(no, format!("expected 'row col value', found {line:?}")));
                }
                let i = parse_index(fields[0], n, no)?;
                let j = parse_index(fields[1], n, no)?;
                let v = parse_value(fields[2], no)?;
                if symmetry == Symmetry::Symmetric {
                    if j > i {
                        return Err(parse_err(no, "upper-triangle entry in a symmetric file"));
                    }
                    if i != j {
                        triplets.push((j, i, v));
                    }
                }
                triplets.push((i, j, v));
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(size_line, format!("declared {nnz} entries, found {seen}")));
            }
            SymMatrix::from_triplets(n, &triplets)
        }
        MarketLayout::Array => {
            let mut values = Vec::new();
            for item in data {
                let (no, line) = item?;
                for t in line.split_whitespace() {
                    values.push(parse_value(t, no)?);
                }
            }
            let expected = match symmetry {
                Symmetry::General => n * n,
                Symmetry::Symmetric => n * (n + 1) / 2,
            };
            if values.len() != expected {
                return Err(parse_err(
                    size_line,
                    format!("expected {expected} values, found {}", values.len()),
                ));
            }
            let mut a = vec![0.0; n * n];
            let mut it = values.into_iter();
            // column-major
            for j in 0..n {
                let first = if symmetry == Symmetry::Symmetric { j } else { 0 };
                for i in first..n {
                    let v = it.next().expect("count checked");
                    a[i * n + j] = v;
                    if symmetry == Symmetry::Symmetric {
                        a[j * n + i] = v;
                    }
                }
            }
            SymMatrix::from_dense(n, a)
        }
    }
}

fn parse_header(header: &str) -> Result<(MarketLayout, Symmetry)> {
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, format!("malformed header {header:?}")));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => MarketLayout::Coordinate,
        "array" => MarketLayout::Array,
        other => return Err(parse_err(1, format!("unknown format {other:?}"))),
    };
    match tokens[3].as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(parse_err(1, format!("unsupported field {other:?}"))),
    }
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(parse_err(1, format!("unsupported symmetry {other:?}"))),
    };
    Ok((layout, symmetry))
}

fn parse_index(t: &str, n: usize, line: usize) -> Result<usize> {
    match t.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => Err(parse_err(line, format!("index {t:?} outside 1..={n}"))),
    }
}

fn parse_value(t: &str, line: usize) -> Result<f64> {
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_err(line, format!("bad value {t:?}"))),
    }
}

/// Writes the lower triangle as a symmetric MatrixMarket file. Coordinate
/// layout lists every stored entry (dense storage: nonzeros only).
pub fn write_matrix_market<W: Write>(a: &SymMatrix, layout: MarketLayout, mut w: W) -> Result<()> {
    let n = a.order();
    match layout {
        MarketLayout::Coordinate => {
            let mut entries = Vec::new();
            match a.storage() {
                Storage::Csr(c) => {
                    for i in 0..n {
                        entries.extend(c.row(i).filter(|&(j, _)| j <= i).map(|(j, v)| (i, j, v)));
                    }
                }
                Storage::Dense(d) => {
                    for i in 0..n {
                        for j in 0..=i {
                            if d[i * n + j] != 0.0 {
                                entries.push((i, j, d[i * n + j]));
                            }
                        }
                    }
                }
            }
            writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
            writeln!(w, "{n} {n} {}", entries.len())?;
            for (i, j, v) in entries {
                writeln!(w, "{} {} {}", i + 1, j + 1, fmt_scalar(v))?;
            }
        }
        MarketLayout::Array => {
            writeln!(w, "%%MatrixMarket matrix array real symmetric")?;
            writeln!(w, "{n} {n}")?;
            for j in 0..n {
                for i in j..n {
                    writeln!(w, "{}", fmt_scalar(a.get(i, j)))?;
                }
            }
        }
    }
    Ok(())
}
