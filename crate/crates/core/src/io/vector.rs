use std::io::{BufRead, Write};

use super::fmt_scalar;
use crate::error::{Error, Result};

/// Reads one decimal per line. Blank lines and `%`/`#` comments are ignored.
pub fn read_vector<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("not a number: {t:?}"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                line: i + 1,
                message: "non-finite value".into(),
            });
        }
        out.push(v);
    }
    Ok(out)
}

pub fn write_vector<W: Write>(v: &[f64], mut w: W) -> Result<()> {
    for x in v {
        writeln!(w, "{}", fmt_scalar(*x))?;
    }
    Ok(())
}
