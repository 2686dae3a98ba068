//! Plain CSV helpers for dense matrices.
//!
//! Floats are written with Rust's `Debug` formatting, which is the shortest
//! representation that parses back to the same bits.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::Parse {
        line,
        msg: format!("{e}: {s:?}"),
    })
}

/// One row per line, comma separated.
pub fn write_matrix_rows<W: Write>(m: &DMatrix<f64>, w: &mut W) -> Result<()> {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_f64(m[(i, j)])).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_matrix_csv<W: Write>(m: &DMatrix<f64>, mut w: W) -> Result<()> {
    write_matrix_rows(m, &mut w)
}

/// Read a square matrix; blank lines and `#` lines are skipped.
pub fn read_matrix_csv<R: BufRead>(r: R) -> Result<DMatrix<f64>> {
    let (_, m) = read_matrix_with_comments(r)?;
    Ok(m)
}

/// Like [`read_matrix_csv`] but also returns the `#` comment lines (without
/// the leading `#`).
pub fn read_matrix_with_comments<R: BufRead>(r: R) -> Result<(Vec<String>, DMatrix<f64>)> {
    let mut comments = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let row = t
            .split(',')
            .map(|f| parse_f64(f, idx + 1))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected {} columns, got {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    let d = rows.len();
    if d == 0 || rows[0].len() != d {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected a square matrix, got {d} rows"),
        });
    }
    Ok((comments, DMatrix::from_fn(d, d, |i, j| rows[i][j])))
}
