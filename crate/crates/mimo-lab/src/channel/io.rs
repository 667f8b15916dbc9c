//! Plain-text matrix file format.
//!
//! First line `rows,cols`, then `rows×cols` lines of `re,im` in row-major
//! order. Values are printed with 17 significant digits so a save/load
//! round trip reproduces every `f64` bit-exactly.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub fn save_matrix(m: &ComplexMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(32 * m.entries().len() + 16);
    out.push_str(&format!("{},{}\n", m.rows(), m.cols()));
    for z in m.entries() {
        out.push_str(&format!("{:.16e},{:.16e}\n", z.re, z.im));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    let file =
        std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty file, expected `rows,cols` header".into() })?;
    let header = header.map_err(|e| Error::io(path.display().to_string(), e))?;
    let (rows, cols) = parse_pair(&header, 1, "rows,cols header")?;
    let (rows, cols) = (rows as usize, cols as usize);
    if rows == 0 || cols == 0 {
        return Err(Error::Parse { line: 1, msg: format!("invalid shape {rows}x{cols}") });
    }

    let mut data = Vec::with_capacity(rows * cols);
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        if data.len() == rows * cols {
            return Err(Error::Parse { line: line_no, msg: "more entries than rows×cols".into() });
        }
        let (re, im) = parse_pair(&line, line_no, "re,im entry")?;
        data.push(Complex64::new(re, im));
    }
    if data.len() != rows * cols {
        return Err(Error::Parse {
            line: data.len() + 2,
            msg: format!("expected {} entries, found {}", rows * cols, data.len()),
        });
    }
    ComplexMatrix::new(rows, cols, data)
}

fn parse_pair(line: &str, line_no: usize, what: &str) -> Result<(f64, f64)> {
    let mut parts = line.trim().split(',');
    let a = parts.next().map(str::trim).filter(|s| !s.is_empty());
    let b = parts.next().map(str::trim);
    let (Some(a), Some(b)) = (a, b) else {
        return Err(Error::Parse { line: line_no, msg: format!("malformed {what}: `{line}`") });
    };
    if parts.next().is_some() {
        return Err(Error::Parse { line: line_no, msg: format!("too many fields in {what}: `{line}`") });
    }
    let a = a
        .parse::<f64>()
        .map_err(|_| Error::Parse { line: line_no, msg: format!("bad number `{a}` in {what}") })?;
    let b = b
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse { line: line_no, msg: format!("bad number `{b}` in {what}") })?;
    Ok((a, b))
}

/// Writes to `path` atomically: a temp file in the same directory is
/// renamed into place, so readers never observe partial output.
pub(crate) fn write_atomic(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)
            .map_err(|e| Error::io(tmp.display().to_string(), e))?;
        f.write_all(contents.as_bytes())
            .map_err(|e| Error::io(tmp.display().to_string(), e))?;
        f.sync_all().ok();
    }
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path.display().to_string(), e))
}
