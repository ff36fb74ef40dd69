//! Matrix Market (coordinate, real) and plain-text vector I/O.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::CsrMatrix;
use crate::error::{Error, Result};

/// Symmetry qualifier of a Matrix Market coordinate file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmSymmetry {
    General,
    Symmetric,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Reads a `%%MatrixMarket matrix coordinate real {general|symmetric}` stream.
///
/// Symmetric files are expanded to full storage.
pub fn read_matrix_market<R: Read>(reader: R) -> Result<CsrMatrix> {
    let reader = BufReader::new(reader);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))?;
    let header = header?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "missing %%MatrixMarket matrix header"));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format '{}'", tokens[2])));
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(parse_err(1, format!("unsupported field '{}'", tokens[3])));
    }
    let symmetry = match tokens[4].as_str() {
        "general" => MmSymmetry::General,
        "symmetric" => MmSymmetry::Symmetric,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "expected 'rows cols nnz'"));
                }
                let p = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|e| parse_err(lineno, e.to_string()))
                };
                let dims = (p(fields[0])?, p(fields[1])?, p(fields[2])?);
                triplets.reserve(dims.2 * 2);
                size = Some(dims);
            }
            Some((nr, nc, _)) => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "expected 'row col value'"));
                }
                let i: usize = fields[0]
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad row index"))?;
                let j: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad column index"))?;
                let v: f64 = fields[2]
                    .parse()
                    .map_err(|_| parse_err(lineno, "bad value"))?;
                if i == 0 || j == 0 || i > nr || j > nc {
                    return Err(parse_err(lineno, "index out of range"));
                }
                triplets.push((i - 1, j - 1, v));
                if symmetry == MmSymmetry::Symmetric && i != j {
                    triplets.push((j - 1, i - 1, v));
                }
            }
        }
    }
    let (nr, nc, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    let stored = match symmetry {
        MmSymmetry::General => triplets.len(),
        MmSymmetry::Symmetric => triplets.iter().filter(|t| t.0 >= t.1).count(),
    };
    if stored != nnz {
        return Err(parse_err(
            0,
            format!("header declares {nnz} entries, found {stored}"),
        ));
    }
    CsrMatrix::from_triplets(nr, nc, &triplets)
}

/// Writes `a` in coordinate format. With [`MmSymmetry::Symmetric`] only the
/// lower triangle is written; the caller is responsible for `a` being symmetric.
pub fn write_matrix_market<W: Write>(
    writer: W,
    a: &CsrMatrix,
    symmetry: MmSymmetry,
) -> Result<()> {
    let mut w = BufWriter::new(writer);
    let sym = match symmetry {
        MmSymmetry::General => "general",
        MmSymmetry::Symmetric => "symmetric",
    };
    writeln!(w, "%%MatrixMarket matrix coordinate real {sym}")?;
    let keep = |i: usize, j: usize| symmetry == MmSymmetry::General || j <= i;
    let count = (0..a.nrows())
        .map(|i| a.row(i).0.iter().filter(|&&j| keep(i, j)).count())
        .sum::<usize>();
    writeln!(w, "{} {} {}", a.nrows(), a.ncols(), count)?;
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            if keep(i, j) {
                writeln!(w, "{} {} {:.17e}", i + 1, j + 1, v)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix_market_file(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    read_matrix_market(File::open(path)?)
}

pub fn write_matrix_market_file(
    path: impl AsRef<Path>,
    a: &CsrMatrix,
    symmetry: MmSymmetry,
) -> Result<()> {
    write_matrix_market(File::create(path)?, a, symmetry)
}

/// Reads one value per line; blank lines and lines starting with `%` or `#` are skipped.
pub fn read_vector<R: Read>(reader: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') || t.starts_with('#') {
            continue;
        }
        out.push(
            t.parse::<f64>()
                .map_err(|e| parse_err(idx + 1, e.to_string()))?,
        );
    }
    Ok(out)
}

/// Writes one value per line in round-trip precision.
pub fn write_vector<W: Write>(writer: W, v: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(writer);
    for x in v {
        writeln!(w, "{x:.17e}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_vector_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    read_vector(File::open(path)?)
}

pub fn write_vector_file(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    write_vector(File::create(path)?, v)
}
