//! Readers for MatrixMarket symmetric coordinate files and plain eigenvalue lists.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::operator::SparseSymmetricOperator;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads `%%MatrixMarket matrix coordinate real symmetric` data.
///
/// Indices are 1-based in the file. Entries may sit in either triangle.
pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<SparseSymmetricOperator> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() < 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "missing %%MatrixMarket matrix header"));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format '{}'", tokens[2])));
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(parse_err(1, format!("unsupported field '{}'", tokens[3])));
    }
    if tokens[4] != "symmetric" {
        return Err(parse_err(
            1,
            format!("unsupported symmetry '{}'", tokens[4]),
        ));
    }

    let mut size: Option<(usize, usize)> = None;
    let mut triplets = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "size line needs rows, cols, nnz"));
                }
                let nums: Vec<usize> = fields
                    .iter()
                    .map(|f| {
                        f.parse()
                            .map_err(|_| parse_err(lineno, format!("bad integer '{f}'")))
                    })
                    .collect::<Result<_>>()?;
                if nums[0] != nums[1] {
                    return Err(parse_err(lineno, "symmetric matrix must be square"));
                }
                size = Some((nums[0], nums[2]));
                triplets.reserve(nums[2]);
            }
            Some((n, _)) => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "entry needs row, col, value"));
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
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(lineno, format!("index ({i}, {j}) out of range")));
                }
                triplets.push((i - 1, j - 1, v));
            }
        }
    }
    let (n, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    if triplets.len() != nnz {
        return Err(parse_err(
            0,
            format!("expected {nnz} entries, found {}", triplets.len()),
        ));
    }
    SparseSymmetricOperator::from_triplets(n, triplets)
}

pub fn read_matrix_market_file(path: impl AsRef<Path>) -> Result<SparseSymmetricOperator> {
    read_matrix_market(BufReader::new(File::open(path)?))
}

/// One real value per line; blank lines and `#` comments are skipped.
pub fn read_eigenvalue_list<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t
            .parse()
            .map_err(|_| parse_err(idx + 1, format!("bad value '{t}'")))?;
        if !v.is_finite() {
            return Err(parse_err(idx + 1, "non-finite eigenvalue"));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(parse_err(0, "no eigenvalues found"));
    }
    Ok(out)
}

pub fn read_eigenvalue_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    read_eigenvalue_list(BufReader::new(File::open(path)?))
}
