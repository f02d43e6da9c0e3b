//! Matrix Market coordinate format, integer field, 1-based indices.

use std::io::{BufRead, Write};

use num_bigint::BigInt;

use super::IntMatrix;
use crate::error::{Error, Result};

pub fn write_matrix_market<W: Write>(m: &IntMatrix, mut out: W) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate integer general")?;
    writeln!(out, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (i, j, v) in m.triplets() {
        writeln!(out, "{} {} {}", i + 1, j + 1, v)?;
    }
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(input: R) -> Result<IntMatrix> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::MatrixMarket("empty input".into()))??;
    let h = header.to_ascii_lowercase();
    if !h.starts_with("%%matrixmarket") || !h.contains("coordinate") || !h.contains("integer") {
        return Err(Error::MatrixMarket(format!("unsupported header: {header}")));
    }
    let symmetric = h.contains("symmetric");
    let mut size: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::MatrixMarket(format!("bad line: {line}"));
        match size {
            None => {
                if parts.len() != 3 {
                    return Err(bad());
                }
                let p: Vec<usize> = parts.iter().map(|s| s.parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
                size = Some((p[0], p[1], p[2]));
            }
            Some((r, c, _)) => {
                if parts.len() != 3 {
                    return Err(bad());
                }
                let i: usize = parts[0].parse().map_err(|_| bad())?;
                let j: usize = parts[1].parse().map_err(|_| bad())?;
                let v: BigInt = parts[2].parse().map_err(|_| bad())?;
                if i == 0 || j == 0 || i > r || j > c {
                    return Err(bad());
                }
                if symmetric && i != j {
                    entries.push((j - 1, i - 1, v.clone()));
                }
                entries.push((i - 1, j - 1, v));
            }
        }
    }
    let (r, c, nnz) = size.ok_or_else(|| Error::MatrixMarket("missing size line".into()))?;
    if !symmetric && entries.len() != nnz {
        return Err(Error::MatrixMarket(format!("expected {nnz} entries, found {}", entries.len())));
    }
    Ok(IntMatrix::from_triplets(r, c, entries))
}
