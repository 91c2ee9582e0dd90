//! Matrix Market coordinate I/O.
//!
//! Files use 1-based indices. Every stored entry is written, so structural zeros
//! appear as explicit `0` values; the writer records this with a
//! `% structural-zeros: preserved` comment line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

pub const STRUCTURAL_ZEROS_COMMENT: &str = "% structural-zeros: preserved";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    General,
    /// Only the lower triangle is stored on disk.
    Symmetric,
}

pub fn write_matrix_market<T: Scalar, W: Write>(
    m: &SparseMatrix<T>,
    symmetry: Symmetry,
    mut out: W,
) -> Result<()> {
    if symmetry == Symmetry::Symmetric && !m.is_symmetric() {
        return Err(Error::InvalidArgument(
            "cannot write a non-symmetric matrix in symmetric format".into(),
        ));
    }
    let keep = |i: usize, j: usize| symmetry == Symmetry::General || i >= j;
    let count = m.iter().filter(|&(i, j, _)| keep(i, j)).count();
    let kind = match symmetry {
        Symmetry::General => "general",
        Symmetry::Symmetric => "symmetric",
    };
    writeln!(out, "%%MatrixMarket matrix coordinate real {kind}")?;
    writeln!(out, "{STRUCTURAL_ZEROS_COMMENT}")?;
    writeln!(out, "{} {} {}", m.nrows(), m.ncols(), count)?;
    for (i, j, v) in m.iter().filter(|&(i, j, _)| keep(i, j)) {
        // `{:e}` on f64 is shortest round-trip.
        writeln!(out, "{} {} {:e}", i + 1, j + 1, v.as_f64())?;
    }
    Ok(())
}

pub fn read_matrix_market<T: Scalar, R: Read>(input: R) -> Result<SparseMatrix<T>> {
    let reader = BufReader::new(input);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("bad header '{header}'"),
        });
    }
    if tokens[2] != "coordinate" {
        return Err(Error::Parse {
            line: 1,
            msg: "only coordinate format is supported".into(),
        });
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported field '{}'", tokens[3]),
        });
    }
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported symmetry '{other}'"),
            })
        }
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets: Vec<(usize, usize, T)> = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        let parse_err = |msg: &str| Error::Parse {
            line: lineno,
            msg: format!("{msg}: '{t}'"),
        };
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err("expected 'rows cols entries'"));
                }
                let v: Vec<usize> = fields
                    .iter()
                    .map(|f| f.parse().map_err(|_| parse_err("bad size line")))
                    .collect::<Result<_>>()?;
                size = Some((v[0], v[1], v[2]));
                triplets.reserve(v[2]);
            }
            Some((nrows, ncols, _)) => {
                if fields.len() != 3 {
                    return Err(parse_err("expected 'row col value'"));
                }
                let i: usize = fields[0].parse().map_err(|_| parse_err("bad row index"))?;
                let j: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_err("bad column index"))?;
                let v: f64 = fields[2].parse().map_err(|_| parse_err("bad value"))?;
                if i == 0 || j == 0 || i > nrows || j > ncols {
                    return Err(parse_err("index out of range"));
                }
                triplets.push((i - 1, j - 1, T::of(v)));
                if symmetry == Symmetry::Symmetric && i != j {
                    triplets.push((j - 1, i - 1, T::of(v)));
                }
            }
        }
    }
    let (nrows, ncols, declared) = size.ok_or(Error::Parse {
        line: 0,
        msg: "missing size line".into(),
    })?;
    let stored = match symmetry {
        Symmetry::General => triplets.len(),
        Symmetry::Symmetric => triplets.iter().filter(|t| t.0 >= t.1).count(),
    };
    if stored != declared {
        return Err(Error::Parse {
            line: 0,
            msg: format!("declared {declared} entries, found {stored}"),
        });
    }
    SparseMatrix::from_triplets(nrows, ncols, &triplets)
}

pub fn save<T: Scalar>(m: &SparseMatrix<T>, symmetry: Symmetry, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_market(m, symmetry, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load<T: Scalar>(path: &Path) -> Result<SparseMatrix<T>> {
    read_matrix_market(File::open(path)?)
}
