//! Matrix Market coordinate I/O (`real general`, 1-based indices).

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::operator::CsrMatrix;

const HEADER: &str = "%%MatrixMarket matrix coordinate real general";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn read_matrix_market(reader: impl BufRead) -> Result<CsrMatrix> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, format!("bad header {header:?}")));
    }
    if tokens[2] != "coordinate" || tokens[3] != "real" || tokens[4] != "general" {
        return Err(parse_err(
            1,
            format!("unsupported format {:?}; only coordinate real general", &tokens[2..]),
        ));
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "size line needs rows cols nnz"));
                }
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|e| parse_err(lineno, format!("{s:?}: {e}")))
                };
                let dims = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
                triplets.reserve(dims.2);
                size = Some(dims);
            }
            Some((rows, cols, _)) => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "entry line needs row col value"));
                }
                let index = |s: &str, bound: usize| -> Result<usize> {
                    let i = s
                        .parse::<usize>()
                        .map_err(|e| parse_err(lineno, format!("{s:?}: {e}")))?;
                    if i == 0 || i > bound {
                        return Err(parse_err(lineno, format!("index {i} outside 1..={bound}")));
                    }
                    Ok(i - 1)
                };
                let r = index(fields[0], rows)?;
                let c = index(fields[1], cols)?;
                let v = fields[2]
                    .parse::<f64>()
                    .map_err(|e| parse_err(lineno, format!("{:?}: {e}", fields[2])))?;
                triplets.push((r, c, v));
            }
        }
    }
    let (rows, cols, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    if triplets.len() != nnz {
        return Err(parse_err(
            0,
            format!("declared {nnz} entries but found {}", triplets.len()),
        ));
    }
    CsrMatrix::from_triplets(rows, cols, triplets)
}

pub fn write_matrix_market(m: &CsrMatrix, mut w: impl Write) -> Result<()> {
    writeln!(w, "{HEADER}")?;
    writeln!(w, "{} {} {}", m.nrows(), m.ncols(), m.nnz())?;
    for (r, c, v) in m.triplets() {
        writeln!(w, "{} {} {:e}", r + 1, c + 1, v)?;
    }
    Ok(())
}
