//! alist text format.
//!
//! ```text
//! N M
//! max_col_degree max_row_degree
//! col degrees (N values)
//! row degrees (M values)
//! N lines: rows of each column, 1-indexed
//! M lines: columns of each row, 1-indexed
//! ```
//!
//! Zero padding is not accepted; every index must be at least 1.

use std::fmt::Write as _;
use std::path::Path;

use super::matrix::ParityCheckMatrix;
use crate::error::{Error, Result};

pub fn to_alist(h: &ParityCheckMatrix) -> String {
    let cw = h.column_weights();
    let rw = h.row_weights();
    let mut s = String::new();
    let join = |v: &mut dyn Iterator<Item = usize>| {
        v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    writeln!(s, "{} {}", h.cols(), h.rows()).unwrap();
    writeln!(
        s,
        "{} {}",
        cw.iter().max().copied().unwrap_or(0),
        rw.iter().max().copied().unwrap_or(0)
    )
    .unwrap();
    writeln!(s, "{}", join(&mut cw.iter().copied())).unwrap();
    writeln!(s, "{}", join(&mut rw.iter().copied())).unwrap();
    for c in 0..h.cols() {
        writeln!(s, "{}", join(&mut h.column(c).iter().map(|r| r + 1))).unwrap();
    }
    for r in 0..h.rows() {
        writeln!(s, "{}", join(&mut h.row(r).iter().map(|c| c + 1))).unwrap();
    }
    s
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next line's numbers and its 1-based line number. Blank lines are skipped.
    fn next_numbers(&mut self) -> Result<(usize, Vec<usize>)> {
        for (i, line) in self.inner.by_ref() {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Alist {
                        line: line_no,
                        msg: format!("not a non-negative integer: {t:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((line_no, nums));
        }
        Err(Error::Alist {
            line: 0,
            msg: "unexpected end of file".into(),
        })
    }

    fn expect_len(&mut self, len: usize, what: &str) -> Result<(usize, Vec<usize>)> {
        let (line, nums) = self.next_numbers()?;
        if nums.len() != len {
            return Err(Error::Alist {
                line,
                msg: format!("{what}: expected {len} values, found {}", nums.len()),
            });
        }
        Ok((line, nums))
    }
}

pub fn from_alist(text: &str) -> Result<ParityCheckMatrix> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (_, dims) = lines.expect_len(2, "dimensions")?;
    let (n, m) = (dims[0], dims[1]);
    let (line, maxes) = lines.expect_len(2, "maximum degrees")?;
    let (max_col, max_row) = (maxes[0], maxes[1]);
    let (_, col_deg) = lines.expect_len(n, "column degrees")?;
    let (_, row_deg) = lines.expect_len(m, "row degrees")?;
    if col_deg.iter().max().copied().unwrap_or(0) != max_col
        || row_deg.iter().max().copied().unwrap_or(0) != max_row
    {
        return Err(Error::Alist {
            line,
            msg: "maximum degrees disagree with degree lists".into(),
        });
    }

    let mut col_adj = Vec::with_capacity(n);
    for (c, &d) in col_deg.iter().enumerate() {
        let (line, nums) = lines.expect_len(d, &format!("column {}", c + 1))?;
        let mut rows = Vec::with_capacity(d);
        for x in nums {
            if x == 0 || x > m {
                return Err(Error::Alist {
                    line,
                    msg: format!("row index {x} outside 1..={m}"),
                });
            }
            rows.push(x - 1);
        }
        col_adj.push(rows);
    }
    let mut row_entries = Vec::new();
    for (r, &d) in row_deg.iter().enumerate() {
        let (line, nums) = lines.expect_len(d, &format!("row {}", r + 1))?;
        for x in nums {
            if x == 0 || x > n {
                return Err(Error::Alist {
                    line,
                    msg: format!("column index {x} outside 1..={n}"),
                });
            }
            row_entries.push((r, x - 1));
        }
    }
    let h = ParityCheckMatrix::from_columns(m, col_adj)?;
    row_entries.sort_unstable();
    if row_entries != h.entries() {
        return Err(Error::Alist {
            line: 0,
            msg: "row lists and column lists describe different matrices".into(),
        });
    }
    Ok(h)
}

pub fn load_alist(path: impl AsRef<Path>) -> Result<ParityCheckMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_alist(&text)
}

pub fn save_alist(h: &ParityCheckMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_alist(h)).map_err(|e| Error::io(path, e))
}
