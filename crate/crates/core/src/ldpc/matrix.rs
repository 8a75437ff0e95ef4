//! Sparse binary parity-check matrices with an explicit eIRA split
//! `H = [H1 | H2]`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::distribution::{DegreeDistribution, DegreeGroup};
use crate::error::{Error, Result};

/// Column structure of the parity part `H2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Accumulator {
    /// Dual diagonal: column `j` has rows `j` and `j + 1`, the last column only
    /// its own row.
    Staircase,
    /// Block dual diagonal over `lift x lift` identities, preceded by one block
    /// column of weight-3 circulants at block rows `0`, `mb / 2` and `mb - 1`
    /// (right shifts 1, 0, 1). This is the parity layout of the IEEE 802.16e
    /// codes.
    Extended { lift: usize },
}

impl Accumulator {
    /// Reads the accumulator shape off the leading groups of `dist`.
    ///
    /// `{2 : N-K, ...}` selects the staircase; `{2 : a, 3 : z, ...}` with
    /// `a + z = N - K`, `z | N - K` and at least three block rows selects the
    /// extended layout. Returns the shape and the number of groups it consumes.
    pub fn infer(dist: &DegreeDistribution) -> Result<(Self, usize)> {
        let m = dist.parity_checks();
        let e = dist.entries.as_slice();
        match e {
            [first, ..] if first.degree == 2 && first.count == m => Ok((Accumulator::Staircase, 1)),
            [first, second, ..]
                if first.degree == 2
                    && second.degree == 3
                    && first.count + second.count == m
                    && m % second.count == 0
                    && m / second.count >= 3 =>
            {
                Ok((
                    Accumulator::Extended {
                        lift: second.count,
                    },
                    2,
                ))
            }
            _ => Err(Error::InvalidDistribution(format!(
                "leading groups of {dist} do not describe an eIRA accumulator with {m} columns"
            ))),
        }
    }

    /// Row lists of the `m` accumulator columns.
    pub fn columns(&self, m: usize) -> Vec<Vec<usize>> {
        match *self {
            Accumulator::Staircase => (0..m)
                .map(|j| if j + 1 < m { vec![j, j + 1] } else { vec![j] })
                .collect(),
            Accumulator::Extended { lift } => {
                let blocks = m / lift;
                let mid = blocks / 2;
                let mut cols = Vec::with_capacity(m);
                for c in 0..lift {
                    let shifted = (c + lift - 1) % lift;
                    let mut rows = vec![shifted, mid * lift + c, (blocks - 1) * lift + shifted];
                    rows.sort_unstable();
                    cols.push(rows);
                }
                for b in 1..blocks {
                    for c in 0..lift {
                        cols.push(vec![(b - 1) * lift + c, b * lift + c]);
                    }
                }
                cols
            }
        }
    }
}

/// Binary `(N - K) x N` matrix stored as sorted adjacency lists in both
/// directions. The first `K` columns form `H1`, the last `N - K` form `H2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    rows: usize,
    cols: usize,
    col_adj: Vec<Vec<usize>>,
    row_adj: Vec<Vec<usize>>,
    accumulator: Option<Accumulator>,
}

impl ParityCheckMatrix {
    /// Builds a matrix from per-column row lists. Duplicate entries and out of
    /// range rows are rejected.
    pub fn from_columns(rows: usize, col_adj: Vec<Vec<usize>>) -> Result<Self> {
        let cols = col_adj.len();
        if rows == 0 || rows >= cols {
            return Err(Error::InvalidParameter(format!(
                "matrix must have 0 < rows < cols, got {rows} x {cols}"
            )));
        }
        let mut row_adj = vec![Vec::new(); rows];
        let mut col_adj = col_adj;
        for (c, list) in col_adj.iter_mut().enumerate() {
            list.sort_unstable();
            for w in list.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::Construction(format!(
                        "repeated entry ({}, {c})",
                        w[0]
                    )));
                }
            }
            for &r in list.iter() {
                if r >= rows {
                    return Err(Error::dim(rows, r + 1));
                }
                row_adj[r].push(c);
            }
        }
        Ok(Self {
            rows,
            cols,
            col_adj,
            row_adj,
            accumulator: None,
        })
    }

    /// Builds a matrix from `(row, col)` entries.
    pub fn from_entries(rows: usize, cols: usize, entries: &[(usize, usize)]) -> Result<Self> {
        let mut col_adj = vec![Vec::new(); cols];
        for &(r, c) in entries {
            if c >= cols {
                return Err(Error::dim(cols, c + 1));
            }
            col_adj[c].push(r);
        }
        Self::from_columns(rows, col_adj)
    }

    pub fn with_accumulator(mut self, acc: Accumulator) -> Self {
        self.accumulator = Some(acc);
        self
    }

    /// Number of check nodes `N - K`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Codeword length `N`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Information length `K`; the width of `H1`.
    pub fn info_len(&self) -> usize {
        self.cols - self.rows
    }

    pub fn accumulator(&self) -> Option<Accumulator> {
        self.accumulator
    }

    pub fn column(&self, c: usize) -> &[usize] {
        &self.col_adj[c]
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_adj[r]
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.col_adj
    }

    pub fn row_lists(&self) -> &[Vec<usize>] {
        &self.row_adj
    }

    pub fn edge_count(&self) -> usize {
        self.col_adj.iter().map(Vec::len).sum()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        self.col_adj.iter().map(Vec::len).collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.row_adj.iter().map(Vec::len).collect()
    }

    /// Sorted `(row, col)` entry list.
    pub fn entries(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .col_adj
            .iter()
            .enumerate()
            .flat_map(|(c, rows)| rows.iter().map(move |&r| (r, c)))
            .collect();
        e.sort_unstable();
        e
    }

    /// `H c^T` over GF(2).
    pub fn syndrome(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if bits.len() != self.cols {
            return Err(Error::dim(self.cols, bits.len()));
        }
        Ok(self
            .row_adj
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &c| acc ^ (bits[c] & 1)))
            .collect())
    }

    /// True iff `H c^T = 0`.
    pub fn syndrome_check(&self, bits: &[u8]) -> Result<bool> {
        if bits.len() != self.cols {
            return Err(Error::dim(self.cols, bits.len()));
        }
        Ok(self
            .row_adj
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &c| acc ^ (bits[c] & 1)) == 0))
    }

    /// Whether `H2` has exactly the layout of `acc`.
    pub fn has_accumulator(&self, acc: Accumulator) -> bool {
        let k = self.info_len();
        acc.columns(self.rows)
            .iter()
            .enumerate()
            .all(|(j, rows)| self.col_adj[k + j] == *rows)
    }

    /// Number of length-4 cycles: pairs of columns sharing two or more rows,
    /// counted once per row pair.
    pub fn four_cycles(&self) -> usize {
        let mut count = 0;
        let mut shared = vec![0usize; self.cols];
        for c in 0..self.cols {
            let mut touched = Vec::new();
            for &r in &self.col_adj[c] {
                for &other in &self.row_adj[r] {
                    if other > c {
                        if shared[other] == 0 {
                            touched.push(other);
                        }
                        shared[other] += 1;
                    }
                }
            }
            for o in touched {
                let s = shared[o];
                count += s * (s - 1) / 2;
                shared[o] = 0;
            }
        }
        count
    }
}

/// Knobs for [`realize_matrix_with`].
#[derive(Debug, Clone, Copy)]
pub struct RealizeOptions {
    /// Swap passes allowed for removing repeated entries.
    pub repair_passes: usize,
    /// Remove length-4 cycles through `H1` when `N` does not exceed this.
    pub girth_limit: usize,
    /// Rewiring attempts per `H1` edge during 4-cycle removal.
    pub girth_attempts_per_edge: usize,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        Self {
            repair_passes: 100,
            girth_limit: 4096,
            girth_attempts_per_edge: 20,
        }
    }
}

/// Draws a random eIRA parity-check matrix for `dist` using `seed`.
pub fn realize_matrix(dist: &DegreeDistribution, seed: u64) -> Result<ParityCheckMatrix> {
    realize_matrix_with(dist, seed, &RealizeOptions::default())
}

pub fn realize_matrix_with(
    dist: &DegreeDistribution,
    seed: u64,
    opts: &RealizeOptions,
) -> Result<ParityCheckMatrix> {
    dist.ensure_valid()?;
    let (acc, consumed) = Accumulator::infer(dist)?;
    let m = dist.parity_checks();
    let k = dist.k;
    let dc = dist.check_degree;

    let acc_cols = acc.columns(m);
    let mut acc_row_weight = vec![0usize; m];
    for rows in &acc_cols {
        for &r in rows {
            acc_row_weight[r] += 1;
        }
    }

    let info_groups: &[DegreeGroup] = &dist.entries[consumed..];
    let mut col_sockets = Vec::new();
    let mut c = 0usize;
    for g in info_groups {
        for _ in 0..g.count {
            col_sockets.extend(std::iter::repeat_n(c, g.degree));
            c += 1;
        }
    }
    debug_assert_eq!(c, k);

    let mut capacity = Vec::with_capacity(m);
    for (r, &w) in acc_row_weight.iter().enumerate() {
        if w > dc {
            return Err(Error::Construction(format!(
                "accumulator row {r} has weight {w} > d_c = {dc}"
            )));
        }
        capacity.push(dc - w);
    }
    let total: usize = capacity.iter().sum();
    // a weight-1 accumulator terminator leaves one surplus check socket; the
    // row holding the terminator gives it up and ends at d_c - 1
    match total.checked_sub(col_sockets.len()) {
        Some(0) => {}
        Some(1) => capacity[m - 1] -= 1,
        _ => {
            return Err(Error::Construction(format!(
                "{} check sockets for {} information edges",
                total,
                col_sockets.len()
            )))
        }
    }
    let mut row_sockets = Vec::with_capacity(col_sockets.len());
    for (r, &cap) in capacity.iter().enumerate() {
        row_sockets.extend(std::iter::repeat_n(r, cap));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    row_sockets.shuffle(&mut rng);
    repair_repeats(&col_sockets, &mut row_sockets, opts.repair_passes, &mut rng)?;

    let mut col_adj: Vec<Vec<usize>> = vec![Vec::new(); dist.n];
    for (&c, &r) in col_sockets.iter().zip(&row_sockets) {
        col_adj[c].push(r);
    }
    for (j, rows) in acc_cols.into_iter().enumerate() {
        col_adj[k + j] = rows;
    }
    let mut h = ParityCheckMatrix::from_columns(m, col_adj)?.with_accumulator(acc);
    if dist.n <= opts.girth_limit {
        remove_four_cycles(&mut h, opts.girth_attempts_per_edge, &mut rng);
    }
    Ok(h)
}

/// Swaps row sockets until no column holds the same row twice.
fn repair_repeats(
    col_sockets: &[usize],
    row_sockets: &mut [usize],
    passes: usize,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let e = col_sockets.len();
    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(e);
    for _ in 0..passes {
        edges.clear();
        let mut bad = Vec::new();
        for i in 0..e {
            if !edges.insert((row_sockets[i], col_sockets[i])) {
                bad.push(i);
            }
        }
        if bad.is_empty() {
            return Ok(());
        }
        for i in bad {
            let (ci, ri) = (col_sockets[i], row_sockets[i]);
            for _ in 0..64 {
                let j = rng.random_range(0..e);
                let (cj, rj) = (col_sockets[j], row_sockets[j]);
                if cj == ci || rj == ri {
                    continue;
                }
                if edges.contains(&(rj, ci)) || edges.contains(&(ri, cj)) {
                    continue;
                }
                edges.remove(&(rj, cj));
                edges.insert((rj, ci));
                edges.insert((ri, cj));
                row_sockets.swap(i, j);
                break;
            }
        }
    }
    let mut seen = HashSet::with_capacity(e);
    if col_sockets
        .iter()
        .zip(row_sockets.iter())
        .all(|(&c, &r)| seen.insert((r, c)))
    {
        Ok(())
    } else {
        Err(Error::Construction(format!(
            "repeated entries remain after {passes} repair passes"
        )))
    }
}

/// Best-effort rewiring of `H1` edges that close length-4 cycles. Column and
/// row weights are preserved; cycles that cannot be broken within the attempt
/// budget are left in place.
fn remove_four_cycles(h: &mut ParityCheckMatrix, attempts_per_edge: usize, rng: &mut ChaCha8Rng) {
    let k = h.info_len();
    let info_edges: usize = h.col_adj[..k].iter().map(Vec::len).sum();
    if info_edges == 0 {
        return;
    }
    let budget = attempts_per_edge * info_edges;
    let mut attempts = 0;
    let mut stamp = Marks::new(h.cols);
    loop {
        let mut changed = false;
        for c in 0..k {
            let mut idx = 0;
            while idx < h.col_adj[c].len() {
                let r = h.col_adj[c][idx];
                if !edge_in_four_cycle(h, r, c, &mut stamp) {
                    idx += 1;
                    continue;
                }
                let mut fixed = false;
                while attempts < budget {
                    attempts += 1;
                    let c2 = rng.random_range(0..k);
                    let list = &h.col_adj[c2];
                    if c2 == c || list.is_empty() {
                        continue;
                    }
                    let r2 = list[rng.random_range(0..list.len())];
                    if r2 == r
                        || h.col_adj[c].binary_search(&r2).is_ok()
                        || h.col_adj[c2].binary_search(&r).is_ok()
                    {
                        continue;
                    }
                    move_edge(h, r, c, r2);
                    move_edge(h, r2, c2, r);
                    if !edge_in_four_cycle(h, r2, c, &mut stamp)
                        && !edge_in_four_cycle(h, r, c2, &mut stamp)
                    {
                        fixed = true;
                        changed = true;
                        break;
                    }
                    move_edge(h, r2, c, r);
                    move_edge(h, r, c2, r2);
                }
                if attempts >= budget {
                    return;
                }
                // on success the column list was re-sorted; rescan from the start
                idx = if fixed { 0 } else { idx + 1 };
            }
        }
        if !changed {
            return;
        }
    }
}

/// Replaces entry `(from_row, col)` with `(to_row, col)`.
fn move_edge(h: &mut ParityCheckMatrix, from_row: usize, col: usize, to_row: usize) {
    let list = &mut h.col_adj[col];
    let pos = list.binary_search(&from_row).expect("edge present");
    list.remove(pos);
    let ins = list.binary_search(&to_row).unwrap_err();
    list.insert(ins, to_row);

    let row = &mut h.row_adj[from_row];
    let pos = row.binary_search(&col).expect("edge present");
    row.remove(pos);
    let row = &mut h.row_adj[to_row];
    let ins = row.binary_search(&col).unwrap_err();
    row.insert(ins, col);
}

struct Marks {
    stamp: Vec<usize>,
    epoch: usize,
}

impl Marks {
    fn new(len: usize) -> Self {
        Self {
            stamp: vec![0; len],
            epoch: 0,
        }
    }
}

/// Whether edge `(r, c)` lies on a length-4 cycle.
fn edge_in_four_cycle(h: &ParityCheckMatrix, r: usize, c: usize, marks: &mut Marks) -> bool {
    marks.epoch += 1;
    let tag = marks.epoch;
    // columns reachable from c through one of its other rows
    for &r2 in &h.col_adj[c] {
        if r2 == r {
            continue;
        }
        for &c2 in &h.row_adj[r2] {
            marks.stamp[c2] = tag;
        }
    }
    h.row_adj[r]
        .iter()
        .any(|&c2| c2 != c && marks.stamp[c2] == tag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn census(h: &ParityCheckMatrix) -> std::collections::BTreeMap<usize, usize> {
        let mut m = std::collections::BTreeMap::new();
        for w in h.column_weights() {
            *m.entry(w).or_insert(0) += 1;
        }
        m
    }

    #[test]
    fn staircase_layout() {
        let cols = Accumulator::Staircase.columns(4);
        assert_eq!(cols, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3]]);
    }

    #[test]
    fn extended_layout_weights() {
        let cols = Accumulator::Extended { lift: 4 }.columns(16);
        assert_eq!(cols.len(), 16);
        assert!(cols[..4].iter().all(|c| c.len() == 3));
        assert!(cols[4..].iter().all(|c| c.len() == 2));
    }

    #[test]
    fn realize_small_staircase() {
        let d = DegreeDistribution::from_pairs(&[(2, 60), (3, 80), (6, 20)], 8, 160, 100);
        assert!(d.validate().is_valid());
        let h = realize_matrix(&d, 3).unwrap();
        let c = census(&h);
        // terminator column has weight 1
        assert_eq!(c[&1], 1);
        assert_eq!(c[&2], 59);
        assert_eq!(c[&3], 80);
        assert_eq!(c[&6], 20);
        let rw = h.row_weights();
        assert!(rw[..59].iter().all(|&w| w == 8));
        assert_eq!(rw[59], 7);
        assert!(h.has_accumulator(Accumulator::Staircase));
    }

    #[test]
    fn zero_degree_is_rejected() {
        let d = DegreeDistribution::from_pairs(&[(2, 60), (0, 80), (6, 20)], 6, 160, 100);
        assert!(realize_matrix(&d, 1).is_err());
    }

    #[test]
    fn repeated_entries_rejected() {
        assert!(ParityCheckMatrix::from_entries(2, 4, &[(0, 0), (0, 0)]).is_err());
    }

    #[test]
    fn four_cycle_count() {
        // columns 0 and 1 share rows 0 and 1
        let h = ParityCheckMatrix::from_entries(2, 3, &[(0, 0), (1, 0), (0, 1), (1, 1), (1, 2)]).unwrap();
        assert_eq!(h.four_cycles(), 1);
    }
}
