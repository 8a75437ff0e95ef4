//! Systematic encoding for eIRA parity-check matrices.
//!
//! The parity part `H2` is solved with a precomputed schedule. Columns of a
//! weight-3 leading block (802.16e style) are obtained first by summing the
//! syndrome over residue classes of the lifting size: the dual-diagonal
//! columns cancel pairwise inside every class, leaving one parity bit per
//! class. Every remaining parity bit is then peeled from a row that has a
//! single unknown left. Plain staircases need only the peeling stage.

use super::matrix::ParityCheckMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Step {
    /// `p[col] = xor of s[r] for r in rows`
    ClassSum { col: usize, rows: Vec<usize> },
    /// `p[col] = s[row] ^ xor of p[j] for j in others`
    Peel {
        col: usize,
        row: usize,
        others: Vec<usize>,
    },
}

/// Linear-time systematic encoder `u -> [u | p]`.
#[derive(Debug, Clone)]
pub struct EiraEncoder {
    k: usize,
    m: usize,
    info_rows: Vec<Vec<usize>>,
    steps: Vec<Step>,
}

impl EiraEncoder {
    pub fn new(h: &ParityCheckMatrix) -> Result<Self> {
        let k = h.info_len();
        let m = h.rows();
        let parity_cols: Vec<&[usize]> = (0..m).map(|j| h.column(k + j)).collect();

        let mut known = vec![false; m];
        let mut steps = Vec::with_capacity(m);

        let lift = parity_cols.iter().take_while(|c| c.len() == 3).count();
        if lift > 0 && lift < m {
            if m % lift != 0 {
                return Err(Error::UnsupportedStructure(format!(
                    "{lift} weight-3 parity columns do not tile {m} rows"
                )));
            }
            let mut class_owner = vec![usize::MAX; lift];
            for (j, rows) in parity_cols.iter().enumerate() {
                let mut parity = vec![0u8; lift];
                for &r in rows.iter() {
                    parity[r % lift] ^= 1;
                }
                let odd: Vec<usize> = (0..lift).filter(|&c| parity[c] == 1).collect();
                match (j < lift, odd.as_slice()) {
                    (true, [class]) if class_owner[*class] == usize::MAX => {
                        class_owner[*class] = j;
                    }
                    (false, []) => {}
                    _ => {
                        return Err(Error::UnsupportedStructure(format!(
                            "parity column {j} does not fit the residue-class layout"
                        )))
                    }
                }
            }
            for (class, &col) in class_owner.iter().enumerate() {
                let rows = (class..m).step_by(lift).collect();
                steps.push(Step::ClassSum { col, rows });
                known[col] = true;
            }
        }

        // peel
        let mut unknown_in_row = vec![0usize; m];
        let mut row_parity: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (j, rows) in parity_cols.iter().enumerate() {
            for &r in rows.iter() {
                row_parity[r].push(j);
                if !known[j] {
                    unknown_in_row[r] += 1;
                }
            }
        }
        let mut queue: std::collections::VecDeque<usize> =
            (0..m).filter(|&r| unknown_in_row[r] == 1).collect();
        while let Some(r) = queue.pop_front() {
            if unknown_in_row[r] != 1 {
                continue;
            }
            let col = *row_parity[r]
                .iter()
                .find(|&&j| !known[j])
                .expect("one unknown left");
            known[col] = true;
            let others = row_parity[r].iter().copied().filter(|&j| j != col).collect();
            steps.push(Step::Peel { col, row: r, others });
            for &r2 in parity_cols[col] {
                unknown_in_row[r2] -= 1;
                if unknown_in_row[r2] == 1 {
                    queue.push_back(r2);
                }
            }
        }
        if let Some(j) = known.iter().position(|&x| !x) {
            return Err(Error::UnsupportedStructure(format!(
                "parity column {j} cannot be resolved by accumulation"
            )));
        }

        let info_rows = (0..m)
            .map(|r| h.row(r).iter().copied().filter(|&c| c < k).collect())
            .collect();
        Ok(Self {
            k,
            m,
            info_rows,
            steps,
        })
    }

    pub fn info_len(&self) -> usize {
        self.k
    }

    pub fn codeword_len(&self) -> usize {
        self.k + self.m
    }

    /// Encodes `info` (bits 0/1) into a systematic codeword `[info | parity]`.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        let mut out = vec![0u8; self.k + self.m];
        self.encode_into(info, &mut out)?;
        Ok(out)
    }

    pub fn encode_into(&self, info: &[u8], out: &mut [u8]) -> Result<()> {
        if info.len() != self.k {
            return Err(Error::dim(self.k, info.len()));
        }
        if out.len() != self.k + self.m {
            return Err(Error::dim(self.k + self.m, out.len()));
        }
        let syndrome: Vec<u8> = self
            .info_rows
            .iter()
            .map(|row| row.iter().fold(0u8, |a, &c| a ^ (info[c] & 1)))
            .collect();
        let (head, parity) = out.split_at_mut(self.k);
        for (dst, &b) in head.iter_mut().zip(info) {
            *dst = b & 1;
        }
        for step in &self.steps {
            match step {
                Step::ClassSum { col, rows } => {
                    parity[*col] = rows.iter().fold(0u8, |a, &r| a ^ syndrome[r]);
                }
                Step::Peel { col, row, others } => {
                    parity[*col] = others.iter().fold(syndrome[*row], |a, &j| a ^ parity[j]);
                }
            }
        }
        Ok(())
    }
}
