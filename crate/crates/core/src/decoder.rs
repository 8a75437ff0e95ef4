//! Flooding sum-product decoding over the Tanner graph.
//!
//! Inputs and outputs use `ln P(1) - ln P(0)`; messages are kept internally
//! in the opposite sign so the check rule reads as the textbook
//! `sign = prod sign`, `|out| = phi(sum phi(|in|))` with
//! `phi(x) = -ln tanh(x / 2)`.

use crate::error::{Error, Result};
use crate::ldpc::ParityCheckMatrix;
use crate::modem::LLR_CLAMP;

/// Default number of decoding iterations.
pub const DEFAULT_ITERATIONS: usize = 100;

/// `phi(x) = -ln tanh(x / 2)`, its own inverse on `(0, inf)`.
#[inline]
fn phi(x: f64) -> f64 {
    // (1 + e) / (1 - e) = 1 + 2e / (1 - e) with e = exp(-x)
    let em1 = (-x).exp_m1();
    (2.0 * (1.0 + em1) / -em1).ln_1p().min(f64::MAX)
}

/// Tanner graph with edges numbered variable-major.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    n: usize,
    var_ptr: Vec<usize>,
    check_ptr: Vec<usize>,
    /// Edge ids grouped by check node.
    check_edges: Vec<usize>,
    /// Variable of each check-grouped edge, parallel to `check_edges`.
    check_vars: Vec<usize>,
}

impl BpDecoder {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let n = h.cols();
        let m = h.rows();
        let mut var_ptr = Vec::with_capacity(n + 1);
        var_ptr.push(0);
        // edge id of (row, col) in variable-major order
        let mut edge_of: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
        let mut e = 0;
        for c in 0..n {
            for &r in h.column(c) {
                edge_of[r].push((e, c));
                e += 1;
            }
            var_ptr.push(e);
        }
        let mut check_ptr = Vec::with_capacity(m + 1);
        check_ptr.push(0);
        let mut check_edges = Vec::with_capacity(e);
        let mut check_vars = Vec::with_capacity(e);
        for list in edge_of {
            for (id, c) in list {
                check_edges.push(id);
                check_vars.push(c);
            }
            check_ptr.push(check_edges.len());
        }
        Self {
            n,
            var_ptr,
            check_ptr,
            check_edges,
            check_vars,
        }
    }

    pub fn codeword_len(&self) -> usize {
        self.n
    }

    pub fn checks(&self) -> usize {
        self.check_ptr.len() - 1
    }

    pub fn edges(&self) -> usize {
        self.check_edges.len()
    }

    pub fn state(&self) -> DecoderState<'_> {
        let e = self.edges();
        DecoderState {
            dec: self,
            channel: vec![0.0; self.n],
            v2c: vec![0.0; e],
            c2v: vec![0.0; e],
            mags: Vec::with_capacity(64),
            incoming: vec![0.0; self.n],
            iterations: 0,
        }
    }

    /// True iff the hard decisions satisfy every check.
    pub fn syndrome_check(&self, hard: &[u8]) -> bool {
        (0..self.checks()).all(|r| {
            self.check_vars[self.check_ptr[r]..self.check_ptr[r + 1]]
                .iter()
                .fold(0u8, |a, &v| a ^ hard[v])
                == 0
        })
    }

    /// Runs up to `iterations` flooding iterations on channel LLRs `llr`.
    pub fn decode(&self, llr: &[f64], iterations: usize, early_exit: bool) -> Result<DecodeOutput> {
        if iterations == 0 {
            return Err(Error::InvalidParameter("at least one iteration is required".into()));
        }
        let mut st = self.state();
        st.set_channel(llr)?;
        let mut converged = false;
        for _ in 0..iterations {
            st.iterate();
            converged = st.converged();
            if early_exit && converged {
                break;
            }
        }
        Ok(DecodeOutput {
            posterior: st.posterior(),
            hard: st.hard_decisions(),
            extrinsic: st.extrinsic(),
            iterations: st.iterations(),
            converged,
        })
    }
}

/// Result of [`BpDecoder::decode`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutput {
    pub posterior: Vec<f64>,
    pub hard: Vec<u8>,
    /// `posterior - input`: the sum of incoming check messages.
    pub extrinsic: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Per-frame message memory.
#[derive(Debug, Clone)]
pub struct DecoderState<'a> {
    dec: &'a BpDecoder,
    /// Channel LLRs, internal sign.
    channel: Vec<f64>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    mags: Vec<f64>,
    /// Sum of incoming check messages per variable, internal sign.
    incoming: Vec<f64>,
    iterations: usize,
}

impl<'a> DecoderState<'a> {
    /// Replaces the channel LLRs while keeping the check messages.
    pub fn set_channel(&mut self, llr: &[f64]) -> Result<()> {
        if llr.len() != self.dec.n {
            return Err(Error::dim(self.dec.n, llr.len()));
        }
        for (dst, &l) in self.channel.iter_mut().zip(llr) {
            *dst = -l.clamp(-LLR_CLAMP, LLR_CLAMP);
        }
        Ok(())
    }

    /// One flooding iteration: all variable nodes, then all check nodes.
    pub fn iterate(&mut self) {
        let dec = self.dec;
        for v in 0..dec.n {
            let (lo, hi) = (dec.var_ptr[v], dec.var_ptr[v + 1]);
            let total = self.channel[v] + self.incoming[v];
            for e in lo..hi {
                self.v2c[e] = (total - self.c2v[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
        }
        self.incoming.iter_mut().for_each(|x| *x = 0.0);
        for r in 0..dec.checks() {
            let (lo, hi) = (dec.check_ptr[r], dec.check_ptr[r + 1]);
            let edges = &dec.check_edges[lo..hi];
            let mut sum = 0.0;
            let mut negative = false;
            let mut zeros = 0usize;
            self.mags.clear();
            for &e in edges {
                let x = self.v2c[e];
                negative ^= x < 0.0;
                if x == 0.0 {
                    zeros += 1;
                    self.mags.push(0.0);
                } else {
                    let p = phi(x.abs());
                    sum += p;
                    self.mags.push(p);
                }
            }
            for (i, &e) in edges.iter().enumerate() {
                let x = self.v2c[e];
                let mag = if x == 0.0 {
                    if zeros == 1 {
                        phi(sum)
                    } else {
                        0.0
                    }
                } else if zeros > 0 {
                    0.0
                } else {
                    phi((sum - self.mags[i]).max(0.0))
                };
                let sign_neg = negative ^ (x < 0.0);
                let out = if sign_neg { -mag } else { mag }.clamp(-LLR_CLAMP, LLR_CLAMP);
                self.c2v[e] = out;
                self.incoming[dec.check_vars[lo + i]] += out;
            }
        }
        self.iterations += 1;
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// A-posteriori LLRs.
    pub fn posterior(&self) -> Vec<f64> {
        self.channel
            .iter()
            .zip(&self.incoming)
            .map(|(c, i)| -(c + i))
            .collect()
    }

    /// Extrinsic LLRs `posterior - channel`.
    pub fn extrinsic(&self) -> Vec<f64> {
        self.incoming.iter().map(|i| -i).collect()
    }

    pub fn extrinsic_into(&self, out: &mut [f64]) {
        for (o, i) in out.iter_mut().zip(&self.incoming) {
            *o = -i;
        }
    }

    /// `1` where the posterior favors one.
    pub fn hard_decisions(&self) -> Vec<u8> {
        self.channel
            .iter()
            .zip(&self.incoming)
            .map(|(c, i)| u8::from(c + i < 0.0))
            .collect()
    }

    /// Hard decisions satisfy all checks and no posterior is exactly zero.
    pub fn converged(&self) -> bool {
        let undecided = self
            .channel
            .iter()
            .zip(&self.incoming)
            .any(|(c, i)| c + i == 0.0);
        !undecided && self.dec.syndrome_check(&self.hard_decisions())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> ParityCheckMatrix {
        ParityCheckMatrix::from_entries(
            3,
            6,
            &[(0, 0), (0, 1), (0, 2), (1, 2), (1, 3), (1, 4), (2, 4), (2, 5)],
        )
        .unwrap()
    }

    #[test]
    fn phi_is_involution() {
        for &x in &[0.01, 0.5, 1.0, 3.0, 10.0] {
            assert!((phi(phi(x)) - x).abs() < 1e-9 * x.max(1.0), "{x}");
        }
    }

    #[test]
    fn saturated_codeword_decodes_in_one_iteration() {
        let h = toy();
        let cw = [1u8, 1, 0, 1, 1, 1];
        assert!(h.syndrome_check(&cw).unwrap());
        let llr: Vec<f64> = cw.iter().map(|&b| if b == 1 { 50.0 } else { -50.0 }).collect();
        let out = BpDecoder::new(&h).decode(&llr, 1, true).unwrap();
        assert_eq!(out.hard, cw);
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn zero_input_is_a_fixed_point() {
        let out = BpDecoder::new(&toy()).decode(&[0.0; 6], 10, true).unwrap();
        assert!(out.posterior.iter().all(|&p| p == 0.0));
        assert!(!out.converged);
        assert_eq!(out.iterations, 10);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(BpDecoder::new(&toy()).decode(&[0.0; 5], 1, true).is_err());
    }

    #[test]
    fn syndrome_flags_single_flip() {
        let h = toy();
        let dec = BpDecoder::new(&h);
        let mut cw = vec![1u8, 1, 0, 1, 1, 1];
        assert!(dec.syndrome_check(&cw));
        cw[3] ^= 1;
        assert!(!dec.syndrome_check(&cw));
        assert!(dec.syndrome_check(&[0; 6]));
    }
}
