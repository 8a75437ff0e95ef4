//! DNC soft bit-mapping.
//!
//! With natural labeling the network symbol of a super-symbol is
//! `s = q1 xor q2`, and its `mu` bits are exactly the XOR of the two sources'
//! bits. The mapper first folds the `M^2` super-symbol metrics into `M`
//! network-symbol metrics, then forms extrinsic bit LLRs
//!
//! ```text
//! z_m = max*_{s: s_m = 1} [L(s) + sum_{m' != m} s_m' v_m']
//!     - max*_{s: s_m = 0} [L(s) + sum_{m' != m} s_m' v_m']
//! ```
//!
//! LLRs are `ln P(1) - ln P(0)` throughout.

use super::likelihood::{LogSumExp, SuperSymbolPosterior};
use super::{clamp_llr, label_bit};
use crate::error::{Error, Result};

/// `ln sum_{q1} p(y | q1, q1 xor s)` for every interval and network symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSymbolMetrics {
    order: usize,
    mu: usize,
    values: Vec<f64>,
}

impl NetworkSymbolMetrics {
    pub fn from_posterior(p: &SuperSymbolPosterior) -> Self {
        let m = p.order();
        let mut values = Vec::with_capacity(m * p.symbols());
        for k in 0..p.symbols() {
            let v = p.interval(k);
            for s in 0..m {
                let mut acc = LogSumExp::default();
                for q1 in 0..m {
                    acc.push(v[q1 * m + (q1 ^ s)]);
                }
                values.push(acc.value());
            }
        }
        Self {
            order: m,
            mu: m.trailing_zeros() as usize,
            values,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn symbols(&self) -> usize {
        self.values.len() / self.order
    }

    /// Number of network-coded bits covered, `mu` per interval.
    pub fn bits(&self) -> usize {
        self.symbols() * self.mu
    }

    pub fn interval(&self, k: usize) -> &[f64] {
        &self.values[k * self.order..(k + 1) * self.order]
    }

    /// Extrinsic LLRs for every network-coded bit given a-priori LLRs.
    pub fn somap_into(&self, apriori: &[f64], out: &mut [f64]) -> Result<()> {
        let nbits = self.bits();
        if apriori.len() != nbits {
            return Err(Error::dim(nbits, apriori.len()));
        }
        if out.len() != nbits {
            return Err(Error::dim(nbits, out.len()));
        }
        let (m, mu) = (self.order, self.mu);
        let mut total = [0.0f64; 64];
        for ((metric, v), z) in self
            .values
            .chunks_exact(m)
            .zip(apriori.chunks_exact(mu))
            .zip(out.chunks_exact_mut(mu))
        {
            for s in 0..m {
                let mut acc = metric[s];
                for (b, &vb) in v.iter().enumerate() {
                    if label_bit(s, b, mu) == 1 {
                        acc += vb;
                    }
                }
                total[s] = acc;
            }
            for (b, zb) in z.iter_mut().enumerate() {
                let mut one = LogSumExp::default();
                let mut zero = LogSumExp::default();
                for (s, &t) in total[..m].iter().enumerate() {
                    if label_bit(s, b, mu) == 1 {
                        one.push(t - v[b]);
                    } else {
                        zero.push(t);
                    }
                }
                *zb = clamp_llr(one.value() - zero.value());
            }
        }
        Ok(())
    }

    pub fn somap(&self, apriori: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.bits()];
        self.somap_into(apriori, &mut out)?;
        Ok(out)
    }
}

/// Extrinsic network-bit LLRs from super-symbol log-likelihoods and a-priori
/// LLRs (`mu` per interval).
pub fn dnc_somap(posteriors: &SuperSymbolPosterior, apriori: &[f64]) -> Result<Vec<f64>> {
    NetworkSymbolMetrics::from_posterior(posteriors).somap(apriori)
}
