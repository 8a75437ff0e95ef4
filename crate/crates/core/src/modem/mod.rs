//! Noncoherent M-FSK modem for the network-coded relay: tone mapping,
//! super-symbol likelihoods, DNC soft bit-mapping and interleaving.

mod bessel;
pub mod interleaver;
pub mod likelihood;
pub mod somap;

pub use bessel::ln_i0;
pub use interleaver::Interleaver;
pub use likelihood::{Demodulator, SuperSymbolPosterior, DEFAULT_PHASE_NODES};
pub use somap::{dnc_somap, NetworkSymbolMetrics};

use crate::error::{Error, Result};

/// Largest LLR magnitude passed between receiver blocks.
pub const LLR_CLAMP: f64 = 50.0;

pub(crate) fn clamp_llr(x: f64) -> f64 {
    x.clamp(-LLR_CLAMP, LLR_CLAMP)
}

/// `mu = log2 M` for a power-of-two order `M >= 2`.
pub fn bits_per_symbol(order: usize) -> Result<usize> {
    if order < 2 || !order.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "modulation order {order} is not a power of two >= 2"
        )));
    }
    Ok(order.trailing_zeros() as usize)
}

/// Bit `m` (0 = most significant) of the `mu`-bit label `q`.
#[inline]
pub fn label_bit(q: usize, m: usize, mu: usize) -> u8 {
    ((q >> (mu - 1 - m)) & 1) as u8
}

/// Tone indices of one source; column `k` of the one-hot matrix `X` has its
/// single 1 at row `symbols[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolFrame {
    order: usize,
    symbols: Vec<usize>,
}

impl SymbolFrame {
    pub fn new(order: usize, symbols: Vec<usize>) -> Result<Self> {
        bits_per_symbol(order)?;
        if let Some(&q) = symbols.iter().find(|&&q| q >= order) {
            return Err(Error::InvalidParameter(format!("tone {q} >= M = {order}")));
        }
        Ok(Self { order, symbols })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Column `k` of the one-hot matrix.
    pub fn one_hot(&self, k: usize) -> Vec<u8> {
        let mut col = vec![0; self.order];
        col[self.symbols[k]] = 1;
        col
    }
}

/// Natural binary mapping: bits `mu k .. mu k + mu - 1`, most significant
/// first, select tone `q_k`.
pub fn modulate(bits: &[u8], order: usize) -> Result<SymbolFrame> {
    let mu = bits_per_symbol(order)?;
    if bits.len() % mu != 0 {
        return Err(Error::InvalidParameter(format!(
            "{} bits do not divide into {mu}-bit symbols",
            bits.len()
        )));
    }
    let symbols = bits
        .chunks_exact(mu)
        .map(|chunk| chunk.iter().fold(0usize, |q, &b| (q << 1) | (b & 1) as usize))
        .collect();
    SymbolFrame::new(order, symbols)
}

/// Inverse of [`modulate`].
pub fn symbols_to_bits(frame: &SymbolFrame) -> Vec<u8> {
    let mu = frame.order().trailing_zeros() as usize;
    frame
        .symbols()
        .iter()
        .flat_map(|&q| (0..mu).map(move |m| label_bit(q, m, mu)))
        .collect()
}
