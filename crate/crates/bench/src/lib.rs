//! Shared fixtures for the benchmarks.

use pnc_core::channel::{stream_rng, transmit, CsiMode};
use pnc_core::modem::modulate;
use pnc_core::standards::BaseCode;
use pnc_core::{BpDecoder, Demodulator, FadingFrame, ObservationFrame, ParityCheckMatrix, SuperSymbolPosterior};
use rand::Rng;

pub fn wimax() -> ParityCheckMatrix {
    BaseCode::Wimax.standard_matrix(1).expect("standard matrix")
}

/// One received frame of `bits` random bits per source.
pub struct Frame {
    pub observation: ObservationFrame,
    pub fading: FadingFrame,
    pub demod: Demodulator,
}

pub fn frame(order: usize, bits: usize, n0: f64, seed: u64) -> Frame {
    let mut rng = stream_rng(seed, 0);
    let mut draw = || (0..bits).map(|_| rng.random::<bool>() as u8).collect::<Vec<_>>();
    let (b1, b2) = (draw(), draw());
    let x1 = modulate(&b1, order).unwrap();
    let x2 = modulate(&b2, order).unwrap();
    let mut rng = stream_rng(seed, 1);
    let fading = FadingFrame::rayleigh(x1.len(), &mut rng);
    let observation = transmit(&x1, &x2, &fading, n0, &mut rng).unwrap();
    Frame {
        observation,
        fading,
        demod: Demodulator::new(order, n0).unwrap(),
    }
}

impl Frame {
    pub fn posterior(&self, csi: CsiMode) -> SuperSymbolPosterior {
        self.demod.demodulate(&self.observation, &self.fading, csi).unwrap()
    }
}

/// Channel LLRs of a noisy all-zero codeword.
pub fn zero_codeword_llrs(decoder: &BpDecoder, sigma: f64, seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0);
    (0..decoder.codeword_len())
        .map(|_| {
            let n: f64 = rng.sample(rand_distr::StandardNormal);
            -2.0 / (sigma * sigma) * (1.0 + sigma * n)
        })
        .collect()
}
