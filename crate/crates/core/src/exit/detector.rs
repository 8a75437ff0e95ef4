//! Monte Carlo transfer characteristic of the DNC detector.
//!
//! For each a-priori level `I_A = k / B` the network bits receive synthetic
//! consistent-Gaussian priors `v = (b - 1/2) sigma^2 + x sigma` with
//! `sigma = J^-1(I_A)`, one SOMAP pass produces extrinsic LLRs, and their
//! mutual information with the bits is the ordinate. A cubic least-squares
//! fit turns the samples into `f_DET`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::jfunc::j_inv;
use super::mi::soft_loss;
use crate::channel::{noise_density, stream_rng, transmit, CsiMode, FadingFrame, NoiseConvention};
use crate::error::{Error, Result};
use crate::modem::{bits_per_symbol, label_bit, Demodulator, NetworkSymbolMetrics, SymbolFrame, DEFAULT_PHASE_NODES};

/// Number of a-priori sample points.
pub const DEFAULT_POINTS: usize = 100;

/// Codeword lengths at or above this use a single frame per characteristic.
const LONG_FRAME: usize = 16_384;

fn default_points() -> usize {
    DEFAULT_POINTS
}

fn default_phase_nodes() -> usize {
    DEFAULT_PHASE_NODES
}

/// Everything a characteristic depends on except the SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Modulation order `M`.
    pub order: usize,
    pub csi: CsiMode,
    /// Code rate used to convert `Eb/N0` into `N0`.
    pub rate: f64,
    /// Network bits per simulated frame.
    pub frame_bits: usize,
    pub frames: usize,
    pub seed: u64,
    #[serde(default)]
    pub noise: NoiseConvention,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_phase_nodes")]
    pub phase_nodes: usize,
}

impl DetectorConfig {
    /// One frame of `n` bits for long codes, eight for short ones.
    pub fn for_code(n: usize, rate: f64, order: usize, csi: CsiMode, seed: u64) -> Self {
        Self {
            order,
            csi,
            rate,
            frame_bits: n,
            frames: if n >= LONG_FRAME { 1 } else { 8 },
            seed,
            noise: NoiseConvention::default(),
            points: DEFAULT_POINTS,
            phase_nodes: DEFAULT_PHASE_NODES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mu = bits_per_symbol(self.order)?;
        if self.frame_bits == 0 || self.frame_bits % mu != 0 {
            return Err(Error::InvalidParameter(format!(
                "frame of {} bits does not split into {mu}-bit symbols",
                self.frame_bits
            )));
        }
        if self.frames == 0 {
            return Err(Error::InvalidParameter("at least one frame is required".into()));
        }
        if self.points < 4 {
            return Err(Error::InvalidParameter(format!(
                "{} sample points cannot support a cubic fit",
                self.points
            )));
        }
        Ok(())
    }

    /// A-priori abscissae `k / B`.
    pub fn grid(&self) -> Vec<f64> {
        apriori_grid(self.points)
    }
}

/// `k / points` for `k = 0..points`.
pub fn apriori_grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| k as f64 / points as f64).collect()
}

/// Sampled and fitted detector transfer characteristic at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorCharacteristic {
    pub ebn0_db: f64,
    pub n0: f64,
    pub config: DetectorConfig,
    pub i_a: Vec<f64>,
    pub i_e: Vec<f64>,
    /// `f0..f3` of `f(x) = f0 + f1 x + f2 x^2 + f3 x^3`.
    pub coefficients: [f64; 4],
    pub residual_rms: f64,
}

impl DetectorCharacteristic {
    /// `f_DET(x)`, clamped to `[0, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        let [c0, c1, c2, c3] = self.coefficients;
        (c0 + x * (c1 + x * (c2 + x * c3))).clamp(0.0, 1.0)
    }

    /// Largest drop between adjacent raw samples.
    pub fn max_decrease(&self) -> f64 {
        self.i_e
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    }
}

/// Measures the characteristic of `config` at `ebn0_db`.
pub fn detector_characteristic(config: &DetectorConfig, ebn0_db: f64) -> Result<DetectorCharacteristic> {
    config.validate()?;
    let order = config.order;
    let mu = bits_per_symbol(order)?;
    let n0 = noise_density(ebn0_db, config.rate, order, config.noise)?;
    let demod = Demodulator::with_phase_nodes(order, n0, config.phase_nodes)?;
    let symbols = config.frame_bits / mu;
    let grid = config.grid();
    let sigmas: Vec<f64> = grid.iter().map(|&i| j_inv(i)).collect();
    let mut loss = vec![0.0; grid.len()];

    for frame in 0..config.frames {
        let mut rng = stream_rng(config.seed, frame as u64);
        let q1: Vec<usize> = (0..symbols).map(|_| rng.random_range(0..order)).collect();
        let q2: Vec<usize> = (0..symbols).map(|_| rng.random_range(0..order)).collect();
        let fading = FadingFrame::rayleigh(symbols, &mut rng);
        let x1 = SymbolFrame::new(order, q1)?;
        let x2 = SymbolFrame::new(order, q2)?;
        let y = transmit(&x1, &x2, &fading, n0, &mut rng)?;
        let x: Vec<f64> = (0..config.frame_bits).map(|_| rng.sample(StandardNormal)).collect();

        let bits: Vec<u8> = x1
            .symbols()
            .iter()
            .zip(x2.symbols())
            .flat_map(|(&a, &b)| (0..mu).map(move |m| label_bit(a ^ b, m, mu)))
            .collect();
        let metrics = NetworkSymbolMetrics::from_posterior(&demod.demodulate(&y, &fading, config.csi)?);

        let frame_loss: Vec<f64> = sigmas
            .par_iter()
            .map(|&sigma| {
                let half = 0.5 * sigma * sigma;
                let v: Vec<f64> = bits
                    .iter()
                    .zip(&x)
                    .map(|(&b, &x)| if b == 1 { half } else { -half } + x * sigma)
                    .collect();
                let mut z = vec![0.0; v.len()];
                metrics.somap_into(&v, &mut z).map(|_| soft_loss(&z, &bits))
            })
            .collect::<Result<_>>()?;
        for (acc, l) in loss.iter_mut().zip(frame_loss) {
            *acc += l;
        }
    }

    let total = (config.frames * config.frame_bits) as f64 * std::f64::consts::LN_2;
    let i_e: Vec<f64> = loss.iter().map(|l| (1.0 - l / total).clamp(0.0, 1.0)).collect();
    let coefficients = fit_cubic(&grid, &i_e)?;
    let poly = |x: f64| coefficients[0] + x * (coefficients[1] + x * (coefficients[2] + x * coefficients[3]));
    let residual_rms = (grid
        .iter()
        .zip(&i_e)
        .map(|(&x, &y)| (poly(x) - y).powi(2))
        .sum::<f64>()
        / grid.len() as f64)
        .sqrt();
    Ok(DetectorCharacteristic {
        ebn0_db,
        n0,
        config: config.clone(),
        i_a: grid,
        i_e,
        coefficients,
        residual_rms,
    })
}

/// Unweighted least-squares cubic through `(x, y)`.
pub fn fit_cubic(x: &[f64], y: &[f64]) -> Result<[f64; 4]> {
    if x.len() != y.len() {
        return Err(Error::dim(x.len(), y.len()));
    }
    let mut distinct: Vec<f64> = x.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 4 {
        return Err(Error::RankDeficient);
    }
    // normal equations A c = r with A_ij = sum x^(i+j), r_i = sum x^i y
    let mut a = [[0.0f64; 5]; 4];
    for (&xv, &yv) in x.iter().zip(y) {
        let p = [1.0, xv, xv * xv, xv * xv * xv];
        for i in 0..4 {
            for j in 0..4 {
                a[i][j] += p[i] * p[j];
            }
            a[i][4] += p[i] * yv;
        }
    }
    let scale = a[0][0];
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-12 * scale {
            return Err(Error::RankDeficient);
        }
        a.swap(col, pivot);
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for c in col..5 {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut c = [0.0; 4];
    for i in (0..4).rev() {
        let s: f64 = (i + 1..4).map(|j| a[i][j] * c[j]).sum();
        c[i] = (a[i][4] - s) / a[i][i];
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_fit_recovers_exact_polynomial() {
        let x = apriori_grid(100);
        let y: Vec<f64> = x.iter().map(|&t| 0.2 - 0.5 * t + 0.3 * t * t + 0.9 * t * t * t).collect();
        let c = fit_cubic(&x, &y).unwrap();
        for (got, want) in c.iter().zip([0.2, -0.5, 0.3, 0.9]) {
            assert!((got - want).abs() < 1e-9, "{c:?}");
        }
    }

    #[test]
    fn cubic_fit_needs_four_abscissae() {
        assert!(matches!(
            fit_cubic(&[0.0, 0.5, 0.5, 1.0], &[0.0; 4]),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn small_characteristic_is_increasing_and_saturates() {
        let mut cfg = DetectorConfig::for_code(2048, 2.0 / 3.0, 4, CsiMode::Partial, 5);
        cfg.frames = 2;
        let ch = detector_characteristic(&cfg, 12.0).unwrap();
        assert_eq!(ch.i_e.len(), 100);
        assert!(ch.i_e[0] > 0.0);
        assert!(ch.i_e[99] > ch.i_e[0]);
        assert!(ch.max_decrease() < 0.01);
        assert!(ch.residual_rms < 0.01);
    }

    #[test]
    fn rejects_bad_frame_length() {
        let mut cfg = DetectorConfig::for_code(2048, 0.5, 8, CsiMode::None, 1);
        cfg.frame_bits = 2048;
        assert!(detector_characteristic(&cfg, 10.0).is_err());
    }
}
