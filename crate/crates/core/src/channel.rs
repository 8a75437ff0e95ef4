//! Two-source Rayleigh flat-fading multiple-access channel.
//!
//! Each signaling interval `k` receives `y_k = h_k1 e_q1 + h_k2 e_q2 + n_k`
//! where `e_q` is the unit vector of FSK tone `q`, `h = alpha e^{j theta}` with
//! Rayleigh amplitude (`sigma = sqrt(1/2)`, so `E[alpha^2] = 1`) and uniform
//! phase, and `n_k ~ CN(0, N0 I_M)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modem::SymbolFrame;

/// How the receiver sees the channel gains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum CsiMode {
    /// Complex gains known.
    Full,
    /// Amplitudes known, phases unknown.
    Partial,
    /// Nothing known; gains are averaged out.
    None,
}

impl std::str::FromStr for CsiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(CsiMode::Full),
            "partial" => Ok(CsiMode::Partial),
            "none" | "no" => Ok(CsiMode::None),
            _ => Err(Error::InvalidParameter(format!("unknown CSI mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for CsiMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CsiMode::Full => "full",
            CsiMode::Partial => "partial",
            CsiMode::None => "none",
        })
    }
}

/// Energy normalization used to turn `Eb/N0` into a noise density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseConvention {
    /// `N0 = 1 / (10^(X/10) R M)`.
    #[default]
    ModulationOrder,
    /// `N0 = 1 / (10^(X/10) R log2 M)`: unit symbol energy spread over the
    /// bits each symbol carries.
    BitsPerSymbol,
}

/// Converts `Eb/N0` in dB into the noise density `N0` for unit-energy symbols.
pub fn noise_density(ebn0_db: f64, rate: f64, order: usize, convention: NoiseConvention) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!("code rate {rate} outside (0, 1]")));
    }
    if order < 2 {
        return Err(Error::InvalidParameter(format!("modulation order {order} < 2")));
    }
    if !ebn0_db.is_finite() {
        return Err(Error::InvalidParameter(format!("Eb/N0 {ebn0_db} dB is not finite")));
    }
    let scale = match convention {
        NoiseConvention::ModulationOrder => order as f64,
        NoiseConvention::BitsPerSymbol => (order as f64).log2(),
    };
    Ok(1.0 / (10f64.powf(ebn0_db / 10.0) * rate * scale))
}

/// Per-symbol gains of both sources.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingFrame {
    pub gains: [Vec<Complex64>; 2],
}

impl FadingFrame {
    /// Independent Rayleigh amplitude / uniform phase gains for `symbols`
    /// intervals.
    pub fn rayleigh<R: Rng + ?Sized>(symbols: usize, rng: &mut R) -> Self {
        let mut draw = || {
            let mut g = Vec::with_capacity(symbols);
            for _ in 0..symbols {
                g.push(rayleigh_gain(rng));
            }
            g
        };
        let g1 = draw();
        let g2 = draw();
        Self { gains: [g1, g2] }
    }

    /// Every gain equal to `h`.
    pub fn constant(symbols: usize, h: Complex64) -> Self {
        Self {
            gains: [vec![h; symbols], vec![h; symbols]],
        }
    }

    pub fn len(&self) -> usize {
        self.gains[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains[0].is_empty()
    }

    /// What a receiver operating in `mode` may read at interval `k`.
    pub fn csi(&self, mode: CsiMode, k: usize) -> Csi {
        let (h1, h2) = (self.gains[0][k], self.gains[1][k]);
        match mode {
            CsiMode::Full => Csi::Full(h1, h2),
            CsiMode::Partial => Csi::Partial(h1.norm(), h2.norm()),
            CsiMode::None => Csi::None,
        }
    }
}

/// Channel knowledge for one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Csi {
    Full(Complex64, Complex64),
    Partial(f64, f64),
    None,
}

impl Csi {
    pub fn mode(&self) -> CsiMode {
        match self {
            Csi::Full(..) => CsiMode::Full,
            Csi::Partial(..) => CsiMode::Partial,
            Csi::None => CsiMode::None,
        }
    }
}

/// `alpha e^{j theta}` with `alpha ~ Rayleigh(sqrt(1/2))`, `theta ~ U[0, 2 pi)`.
pub fn rayleigh_gain<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // inverse CDF of Rayleigh(sigma^2 = 1/2): alpha^2 ~ Exp(1)
    let u: f64 = rng.random();
    let alpha = (-(1.0 - u).ln()).sqrt();
    let theta = 2.0 * PI * rng.random::<f64>();
    Complex64::from_polar(alpha, theta)
}

/// Received frame `Y`: `order` tones by `symbols` intervals, stored column by
/// column.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationFrame {
    order: usize,
    data: Vec<Complex64>,
}

impl ObservationFrame {
    pub fn new(order: usize, data: Vec<Complex64>) -> Result<Self> {
        if order == 0 || data.len() % order != 0 {
            return Err(Error::dim(order, data.len() % order.max(1)));
        }
        Ok(Self { order, data })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn symbols(&self) -> usize {
        self.data.len() / self.order
    }

    /// Observation `y_k`.
    pub fn column(&self, k: usize) -> &[Complex64] {
        &self.data[k * self.order..(k + 1) * self.order]
    }

    pub fn columns(&self) -> std::slice::ChunksExact<'_, Complex64> {
        self.data.chunks_exact(self.order)
    }
}

/// Superimposes both sources through `fading` and adds complex Gaussian noise
/// of density `n0`.
pub fn transmit<R: Rng + ?Sized>(
    x1: &SymbolFrame,
    x2: &SymbolFrame,
    fading: &FadingFrame,
    n0: f64,
    rng: &mut R,
) -> Result<ObservationFrame> {
    if x1.order() != x2.order() {
        return Err(Error::dim(x1.order(), x2.order()));
    }
    if x1.len() != x2.len() {
        return Err(Error::dim(x1.len(), x2.len()));
    }
    if fading.len() != x1.len() {
        return Err(Error::dim(x1.len(), fading.len()));
    }
    if !(n0 >= 0.0) {
        return Err(Error::InvalidParameter(format!("noise density {n0} < 0")));
    }
    let m = x1.order();
    let sd = (n0 / 2.0).sqrt();
    let mut data = Vec::with_capacity(m * x1.len());
    for k in 0..x1.len() {
        let start = data.len();
        for _ in 0..m {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            data.push(Complex64::new(re * sd, im * sd));
        }
        data[start + x1.symbols()[k]] += fading.gains[0][k];
        data[start + x2.symbols()[k]] += fading.gains[1][k];
    }
    ObservationFrame::new(m, data)
}

/// Independent generator for stream `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
