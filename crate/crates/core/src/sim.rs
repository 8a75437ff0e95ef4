//! Monte Carlo measurement of network-coded bit and frame error rates at
//! the relay.
//!
//! Each frame draws two information words, encodes both with the same code,
//! interleaves them with one shared permutation, sends them through the
//! fading channel and recovers `u1 xor u2` from the superposition. Frame `f`
//! of every SNR point uses generator stream `f` of the master seed, so counts
//! do not depend on how frames are spread over workers.

use std::fs::OpenOptions;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{noise_density, stream_rng, transmit, CsiMode, FadingFrame, NoiseConvention};
use crate::decoder::{BpDecoder, DEFAULT_ITERATIONS};
use crate::error::{Error, Result};
use crate::ldpc::{EiraEncoder, ParityCheckMatrix};
use crate::modem::{modulate, Demodulator, Interleaver, NetworkSymbolMetrics, DEFAULT_PHASE_NODES};
use crate::report::{create_csv, open_csv, write_json, Provenance};

/// Decoder-to-demodulator feedback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeedbackMode {
    /// Demodulate once, then decode.
    #[serde(rename = "bicm", alias = "BICM")]
    Bicm,
    /// Refresh the soft demapper after every decoder iteration.
    #[serde(rename = "bicm-id", alias = "BICM-ID", alias = "bicm_id")]
    BicmId,
}

impl std::str::FromStr for FeedbackMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "bicm" => Ok(FeedbackMode::Bicm),
            "bicm-id" | "bicmid" => Ok(FeedbackMode::BicmId),
            _ => Err(Error::InvalidParameter(format!("unknown feedback mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for FeedbackMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FeedbackMode::Bicm => "bicm",
            FeedbackMode::BicmId => "bicm-id",
        })
    }
}

fn default_iterations() -> usize {
    DEFAULT_ITERATIONS
}
fn default_max_frames() -> u64 {
    1_000_000
}
fn default_max_frame_errors() -> Option<u64> {
    Some(100)
}
fn default_batch() -> usize {
    32
}
fn default_true() -> bool {
    true
}
fn default_phase_nodes() -> usize {
    DEFAULT_PHASE_NODES
}

/// Receiver and stopping parameters of a BER sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub order: usize,
    pub csi: CsiMode,
    pub feedback: FeedbackMode,
    pub snr_db: Vec<f64>,
    #[serde(default = "default_max_frames")]
    pub max_frames: u64,
    #[serde(default = "default_max_frame_errors")]
    pub max_frame_errors: Option<u64>,
    #[serde(default)]
    pub max_bit_errors: Option<u64>,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    pub seed: u64,
    #[serde(default)]
    pub noise: NoiseConvention,
    #[serde(default = "default_true")]
    pub early_exit: bool,
    /// Frames simulated between stopping checks.
    #[serde(default = "default_batch")]
    pub batch: usize,
    #[serde(default = "default_phase_nodes")]
    pub phase_nodes: usize,
}

impl TrialConfig {
    pub fn new(order: usize, csi: CsiMode, feedback: FeedbackMode, snr_db: Vec<f64>, seed: u64) -> Self {
        Self {
            order,
            csi,
            feedback,
            snr_db,
            max_frames: default_max_frames(),
            max_frame_errors: default_max_frame_errors(),
            max_bit_errors: None,
            iterations: DEFAULT_ITERATIONS,
            seed,
            noise: NoiseConvention::default(),
            early_exit: true,
            batch: default_batch(),
            phase_nodes: DEFAULT_PHASE_NODES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        crate::modem::bits_per_symbol(self.order)?;
        if self.snr_db.is_empty() {
            return Err(Error::Empty("SNR list"));
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter("SNR values must be finite".into()));
        }
        if self.max_frames == 0 || self.iterations == 0 || self.batch == 0 {
            return Err(Error::InvalidParameter(
                "max_frames, iterations and batch must be positive".into(),
            ));
        }
        if self.max_frame_errors == Some(0) || self.max_bit_errors == Some(0) {
            return Err(Error::InvalidParameter("error limits must be positive".into()));
        }
        Ok(())
    }
}

/// Code plus the per-code machinery a simulation needs.
#[derive(Debug, Clone)]
pub struct SimCode {
    h: ParityCheckMatrix,
    encoder: EiraEncoder,
    decoder: BpDecoder,
    interleaver: Interleaver,
}

impl SimCode {
    /// `interleaver_seed` fixes the permutation shared by both sources.
    pub fn new(h: ParityCheckMatrix, interleaver_seed: u64) -> Result<Self> {
        let encoder = EiraEncoder::new(&h)?;
        let decoder = BpDecoder::new(&h);
        let interleaver = Interleaver::new(h.cols(), interleaver_seed);
        Ok(Self {
            h,
            encoder,
            decoder,
            interleaver,
        })
    }

    pub fn with_interleaver(h: ParityCheckMatrix, interleaver: Interleaver) -> Result<Self> {
        if interleaver.len() != h.cols() {
            return Err(Error::dim(h.cols(), interleaver.len()));
        }
        let encoder = EiraEncoder::new(&h)?;
        let decoder = BpDecoder::new(&h);
        Ok(Self {
            h,
            encoder,
            decoder,
            interleaver,
        })
    }

    pub fn matrix(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn encoder(&self) -> &EiraEncoder {
        &self.encoder
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.h.info_len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }
}

/// Counts at one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub snr_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub frame_errors: u64,
    pub fer: f64,
    pub seed: u64,
    /// Telemetry, left out of result files so reruns reproduce them exactly.
    #[serde(skip)]
    pub wall_seconds: f64,
    #[serde(skip)]
    pub mean_iterations: f64,
}

/// Outcome of one simulated frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameOutcome {
    pub bit_errors: u64,
    pub iterations: usize,
}

/// Simulates frame `frame` at noise density `n0`.
pub fn simulate_frame(code: &SimCode, cfg: &TrialConfig, demod: &Demodulator, n0: f64, frame: u64) -> Result<FrameOutcome> {
    let (n, k) = (code.n(), code.k());
    let mut rng = stream_rng(cfg.seed, frame);
    let u1: Vec<u8> = (0..k).map(|_| rng.random::<bool>() as u8).collect();
    let u2: Vec<u8> = (0..k).map(|_| rng.random::<bool>() as u8).collect();
    let c1 = code.interleaver.interleave(&code.encoder.encode(&u1)?)?;
    let c2 = code.interleaver.interleave(&code.encoder.encode(&u2)?)?;
    let x1 = modulate(&c1, cfg.order)?;
    let x2 = modulate(&c2, cfg.order)?;
    let fading = FadingFrame::rayleigh(x1.len(), &mut rng);
    let y = transmit(&x1, &x2, &fading, n0, &mut rng)?;
    let metrics = NetworkSymbolMetrics::from_posterior(&demod.demodulate(&y, &fading, cfg.csi)?);

    let mut apriori = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut llr = vec![0.0; n];
    metrics.somap_into(&apriori, &mut z)?;
    code.interleaver.deinterleave_into(&z, &mut llr)?;

    let mut state = code.decoder.state();
    state.set_channel(&llr)?;
    let mut ext = vec![0.0; n];
    for _ in 0..cfg.iterations {
        state.iterate();
        if cfg.early_exit && state.converged() {
            break;
        }
        if cfg.feedback == FeedbackMode::BicmId {
            state.extrinsic_into(&mut ext);
            code.interleaver.interleave_into(&ext, &mut apriori)?;
            metrics.somap_into(&apriori, &mut z)?;
            code.interleaver.deinterleave_into(&z, &mut llr)?;
            state.set_channel(&llr)?;
        }
    }
    let hard = state.hard_decisions();
    let bit_errors = hard[..k]
        .iter()
        .zip(u1.iter().zip(&u2))
        .filter(|(&h, (&a, &b))| h != a ^ b)
        .count() as u64;
    Ok(FrameOutcome {
        bit_errors,
        iterations: state.iterations(),
    })
}

/// Runs frames at `snr_db` until a stopping limit is reached.
pub fn run_point(code: &SimCode, cfg: &TrialConfig, snr_db: f64) -> Result<ResultRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let n0 = noise_density(snr_db, code.rate(), cfg.order, cfg.noise)?;
    let demod = Demodulator::with_phase_nodes(cfg.order, n0, cfg.phase_nodes)?;
    let (mut frames, mut bit_errors, mut frame_errors, mut iterations) = (0u64, 0u64, 0u64, 0u64);
    let done = |frames: u64, bit_errors: u64, frame_errors: u64| {
        frames >= cfg.max_frames
            || cfg.max_frame_errors.is_some_and(|m| frame_errors >= m)
            || cfg.max_bit_errors.is_some_and(|m| bit_errors >= m)
    };
    'outer: while !done(frames, bit_errors, frame_errors) {
        let count = (cfg.batch as u64).min(cfg.max_frames - frames);
        let outcomes: Vec<FrameOutcome> = (frames..frames + count)
            .into_par_iter()
            .map(|f| simulate_frame(code, cfg, &demod, n0, f))
            .collect::<Result<_>>()?;
        for o in outcomes {
            frames += 1;
            bit_errors += o.bit_errors;
            frame_errors += u64::from(o.bit_errors > 0);
            iterations += o.iterations as u64;
            if done(frames, bit_errors, frame_errors) {
                break 'outer;
            }
        }
    }
    let bits = (frames * code.k() as u64) as f64;
    Ok(ResultRecord {
        snr_db,
        frames,
        bit_errors,
        ber: bit_errors as f64 / bits,
        frame_errors,
        fer: frame_errors as f64 / frames as f64,
        seed: cfg.seed,
        wall_seconds: start.elapsed().as_secs_f64(),
        mean_iterations: iterations as f64 / frames as f64,
    })
}

fn same_snr(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

/// Reads the records of a sweep CSV.
pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRecord>> {
    let mut r = open_csv(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Runs every SNR point of `cfg` in order. With `csv_path`, each record is
/// appended as soon as it is measured; an existing file with the same
/// configuration hash is resumed from its first missing SNR and a JSON copy
/// of all records is written next to it at the end.
pub fn run_sweep(
    code: &SimCode,
    cfg: &TrialConfig,
    csv_path: Option<&Path>,
    provenance: &Provenance,
) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    let mut records = Vec::new();
    if let Some(path) = csv_path {
        if path.exists() {
            match Provenance::read_from(path)? {
                Some(p) if p.config_hash == provenance.config_hash && p.schema == provenance.schema => {}
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "{} was produced by a different configuration",
                        path.display()
                    )))
                }
            }
            records = read_results_csv(path)?;
        } else {
            create_csv(path, provenance)?
                .write_record(["snr_db", "frames", "bit_errors", "ber", "frame_errors", "fer", "seed"])?;
        }
    }
    let first_missing = cfg
        .snr_db
        .iter()
        .position(|&s| !records.iter().any(|r| same_snr(r.snr_db, s)))
        .unwrap_or(cfg.snr_db.len());
    records.retain(|r| cfg.snr_db[..first_missing].iter().any(|&s| same_snr(r.snr_db, s)));

    for &snr in &cfg.snr_db[first_missing..] {
        let rec = run_point(code, cfg, snr)?;
        if let Some(path) = csv_path {
            let f = OpenOptions::new()
                .append(true)
                .open(path)
                .map_err(|e| Error::io(path, e))?;
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(f);
            w.serialize(&rec)?;
            w.flush().map_err(|e| Error::io(path, e))?;
        }
        records.push(rec);
    }
    if let Some(path) = csv_path {
        write_json(&path.with_extension("json"), provenance, &records)?;
    }
    Ok(records)
}

/// Writes `records` as a fresh sweep CSV.
pub fn write_results_csv(path: &Path, records: &[ResultRecord], provenance: &Provenance) -> Result<()> {
    let mut w = create_csv(path, provenance)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldpc::{realize_matrix, DegreeDistribution};

    fn small_code() -> SimCode {
        let d = DegreeDistribution::from_pairs(&[(2, 120), (3, 160), (6, 40)], 8, 320, 200);
        SimCode::new(realize_matrix(&d, 4).unwrap(), 9).unwrap()
    }

    #[test]
    fn noiseless_full_csi_is_error_free() {
        let code = small_code();
        let mut cfg = TrialConfig::new(4, CsiMode::Full, FeedbackMode::Bicm, vec![300.0], 1);
        cfg.max_frames = 20;
        let r = run_point(&code, &cfg, 300.0).unwrap();
        assert_eq!(r.frames, 20);
        assert_eq!(r.bit_errors, 0);
    }

    #[test]
    fn deterministic_and_batch_independent() {
        let code = small_code();
        let mut cfg = TrialConfig::new(4, CsiMode::Partial, FeedbackMode::BicmId, vec![6.0], 3);
        cfg.max_frames = 40;
        cfg.max_frame_errors = Some(5);
        let a = run_point(&code, &cfg, 6.0).unwrap();
        cfg.batch = 7;
        let b = run_point(&code, &cfg, 6.0).unwrap();
        assert_eq!((a.frames, a.bit_errors, a.frame_errors), (b.frames, b.bit_errors, b.frame_errors));
    }

    #[test]
    fn empty_snr_list_rejected() {
        let cfg = TrialConfig::new(4, CsiMode::Partial, FeedbackMode::Bicm, vec![], 1);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn feedback_names() {
        assert_eq!("BICM-ID".parse::<FeedbackMode>().unwrap(), FeedbackMode::BicmId);
        assert_eq!(serde_json::to_string(&FeedbackMode::BicmId).unwrap(), "\"bicm-id\"");
    }
}
