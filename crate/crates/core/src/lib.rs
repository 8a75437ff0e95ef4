//! eIRA LDPC code design, EXIT-chart threshold search and Monte Carlo
//! simulation for the multiple-access phase of a two-way relay channel
//! using noncoherent M-FSK physical-layer network coding.

pub mod channel;
pub mod decoder;
pub mod error;
pub mod exit;
pub mod ldpc;
pub mod modem;
pub mod report;
pub mod sim;
pub mod standards;

pub use channel::{noise_density, CsiMode, FadingFrame, NoiseConvention, ObservationFrame};
pub use decoder::{BpDecoder, DecodeOutput, DecoderState};
pub use error::{Error, Result};
pub use ldpc::{DegreeDistribution, DegreeGroup, EiraEncoder, ParityCheckMatrix};
pub use modem::{Demodulator, Interleaver, SuperSymbolPosterior};
pub use standards::BaseCode;
pub use sim::{FeedbackMode, ResultRecord, SimCode, TrialConfig};
