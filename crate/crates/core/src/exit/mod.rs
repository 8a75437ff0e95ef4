//! EXIT-chart analysis: the J-function, the Monte Carlo detector
//! characteristic, VND/CND curves, tunnel thresholds and degree search.

pub mod curves;
pub mod detector;
pub mod io;
pub mod jfunc;
pub mod mi;
pub mod optimize;
pub mod threshold;

pub use curves::{cnd_apriori, cnd_curve, cnd_extrinsic, cnd_inverse_curve, vnd_curve, vnd_degree_ordinates, ExitCurve};
pub use detector::{apriori_grid, detector_characteristic, fit_cubic, DetectorCharacteristic, DetectorConfig};
pub use jfunc::{j, j_inv};
pub use mi::measure_mutual_information;
pub use optimize::{optimize_degrees, rank_distributions};
pub use threshold::{exit_threshold, is_open, tunnel_open, CharacteristicCache, GridVerdict, SnrGrid, ThresholdResult};
