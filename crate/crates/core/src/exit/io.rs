//! CSV and JSON persistence of characteristics, curves and thresholds.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::curves::ExitCurve;
use super::detector::{DetectorCharacteristic, DetectorConfig};
use super::threshold::ThresholdResult;
use crate::error::Result;
use crate::report::{create_csv, open_csv, write_json, Provenance};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    k: usize,
    #[serde(rename = "I_A")]
    i_a: f64,
    #[serde(rename = "I_E")]
    i_e: f64,
}

/// Sidecar of a characteristic CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicSidecar {
    pub ebn0_db: f64,
    pub n0: f64,
    pub coefficients: [f64; 4],
    pub residual_rms: f64,
    pub config: DetectorConfig,
    pub seed: u64,
}

/// Writes `(k, I_A, I_E)` rows to `path`.
pub fn write_curve_csv(path: &Path, curve: &ExitCurve, provenance: &Provenance) -> Result<()> {
    let mut w = create_csv(path, provenance)?;
    for (k, (i_a, i_e)) in curve.points().enumerate() {
        w.serialize(Row { k, i_a, i_e })?;
    }
    w.flush().map_err(|e| crate::error::Error::io(path, e))?;
    Ok(())
}

/// Reads a curve written by [`write_curve_csv`].
pub fn read_curve_csv(path: &Path) -> Result<ExitCurve> {
    let mut r = open_csv(path)?;
    let mut curve = ExitCurve {
        abscissa: Vec::new(),
        ordinate: Vec::new(),
    };
    for row in r.deserialize() {
        let row: Row = row?;
        curve.abscissa.push(row.i_a);
        curve.ordinate.push(row.i_e);
    }
    Ok(curve)
}

/// Writes the samples to `csv_path` and the fit to `csv_path` with a `.json`
/// extension.
pub fn write_characteristic(csv_path: &Path, ch: &DetectorCharacteristic, provenance: &Provenance) -> Result<()> {
    let curve = ExitCurve {
        abscissa: ch.i_a.clone(),
        ordinate: ch.i_e.clone(),
    };
    write_curve_csv(csv_path, &curve, provenance)?;
    let sidecar = CharacteristicSidecar {
        ebn0_db: ch.ebn0_db,
        n0: ch.n0,
        coefficients: ch.coefficients,
        residual_rms: ch.residual_rms,
        config: ch.config.clone(),
        seed: ch.config.seed,
    };
    write_json(&csv_path.with_extension("json"), provenance, &sidecar)
}

/// Writes threshold records as JSON.
pub fn write_thresholds(path: &Path, results: &[ThresholdResult], provenance: &Provenance) -> Result<()> {
    write_json(path, provenance, &results)
}
