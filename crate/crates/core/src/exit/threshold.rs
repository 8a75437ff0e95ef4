//! Tunnel test and EXIT-threshold scan over an SNR grid.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::curves::{cnd_inverse_curve, vnd_curve};
use super::detector::{detector_characteristic, DetectorCharacteristic, DetectorConfig};
use crate::error::{Error, Result};
use crate::ldpc::DegreeDistribution;

/// Margin by which the VND curve must clear the inverted CND curve.
pub const TUNNEL_MARGIN: f64 = 1e-4;

/// Evenly spaced `Eb/N0` values, in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrGrid {
    pub start_db: f64,
    pub stop_db: f64,
    #[serde(default = "default_step")]
    pub step_db: f64,
}

fn default_step() -> f64 {
    0.1
}

impl SnrGrid {
    pub fn new(start_db: f64, stop_db: f64, step_db: f64) -> Result<Self> {
        let g = Self {
            start_db,
            stop_db,
            step_db,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_db > 0.0) || !self.start_db.is_finite() || !self.stop_db.is_finite() {
            return Err(Error::InvalidParameter(format!("bad SNR grid {self:?}")));
        }
        if self.stop_db < self.start_db {
            return Err(Error::InvalidParameter(format!(
                "SNR grid stops at {} dB below its start {} dB",
                self.stop_db, self.start_db
            )));
        }
        Ok(())
    }

    /// Grid values in ascending order, rounded to 1e-9 dB.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| ((self.start_db + i as f64 * self.step_db) * 1e9).round() / 1e9)
            .collect()
    }
}

/// Open/closed verdict at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridVerdict {
    pub snr_db: f64,
    pub open: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub distribution: DegreeDistribution,
    /// Lowest grid SNR of the open run that starts at the top of the grid.
    pub threshold_db: Option<f64>,
    pub step_db: f64,
    /// Scanned points, highest SNR first.
    pub verdicts: Vec<GridVerdict>,
}

impl ThresholdResult {
    pub fn threshold(&self) -> Result<f64> {
        self.threshold_db.ok_or(Error::NoThreshold)
    }

    /// True when the tunnel was still open at the lowest grid point, so the
    /// true threshold may lie below the grid.
    pub fn at_grid_floor(&self, grid: &SnrGrid) -> bool {
        self.threshold_db
            .is_some_and(|t| (t - grid.points()[0]).abs() < 1e-9)
    }
}

/// Tunnel open iff `vnd[k] > cnd_inv[k] + margin` for every interior `k`.
pub fn tunnel_open(vnd: &[f64], cnd_inv: &[f64]) -> bool {
    let n = vnd.len().min(cnd_inv.len());
    (1..n).all(|k| vnd[k] > cnd_inv[k] + TUNNEL_MARGIN)
}

fn snr_key(snr_db: f64) -> i64 {
    (snr_db * 1e6).round() as i64
}

/// Characteristics of one detector configuration keyed by SNR. Measured once
/// per SNR and shared read-only afterwards.
#[derive(Debug, Clone)]
pub struct CharacteristicCache {
    config: DetectorConfig,
    entries: BTreeMap<i64, Arc<DetectorCharacteristic>>,
}

impl CharacteristicCache {
    pub fn new(config: DetectorConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            entries: BTreeMap::new(),
        })
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    pub fn get(&self, snr_db: f64) -> Option<Arc<DetectorCharacteristic>> {
        self.entries.get(&snr_key(snr_db)).cloned()
    }

    pub fn get_or_measure(&mut self, snr_db: f64) -> Result<Arc<DetectorCharacteristic>> {
        if let Some(c) = self.get(snr_db) {
            return Ok(c);
        }
        let c = Arc::new(detector_characteristic(&self.config, snr_db)?);
        self.entries.insert(snr_key(snr_db), c.clone());
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn characteristics(&self) -> impl Iterator<Item = &Arc<DetectorCharacteristic>> {
        self.entries.values()
    }
}

/// Whether `dist`'s tunnel is open given the characteristic `ch`.
pub fn is_open(dist: &DegreeDistribution, ch: &DetectorCharacteristic) -> Result<bool> {
    let vnd = vnd_curve(dist, |x| ch.eval(x), &ch.i_a)?;
    let cnd = cnd_inverse_curve(dist.check_degree, &ch.i_a)?;
    Ok(tunnel_open(&vnd.ordinate, &cnd.ordinate))
}

/// Scans `grid` from the top down and stops at the first closed point.
pub fn exit_threshold(
    dist: &DegreeDistribution,
    cache: &mut CharacteristicCache,
    grid: &SnrGrid,
) -> Result<ThresholdResult> {
    dist.ensure_valid()?;
    grid.validate()?;
    let mut verdicts = Vec::new();
    let mut threshold_db = None;
    for &snr in grid.points().iter().rev() {
        let ch = cache.get_or_measure(snr)?;
        let open = is_open(dist, &ch)?;
        verdicts.push(GridVerdict { snr_db: snr, open });
        if !open {
            break;
        }
        threshold_db = Some(snr);
    }
    Ok(ThresholdResult {
        distribution: dist.clone(),
        threshold_db,
        step_db: grid.step_db,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exit::detector::apriori_grid;
    use crate::exit::curves::vnd_curve;

    #[test]
    fn grid_points() {
        let g = SnrGrid::new(11.0, 12.0, 0.1).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 11);
        assert_eq!(p[3], 11.3);
        assert_eq!(*p.last().unwrap(), 12.0);
        assert!(SnrGrid::new(12.0, 11.0, 0.1).is_err());
        assert!(SnrGrid::new(11.0, 12.0, 0.0).is_err());
    }

    #[test]
    fn saturated_detector_opens_degree_two_code() {
        // every variable node degree 2 with check degree 2
        let d = DegreeDistribution::from_pairs(&[(2, 8)], 2, 8, 0);
        let grid = apriori_grid(100);
        let vnd = vnd_curve(&d, |_| 1.0, &grid).unwrap();
        let cnd = cnd_inverse_curve(2, &grid).unwrap();
        assert!(tunnel_open(&vnd.ordinate, &cnd.ordinate));
    }

    #[test]
    fn useless_detector_closes_tunnel() {
        let d = DegreeDistribution::from_pairs(&[(2, 672), (3, 96), (3, 1296), (9, 240)], 10, 2304, 1536);
        let grid = apriori_grid(100);
        let vnd = vnd_curve(&d, |_| 0.0, &grid).unwrap();
        let cnd = cnd_inverse_curve(10, &grid).unwrap();
        assert!(!tunnel_open(&vnd.ordinate, &cnd.ordinate));
    }
}
