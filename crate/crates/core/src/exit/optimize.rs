//! Exhaustive search over the free degrees of a base code.
//!
//! All candidates are scanned together from the top of the SNR grid down.
//! At each grid point the characteristic is measured once, the per-degree
//! VND ordinates are computed once per distinct degree, and every candidate
//! still open is re-tested. A candidate leaves the scan at its first closed
//! point, exactly as in [`super::exit_threshold`].

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::curves::{cnd_inverse_curve, vnd_degree_ordinates};
use super::jfunc::j_inv;
use super::threshold::{tunnel_open, CharacteristicCache, GridVerdict, SnrGrid, ThresholdResult};
use crate::error::{Error, Result};
use crate::ldpc::DegreeDistribution;
use crate::standards::BaseCode;

/// Thresholds of every feasible candidate of `base`, best first.
pub fn optimize_degrees(
    base: BaseCode,
    cache: &mut CharacteristicCache,
    grid: &SnrGrid,
) -> Result<Vec<ThresholdResult>> {
    let candidates = base.candidates();
    if candidates.is_empty() {
        return Err(Error::Empty("feasible degree distributions"));
    }
    rank_distributions(&candidates, cache, grid)
}

/// Thresholds of `dists` (sharing one check degree and one characteristic
/// cache), sorted ascending by threshold with ties broken by the degree list.
/// Distributions without an open point on the grid sort last.
pub fn rank_distributions(
    dists: &[DegreeDistribution],
    cache: &mut CharacteristicCache,
    grid: &SnrGrid,
) -> Result<Vec<ThresholdResult>> {
    grid.validate()?;
    let Some(first) = dists.first() else {
        return Err(Error::Empty("degree distributions"));
    };
    let dc = first.check_degree;
    for d in dists {
        d.ensure_valid()?;
        if d.check_degree != dc {
            return Err(Error::InvalidParameter(format!(
                "mixed check degrees {dc} and {}",
                d.check_degree
            )));
        }
    }

    let abscissa = cache.config().grid();
    let sigma_a: Vec<f64> = abscissa.iter().map(|&i| j_inv(i)).collect();
    let cnd = cnd_inverse_curve(dc, &abscissa)?.ordinate;
    let fractions: Vec<Vec<f64>> = dists.iter().map(|d| d.edge_fractions()).collect();

    let mut results: Vec<ThresholdResult> = dists
        .iter()
        .map(|d| ThresholdResult {
            distribution: d.clone(),
            threshold_db: None,
            step_db: grid.step_db,
            verdicts: Vec::new(),
        })
        .collect();
    let mut alive: Vec<usize> = (0..dists.len()).collect();

    for &snr in grid.points().iter().rev() {
        if alive.is_empty() {
            break;
        }
        let ch = cache.get_or_measure(snr)?;
        let degrees: BTreeSet<usize> = alive
            .iter()
            .flat_map(|&i| dists[i].entries.iter().map(|g| g.degree))
            .collect();
        let per_degree: BTreeMap<usize, Vec<f64>> = degrees
            .into_par_iter()
            .map(|d| (d, vnd_degree_ordinates(d, &sigma_a, |x| ch.eval(x))))
            .collect();
        let verdicts: Vec<bool> = alive
            .par_iter()
            .map(|&i| {
                let mut vnd = vec![0.0; abscissa.len()];
                for (g, &b) in dists[i].entries.iter().zip(&fractions[i]) {
                    for (acc, v) in vnd.iter_mut().zip(&per_degree[&g.degree]) {
                        *acc += b * v;
                    }
                }
                for v in vnd.iter_mut() {
                    *v = v.clamp(0.0, 1.0);
                }
                tunnel_open(&vnd, &cnd)
            })
            .collect();
        let mut still = Vec::with_capacity(alive.len());
        for (&i, open) in alive.iter().zip(verdicts) {
            results[i].verdicts.push(GridVerdict { snr_db: snr, open });
            if open {
                results[i].threshold_db = Some(snr);
                still.push(i);
            }
        }
        alive = still;
    }

    results.sort_by(|a, b| {
        let ta = a.threshold_db.unwrap_or(f64::INFINITY);
        let tb = b.threshold_db.unwrap_or(f64::INFINITY);
        ta.total_cmp(&tb).then_with(|| {
            let da: Vec<_> = a.distribution.entries.iter().map(|g| g.degree).collect();
            let db: Vec<_> = b.distribution.entries.iter().map(|g| g.degree).collect();
            da.cmp(&db)
        })
    });
    Ok(results)
}
