//! VND and CND transfer curves.
//!
//! For a variable node of degree `d` fed by the detector with characteristic
//! `f`:
//!
//! ```text
//! I'_A(d, I_A) = J(sqrt(d) J^-1(I_A))
//! I_E(d, I_A)  = J(sqrt((d - 1) J^-1(I_A)^2 + J^-1(f(I'_A))^2))
//! ```
//!
//! and the check node of degree `d_c` has
//! `I_E = 1 - J(sqrt(d_c - 1) J^-1(1 - I_A))`.

use serde::{Deserialize, Serialize};

use super::jfunc::{j, j_inv};
use crate::error::{Error, Result};
use crate::ldpc::DegreeDistribution;

/// Sampled transfer curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitCurve {
    pub abscissa: Vec<f64>,
    pub ordinate: Vec<f64>,
}

impl ExitCurve {
    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.abscissa.iter().copied().zip(self.ordinate.iter().copied())
    }
}

/// `I_E` of one variable-node degree at each abscissa; `sigma_a[k]` must be
/// `J^-1(grid[k])`.
pub fn vnd_degree_ordinates<F: Fn(f64) -> f64>(degree: usize, sigma_a: &[f64], f_det: F) -> Vec<f64> {
    let d = degree as f64;
    sigma_a
        .iter()
        .map(|&s| {
            let detector_in = j(d.sqrt() * s);
            let from_detector = j_inv(f_det(detector_in).clamp(0.0, 1.0));
            j(((d - 1.0) * s * s + from_detector * from_detector).sqrt())
        })
        .collect()
}

/// Edge-weighted combination of per-degree VND curves over `grid`.
pub fn vnd_curve<F: Fn(f64) -> f64>(dist: &DegreeDistribution, f_det: F, grid: &[f64]) -> Result<ExitCurve> {
    if dist.entries.is_empty() {
        return Err(Error::Empty("degree distribution"));
    }
    let sigma_a: Vec<f64> = grid.iter().map(|&i| j_inv(i)).collect();
    let mut ordinate = vec![0.0; grid.len()];
    for (group, b) in dist.entries.iter().zip(dist.edge_fractions()) {
        for (acc, v) in ordinate.iter_mut().zip(vnd_degree_ordinates(group.degree, &sigma_a, &f_det)) {
            *acc += b * v;
        }
    }
    for v in ordinate.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    Ok(ExitCurve {
        abscissa: grid.to_vec(),
        ordinate,
    })
}

fn check_degree(dc: usize) -> Result<f64> {
    if dc < 2 {
        return Err(Error::InvalidParameter(format!("check degree {dc} < 2")));
    }
    Ok(((dc - 1) as f64).sqrt())
}

/// `I_E,CND` for a-priori `i_a`.
pub fn cnd_extrinsic(dc: usize, i_a: f64) -> Result<f64> {
    let r = check_degree(dc)?;
    Ok(1.0 - j(r * j_inv(1.0 - i_a)))
}

/// The a-priori information a check node needs to emit `i_e`; inverse of
/// [`cnd_extrinsic`].
pub fn cnd_apriori(dc: usize, i_e: f64) -> Result<f64> {
    let r = check_degree(dc)?;
    Ok(1.0 - j(j_inv(1.0 - i_e) / r))
}

/// Forward CND curve `I_A -> I_E` over `grid`.
pub fn cnd_curve(dc: usize, grid: &[f64]) -> Result<ExitCurve> {
    Ok(ExitCurve {
        abscissa: grid.to_vec(),
        ordinate: grid.iter().map(|&x| cnd_extrinsic(dc, x)).collect::<Result<_>>()?,
    })
}

/// Inverted CND curve as drawn on an EXIT chart: abscissa `I_E,CND`,
/// ordinate the a-priori input that produces it.
pub fn cnd_inverse_curve(dc: usize, grid: &[f64]) -> Result<ExitCurve> {
    Ok(ExitCurve {
        abscissa: grid.to_vec(),
        ordinate: grid.iter().map(|&x| cnd_apriori(dc, x)).collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exit::detector::apriori_grid;

    #[test]
    fn degree_one_with_identity_detector_is_identity() {
        let grid = apriori_grid(100);
        let sigma: Vec<f64> = grid.iter().map(|&i| j_inv(i)).collect();
        let v = vnd_degree_ordinates(1, &sigma, |x| x);
        for (a, b) in grid.iter().zip(v) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn cnd_endpoints_and_inverse() {
        assert!((cnd_extrinsic(10, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(cnd_extrinsic(10, 0.0).unwrap() < 1e-6);
        for dc in [10, 11] {
            for x in apriori_grid(100) {
                let back = cnd_extrinsic(dc, cnd_apriori(dc, x).unwrap()).unwrap();
                assert!((back - x).abs() < 1e-6, "dc {dc} x {x}: {back}");
            }
        }
    }

    #[test]
    fn curves_are_monotone() {
        let grid = apriori_grid(100);
        let d = DegreeDistribution::from_pairs(&[(2, 672), (3, 96), (3, 1296), (9, 240)], 10, 2304, 1536);
        let vnd = vnd_curve(&d, |x| 0.3 + 0.5 * x, &grid).unwrap();
        let cnd = cnd_curve(10, &grid).unwrap();
        for w in vnd.ordinate.windows(2).chain(cnd.ordinate.windows(2)) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn check_degree_one_rejected() {
        assert!(cnd_curve(1, &[0.5]).is_err());
    }
}
