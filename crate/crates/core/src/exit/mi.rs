use super::jfunc::softplus;
use crate::error::{Error, Result};

/// Mutual information between LLRs `z` (`ln P(1) - ln P(0)`) and the bits
/// `b` they describe:
///
/// ```text
/// I = 1 - 1 / (L ln 2) * sum_l ln(1 + exp(z_l (-1)^b_l))
/// ```
pub fn measure_mutual_information(z: &[f64], b: &[u8]) -> Result<f64> {
    if z.len() != b.len() {
        return Err(Error::dim(z.len(), b.len()));
    }
    if z.is_empty() {
        return Err(Error::Empty("LLR vector"));
    }
    Ok(1.0 - soft_loss(z, b) / (z.len() as f64 * std::f64::consts::LN_2))
}

/// `sum_l ln(1 + exp(z_l (-1)^b_l))` in nats.
pub(crate) fn soft_loss(z: &[f64], b: &[u8]) -> f64 {
    z.iter()
        .zip(b)
        .map(|(&z, &b)| softplus(if b == 0 { z } else { -z }))
        .sum()
}
