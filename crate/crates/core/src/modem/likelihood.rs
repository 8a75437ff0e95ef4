//! Super-symbol likelihoods `log p(y | q1, q2)` for the three CSI cases.
//!
//! All values are relative to the noise-only hypothesis, which is common to
//! every pair and therefore dropped:
//!
//! * full CSI: `-(|y_q1 - h1|^2 - |y_q1|^2 + |y_q2 - h2|^2 - |y_q2|^2) / N0`,
//!   with `h1 + h2` on a shared tone;
//! * partial CSI: `ln I0(2 a_i |y_qi| / N0) - a_i^2 / N0` per occupied tone;
//!   on a shared tone the phase difference is averaged over `P` equispaced
//!   nodes of the resulting amplitude `beta`;
//! * no CSI: the tone variance grows from `N0` to `N0 + 1` or `N0 + 2`.

use num_complex::Complex64;

use super::bessel::ln_i0;
use crate::channel::{Csi, FadingFrame, ObservationFrame};
use crate::channel::CsiMode;
use crate::error::{Error, Result};

/// Quadrature nodes over the phase difference of two same-tone signals.
pub const DEFAULT_PHASE_NODES: usize = 32;

const MAX_ORDER: usize = 64;

#[derive(Debug, Clone)]
pub struct Demodulator {
    order: usize,
    n0: f64,
    /// Distinct values of `cos(2 pi p / P)`, `p = 1..=P`, with the log of
    /// their multiplicity.
    cosines: Vec<(f64, f64)>,
    nodes: usize,
}

impl Demodulator {
    pub fn new(order: usize, n0: f64) -> Result<Self> {
        Self::with_phase_nodes(order, n0, DEFAULT_PHASE_NODES)
    }

    pub fn with_phase_nodes(order: usize, n0: f64, nodes: usize) -> Result<Self> {
        super::bits_per_symbol(order)?;
        if order > MAX_ORDER {
            return Err(Error::InvalidParameter(format!("modulation order {order} > {MAX_ORDER}")));
        }
        if !(n0 > 0.0) || !n0.is_finite() {
            return Err(Error::InvalidParameter(format!("noise density {n0} must be positive")));
        }
        if nodes == 0 {
            return Err(Error::InvalidParameter("phase quadrature needs nodes".into()));
        }
        let cosines = (1..=nodes / 2)
            .chain(std::iter::once(nodes))
            .map(|p| {
                let paired = p != nodes && 2 * p != nodes;
                let w: f64 = if paired { 2.0 } else { 1.0 };
                ((2.0 * std::f64::consts::PI * p as f64 / nodes as f64).cos(), w.ln())
            })
            .collect();
        Ok(Self {
            order,
            n0,
            cosines,
            nodes,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    /// Writes the `M^2` log-likelihoods of one interval into `out`, indexed
    /// `q1 * M + q2`.
    pub fn log_likelihoods_into(&self, y: &[Complex64], csi: Csi, out: &mut [f64]) -> Result<()> {
        let m = self.order;
        if y.len() != m {
            return Err(Error::dim(m, y.len()));
        }
        if out.len() != m * m {
            return Err(Error::dim(m * m, out.len()));
        }
        let n0 = self.n0;
        match csi {
            Csi::Full(h1, h2) => {
                let base = |t: usize, h: Complex64| ((y[t] - h).norm_sqr() - y[t].norm_sqr()) / n0;
                for q1 in 0..m {
                    let d1 = base(q1, h1);
                    for q2 in 0..m {
                        out[q1 * m + q2] = if q1 == q2 {
                            -base(q1, h1 + h2)
                        } else {
                            -(d1 + base(q2, h2))
                        };
                    }
                }
            }
            Csi::Partial(a1, a2) => {
                let mut g1 = [0.0; MAX_ORDER];
                let mut g2 = [0.0; MAX_ORDER];
                let mut r = [0.0; MAX_ORDER];
                for t in 0..m {
                    r[t] = y[t].norm();
                    g1[t] = ln_i0(2.0 * a1 * r[t] / n0) - a1 * a1 / n0;
                    g2[t] = ln_i0(2.0 * a2 * r[t] / n0) - a2 * a2 / n0;
                }
                for q1 in 0..m {
                    for q2 in 0..m {
                        out[q1 * m + q2] = if q1 == q2 {
                            self.shared_tone_partial(a1, a2, r[q1])
                        } else {
                            g1[q1] + g2[q2]
                        };
                    }
                }
            }
            Csi::None => {
                let mut e = [0.0; MAX_ORDER];
                for (dst, v) in e.iter_mut().zip(y) {
                    *dst = v.norm_sqr();
                }
                let d = |t: usize, s: f64| -((n0 + s) / n0).ln() - e[t] / (n0 + s) + e[t] / n0;
                for q1 in 0..m {
                    let d1 = d(q1, 1.0);
                    for q2 in 0..m {
                        out[q1 * m + q2] = if q1 == q2 { d(q1, 2.0) } else { d1 + d(q2, 1.0) };
                    }
                }
            }
        }
        Ok(())
    }

    /// Phase-averaged `ln E[I0(2 beta r / N0) exp(-beta^2 / N0)]` where
    /// `beta^2 = a1^2 + a2^2 + 2 a1 a2 cos(phi)`.
    fn shared_tone_partial(&self, a1: f64, a2: f64, r: f64) -> f64 {
        let n0 = self.n0;
        let s = a1 * a1 + a2 * a2;
        let c = 2.0 * a1 * a2;
        let mut acc = LogSumExp::default();
        for &(cos, ln_w) in &self.cosines {
            let beta2 = (s + c * cos).max(0.0);
            acc.push(ln_w + ln_i0(2.0 * beta2.sqrt() * r / n0) - beta2 / n0);
        }
        acc.value() - (self.nodes as f64).ln()
    }

    pub fn log_likelihoods(&self, y: &[Complex64], csi: Csi) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.order * self.order];
        self.log_likelihoods_into(y, csi, &mut out)?;
        Ok(out)
    }

    /// Log-likelihoods for every interval of `frame`, reading only the
    /// channel knowledge that `mode` allows.
    pub fn demodulate(
        &self,
        frame: &ObservationFrame,
        fading: &FadingFrame,
        mode: CsiMode,
    ) -> Result<SuperSymbolPosterior> {
        if frame.order() != self.order {
            return Err(Error::dim(self.order, frame.order()));
        }
        if fading.len() != frame.symbols() {
            return Err(Error::dim(frame.symbols(), fading.len()));
        }
        let mm = self.order * self.order;
        let mut values = vec![0.0; mm * frame.symbols()];
        for (k, (y, out)) in frame.columns().zip(values.chunks_exact_mut(mm)).enumerate() {
            self.log_likelihoods_into(y, fading.csi(mode, k), out)?;
        }
        Ok(SuperSymbolPosterior {
            order: self.order,
            values,
        })
    }
}

/// Streaming `ln sum exp`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSumExp {
    max: f64,
    sum: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }
}

impl LogSumExp {
    pub(crate) fn push(&mut self, t: f64) {
        if t > self.max {
            self.sum = self.sum * (self.max - t).exp() + 1.0;
            self.max = t;
        } else {
            self.sum += (t - self.max).exp();
        }
    }

    pub(crate) fn value(&self) -> f64 {
        self.max + self.sum.ln()
    }
}

/// `M^2` log-domain values per interval, indexed `q1 * M + q2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperSymbolPosterior {
    order: usize,
    values: Vec<f64>,
}

impl SuperSymbolPosterior {
    pub fn new(order: usize, values: Vec<f64>) -> Result<Self> {
        let mm = order * order;
        if mm == 0 || values.len() % mm != 0 {
            return Err(Error::dim(mm, values.len()));
        }
        Ok(Self { order, values })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn symbols(&self) -> usize {
        self.values.len() / (self.order * self.order)
    }

    pub fn interval(&self, k: usize) -> &[f64] {
        let mm = self.order * self.order;
        &self.values[k * mm..(k + 1) * mm]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Shifts every interval so its values exponentiate to a probability
    /// distribution.
    pub fn normalize(&mut self) {
        let mm = self.order * self.order;
        for chunk in self.values.chunks_exact_mut(mm) {
            let max = chunk.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = max + chunk.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
            for v in chunk.iter_mut() {
                *v -= lse;
            }
        }
    }

    /// Most likely network symbol `q1 xor q2` of each interval.
    pub fn network_symbol_decisions(&self) -> Vec<usize> {
        let m = self.order;
        (0..self.symbols())
            .map(|k| {
                let v = self.interval(k);
                let mut best = (f64::NEG_INFINITY, 0);
                for s in 0..m {
                    let mut acc = LogSumExp::default();
                    for q1 in 0..m {
                        acc.push(v[q1 * m + (q1 ^ s)]);
                    }
                    if acc.value() > best.0 {
                        best = (acc.value(), s);
                    }
                }
                best.1
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn probs(v: &[f64]) -> Vec<f64> {
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = v.iter().map(|x| (x - max).exp()).collect();
        let s: f64 = e.iter().sum();
        e.into_iter().map(|x| x / s).collect()
    }

    #[test]
    fn full_csi_swap_symmetry() {
        let d = Demodulator::new(4, 1e-4).unwrap();
        let y = [c(1.0), c(1.0), c(0.0), c(0.0)];
        let p = probs(&d.log_likelihoods(&y, Csi::Full(c(1.0), c(1.0))).unwrap());
        assert!((p[1] - 0.5).abs() < 1e-9);
        assert!((p[4] - 0.5).abs() < 1e-9);
        let rest: f64 = p.iter().enumerate().filter(|(i, _)| *i != 1 && *i != 4).map(|(_, x)| x).sum();
        assert!(rest < 1e-12);
    }

    #[test]
    fn no_csi_at_zero_prefers_shared_tone() {
        // p(y=0 | shared) ~ 1/(N0 (N0 + 2)) beats 1/(N0 + 1)^2
        let n0 = 0.3;
        let d = Demodulator::new(2, n0).unwrap();
        let l = d.log_likelihoods(&[c(0.0), c(0.0)], Csi::None).unwrap();
        let equal = l[0];
        assert_eq!(l[0], l[3]);
        assert_eq!(l[1], l[2]);
        let expected = (n0 + 1.0f64).powi(2).ln() - (n0 * (n0 + 2.0)).ln();
        assert!(((equal - l[1]) - expected).abs() < 1e-12);
        assert!(equal > l[1]);
    }

    #[test]
    fn partial_zero_amplitudes_are_flat() {
        let d = Demodulator::new(4, 0.1).unwrap();
        let y = [c(0.3), c(-1.0), c(0.2), c(2.0)];
        let l = d.log_likelihoods(&y, Csi::Partial(0.0, 0.0)).unwrap();
        assert!(l.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn normalized_posteriors_sum_to_one() {
        let d = Demodulator::new(4, 0.05).unwrap();
        let y = [c(0.3), Complex64::new(0.1, -1.0), c(0.2), c(2.0)];
        let mut p = SuperSymbolPosterior::new(4, d.log_likelihoods(&y, Csi::Partial(0.7, 1.3)).unwrap()).unwrap();
        p.normalize();
        let s: f64 = p.interval(0).iter().map(|v| v.exp()).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_lengths() {
        let d = Demodulator::new(4, 0.05).unwrap();
        assert!(d.log_likelihoods(&[c(0.0); 3], Csi::None).is_err());
        assert!(Demodulator::new(4, 0.0).is_err());
    }
}
