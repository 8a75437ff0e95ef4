#![allow(dead_code)]

use pnc_core::ldpc::ParityCheckMatrix;
use pnc_core::modem::SuperSymbolPosterior;
use rand::Rng;

pub fn random_bits(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random::<bool>() as u8).collect()
}

pub fn random_posterior(rng: &mut impl Rng, m: usize, intervals: usize) -> SuperSymbolPosterior {
    let v = (0..m * m * intervals).map(|_| rng.random_range(-6.0..6.0)).collect();
    SuperSymbolPosterior::new(m, v).unwrap()
}

fn msb_bit(s: usize, b: usize, mu: usize) -> usize {
    (s >> (mu - 1 - b)) & 1
}

/// Direct enumeration of `(q1, q2)` with a-priori bit probabilities of the
/// network symbol in the probability domain.
pub fn brute_force_somap(p: &SuperSymbolPosterior, apriori: &[f64]) -> Vec<f64> {
    let m = p.order();
    let mu = m.trailing_zeros() as usize;
    let mut out = Vec::new();
    for k in 0..p.symbols() {
        let lik = p.interval(k);
        let top = lik.iter().cloned().fold(f64::MIN, f64::max);
        let v = &apriori[k * mu..(k + 1) * mu];
        for b in 0..mu {
            let mut num = [0.0f64; 2];
            for q1 in 0..m {
                for q2 in 0..m {
                    let s = q1 ^ q2;
                    let mut w = (lik[q1 * m + q2] - top).exp();
                    for (bb, &vb) in v.iter().enumerate() {
                        if bb == b {
                            continue;
                        }
                        let p1 = 1.0 / (1.0 + (-vb).exp());
                        w *= if msb_bit(s, bb, mu) == 1 { p1 } else { 1.0 - p1 };
                    }
                    num[msb_bit(s, b, mu)] += w;
                }
            }
            out.push((num[1] / num[0]).ln());
        }
    }
    out
}

/// Tree-shaped Tanner graph: 6 variables, 3 checks, 8 edges.
pub fn toy_tree() -> ParityCheckMatrix {
    let entries = [(0, 0), (0, 1), (0, 2), (1, 2), (1, 3), (1, 4), (2, 4), (2, 5)];
    ParityCheckMatrix::from_entries(3, 6, &entries).unwrap()
}

/// Bitwise MAP LLRs by enumerating every word of `h`.
pub fn exact_map(h: &ParityCheckMatrix, llr: &[f64]) -> Vec<f64> {
    let n = llr.len();
    let mut num = vec![[0.0f64; 2]; n];
    for w in 0..1u32 << n {
        let x: Vec<u8> = (0..n).map(|i| ((w >> i) & 1) as u8).collect();
        if !h.syndrome_check(&x).unwrap() {
            continue;
        }
        let weight = x.iter().zip(llr).map(|(&b, &l)| b as f64 * l).sum::<f64>().exp();
        for (i, &b) in x.iter().enumerate() {
            num[i][b as usize] += weight;
        }
    }
    num.iter().map(|p| (p[1] / p[0]).ln()).collect()
}
