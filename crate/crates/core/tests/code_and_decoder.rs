use pnc_core::channel::stream_rng;
use pnc_core::ldpc::{from_alist, load_alist, realize_matrix, save_alist, to_alist, EiraEncoder, ParityCheckMatrix};
use pnc_core::standards::{table_row, wimax_23a, BaseCode};
use pnc_core::{BpDecoder, DegreeDistribution, Interleaver};
use proptest::prelude::*;
use rand::Rng;

mod common;
use common::{exact_map, random_bits, toy_tree};

#[test]
fn bp_on_a_tree_is_exact_map() {
    let h = toy_tree();
    let dec = BpDecoder::new(&h);
    let mut rng = stream_rng(21, 0);
    for _ in 0..50 {
        let llr: Vec<f64> = (0..6).map(|_| rng.random_range(-3.0..3.0)).collect();
        let out = dec.decode(&llr, 10, false).unwrap();
        for (a, b) in out.posterior.iter().zip(exact_map(&h, &llr)) {
            assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
        }
    }
}

fn assert_codewords(h: &ParityCheckMatrix, frames: usize, seed: u64) {
    let enc = EiraEncoder::new(h).unwrap();
    let mut rng = stream_rng(seed, 0);
    for _ in 0..frames {
        let u = random_bits(&mut rng, h.info_len());
        let c = enc.encode(&u).unwrap();
        assert_eq!(&c[..u.len()], &u[..]);
        assert!(h.syndrome_check(&c).unwrap());
    }
}

#[test]
fn encoder_output_satisfies_every_check() {
    let d = DegreeDistribution::from_pairs(&[(2, 300), (3, 400), (6, 100)], 8, 800, 500);
    assert_codewords(&realize_matrix(&d, 5).unwrap(), 1000, 1);
    assert_codewords(&wimax_23a().unwrap(), 1000, 2);
    assert_codewords(&BaseCode::Wimax.standard_matrix(3).unwrap(), 1000, 3);
    let v13 = realize_matrix(&table_row("V13").unwrap().distribution(), 4).unwrap();
    assert_codewords(&v13, 1000, 4);
}

#[test]
fn long_code_encodes_to_codewords() {
    let h = realize_matrix(&table_row("V1").unwrap().distribution(), 1).unwrap();
    assert_eq!(h.cols(), 64800);
    assert_codewords(&h, 20, 5);
}

#[test]
fn network_codeword_is_xor_of_codewords() {
    let h = wimax_23a().unwrap();
    let enc = EiraEncoder::new(&h).unwrap();
    let mut rng = stream_rng(22, 0);
    for _ in 0..100 {
        let u1 = random_bits(&mut rng, h.info_len());
        let u2 = random_bits(&mut rng, h.info_len());
        let u: Vec<u8> = u1.iter().zip(&u2).map(|(a, b)| a ^ b).collect();
        let c: Vec<u8> = enc
            .encode(&u1)
            .unwrap()
            .iter()
            .zip(enc.encode(&u2).unwrap())
            .map(|(a, b)| a ^ b)
            .collect();
        assert_eq!(enc.encode(&u).unwrap(), c);
    }
}

#[test]
fn alist_round_trip_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wimax.alist");
    let h = wimax_23a().unwrap();
    save_alist(&h, &path).unwrap();
    let back = load_alist(&path).unwrap();
    assert_eq!(back.entries(), h.entries());
    assert_eq!(to_alist(&back), to_alist(&h));
    let enc = EiraEncoder::new(&back).unwrap();
    assert_eq!(enc.info_len(), 1536);
}

#[test]
fn decoder_corrects_light_noise_on_wimax() {
    let h = wimax_23a().unwrap();
    let enc = EiraEncoder::new(&h).unwrap();
    let dec = BpDecoder::new(&h);
    let mut rng = stream_rng(23, 0);
    for _ in 0..20 {
        let c = enc.encode(&random_bits(&mut rng, 1536)).unwrap();
        let llr: Vec<f64> = c
            .iter()
            .map(|&b| {
                let noise: f64 = rng.random_range(-1.0..1.0);
                4.0 * (2.0 * b as f64 - 1.0) + 3.0 * noise
            })
            .collect();
        let out = dec.decode(&llr, 50, true).unwrap();
        assert!(out.converged);
        assert_eq!(out.hard, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interleaver_round_trips(len in 1usize..500, seed in any::<u64>()) {
        let p = Interleaver::new(len, seed);
        let x: Vec<u32> = (0..len as u32).collect();
        let y = p.interleave(&x).unwrap();
        let mut sorted = y.clone();
        sorted.sort_unstable();
        prop_assert_eq!(&sorted, &x);
        prop_assert_eq!(p.deinterleave(&y).unwrap(), x);
    }

    #[test]
    fn encoder_is_linear(seed in any::<u64>()) {
        let d = DegreeDistribution::from_pairs(&[(2, 60), (3, 80), (6, 20)], 8, 160, 100);
        let h = realize_matrix(&d, seed % 16).unwrap();
        let enc = EiraEncoder::new(&h).unwrap();
        let mut rng = stream_rng(seed, 1);
        let a = random_bits(&mut rng, 100);
        let b = random_bits(&mut rng, 100);
        let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let lhs = enc.encode(&ab).unwrap();
        let rhs: Vec<u8> = enc.encode(&a).unwrap().iter().zip(enc.encode(&b).unwrap()).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn realized_matrix_matches_distribution(seed in any::<u64>()) {
        let d = DegreeDistribution::from_pairs(&[(2, 60), (3, 80), (6, 20)], 8, 160, 100);
        let h = realize_matrix(&d, seed).unwrap();
        let mut w = h.column_weights();
        w.sort_unstable();
        let mut expected: Vec<usize> = d.entries.iter().flat_map(|g| std::iter::repeat_n(g.degree, g.count)).collect();
        // the staircase ends in a weight-one parity column
        expected[0] = 1;
        expected.sort_unstable();
        prop_assert_eq!(w, expected);
        prop_assert!(h.row_weights().iter().all(|&r| r == 8 || r == 7));
        let text = to_alist(&h);
        prop_assert_eq!(from_alist(&text).unwrap().entries(), h.entries());
    }

    #[test]
    fn decoder_posterior_sign_matches_hard_decision(seed in any::<u64>()) {
        let h = toy_tree();
        let mut rng = stream_rng(seed, 2);
        let llr: Vec<f64> = (0..6).map(|_| rng.random_range(-60.0..60.0)).collect();
        let out = BpDecoder::new(&h).decode(&llr, 5, false).unwrap();
        for (p, &b) in out.posterior.iter().zip(&out.hard) {
            prop_assert!(p.is_finite());
            prop_assert_eq!(b, (*p > 0.0) as u8);
        }
    }
}
