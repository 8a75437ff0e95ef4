use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pnc_bench::{frame, wimax, zero_codeword_llrs};
use pnc_core::channel::CsiMode;
use pnc_core::exit::{detector_characteristic, j, j_inv, DetectorConfig};
use pnc_core::modem::somap::NetworkSymbolMetrics;
use pnc_core::BpDecoder;

fn decoder(c: &mut Criterion) {
    let h = wimax();
    let dec = BpDecoder::new(&h);
    let llr = zero_codeword_llrs(&dec, 0.8, 1);
    c.bench_function("bp/wimax-iteration", |b| {
        let mut state = dec.state();
        state.set_channel(&llr).unwrap();
        b.iter(|| state.iterate())
    });
}

fn demapper(c: &mut Criterion) {
    let mut g = c.benchmark_group("demod");
    for order in [4, 8] {
        let f = frame(order, 2304, 0.05, 2);
        for csi in [CsiMode::Full, CsiMode::Partial, CsiMode::None] {
            g.bench_function(format!("likelihoods/M{order}/{csi}"), |b| b.iter(|| f.posterior(csi)));
        }
        let metrics = NetworkSymbolMetrics::from_posterior(&f.posterior(CsiMode::Partial));
        let prior = vec![0.0; 2304];
        g.bench_function(format!("somap/M{order}"), |b| b.iter(|| metrics.somap(black_box(&prior)).unwrap()));
    }
    g.finish();
}

fn jfunc(c: &mut Criterion) {
    c.bench_function("j", |b| b.iter(|| j(black_box(2.3))));
    c.bench_function("j_inv", |b| b.iter(|| j_inv(black_box(0.6))));
}

fn characteristic(c: &mut Criterion) {
    let mut cfg = DetectorConfig::for_code(2304, 2.0 / 3.0, 4, CsiMode::Partial, 3);
    cfg.frames = 1;
    cfg.points = 20;
    let mut g = c.benchmark_group("exit");
    g.sample_size(10);
    g.bench_function("characteristic/wimax-M4-partial", |b| {
        b.iter(|| detector_characteristic(&cfg, 11.0).unwrap())
    });
    g.finish();
}

criterion_group!(benches, decoder, demapper, jfunc, characteristic);
criterion_main!(benches);
