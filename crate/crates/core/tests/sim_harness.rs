use pnc_core::channel::CsiMode;
use pnc_core::ldpc::realize_matrix;
use pnc_core::report::Provenance;
use pnc_core::sim::{read_results_csv, run_point, run_sweep, FeedbackMode, SimCode, TrialConfig};
use pnc_core::standards::BaseCode;
use pnc_core::DegreeDistribution;

fn small_code() -> SimCode {
    let d = DegreeDistribution::from_pairs(&[(2, 240), (3, 320), (6, 80)], 8, 640, 400);
    SimCode::new(realize_matrix(&d, 2).unwrap(), 7).unwrap()
}

fn config(feedback: FeedbackMode, snr: Vec<f64>, frames: u64) -> TrialConfig {
    let mut cfg = TrialConfig::new(4, CsiMode::Partial, feedback, snr, 17);
    cfg.max_frames = frames;
    cfg.max_frame_errors = None;
    cfg
}

#[test]
fn counts_do_not_depend_on_worker_count() {
    let code = small_code();
    let cfg = config(FeedbackMode::BicmId, vec![9.0], 48);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_point(&code, &cfg, 9.0).unwrap())
    };
    let a = run(1);
    let b = run(3);
    let c = run(1);
    assert!(a.frame_errors > 0);
    for r in [&b, &c] {
        assert_eq!((a.frames, a.bit_errors, a.frame_errors), (r.frames, r.bit_errors, r.frame_errors));
        assert_eq!(a.ber.to_bits(), r.ber.to_bits());
    }
}

#[test]
fn frame_error_limit_stops_at_the_same_frame() {
    let code = small_code();
    let mut cfg = config(FeedbackMode::Bicm, vec![8.5], 1000);
    cfg.max_frame_errors = Some(10);
    let a = run_point(&code, &cfg, 8.5).unwrap();
    cfg.batch = 5;
    let b = run_point(&code, &cfg, 8.5).unwrap();
    assert_eq!(a.frame_errors, 10);
    assert_eq!((a.frames, a.bit_errors), (b.frames, b.bit_errors));
}

#[test]
fn standard_wimax_code_is_clean_at_high_snr() {
    let code = SimCode::new(BaseCode::Wimax.standard_matrix(1).unwrap(), 3).unwrap();
    let cfg = config(FeedbackMode::Bicm, vec![30.0], 100);
    let r = run_point(&code, &cfg, 30.0).unwrap();
    assert_eq!(r.frames, 100);
    assert!(r.ber < 1e-5, "BER {}", r.ber);
    assert_eq!(r.ber, r.bit_errors as f64 / (100.0 * 1536.0));
}

#[test]
fn feedback_does_not_hurt() {
    let code = small_code();
    let snr = 9.0;
    let plain = run_point(&code, &config(FeedbackMode::Bicm, vec![snr], 200), snr).unwrap();
    let fed = run_point(&code, &config(FeedbackMode::BicmId, vec![snr], 200), snr).unwrap();
    let sd = |p: f64, n: u64| (p * (1.0 - p) / n as f64).sqrt();
    let fer_sigma = (sd(plain.fer, plain.frames).powi(2) + sd(fed.fer, fed.frames).powi(2)).sqrt();
    assert!(fed.fer <= plain.fer + 2.0 * fer_sigma, "{} vs {}", fed.fer, plain.fer);
    // bit errors cluster in failed frames
    let ber_sigma = |r: &pnc_core::ResultRecord| r.ber / (r.frame_errors.max(1) as f64).sqrt();
    let sigma = (ber_sigma(&plain).powi(2) + ber_sigma(&fed).powi(2)).sqrt();
    assert!(fed.ber <= plain.ber + 2.0 * sigma, "{} vs {}", fed.ber, plain.ber);
}

#[test]
fn sweep_writes_monotone_records_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ber.csv");
    let code = small_code();
    let prov = Provenance::new("ber", "cafe", 17);

    let first = run_sweep(&code, &config(FeedbackMode::Bicm, vec![8.0, 9.0], 60), Some(&path), &prov).unwrap();
    assert_eq!(first.len(), 2);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# ber v1 config=cafe seed=17\nsnr_db,frames,bit_errors,ber,frame_errors,fer,seed\n"));

    let full = run_sweep(&code, &config(FeedbackMode::Bicm, vec![8.0, 9.0, 10.0], 60), Some(&path), &prov).unwrap();
    assert_eq!(full.len(), 3);
    assert_eq!(full[0].wall_seconds, 0.0, "first point was re-simulated");
    assert_eq!(full[1].bit_errors, first[1].bit_errors);
    let on_disk = read_results_csv(&path).unwrap();
    assert_eq!(on_disk.len(), 3);
    for w in on_disk.windows(2) {
        assert!(w[1].ber <= w[0].ber * 1.5 + 1e-4, "{} then {}", w[0].ber, w[1].ber);
    }
    assert!(on_disk[2].ber < on_disk[0].ber);
    assert!(path.with_extension("json").exists());

    let other = Provenance::new("ber", "beef", 17);
    assert!(run_sweep(&code, &config(FeedbackMode::Bicm, vec![8.0], 10), Some(&path), &other).is_err());
}

#[test]
fn empty_sweep_is_an_error() {
    let code = small_code();
    let prov = Provenance::new("ber", "x", 1);
    assert!(run_sweep(&code, &config(FeedbackMode::Bicm, vec![], 10), None, &prov).is_err());
}
