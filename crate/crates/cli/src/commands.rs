use std::fs;
use std::path::Path;

use anyhow::Context;
use pnc_core::exit::io::{write_characteristic, write_curve_csv, write_thresholds};
use pnc_core::exit::{cnd_inverse_curve, exit_threshold, optimize_degrees, vnd_curve, CharacteristicCache};
use pnc_core::ldpc::save_alist;
use pnc_core::report::{create_csv, Provenance};
use pnc_core::sim::{run_sweep, SimCode};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{config_error, BerConfig, ExitConfig, GenCodeConfig, OptimizeConfig};

/// What a command leaves for the manifest besides its outputs.
pub struct Outcome {
    pub outputs: Vec<String>,
    pub telemetry: Value,
}

fn name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn gen_code(cfg: &GenCodeConfig, out: &Path, _hash: &str) -> anyhow::Result<Outcome> {
    let mut outputs = Vec::new();
    if let Some(d) = cfg.code.distribution()? {
        let report = d.validate();
        println!("distribution: n = {}, k = {}, d_c = {}", d.n, d.k, d.check_degree);
        println!("{report}");
        if !report.is_valid() {
            return Err(config_error("code: degree distribution fails validation"));
        }
        let path = out.join("distribution.json");
        d.save(&path)?;
        outputs.push(name(&path));
    }
    let h = cfg.code.matrix(cfg.seed)?;
    let path = out.join("code.alist");
    save_alist(&h, &path)?;
    println!(
        "wrote {}: {} x {}, {} edges, {} four-cycles",
        path.display(),
        h.rows(),
        h.cols(),
        h.edge_count(),
        h.four_cycles()
    );
    outputs.push(name(&path));
    Ok(Outcome {
        outputs,
        telemetry: Value::Null,
    })
}

pub fn exit(cfg: &ExitConfig, out: &Path, hash: &str) -> anyhow::Result<Outcome> {
    let d = cfg
        .code
        .distribution()?
        .ok_or_else(|| config_error("code: exit needs a degree distribution, not an alist"))?;
    d.ensure_valid().map_err(|e| config_error(format!("code: {e}")))?;
    let det = &cfg.detector;
    let dcfg = det.detector_config(d.n, d.rate())?;
    let prov = Provenance::new("exit", hash, det.seed);
    let mut cache = CharacteristicCache::new(dcfg)?;
    let result = exit_threshold(&d, &mut cache, &det.grid)?;
    match result.threshold_db {
        Some(t) => println!("threshold {t:.1} dB"),
        None => println!("no open tunnel on the grid"),
    }

    let mut outputs = Vec::new();
    let path = out.join("threshold.json");
    write_thresholds(&path, std::slice::from_ref(&result), &prov)?;
    outputs.push(name(&path));

    let top = *det.grid.points().last().expect("validated grid");
    let snr = result.threshold_db.unwrap_or(top);
    let ch = cache.get_or_measure(snr)?;
    let path = out.join("characteristic.csv");
    write_characteristic(&path, &ch, &prov)?;
    outputs.push(name(&path));
    outputs.push(name(&path.with_extension("json")));

    let path = out.join("vnd.csv");
    write_curve_csv(&path, &vnd_curve(&d, |x| ch.eval(x), &ch.i_a)?, &prov)?;
    outputs.push(name(&path));
    let path = out.join("cnd_inverse.csv");
    write_curve_csv(&path, &cnd_inverse_curve(d.check_degree, &ch.i_a)?, &prov)?;
    outputs.push(name(&path));
    Ok(Outcome {
        outputs,
        telemetry: json!({ "characteristics_measured": cache.len() }),
    })
}

#[derive(Serialize)]
struct RankRow {
    rank: usize,
    degrees: String,
    counts: String,
    threshold_db: Option<f64>,
}

pub fn optimize(cfg: &OptimizeConfig, out: &Path, hash: &str) -> anyhow::Result<Outcome> {
    let det = &cfg.detector;
    let base = cfg.base;
    let dcfg = det.detector_config(base.n(), base.rate())?;
    let prov = Provenance::new("optimize", hash, det.seed);
    let mut cache = CharacteristicCache::new(dcfg)?;
    let mut ranked = optimize_degrees(base, &mut cache, &det.grid)?;
    println!("{} feasible distributions", ranked.len());
    if let Some(top) = cfg.top {
        ranked.truncate(top);
    }

    let path = out.join("ranking.csv");
    let mut w = create_csv(&path, &prov)?;
    for (i, r) in ranked.iter().enumerate() {
        let join = |f: fn(&pnc_core::DegreeGroup) -> usize| {
            r.distribution.entries.iter().map(|g| f(g).to_string()).collect::<Vec<_>>().join(" ")
        };
        w.serialize(RankRow {
            rank: i + 1,
            degrees: join(|g| g.degree),
            counts: join(|g| g.count),
            threshold_db: r.threshold_db,
        })?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    for (i, r) in ranked.iter().take(5).enumerate() {
        let groups: Vec<_> = r.distribution.entries.iter().map(|g| format!("{}:{}", g.degree, g.count)).collect();
        let t = r.threshold_db.map_or("none".to_string(), |t| format!("{t:.1} dB"));
        println!("{:>3}. {{{}}} {t}", i + 1, groups.join(", "));
    }
    let json_path = out.join("ranking.json");
    write_thresholds(&json_path, &ranked, &prov)?;
    Ok(Outcome {
        outputs: vec![name(&path), name(&json_path)],
        telemetry: json!({ "characteristics_measured": cache.len() }),
    })
}

pub fn ber(cfg: &BerConfig, out: &Path, hash: &str) -> anyhow::Result<Outcome> {
    let trial = &cfg.trial;
    trial.validate().map_err(|e| config_error(e.to_string()))?;
    let h = cfg.code.matrix(trial.seed)?;
    let code = SimCode::new(h, cfg.interleaver_seed.unwrap_or(trial.seed))?;
    let prov = Provenance::new("ber", hash, trial.seed);
    let path = out.join("ber.csv");
    let records = run_sweep(&code, trial, Some(&path), &prov)?;
    println!("{:>8} {:>10} {:>12} {:>10} {:>10}", "snr_db", "frames", "bit_errors", "ber", "fer");
    for r in &records {
        println!(
            "{:>8.2} {:>10} {:>12} {:>10.3e} {:>10.3e}",
            r.snr_db, r.frames, r.bit_errors, r.ber, r.fer
        );
    }
    let telemetry: Vec<Value> = records
        .iter()
        .filter(|r| r.wall_seconds > 0.0)
        .map(|r| json!({ "snr_db": r.snr_db, "wall_seconds": r.wall_seconds, "mean_iterations": r.mean_iterations }))
        .collect();
    Ok(Outcome {
        outputs: vec![name(&path), name(&path.with_extension("json"))],
        telemetry: Value::Array(telemetry),
    })
}

pub fn ensure_dir(out: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))
}
