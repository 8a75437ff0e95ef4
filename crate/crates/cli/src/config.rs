//! Run configurations, command-line overrides and the configuration hash.

use std::path::{Path, PathBuf};

use pnc_core::channel::{CsiMode, NoiseConvention};
use pnc_core::exit::{DetectorConfig, SnrGrid};
use pnc_core::ldpc::{load_alist, realize_matrix, solve_free_counts};
use pnc_core::sim::TrialConfig;
use pnc_core::standards::{table_row, BaseCode};
use pnc_core::{DegreeDistribution, ParityCheckMatrix};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Error in the configuration rather than in the computation.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// Where a code comes from. Exactly one source must be given; `base` alone
/// selects the standard code of that family.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_row: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alist: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseCode>,
    /// Free degrees `[a, b]` of `base`; their counts are solved for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_degrees: Option<(usize, usize)>,
}

impl CodeSpec {
    fn sources(&self) -> usize {
        [
            self.table_row.is_some(),
            self.distribution.is_some(),
            self.alist.is_some(),
            self.base.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count()
    }

    fn check(&self) -> anyhow::Result<()> {
        if self.sources() != 1 {
            return Err(config_error(
                "code: give exactly one of `table_row`, `distribution`, `alist` or `base`",
            ));
        }
        if self.free_degrees.is_some() && self.base.is_none() {
            return Err(config_error("code: `free_degrees` needs `base`"));
        }
        Ok(())
    }

    /// The degree distribution this source names, if it names one.
    pub fn distribution(&self) -> anyhow::Result<Option<DegreeDistribution>> {
        self.check()?;
        if let Some(label) = &self.table_row {
            let row = table_row(label).ok_or_else(|| config_error(format!("code: unknown table row {label:?}")))?;
            return Ok(Some(row.distribution()));
        }
        if let Some(path) = &self.distribution {
            return Ok(Some(DegreeDistribution::load(path)?));
        }
        if let Some(base) = self.base {
            return Ok(Some(match self.free_degrees {
                Some((a, b)) => {
                    let (oa, ob) = solve_free_counts(&base.fixed(), (a, b), base.n(), base.k(), base.check_degree())
                        .map_err(|e| config_error(format!("code: {e}")))?;
                    base.distribution(&[(a, oa), (b, ob)])
                }
                None => base.standard_distribution(),
            }));
        }
        Ok(None)
    }

    /// Parity-check matrix of this source; random realizations use `seed`.
    pub fn matrix(&self, seed: u64) -> anyhow::Result<ParityCheckMatrix> {
        self.check()?;
        if let Some(path) = &self.alist {
            return Ok(load_alist(path)?);
        }
        if let (Some(base), None) = (self.base, self.free_degrees) {
            return Ok(base.standard_matrix(seed)?);
        }
        let d = self.distribution()?.expect("checked above");
        Ok(realize_matrix(&d, seed)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenCodeConfig {
    pub code: CodeSpec,
    pub seed: u64,
}

fn default_points() -> usize {
    pnc_core::exit::detector::DEFAULT_POINTS
}

fn default_phase_nodes() -> usize {
    pnc_core::modem::DEFAULT_PHASE_NODES
}

/// Detector settings shared by `exit` and `optimize`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorSettings {
    pub order: usize,
    pub csi: CsiMode,
    #[serde(default)]
    pub noise: NoiseConvention,
    pub grid: SnrGrid,
    pub seed: u64,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Frames per characteristic; by default one long frame or eight short.
    #[serde(default)]
    pub frames: Option<usize>,
    #[serde(default = "default_phase_nodes")]
    pub phase_nodes: usize,
}

impl DetectorSettings {
    pub fn detector_config(&self, n: usize, rate: f64) -> anyhow::Result<DetectorConfig> {
        let mut cfg = DetectorConfig::for_code(n, rate, self.order, self.csi, self.seed);
        cfg.noise = self.noise;
        cfg.points = self.points;
        cfg.phase_nodes = self.phase_nodes;
        if let Some(f) = self.frames {
            cfg.frames = f;
        }
        cfg.validate().map_err(|e| config_error(e.to_string()))?;
        self.grid.validate().map_err(|e| config_error(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitConfig {
    pub code: CodeSpec,
    #[serde(flatten)]
    pub detector: DetectorSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub base: BaseCode,
    #[serde(flatten)]
    pub detector: DetectorSettings,
    /// Rows kept in the ranking table; all when absent.
    #[serde(default)]
    pub top: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerConfig {
    pub code: CodeSpec,
    /// Seeds the shared interleaver; the master seed when absent.
    #[serde(default)]
    pub interleaver_seed: Option<u64>,
    #[serde(flatten)]
    pub trial: TrialConfig,
}

/// Flat command-line overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Overrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mod_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feedback: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    GenCode,
    Exit,
    Optimize,
    Ber,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GenCode => "gen-code",
            Command::Exit => "exit",
            Command::Optimize => "optimize",
            Command::Ber => "ber",
        }
    }
}

fn snr_number(s: &str) -> anyhow::Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| config_error(format!("--snr: cannot parse {s:?}")))
}

/// `start:stop[:step]`, or `None` for a comma list.
fn parse_snr_range(text: &str) -> anyhow::Result<Option<SnrGrid>> {
    if !text.contains(':') {
        return Ok(None);
    }
    let parts: Vec<f64> = text.split(':').map(snr_number).collect::<anyhow::Result<_>>()?;
    let (start, stop, step) = match parts[..] {
        [a, b] => (a, b, 0.1),
        [a, b, c] => (a, b, c),
        _ => return Err(config_error("--snr range is start:stop[:step]")),
    };
    let grid = SnrGrid::new(start, stop, step).map_err(|e| config_error(format!("--snr: {e}")))?;
    Ok(Some(grid))
}

/// `a,b,c` or `start:stop[:step]`.
fn parse_snr(text: &str) -> anyhow::Result<Vec<f64>> {
    match parse_snr_range(text)? {
        Some(grid) => Ok(grid.points()),
        None => text.split(',').map(snr_number).collect(),
    }
}

fn set(obj: &mut Map<String, Value>, key: &str, v: Value) {
    obj.insert(key.to_string(), v);
}

/// Applies `ov` to the raw configuration object of `cmd`.
pub fn apply_overrides(cmd: Command, raw: &mut Value, ov: &Overrides) -> anyhow::Result<()> {
    let obj = raw
        .as_object_mut()
        .ok_or_else(|| config_error("configuration must be a JSON object"))?;
    if let Some(seed) = ov.seed {
        set(obj, "seed", json!(seed));
    }
    let detector_like = matches!(cmd, Command::Exit | Command::Optimize | Command::Ber);
    for (flag, present) in [
        ("--csi", ov.csi.is_some()),
        ("--mod-order", ov.mod_order.is_some()),
        ("--snr", ov.snr.is_some()),
    ] {
        if present && !detector_like {
            return Err(config_error(format!("{flag} does not apply to {}", cmd.name())));
        }
    }
    if ov.feedback.is_some() && cmd != Command::Ber {
        return Err(config_error(format!("--feedback does not apply to {}", cmd.name())));
    }
    if let Some(csi) = &ov.csi {
        let mode: CsiMode = csi.parse().map_err(|e: pnc_core::Error| config_error(format!("--csi: {e}")))?;
        set(obj, "csi", serde_json::to_value(mode)?);
    }
    if let Some(m) = ov.mod_order {
        set(obj, "order", json!(m));
    }
    if let Some(fb) = &ov.feedback {
        let mode: pnc_core::FeedbackMode =
            fb.parse().map_err(|e: pnc_core::Error| config_error(format!("--feedback: {e}")))?;
        set(obj, "feedback", serde_json::to_value(mode)?);
    }
    if let Some(snr) = &ov.snr {
        if cmd == Command::Ber {
            set(obj, "snr_db", json!(parse_snr(snr)?));
        } else {
            let grid = parse_snr_range(snr)?
                .ok_or_else(|| config_error(format!("--snr for {} takes start:stop[:step]", cmd.name())))?;
            set(obj, "grid", serde_json::to_value(grid)?);
        }
    }
    Ok(())
}

/// Reads `path`, applies the overrides and parses the result.
pub fn load<T: DeserializeOwned>(cmd: Command, path: &Path, ov: &Overrides) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    let mut raw: Value =
        serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    apply_overrides(cmd, &mut raw, ov)?;
    serde_json::from_value(raw).map_err(|e| config_error(format!("{}: {e}", path.display())))
}

/// First 16 hex digits of the SHA-256 of the canonical JSON of `config`.
pub fn config_hash<T: Serialize>(config: &T) -> anyhow::Result<String> {
    let canonical = serde_json::to_vec(&serde_json::to_value(config)?)?;
    Ok(hex::encode(&Sha256::digest(&canonical)[..8]))
}
