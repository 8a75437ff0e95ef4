//! Provenance headers for result files.
//!
//! Every CSV starts with one comment line
//! `# <schema> v<version> config=<hash> seed=<seed>` and every JSON document
//! carries the same fields under `"provenance"`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version of every file layout written by this crate.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub schema: String,
    pub version: u32,
    pub config_hash: String,
    pub seed: u64,
}

impl Provenance {
    pub fn new(schema: impl Into<String>, config_hash: impl Into<String>, seed: u64) -> Self {
        Self {
            schema: schema.into(),
            version: SCHEMA_VERSION,
            config_hash: config_hash.into(),
            seed,
        }
    }

    pub fn header_line(&self) -> String {
        format!(
            "# {} v{} config={} seed={}",
            self.schema, self.version, self.config_hash, self.seed
        )
    }

    /// Parses a line produced by [`Provenance::header_line`].
    pub fn parse_header(line: &str) -> Option<Self> {
        let rest = line.strip_prefix("# ")?;
        let mut parts = rest.split_whitespace();
        let schema = parts.next()?.to_string();
        let version = parts.next()?.strip_prefix('v')?.parse().ok()?;
        let config_hash = parts.next()?.strip_prefix("config=")?.to_string();
        let seed = parts.next()?.strip_prefix("seed=")?.parse().ok()?;
        Some(Self {
            schema,
            version,
            config_hash,
            seed,
        })
    }

    /// Reads the header of an existing file, if it has one.
    pub fn read_from(path: impl AsRef<Path>) -> Result<Option<Self>> {
        let path = path.as_ref();
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut line = String::new();
        BufReader::new(f)
            .read_line(&mut line)
            .map_err(|e| Error::io(path, e))?;
        Ok(Self::parse_header(line.trim_end()))
    }
}

/// Creates `path` with the provenance header and returns a CSV writer
/// positioned after it.
pub fn create_csv(path: &Path, provenance: &Provenance) -> Result<csv::Writer<BufWriter<File>>> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(f);
    writeln!(w, "{}", provenance.header_line()).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(w))
}

/// CSV reader that skips `#` comment lines.
pub fn open_csv(path: &Path) -> Result<csv::Reader<File>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(f))
}

/// Writes `value` as pretty JSON wrapped as `{"provenance": .., "data": ..}`.
pub fn write_json<T: Serialize>(path: &Path, provenance: &Provenance, value: &T) -> Result<()> {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        provenance: &'a Provenance,
        data: &'a T,
    }
    let text = serde_json::to_string_pretty(&Doc {
        provenance,
        data: value,
    })?;
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}
