//! Base codes, their retained accumulator columns, the free-degree search
//! spaces, and the published optimization results.

use serde::{Deserialize, Serialize};

use crate::channel::CsiMode;
use crate::error::{Error, Result};
use crate::ldpc::{
    realize_matrix, solve_free_counts, Accumulator, DegreeDistribution, DegreeGroup, ParityCheckMatrix,
};

/// Standard code whose `H2` is retained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseCode {
    /// DVB-S2 normal frame, rate 3/5.
    #[serde(alias = "dvb-s2")]
    Dvbs2,
    /// IEEE 802.16e, rate 2/3A, `z = 96`.
    Wimax,
}

impl std::str::FromStr for BaseCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "dvbs2" => Ok(BaseCode::Dvbs2),
            "wimax" => Ok(BaseCode::Wimax),
            _ => Err(Error::InvalidParameter(format!("unknown base code {s:?}"))),
        }
    }
}

impl std::fmt::Display for BaseCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BaseCode::Dvbs2 => "dvbs2",
            BaseCode::Wimax => "wimax",
        })
    }
}

impl BaseCode {
    pub fn n(self) -> usize {
        match self {
            BaseCode::Dvbs2 => 64_800,
            BaseCode::Wimax => 2304,
        }
    }

    pub fn k(self) -> usize {
        match self {
            BaseCode::Dvbs2 => 38_880,
            BaseCode::Wimax => 1536,
        }
    }

    pub fn rate(self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn check_degree(self) -> usize {
        match self {
            BaseCode::Dvbs2 => 11,
            BaseCode::Wimax => 10,
        }
    }

    /// Degree groups contributed by the retained `H2`.
    pub fn fixed(self) -> Vec<DegreeGroup> {
        match self {
            BaseCode::Dvbs2 => vec![DegreeGroup::new(2, 25_920)],
            BaseCode::Wimax => vec![DegreeGroup::new(2, 672), DegreeGroup::new(3, 96)],
        }
    }

    /// Free degree pairs `(d_a, d_b)` of the search space, `d_a < d_b`.
    pub fn free_degree_pairs(self) -> Vec<(usize, usize)> {
        let (lo, hi) = match self {
            BaseCode::Dvbs2 => (3, 100),
            BaseCode::Wimax => (1, 100),
        };
        (lo..=hi)
            .flat_map(|a| (a + 1..=hi).map(move |b| (a, b)))
            .collect()
    }

    /// Distribution with the given free groups appended to the fixed ones.
    pub fn distribution(self, free: &[(usize, usize)]) -> DegreeDistribution {
        let mut entries = self.fixed();
        entries.extend(free.iter().map(|&p| DegreeGroup::from(p)));
        DegreeDistribution::new(entries, self.check_degree(), self.n(), self.k())
    }

    /// Every feasible distribution of the search space, in lexicographic
    /// order of the free degrees.
    pub fn candidates(self) -> Vec<DegreeDistribution> {
        let fixed = self.fixed();
        self.free_degree_pairs()
            .into_iter()
            .filter_map(|(a, b)| {
                solve_free_counts(&fixed, (a, b), self.n(), self.k(), self.check_degree())
                    .ok()
                    .map(|(oa, ob)| self.distribution(&[(a, oa), (b, ob)]))
            })
            .collect()
    }

    /// Column-weight distribution of the standard code.
    pub fn standard_distribution(self) -> DegreeDistribution {
        match self {
            BaseCode::Dvbs2 => self.distribution(&[(12, 12_960), (3, 25_920)]),
            BaseCode::Wimax => self.distribution(&[(3, 1056), (6, 480)]),
        }
    }

    /// Parity-check matrix standing in for the standard code. WiMAX is the
    /// expanded 2/3A base matrix; DVB-S2 is a random realization of the
    /// standard column-weight distribution.
    pub fn standard_matrix(self, seed: u64) -> Result<ParityCheckMatrix> {
        match self {
            BaseCode::Dvbs2 => realize_matrix(&self.standard_distribution(), seed),
            BaseCode::Wimax => wimax_23a(),
        }
    }
}

const WIMAX_Z: usize = 96;

#[rustfmt::skip]
const WIMAX_23A_BASE: [[i16; 24]; 8] = [
    [ 3,  0, -1, -1,  2,  0, -1,  3,  7, -1,  1,  1, -1, -1, -1, -1,  1,  0, -1, -1, -1, -1, -1, -1],
    [-1, -1,  1, -1, 36, -1, -1, 34, 10, -1, -1, 18,  2, -1,  3,  0, -1,  0,  0, -1, -1, -1, -1, -1],
    [-1, -1, 12,  2, -1, 15, -1, 40, -1,  3, -1, 15, -1,  2, 13, -1, -1, -1,  0,  0, -1, -1, -1, -1],
    [-1, -1, 19, 24, -1,  3,  0, -1,  6, -1, 17, -1, -1, -1,  8, 39, -1, -1, -1,  0,  0, -1, -1, -1],
    [20, -1,  6, -1, -1, 10, 29, -1, -1, 28, -1, 14, -1, 38, -1, -1,  0, -1, -1, -1,  0,  0, -1, -1],
    [-1, -1, 10, -1, 28, 20, -1, -1,  8, -1, 36, -1,  9, -1, 21, 45, -1, -1, -1, -1, -1,  0,  0, -1],
    [35, 25, -1, 37, -1, 21, -1, -1,  5, -1, -1,  0, -1,  4, 20, -1, -1, -1, -1, -1, -1, -1,  0,  0],
    [-1,  6,  6, -1, -1, -1,  4, -1, 14, 30, -1,  3, 36, -1, 14, -1,  1, -1, -1, -1, -1, -1, -1,  0],
];

/// IEEE 802.16e rate-2/3A code at `z = 96` (`N = 2304`). A base entry
/// `p >= 0` expands to the identity cyclically shifted right by `p`.
pub fn wimax_23a() -> Result<ParityCheckMatrix> {
    let z = WIMAX_Z;
    let mut entries = Vec::with_capacity(7680);
    for (br, row) in WIMAX_23A_BASE.iter().enumerate() {
        for (bc, &p) in row.iter().enumerate() {
            if p < 0 {
                continue;
            }
            for i in 0..z {
                entries.push((br * z + i, bc * z + (i + p as usize) % z));
            }
        }
    }
    let h = ParityCheckMatrix::from_entries(8 * z, 24 * z, &entries)?;
    let acc = Accumulator::Extended { lift: z };
    if !h.has_accumulator(acc) {
        return Err(Error::Construction("2/3A parity part is not the extended accumulator".into()));
    }
    Ok(h.with_accumulator(acc))
}

/// One row of the published optimization table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub label: &'static str,
    pub base: BaseCode,
    pub order: usize,
    pub csi: CsiMode,
    /// Degree groups as printed.
    pub groups: &'static [(usize, usize)],
    /// Reported `Eb/N0` threshold in dB.
    pub threshold_db: f64,
}

impl TableRow {
    pub fn distribution(&self) -> DegreeDistribution {
        DegreeDistribution::from_pairs(self.groups, self.base.check_degree(), self.base.n(), self.base.k())
    }
}

macro_rules! row {
    ($label:expr, $base:ident, $m:expr, $csi:ident, [$(($d:expr, $o:expr)),*], $t:expr) => {
        TableRow {
            label: $label,
            base: BaseCode::$base,
            order: $m,
            csi: CsiMode::$csi,
            groups: &[$(($d, $o)),*],
            threshold_db: $t,
        }
    };
}

/// Published optimization results, rows `V1` to `V24`. Rows `V2`, `V8` and
/// `V11` do not satisfy the node-count or edge-count constraints as printed.
pub const TABLE_I: [TableRow; 24] = [
    row!("V1", Dvbs2, 4, Partial, [(2, 25920), (4, 34560), (22, 4320)], 11.9),
    row!("V2", Dvbs2, 4, Partial, [(2, 25920), (33, 4560), (30, 4320)], 12.0),
    row!("V3", Dvbs2, 4, Partial, [(2, 25920), (4, 37152), (49, 1728)], 12.0),
    row!("V4", Dvbs2, 4, None, [(2, 25920), (3, 34560), (30, 4320)], 12.3),
    row!("V5", Dvbs2, 4, None, [(2, 25920), (4, 34560), (22, 4320)], 12.3),
    row!("V6", Dvbs2, 4, None, [(2, 25920), (4, 37152), (49, 1728)], 12.4),
    row!("V7", Dvbs2, 8, Partial, [(2, 25920), (3, 34560), (30, 4320)], 9.5),
    row!("V8", Dvbs2, 8, Partial, [(2, 25920), (35, 3650), (3, 35230)], 9.5),
    row!("V9", Dvbs2, 8, Partial, [(2, 25920), (4, 34560), (22, 4320)], 9.7),
    row!("V10", Dvbs2, 8, None, [(2, 25920), (3, 34560), (30, 4320)], 9.8),
    row!("V11", Dvbs2, 8, None, [(2, 25920), (35, 3650), (3, 35230)], 9.9),
    row!("V12", Dvbs2, 8, None, [(2, 25920), (4, 34992), (24, 3888)], 10.1),
    row!("V13", Wimax, 4, Partial, [(2, 672), (3, 96), (3, 1296), (9, 240)], 12.9),
    row!("V14", Wimax, 4, Partial, [(2, 672), (3, 96), (3, 1356), (11, 180)], 12.9),
    row!("V15", Wimax, 4, Partial, [(2, 672), (3, 96), (3, 1376), (12, 160)], 12.9),
    row!("V16", Wimax, 4, None, [(2, 672), (3, 96), (3, 1248), (8, 288)], 13.3),
    row!("V17", Wimax, 4, None, [(2, 672), (3, 96), (3, 1296), (9, 240)], 13.3),
    row!("V18", Wimax, 4, None, [(2, 672), (3, 96), (3, 1356), (11, 180)], 13.3),
    row!("V19", Wimax, 8, Partial, [(2, 672), (3, 96), (3, 1296), (9, 240)], 10.4),
    row!("V20", Wimax, 8, Partial, [(2, 672), (3, 96), (3, 1356), (11, 180)], 10.4),
    row!("V21", Wimax, 8, Partial, [(2, 672), (3, 96), (3, 1376), (12, 160)], 10.4),
    row!("V22", Wimax, 8, None, [(2, 672), (3, 96), (3, 1356), (11, 180)], 10.8),
    row!("V23", Wimax, 8, None, [(2, 672), (3, 96), (3, 1376), (12, 160)], 10.8),
    row!("V24", Wimax, 8, None, [(2, 672), (3, 96), (3, 1392), (13, 144)], 10.8),
];

/// Looks up a table row by label, e.g. `"V13"`.
pub fn table_row(label: &str) -> Option<&'static TableRow> {
    TABLE_I.iter().find(|r| r.label.eq_ignore_ascii_case(label))
}
