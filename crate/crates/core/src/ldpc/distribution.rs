//! Variable-node degree distributions of check-regular LDPC codes.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `count` variable nodes of degree `degree`.
///
/// Serialized as a two-element array `[degree, count]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct DegreeGroup {
    pub degree: usize,
    pub count: usize,
}

impl DegreeGroup {
    pub const fn new(degree: usize, count: usize) -> Self {
        Self { degree, count }
    }

    pub fn edges(&self) -> u64 {
        self.degree as u64 * self.count as u64
    }
}

impl From<(usize, usize)> for DegreeGroup {
    fn from((degree, count): (usize, usize)) -> Self {
        Self { degree, count }
    }
}

impl From<DegreeGroup> for (usize, usize) {
    fn from(g: DegreeGroup) -> Self {
        (g.degree, g.count)
    }
}

/// Degree distribution `V = {d_v,i : o_i}` together with the check degree and
/// code dimensions.
///
/// Groups are kept in the order given. Degrees may repeat: the leading groups
/// describe the accumulator columns and the rest describe the information
/// columns, so `{2:672, 3:96, 3:1296, 9:240}` is a legitimate distribution.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeDistribution {
    pub entries: Vec<DegreeGroup>,
    #[serde(rename = "dc")]
    pub check_degree: usize,
    pub n: usize,
    pub k: usize,
}

/// Outcome of [`DegreeDistribution::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub positive: bool,
    pub node_sum: bool,
    pub edge_balance: bool,
    pub node_total: u64,
    pub variable_edges: u64,
    pub check_edges: u64,
    /// Degree-1 variable nodes get no extrinsic help from the graph.
    pub has_degree_one: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.positive && self.node_sum && self.edge_balance
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "nodes = {}, e_v = {}, e_c = {}",
            self.node_total, self.variable_edges, self.check_edges
        )?;
        if self.has_degree_one {
            writeln!(f, "warning: distribution contains degree-1 variable nodes")?;
        }
        if self.is_valid() {
            write!(f, "valid")
        } else {
            write!(f, "INVALID: {}", self.failures.join("; "))
        }
    }
}

impl DegreeDistribution {
    pub fn new(entries: Vec<DegreeGroup>, check_degree: usize, n: usize, k: usize) -> Self {
        Self {
            entries,
            check_degree,
            n,
            k,
        }
    }

    /// Builds a distribution from `(degree, count)` pairs.
    pub fn from_pairs(pairs: &[(usize, usize)], check_degree: usize, n: usize, k: usize) -> Self {
        Self::new(
            pairs.iter().copied().map(DegreeGroup::from).collect(),
            check_degree,
            n,
            k,
        )
    }

    pub fn parity_checks(&self) -> usize {
        self.n.saturating_sub(self.k)
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Total number of variable-node edges `e_v`.
    pub fn variable_edges(&self) -> u64 {
        self.entries.iter().map(DegreeGroup::edges).sum()
    }

    /// Total number of check-node edges `e_c = d_c (N - K)`.
    pub fn check_edges(&self) -> u64 {
        self.check_degree as u64 * self.parity_checks() as u64
    }

    /// Node fractions `a_i = o_i / N`.
    pub fn node_fractions(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|g| g.count as f64 / self.n as f64)
            .collect()
    }

    /// Edge fractions `b_i = e_v,i / e_v`.
    pub fn edge_fractions(&self) -> Vec<f64> {
        let total = self.variable_edges() as f64;
        self.entries
            .iter()
            .map(|g| g.edges() as f64 / total)
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let positive = !self.entries.is_empty()
            && self.entries.iter().all(|g| g.degree > 0 && g.count > 0)
            && self.check_degree > 0
            && self.n > self.k
            && self.k > 0;
        if !positive {
            failures.push("degrees, counts, d_c and K must be positive with K < N".to_string());
        }
        let node_total: u64 = self.entries.iter().map(|g| g.count as u64).sum();
        let node_sum = node_total == self.n as u64;
        if !node_sum {
            failures.push(format!("node sum {node_total} != N = {}", self.n));
        }
        let variable_edges = self.variable_edges();
        let check_edges = self.check_edges();
        let edge_balance = variable_edges == check_edges;
        if !edge_balance {
            failures.push(format!(
                "edge balance e_v = {variable_edges} != e_c = {check_edges}"
            ));
        }
        ValidationReport {
            positive,
            node_sum,
            edge_balance,
            node_total,
            variable_edges,
            check_edges,
            has_degree_one: self.entries.iter().any(|g| g.degree == 1),
            failures,
        }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidDistribution(report.failures.join("; ")))
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("distribution serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

impl fmt::Display for DegreeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", g.degree, g.count)?;
        }
        write!(f, "}} d_c={} N={} K={}", self.check_degree, self.n, self.k)
    }
}

/// Solves for the counts of two free degrees given the retained groups.
///
/// The counts satisfy `o_a + o_b = N - sum(fixed counts)` and
/// `d_a o_a + d_b o_b = d_c (N - K) - sum(fixed edges)`. Only strictly positive
/// integer solutions are accepted.
pub fn solve_free_counts(
    fixed: &[DegreeGroup],
    free: (usize, usize),
    n: usize,
    k: usize,
    check_degree: usize,
) -> Result<(usize, usize)> {
    let (da, db) = free;
    let infeasible = Error::Infeasible(da, db);
    if da == db || da == 0 || db == 0 || k >= n {
        return Err(infeasible);
    }
    let fixed_nodes: i64 = fixed.iter().map(|g| g.count as i64).sum();
    let fixed_edges: i64 = fixed.iter().map(|g| g.edges() as i64).sum();
    let nodes = n as i64 - fixed_nodes;
    let edges = (check_degree * (n - k)) as i64 - fixed_edges;
    let (da, db) = (da as i64, db as i64);
    // o_b (d_b - d_a) = edges - d_a * nodes
    let num = edges - da * nodes;
    let den = db - da;
    if num % den != 0 {
        return Err(infeasible);
    }
    let ob = num / den;
    let oa = nodes - ob;
    if oa <= 0 || ob <= 0 {
        return Err(infeasible);
    }
    Ok((oa as usize, ob as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v1() -> DegreeDistribution {
        DegreeDistribution::from_pairs(&[(2, 25920), (4, 34560), (22, 4320)], 11, 64800, 38880)
    }

    #[test]
    fn v1_balances() {
        let r = v1().validate();
        assert!(r.is_valid(), "{r}");
        assert_eq!(r.variable_edges, 285_120);
        assert_eq!(r.check_edges, 285_120);
    }

    #[test]
    fn printed_v2_fails_node_sum() {
        let v = DegreeDistribution::from_pairs(&[(2, 25920), (33, 4560), (30, 4320)], 11, 64800, 38880);
        let r = v.validate();
        assert!(!r.node_sum);
        assert_eq!(r.node_total, 34_800);
        assert!(!r.is_valid());
    }

    #[test]
    fn repeated_degrees_are_allowed() {
        let v = DegreeDistribution::from_pairs(&[(2, 672), (3, 96), (3, 1296), (9, 240)], 10, 2304, 1536);
        let r = v.validate();
        assert!(r.is_valid());
        assert_eq!(r.variable_edges, 7680);
    }

    #[test]
    fn zero_count_is_not_positive() {
        let v = DegreeDistribution::from_pairs(&[(2, 0), (3, 10)], 3, 10, 5);
        assert!(!v.validate().positive);
    }

    #[test]
    fn degree_one_is_flagged() {
        let v = DegreeDistribution::from_pairs(&[(2, 672), (3, 96), (1, 10), (5, 5)], 10, 2304, 1536);
        assert!(v.validate().has_degree_one);
    }

    #[test]
    fn fractions_sum_to_one() {
        let v = v1();
        let a: f64 = v.node_fractions().iter().sum();
        let b: f64 = v.edge_fractions().iter().sum();
        assert!((a - 1.0).abs() < 1e-12);
        assert!((b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_layout() {
        let v = v1();
        let json = v.to_json();
        assert_eq!(
            json,
            r#"{"entries":[[2,25920],[4,34560],[22,4320]],"dc":11,"n":64800,"k":38880}"#
        );
        assert_eq!(DegreeDistribution::from_json(&json).unwrap(), v);
    }

    #[test]
    fn solve_dvbs2_and_wimax() {
        let dvb = [DegreeGroup::new(2, 25920)];
        assert_eq!(solve_free_counts(&dvb, (4, 22), 64800, 38880, 11).unwrap(), (34560, 4320));
        let wimax = [DegreeGroup::new(2, 672), DegreeGroup::new(3, 96)];
        assert_eq!(solve_free_counts(&wimax, (3, 9), 2304, 1536, 10).unwrap(), (1296, 240));
    }

    #[test]
    fn equal_free_degrees_are_infeasible() {
        let dvb = [DegreeGroup::new(2, 25920)];
        assert!(matches!(
            solve_free_counts(&dvb, (3, 3), 64800, 38880, 11),
            Err(Error::Infeasible(3, 3))
        ));
    }

    #[test]
    fn non_integer_and_negative_solutions_are_rejected() {
        let dvb = [DegreeGroup::new(2, 25920)];
        // 233280 - 7*38880 < 0 with both degrees above the mean column weight 6
        assert!(solve_free_counts(&dvb, (7, 9), 64800, 38880, 11).is_err());
        // 233280 - 4*38880 = 77760 is not a multiple of 7
        assert!(solve_free_counts(&dvb, (4, 11), 64800, 38880, 11).is_err());
    }
}
