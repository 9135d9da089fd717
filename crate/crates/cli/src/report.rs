use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::Serialize;
use sha2::{Digest, Sha256};
use turanlab::formulas::serialize_big;
use turanlab::MultipartiteHypergraph;

use crate::{CliError, GridPoint};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointRecord {
    #[serde(flatten)]
    pub point: GridPoint,
    #[serde(serialize_with = "serialize_big")]
    pub formula: BigUint,
    /// `None` when the search ran out of budget.
    pub oracle: Option<u64>,
    pub hypothesis_ok: bool,
    /// `None` unless the oracle is conclusive.
    pub agree: Option<bool>,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MultipartiteHypergraph>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub points: usize,
    pub hypothesis_ok: usize,
    pub agree: usize,
    /// Conclusive disagreements where the hypothesis holds.
    pub failures: usize,
    /// Conclusive disagreements outside the hypothesis; informational.
    pub flagged_mismatches: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub theorem: String,
    pub seed: u64,
    pub node_budget: u64,
    pub points: Vec<PointRecord>,
    pub summary: Summary,
    /// Optimal hosts of the failing points, for the error message.
    #[serde(skip)]
    pub counterexamples: Vec<(GridPoint, MultipartiteHypergraph)>,
}

pub fn digest(h: &MultipartiteHypergraph) -> String {
    hex::encode(Sha256::digest(h.to_json().as_bytes()))
}

impl Summary {
    pub fn tally(points: &[PointRecord]) -> Summary {
        let mut s = Summary { points: points.len(), ..Default::default() };
        for p in points {
            s.hypothesis_ok += p.hypothesis_ok as usize;
            match (p.agree, p.hypothesis_ok) {
                (None, _) => s.inconclusive += 1,
                (Some(true), _) => s.agree += 1,
                (Some(false), true) => s.failures += 1,
                (Some(false), false) => s.flagged_mismatches += 1,
            }
        }
        s
    }
}

impl VerificationReport {
    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theorem,r,s,t,clique_order,k,sizes,formula,oracle,hypothesis_ok,agree,nodes,millis\n");
        let opt = |x: Option<String>| x.unwrap_or_default();
        for p in &self.points {
            let g = &p.point;
            let sizes: Vec<String> = g.sizes.iter().map(|x| x.to_string()).collect();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                self.theorem,
                g.sizes.len(),
                g.s,
                g.t,
                opt(g.clique_order.map(|q| q.to_string())),
                g.k,
                sizes.join(" "),
                p.formula,
                opt(p.oracle.map(|x| x.to_string())),
                p.hypothesis_ok,
                opt(p.agree.map(|x| x.to_string())),
                p.nodes,
                opt(p.millis.map(|x| x.to_string())),
            )
            .unwrap();
        }
        out
    }

    /// Ok unless a hypothesis-satisfying point disagrees, or some point is
    /// inconclusive and `require_conclusive` is set.
    pub fn verdict(&self, require_conclusive: bool) -> Result<(), CliError> {
        if self.summary.failures > 0 {
            let mut msg = format!("{} point(s) disagree with the formula", self.summary.failures);
            for (point, witness) in &self.counterexamples {
                let point = serde_json::to_string(point).unwrap_or_default();
                write!(msg, "\ncounterexample at {point}:\n{}", witness.to_json()).unwrap();
            }
            return Err(CliError::Disagreement(msg));
        }
        if require_conclusive && self.summary.inconclusive > 0 {
            return Err(CliError::Inconclusive(self.summary.inconclusive));
        }
        Ok(())
    }

    /// Writes `path` and a `.csv` sibling, each through a temporary file.
    pub fn write(&self, path: &Path) -> Result<PathBuf, CliError> {
        let csv = path.with_extension("csv");
        write_atomic(path, self.to_json().as_bytes())?;
        write_atomic(&csv, self.to_csv().as_bytes())?;
        Ok(csv)
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut name = path.file_name().ok_or_else(|| CliError::Usage(format!("{} is not a file path", path.display())))?.to_os_string();
    name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(name);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}
