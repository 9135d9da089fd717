use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use turanlab::formulas::Theorem;

use crate::CliError;

/// A verification sweep: which closed form to check and over which grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// One of thm11, thm12, thm13, thm14, thm15, thm16, lemma21.
    pub theorem: String,
    pub r: Vec<usize>,
    /// Uniformity grid, or the clique order for thm15/thm16. Empty means
    /// every admissible value.
    pub s: Vec<usize>,
    /// Empty means `1..=n_1`.
    pub k: Vec<usize>,
    /// Uniform cap on part sizes.
    pub max_size: Option<usize>,
    /// Componentwise caps; for fewer parts the last `r` caps apply.
    pub max_sizes: Option<Vec<usize>>,
    /// Explicit size tuples, added to the generated ones.
    pub sizes: Vec<Vec<usize>>,
    pub node_budget: u64,
    pub jobs: Option<usize>,
    pub output: Option<PathBuf>,
    pub witnesses: bool,
    /// Adds per-point wall time, which makes reports differ between runs.
    pub timings: bool,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            theorem: "thm11".into(),
            r: Vec::new(),
            s: Vec::new(),
            k: Vec::new(),
            max_size: None,
            max_sizes: None,
            sizes: Vec::new(),
            node_budget: 100_000_000,
            jobs: None,
            output: None,
            witnesses: false,
            timings: false,
            seed: 0,
        }
    }
}

/// One oracle-versus-formula comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub s: usize,
    pub t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clique_order: Option<usize>,
    pub k: usize,
    pub sizes: Vec<usize>,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let parsed = if path.extension().is_some_and(|x| x == "json") {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    pub fn theorem(&self) -> Result<Theorem, CliError> {
        let th: Theorem = self.theorem.parse().map_err(|e: turanlab::Error| CliError::Usage(e.to_string()))?;
        if th == Theorem::Thm41 {
            return Err(CliError::Usage("thm41 has no extremal oracle to sweep".into()));
        }
        Ok(th)
    }

    fn size_tuples(&self, r: usize) -> Result<Vec<Vec<usize>>, CliError> {
        let mut caps: Option<Vec<usize>> = None;
        if let Some(m) = self.max_size {
            caps = Some(vec![m; r]);
        }
        if let Some(ms) = &self.max_sizes {
            if ms.len() < r {
                return Err(CliError::Usage(format!("max_sizes {ms:?} has fewer than {r} entries")));
            }
            caps = Some(ms[ms.len() - r..].to_vec());
        }
        let mut out = Vec::new();
        if let Some(caps) = caps {
            ascending(&caps, &mut Vec::new(), &mut out);
        }
        for explicit in &self.sizes {
            if explicit.len() != r {
                continue;
            }
            if explicit.windows(2).any(|w| w[0] > w[1]) || explicit.contains(&0) {
                return Err(CliError::Usage(format!("size tuple {explicit:?} must be positive and ascending")));
            }
            if !out.contains(explicit) {
                out.push(explicit.clone());
            }
        }
        out.sort();
        Ok(out)
    }

    /// Every grid point, in a fixed order.
    pub fn points(&self) -> Result<Vec<GridPoint>, CliError> {
        let th = self.theorem()?;
        if self.k.contains(&0) {
            return Err(CliError::Usage("k must be at least 1".into()));
        }
        let mut rs = self.r.clone();
        rs.sort();
        rs.dedup();
        let mut out = Vec::new();
        for &r in &rs {
            if r < 2 {
                return Err(CliError::Usage(format!("r = {r} is below 2")));
            }
            let orders: Vec<usize> = match th {
                Theorem::Thm11 | Theorem::Thm12 => vec![2],
                Theorem::Lemma21 => vec![r],
                _ if self.s.is_empty() => (2..=r).collect(),
                _ => self.s.iter().copied().filter(|&s| (2..=r).contains(&s)).collect(),
            };
            for sizes in self.size_tuples(r)? {
                for &order in &orders {
                    let ks: Vec<usize> = if self.k.is_empty() { (1..=sizes[0]).collect() } else { self.k.iter().copied().filter(|&k| k <= sizes[0]).collect() };
                    for k in ks {
                        let point = match th {
                            Theorem::Thm11 | Theorem::Lemma21 | Theorem::Thm13 => GridPoint { s: order, t: order, clique_order: None, k, sizes: sizes.clone() },
                            Theorem::Thm12 | Theorem::Thm14 => GridPoint { s: order, t: r, clique_order: None, k, sizes: sizes.clone() },
                            Theorem::Thm15 | Theorem::Thm16 => GridPoint { s: 2, t: r, clique_order: Some(order), k, sizes: sizes.clone() },
                            Theorem::Thm41 => unreachable!(),
                        };
                        out.push(point);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn ascending(caps: &[usize], prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == caps.len() {
        out.push(prefix.clone());
        return;
    }
    let lo = prefix.last().copied().unwrap_or(1);
    for x in lo..=caps[prefix.len()] {
        prefix.push(x);
        ascending(caps, prefix, out);
        prefix.pop();
    }
}
