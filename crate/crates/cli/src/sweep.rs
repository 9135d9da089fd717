use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use turanlab::formulas::{f_value, g_value, h_value, hypothesis_check, lemma21_value, thm11_value, thm12_value, Theorem};
use turanlab::solvers::{max_cliques_free, max_edges_free, ExtremalReport, SearchConfig};
use turanlab::{Error, Shape};

use crate::report::{digest, PointRecord, Summary, VerificationReport};
use crate::{CliError, GridPoint, SweepConfig};

fn formula(th: Theorem, p: &GridPoint) -> Result<BigUint, Error> {
    let sizes = &p.sizes;
    match th {
        Theorem::Thm11 => thm11_value(p.k, sizes),
        Theorem::Thm12 => thm12_value(p.k, sizes),
        Theorem::Lemma21 => lemma21_value(p.k, sizes),
        Theorem::Thm13 => f_value(p.s, p.k, &sizes[1..]),
        Theorem::Thm14 => g_value(p.s, p.k, sizes),
        Theorem::Thm15 | Theorem::Thm16 => h_value(p.clique_order.unwrap_or(2), p.k, sizes),
        Theorem::Thm41 => Err(Error::InvalidArgument("thm41 has no sweep oracle".into())),
    }
}

fn oracle(p: &GridPoint, search: &SearchConfig) -> Result<ExtremalReport, Error> {
    let shape = Shape::new(p.s, p.sizes.clone())?;
    match p.clique_order {
        Some(q) => max_cliques_free(&shape, p.k, q, p.t, search),
        None => max_edges_free(&shape, p.k, p.t, search),
    }
}

fn run_point(th: Theorem, p: GridPoint, cfg: &SweepConfig) -> Result<(PointRecord, Option<turanlab::MultipartiteHypergraph>), CliError> {
    let start = Instant::now();
    let value = formula(th, &p)?;
    let order = p.clique_order.unwrap_or(p.s);
    let hypothesis_ok = hypothesis_check(th, order, p.k, &p.sizes)?;
    let search = SearchConfig { node_budget: cfg.node_budget, ..Default::default() };
    let mut record = PointRecord {
        point: p,
        formula: value,
        oracle: None,
        hypothesis_ok,
        agree: None,
        nodes: 0,
        lower_bound: None,
        witness_digest: None,
        witness: None,
        millis: None,
    };
    let mut counterexample = None;
    match oracle(&record.point, &search) {
        Ok(rep) => {
            let agree = BigUint::from(rep.optimum) == record.formula;
            record.oracle = Some(rep.optimum);
            record.agree = Some(agree);
            record.nodes = rep.nodes_explored;
            if cfg.witnesses {
                record.witness = Some(rep.witness.clone());
            } else {
                record.witness_digest = Some(digest(&rep.witness));
            }
            if !agree && hypothesis_ok {
                counterexample = Some(rep.witness);
            }
        }
        Err(Error::Inconclusive { nodes, lower_bound }) => {
            record.nodes = nodes;
            record.lower_bound = Some(lower_bound);
        }
        Err(e) => return Err(e.into()),
    }
    if cfg.timings {
        record.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok((record, counterexample))
}

/// Runs every grid point on a pool of `cfg.jobs` workers. Records come back
/// in grid order whatever the scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<VerificationReport, CliError> {
    let th = cfg.theorem()?;
    let points = cfg.points()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        if j == 0 {
            return Err(CliError::Usage("jobs must be at least 1".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<_> = pool.install(|| points.into_par_iter().map(|p| run_point(th, p, cfg)).collect::<Result<_, _>>())?;
    let mut records = Vec::with_capacity(results.len());
    let mut counterexamples = Vec::new();
    for (rec, cex) in results {
        if let Some(w) = cex {
            counterexamples.push((rec.point.clone(), w));
        }
        records.push(rec);
    }
    let summary = Summary::tally(&records);
    Ok(VerificationReport {
        version: env!("CARGO_PKG_VERSION").into(),
        theorem: th.to_string(),
        seed: cfg.seed,
        node_budget: cfg.node_budget,
        points: records,
        summary,
        counterexamples,
    })
}
