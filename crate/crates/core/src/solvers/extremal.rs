//! Exact extremal search over subgraphs of a complete multipartite host.
//!
//! The host edges, in canonical order, are the decision variables. A node
//! fixes a prefix of them as included or excluded; including an edge is
//! rejected when it completes a `t`-clique that closes a packing of `k`
//! complete cliques. The pruning bound counts objective units that are still
//! reachable and subtracts forced losses: a family of pairwise disjoint
//! cliques with more than `k - 1` members must lose at least the excess.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::packing::max_packing;
use super::clique_list;
use crate::constructions::{g_construction, h1_construction, h2_construction};
use crate::error::{Error, Result};
use crate::formulas::{hypothesis_check, Theorem};
use crate::hypercore::{Edge, MultipartiteHypergraph, Shape};

/// What an extremal search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Edges,
    /// Number of `s'`-cliques of a graph host.
    Cliques(usize),
}

impl Serialize for Objective {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(match self {
            Objective::Edges => "edges",
            Objective::Cliques(_) => "s-cliques",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Search nodes allowed before giving up with [`Error::Inconclusive`].
    pub node_budget: u64,
    /// Decision depth at which subtrees are handed to the thread pool;
    /// 0 searches sequentially.
    pub split_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { node_budget: 100_000_000, split_depth: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub shape: Shape,
    pub k: usize,
    pub t: usize,
    pub objective: Objective,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clique_order: Option<usize>,
    pub optimum: u64,
    pub witness: MultipartiteHypergraph,
    pub nodes_explored: u64,
    pub hypothesis_ok: bool,
}

/// `ex_s(K^(s)_{n_1..n_r}, kK_t^(s))` with a witness.
pub fn max_edges_free(shape: &Shape, k: usize, t: usize, config: &SearchConfig) -> Result<ExtremalReport> {
    search(shape, k, t, Objective::Edges, config)
}

/// Maximum number of `s'`-cliques in a `kK_t`-free subgraph of the complete
/// multipartite graph of `shape`.
pub fn max_cliques_free(shape: &Shape, k: usize, clique_order: usize, t: usize, config: &SearchConfig) -> Result<ExtremalReport> {
    if shape.s() != 2 {
        return Err(Error::Uniformity(format!("clique counting needs a graph host, got s = {}", shape.s())));
    }
    if clique_order < 2 || clique_order > shape.r() {
        return Err(Error::CliqueOrder { t: clique_order, reason: format!("need 2 <= s' <= r = {}", shape.r()) });
    }
    search(shape, k, t, Objective::Cliques(clique_order), config)
}

fn hypothesis(shape: &Shape, k: usize, t: usize, objective: Objective) -> Result<bool> {
    let (s, r, sizes) = (shape.s(), shape.r(), shape.sizes());
    if !shape.is_canonical() {
        return Ok(false);
    }
    let check = |th| hypothesis_check(th, s, k, sizes);
    Ok(match objective {
        Objective::Edges if t == s => {
            if s == r {
                check(Theorem::Lemma21)?
            } else if s == 2 {
                check(Theorem::Thm11)?
            } else {
                check(Theorem::Thm13)?
            }
        }
        Objective::Edges if t == r => check(Theorem::Thm14)?,
        Objective::Edges => false,
        Objective::Cliques(q) if t == r => {
            check(Theorem::Thm15)? || check(Theorem::Thm16)? || (q == 2 && check(Theorem::Thm12)?)
        }
        Objective::Cliques(_) => false,
    })
}

fn search(shape: &Shape, k: usize, t: usize, objective: Objective, config: &SearchConfig) -> Result<ExtremalReport> {
    if k == 0 {
        return Err(Error::KOutOfRange { k, reason: "need k >= 1".into() });
    }
    let complete = MultipartiteHypergraph::complete(shape);
    // validates s <= t <= r
    clique_list(&complete, t)?;
    let hypothesis_ok = hypothesis(shape, k, t, objective)?;
    let host = Host::new(shape, k, t, objective);

    let mut seed_value = 0;
    for seed in seeds(shape, k, t, objective) {
        if let Some(v) = host.evaluate(&seed) {
            seed_value = seed_value.max(v);
        }
    }

    let counter = AtomicU64::new(0);
    let root = Engine::new(&host, seed_value, config.node_budget, &counter);
    let (optimum, witness) = if config.split_depth == 0 {
        let mut engine = root;
        let run = engine.dfs(0);
        settle(run, engine.best, &counter, seed_value)?
    } else {
        let mut frontier = Vec::new();
        let mut splitter = root;
        splitter.collect_frontier(0, config.split_depth.min(host.edges.len()), &mut frontier);
        let results: Vec<(bool, Option<Found>)> = frontier
            .into_par_iter()
            .map(|piece| match piece {
                Piece::Node(found) => (true, Some(found)),
                Piece::Subtree(engine) => {
                    let mut engine = *engine;
                    let depth = engine.depth;
                    let ok = engine.dfs(depth).is_ok();
                    (ok, engine.best)
                }
            })
            .collect();
        // pieces are in search order, so the first maximum is the canonical one
        let mut best: Option<Found> = None;
        let mut all_ok = true;
        for (ok, found) in results {
            all_ok &= ok;
            if let Some((v, set)) = found {
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, set));
                }
            }
        }
        settle(if all_ok { Ok(()) } else { Err(BudgetExceeded) }, best, &counter, seed_value)?
    };
    let edges = witness.into_iter().map(|i| host.edges[i as usize].clone()).collect();
    Ok(ExtremalReport {
        shape: shape.clone(),
        k,
        t,
        objective,
        clique_order: match objective {
            Objective::Edges => None,
            Objective::Cliques(q) => Some(q),
        },
        optimum,
        witness: MultipartiteHypergraph::from_trusted(shape.clone(), edges),
        nodes_explored: counter.load(Ordering::Relaxed),
        hypothesis_ok,
    })
}

fn settle(run: std::result::Result<(), BudgetExceeded>, best: Option<(u64, Vec<u32>)>, counter: &AtomicU64, seed_value: u64) -> Result<(u64, Vec<u32>)> {
    match run {
        Ok(()) => Ok(best.expect("the root node always meets the seeded incumbent")),
        Err(BudgetExceeded) => Err(Error::Inconclusive {
            nodes: counter.load(Ordering::Relaxed),
            lower_bound: best.map_or(seed_value, |(v, _)| v.max(seed_value)),
        }),
    }
}

/// Construction-based warm starts; each is re-verified before use.
fn seeds(shape: &Shape, k: usize, t: usize, objective: Objective) -> Vec<MultipartiteHypergraph> {
    let mut out = Vec::new();
    if t == shape.s() {
        out.extend(h1_construction(shape, k).ok());
    }
    if t == shape.r() {
        out.extend(h2_construction(shape, k).ok());
    }
    if matches!(objective, Objective::Cliques(_)) {
        out.extend(g_construction(shape, k).ok());
    }
    out
}

#[derive(Debug)]
struct BudgetExceeded;

/// A clique or objective unit: its host edge ids and dense vertex ids.
#[derive(Debug, Clone)]
struct Unit {
    edges: Vec<u32>,
    verts: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Units are host edges.
    Edges,
    /// Units are the forbidden cliques themselves.
    Forbidden,
    /// Units are cliques of another order.
    Separate,
}

struct Host {
    k: usize,
    edges: Vec<Edge>,
    cliques: Vec<Unit>,
    edge_cliques: Vec<Vec<u32>>,
    mode: Mode,
    units: Vec<Unit>,
    edge_units: Vec<Vec<u32>>,
    /// Objective units lost when one forbidden clique is broken.
    cost: u64,
    classes: Vec<Vec<u32>>,
    n_vertices: usize,
}

fn units_of(shape: &Shape, complete: &MultipartiteHypergraph, edges: &[Edge], order: usize) -> (Vec<Unit>, Vec<Vec<u32>>) {
    use itertools::Itertools;
    let s = shape.s();
    let list = clique_list(complete, order).expect("order checked by caller");
    let mut per_edge = vec![Vec::new(); edges.len()];
    let units = list
        .into_iter()
        .enumerate()
        .map(|(ci, verts)| {
            let ids: Vec<u32> = verts
                .iter()
                .copied()
                .combinations(s)
                .map(|sub| {
                    let e = Edge::new(sub).expect("subset of a transversal");
                    edges.binary_search(&e).expect("host edge") as u32
                })
                .collect();
            for &e in &ids {
                per_edge[e as usize].push(ci as u32);
            }
            Unit { edges: ids, verts: verts.iter().map(|&v| shape.vertex_id(v) as u32).collect() }
        })
        .collect();
    (units, per_edge)
}

impl Host {
    fn new(shape: &Shape, k: usize, t: usize, objective: Objective) -> Host {
        let complete = MultipartiteHypergraph::complete(shape);
        let edges: Vec<Edge> = complete.edges().iter().cloned().collect();
        let (cliques, edge_cliques) = units_of(shape, &complete, &edges, t);
        let s = shape.s();
        let (mode, units, edge_units, cost) = match objective {
            Objective::Edges => (Mode::Edges, Vec::new(), Vec::new(), 1),
            Objective::Cliques(q) if q == s => (Mode::Edges, Vec::new(), Vec::new(), 1),
            Objective::Cliques(q) if q == t => (Mode::Forbidden, Vec::new(), Vec::new(), 1),
            Objective::Cliques(q) => {
                let (u, eu) = units_of(shape, &complete, &edges, q);
                // units lost to a broken clique may already be dead, so no
                // loss is credited here
                (Mode::Separate, u, eu, 0)
            }
        };
        let mut host = Host {
            k,
            edges,
            cliques,
            edge_cliques,
            mode,
            units,
            edge_units,
            cost,
            classes: Vec::new(),
            n_vertices: shape.vertex_count(),
        };
        host.classes = host.best_classes(shape, t);
        host
    }

    fn unit_count(&self) -> u64 {
        match self.mode {
            Mode::Edges => self.edges.len() as u64,
            Mode::Forbidden => self.cliques.len() as u64,
            Mode::Separate => self.units.len() as u64,
        }
    }

    /// Objective value of an edge set, or `None` if it is not free.
    fn evaluate(&self, h: &MultipartiteHypergraph) -> Option<u64> {
        let mut inc = vec![false; self.edges.len()];
        for e in h.edges() {
            inc[self.edges.binary_search(e).ok()?] = true;
        }
        let full = |u: &Unit| u.edges.iter().all(|&e| inc[e as usize]);
        let complete: Vec<Vec<usize>> = self
            .cliques
            .iter()
            .filter(|c| full(c))
            .map(|c| c.verts.iter().map(|&v| v as usize).collect())
            .collect();
        if max_packing(&complete, self.n_vertices, Some(self.k)).len() >= self.k {
            return None;
        }
        Some(match self.mode {
            Mode::Edges => h.edge_count() as u64,
            Mode::Forbidden => complete.len() as u64,
            Mode::Separate => self.units.iter().filter(|u| full(u)).count() as u64,
        })
    }

    /// Tries several greedy partitions of the cliques into vertex-disjoint
    /// classes and keeps the one with the tightest root bound.
    fn best_classes(&mut self, shape: &Shape, t: usize) -> Vec<Vec<u32>> {
        let n = self.cliques.len();
        let mut candidates: Vec<Vec<Vec<u32>>> = Vec::new();
        if t == shape.s() && t == shape.r() && shape.is_canonical() {
            if let Ok(p) = crate::constructions::matching_partition(shape) {
                candidates.push(
                    p.classes
                        .values()
                        .map(|class| class.iter().map(|e| self.edges.binary_search(e).unwrap() as u32).collect())
                        .collect(),
                );
            }
        }
        let mut rng = SplitMix(0x5eed_u64 ^ n as u64);
        let mut order: Vec<u32> = (0..n as u32).collect();
        for attempt in 0..48 {
            if attempt == 1 {
                order.reverse();
            } else if attempt > 1 {
                for i in (1..order.len()).rev() {
                    let j = (rng.next() % (i as u64 + 1)) as usize;
                    order.swap(i, j);
                }
            }
            candidates.push(self.greedy_classes(&order));
        }
        let mut best: Option<(u64, Vec<Vec<u32>>)> = None;
        let probe_counter = AtomicU64::new(0);
        for classes in candidates {
            self.classes = classes;
            let mut probe = Engine::new(self, 0, u64::MAX, &probe_counter);
            let ub = probe.upper_bound();
            if best.as_ref().is_none_or(|(b, _)| ub < *b) {
                best = Some((ub, std::mem::take(&mut self.classes)));
            }
        }
        best.map(|(_, c)| c).unwrap_or_default()
    }

    fn greedy_classes(&self, order: &[u32]) -> Vec<Vec<u32>> {
        let mut placed = vec![false; self.cliques.len()];
        let mut classes = Vec::new();
        let mut occupied = vec![false; self.n_vertices];
        // first: families whose edges are fresh, so their losses add up
        if self.mode != Mode::Forbidden {
            let mut used_edge = vec![false; self.edges.len()];
            loop {
                occupied.iter_mut().for_each(|x| *x = false);
                let mut group = Vec::new();
                for &c in order {
                    let unit = &self.cliques[c as usize];
                    if placed[c as usize]
                        || unit.verts.iter().any(|&v| occupied[v as usize])
                        || unit.edges.iter().any(|&e| used_edge[e as usize])
                    {
                        continue;
                    }
                    unit.verts.iter().for_each(|&v| occupied[v as usize] = true);
                    group.push(c);
                }
                if group.len() < self.k.max(2) {
                    break;
                }
                for &c in &group {
                    placed[c as usize] = true;
                    self.cliques[c as usize].edges.iter().for_each(|&e| used_edge[e as usize] = true);
                }
                classes.push(group);
            }
        }
        loop {
            occupied.iter_mut().for_each(|x| *x = false);
            let mut group = Vec::new();
            for &c in order {
                let unit = &self.cliques[c as usize];
                if placed[c as usize] || unit.verts.iter().any(|&v| occupied[v as usize]) {
                    continue;
                }
                unit.verts.iter().for_each(|&v| occupied[v as usize] = true);
                group.push(c);
            }
            if group.is_empty() {
                return classes;
            }
            group.iter().for_each(|&c| placed[c as usize] = true);
            classes.push(group);
        }
    }
}

struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

const UND: u8 = 0;
const INC: u8 = 1;
const EXC: u8 = 2;

#[derive(Clone)]
struct Engine<'h> {
    host: &'h Host,
    counter: &'h AtomicU64,
    budget: u64,
    depth: usize,
    status: Vec<u8>,
    c_inc: Vec<u16>,
    c_exc: Vec<u16>,
    complete: Vec<u32>,
    u_inc: Vec<u16>,
    u_exc: Vec<u16>,
    value: u64,
    alive: u64,
    occupied: Vec<bool>,
    vmark: Vec<u32>,
    vepoch: u32,
    emark: Vec<u32>,
    cmark: Vec<u32>,
    epoch: u32,
    open: Vec<u32>,
    leftover: Vec<u32>,
    tau: u64,
    best: Option<(u64, Vec<u32>)>,
}

impl<'h> Engine<'h> {
    fn new(host: &'h Host, tau: u64, budget: u64, counter: &'h AtomicU64) -> Self {
        Engine {
            host,
            counter,
            budget,
            depth: 0,
            status: vec![UND; host.edges.len()],
            c_inc: vec![0; host.cliques.len()],
            c_exc: vec![0; host.cliques.len()],
            complete: Vec::new(),
            u_inc: vec![0; host.units.len()],
            u_exc: vec![0; host.units.len()],
            value: 0,
            alive: host.unit_count(),
            occupied: vec![false; host.n_vertices],
            vmark: vec![0; host.n_vertices],
            vepoch: 0,
            emark: vec![0; host.edges.len()],
            cmark: vec![0; host.cliques.len()],
            epoch: 0,
            open: Vec::new(),
            leftover: Vec::new(),
            tau,
            best: None,
        }
    }

    fn clique_full(&self, c: u32) -> bool {
        self.c_inc[c as usize] as usize == self.host.cliques[c as usize].edges.len()
    }

    /// Is there a packing of `k` complete cliques through `c0`?
    fn packs_through(&mut self, c0: u32) -> bool {
        let k = self.host.k;
        if k == 1 {
            return true;
        }
        for &v in &self.host.cliques[c0 as usize].verts {
            self.occupied[v as usize] = true;
        }
        let found = self.extend_packing(0, k - 1);
        for &v in &self.host.cliques[c0 as usize].verts {
            self.occupied[v as usize] = false;
        }
        found
    }

    fn extend_packing(&mut self, start: usize, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if self.complete.len() < start + need {
            return false;
        }
        for i in start..self.complete.len() {
            let verts = &self.host.cliques[self.complete[i] as usize].verts;
            if verts.iter().any(|&v| self.occupied[v as usize]) {
                continue;
            }
            for &v in verts {
                self.occupied[v as usize] = true;
            }
            let found = self.extend_packing(i + 1, need - 1);
            for &v in &self.host.cliques[self.complete[i] as usize].verts {
                self.occupied[v as usize] = false;
            }
            if found {
                return true;
            }
        }
        false
    }

    fn include(&mut self, e: usize) -> bool {
        let host = self.host;
        self.status[e] = INC;
        let mark = self.complete.len();
        for &c in &host.edge_cliques[e] {
            self.c_inc[c as usize] += 1;
            if self.clique_full(c) {
                self.complete.push(c);
            }
        }
        for i in mark..self.complete.len() {
            if self.packs_through(self.complete[i]) {
                self.complete.truncate(mark);
                for &c in &host.edge_cliques[e] {
                    self.c_inc[c as usize] -= 1;
                }
                self.status[e] = UND;
                return false;
            }
        }
        match host.mode {
            Mode::Edges => self.value += 1,
            Mode::Forbidden => self.value += (self.complete.len() - mark) as u64,
            Mode::Separate => {
                for &u in &host.edge_units[e] {
                    self.u_inc[u as usize] += 1;
                    if self.u_inc[u as usize] as usize == host.units[u as usize].edges.len() {
                        self.value += 1;
                    }
                }
            }
        }
        true
    }

    fn undo_include(&mut self, e: usize) {
        let host = self.host;
        let mut fresh = 0;
        for &c in &host.edge_cliques[e] {
            if self.clique_full(c) {
                fresh += 1;
            }
            self.c_inc[c as usize] -= 1;
        }
        self.complete.truncate(self.complete.len() - fresh);
        match host.mode {
            Mode::Edges => self.value -= 1,
            Mode::Forbidden => self.value -= fresh as u64,
            Mode::Separate => {
                for &u in &host.edge_units[e] {
                    if self.u_inc[u as usize] as usize == host.units[u as usize].edges.len() {
                        self.value -= 1;
                    }
                    self.u_inc[u as usize] -= 1;
                }
            }
        }
        self.status[e] = UND;
    }

    fn exclude(&mut self, e: usize) {
        let host = self.host;
        self.status[e] = EXC;
        for &c in &host.edge_cliques[e] {
            self.c_exc[c as usize] += 1;
            if host.mode == Mode::Forbidden && self.c_exc[c as usize] == 1 {
                self.alive -= 1;
            }
        }
        match host.mode {
            Mode::Edges => self.alive -= 1,
            Mode::Forbidden => {}
            Mode::Separate => {
                for &u in &host.edge_units[e] {
                    self.u_exc[u as usize] += 1;
                    if self.u_exc[u as usize] == 1 {
                        self.alive -= 1;
                    }
                }
            }
        }
    }

    fn undo_exclude(&mut self, e: usize) {
        let host = self.host;
        for &c in &host.edge_cliques[e] {
            if host.mode == Mode::Forbidden && self.c_exc[c as usize] == 1 {
                self.alive += 1;
            }
            self.c_exc[c as usize] -= 1;
        }
        match host.mode {
            Mode::Edges => self.alive += 1,
            Mode::Forbidden => {}
            Mode::Separate => {
                for &u in &host.edge_units[e] {
                    if self.u_exc[u as usize] == 1 {
                        self.alive += 1;
                    }
                    self.u_exc[u as usize] -= 1;
                }
            }
        }
        self.status[e] = UND;
    }

    fn is_used(&self, c: u32) -> bool {
        if self.host.mode == Mode::Forbidden {
            self.cmark[c as usize] == self.epoch
        } else {
            self.host.cliques[c as usize]
                .edges
                .iter()
                .any(|&e| self.status[e as usize] == UND && self.emark[e as usize] == self.epoch)
        }
    }

    fn mark_used(&mut self, c: u32) {
        if self.host.mode == Mode::Forbidden {
            self.cmark[c as usize] = self.epoch;
        } else {
            for &e in &self.host.cliques[c as usize].edges {
                if self.status[e as usize] == UND {
                    self.emark[e as usize] = self.epoch;
                }
            }
        }
    }

    fn next_vepoch(&mut self) {
        self.vepoch = self.vepoch.wrapping_add(1);
        if self.vepoch == 0 {
            self.vmark.iter_mut().for_each(|x| *x = 0);
            self.vepoch = 1;
        }
    }

    fn stamp(&mut self, c: u32) {
        for &v in &self.host.cliques[c as usize].verts {
            self.vmark[v as usize] = self.vepoch;
        }
    }

    fn stamped(&self, c: u32) -> bool {
        self.host.cliques[c as usize].verts.iter().any(|&v| self.vmark[v as usize] == self.vepoch)
    }

    /// Widens the current family (open members counted in `members`) by
    /// complete cliques disjoint from it, then books its forced losses.
    fn settle_family(&mut self, mut members: usize) -> u64 {
        let k1 = self.host.k - 1;
        if members + self.complete.len() > k1 {
            for i in 0..self.complete.len() {
                let c = self.complete[i];
                if !self.stamped(c) {
                    self.stamp(c);
                    members += 1;
                }
            }
        }
        if members <= k1 || self.open.is_empty() {
            return 0;
        }
        let breaks = (members - k1).min(self.open.len()) as u64;
        for i in 0..self.open.len() {
            let c = self.open[i];
            self.mark_used(c);
        }
        breaks
    }

    /// Lower bound on the number of forbidden cliques that every free
    /// completion leaves broken, counted with pairwise fresh losses.
    fn forced_breaks(&mut self) -> u64 {
        let host = self.host;
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.emark.iter_mut().for_each(|x| *x = 0);
            self.cmark.iter_mut().for_each(|x| *x = 0);
            self.epoch = 1;
        }
        let mut breaks = 0;
        self.leftover.clear();
        for class in &host.classes {
            self.next_vepoch();
            self.open.clear();
            let mut members = 0;
            for &c in class {
                if self.c_exc[c as usize] > 0 {
                    continue;
                }
                if self.clique_full(c) {
                    self.stamp(c);
                    members += 1;
                } else if !self.is_used(c) {
                    self.stamp(c);
                    self.open.push(c);
                    members += 1;
                }
            }
            let b = self.settle_family(members);
            if b == 0 {
                self.leftover.extend_from_slice(&self.open);
            }
            breaks += b;
        }
        // regroup what the static classes left over
        let mut pool = std::mem::take(&mut self.leftover);
        while !pool.is_empty() {
            self.next_vepoch();
            self.open.clear();
            let mut rest = Vec::new();
            for &c in &pool {
                if self.is_used(c) {
                    continue;
                }
                if self.stamped(c) {
                    rest.push(c);
                } else {
                    self.stamp(c);
                    self.open.push(c);
                }
            }
            let members = self.open.len();
            if members == 0 {
                break;
            }
            breaks += self.settle_family(members);
            pool = rest;
        }
        self.leftover = pool;
        breaks
    }

    fn upper_bound(&mut self) -> u64 {
        let breaks = self.forced_breaks();
        self.alive.saturating_sub(breaks * self.host.cost)
    }

    fn tick(&mut self) -> std::result::Result<(), BudgetExceeded> {
        if self.counter.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(BudgetExceeded);
        }
        Ok(())
    }

    fn record(&mut self) {
        if self.value >= self.tau {
            let set = (0..self.status.len() as u32).filter(|&e| self.status[e as usize] == INC).collect();
            self.best = Some((self.value, set));
            self.tau = self.value + 1;
        }
    }

    fn dfs(&mut self, depth: usize) -> std::result::Result<(), BudgetExceeded> {
        self.tick()?;
        self.record();
        if depth == self.status.len() || self.alive < self.tau || self.upper_bound() < self.tau {
            return Ok(());
        }
        if self.include(depth) {
            let run = self.dfs(depth + 1);
            self.undo_include(depth);
            run?;
        }
        self.exclude(depth);
        let run = self.dfs(depth + 1);
        self.undo_exclude(depth);
        run
    }

    /// Lists, in search order, the improving nodes above `split` and a
    /// snapshot of every feasible node at `split`.
    fn collect_frontier(&mut self, depth: usize, split: usize, out: &mut Vec<Piece<'h>>) {
        if depth == split {
            let mut snap = self.clone();
            snap.depth = depth;
            snap.best = None;
            out.push(Piece::Subtree(Box::new(snap)));
            return;
        }
        if self.value >= self.tau {
            self.record();
            out.push(Piece::Node(self.best.clone().expect("just recorded")));
        }
        if self.include(depth) {
            self.collect_frontier(depth + 1, split, out);
            self.undo_include(depth);
        }
        self.exclude(depth);
        self.collect_frontier(depth + 1, split, out);
        self.undo_exclude(depth);
    }
}

/// Objective value and the included edge indices.
type Found = (u64, Vec<u32>);

enum Piece<'h> {
    Node(Found),
    Subtree(Box<Engine<'h>>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{count_cliques, is_free};

    fn shape(s: usize, sizes: &[usize]) -> Shape {
        Shape::new(s, sizes.to_vec()).unwrap()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    fn check_witness(rep: &ExtremalReport) {
        assert!(is_free(&rep.witness, rep.k, rep.t).unwrap());
        let got = match rep.objective {
            Objective::Edges => rep.witness.edge_count(),
            Objective::Cliques(q) => count_cliques(&rep.witness, q).unwrap(),
        };
        assert_eq!(got as u64, rep.optimum);
    }

    #[test]
    fn edge_examples() {
        let rep = max_edges_free(&shape(2, &[2, 2]), 2, 2, &cfg()).unwrap();
        assert_eq!(rep.optimum, 2);
        assert!(rep.hypothesis_ok);
        check_witness(&rep);
        let rep = max_edges_free(&shape(2, &[2, 2, 2]), 2, 2, &cfg()).unwrap();
        assert_eq!(rep.optimum, 4);
        check_witness(&rep);
        let rep = max_edges_free(&shape(2, &[2, 2, 2]), 2, 3, &cfg()).unwrap();
        assert_eq!(rep.optimum, 10);
        check_witness(&rep);
    }

    #[test]
    fn clique_examples() {
        let rep = max_cliques_free(&shape(2, &[2, 2, 2]), 2, 3, 3, &cfg()).unwrap();
        assert_eq!(rep.optimum, 4);
        check_witness(&rep);
        let rep = max_cliques_free(&shape(2, &[2, 2, 2]), 2, 2, 3, &cfg()).unwrap();
        assert_eq!(rep.optimum, 10);
        let rep = max_cliques_free(&shape(2, &[1, 1, 1]), 1, 3, 3, &cfg()).unwrap();
        assert_eq!(rep.optimum, 0);
    }

    #[test]
    fn split_search_matches_sequential() {
        let sh = shape(2, &[2, 2, 2]);
        let seq = max_edges_free(&sh, 2, 3, &cfg()).unwrap();
        let par = max_edges_free(&sh, 2, 3, &SearchConfig { split_depth: 5, ..cfg() }).unwrap();
        assert_eq!(seq.optimum, par.optimum);
        assert_eq!(seq.witness, par.witness);
    }

    #[test]
    fn budget_overrun_is_inconclusive() {
        let err = max_edges_free(&shape(2, &[3, 3, 3]), 2, 3, &SearchConfig { node_budget: 3, split_depth: 0 });
        assert!(matches!(err, Err(Error::Inconclusive { .. })));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(max_edges_free(&shape(2, &[2, 2]), 0, 2, &cfg()).is_err());
        assert!(max_edges_free(&shape(3, &[2, 2, 2]), 1, 2, &cfg()).is_err());
        assert!(max_cliques_free(&shape(3, &[2, 2, 2]), 1, 3, 3, &cfg()).is_err());
    }
}
