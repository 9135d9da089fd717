//! Exact oracles: matchings, cliques, clique packings, and the extremal
//! branch-and-bound searches.

mod extremal;
mod packing;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypercore::{Edge, MultipartiteHypergraph, Vertex};

pub use extremal::{max_cliques_free, max_edges_free, ExtremalReport, Objective, SearchConfig};
pub use packing::max_packing;

/// A witness list of vertex-disjoint `t`-cliques.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliquePacking {
    pub t: usize,
    pub members: Vec<Vec<Vertex>>,
}

impl CliquePacking {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Checks that members are pairwise disjoint `t`-cliques of `h`.
    pub fn verify(&self, h: &MultipartiteHypergraph) -> bool {
        let mut used = std::collections::BTreeSet::new();
        self.members.iter().all(|m| {
            m.len() == self.t && is_clique(h, m) && m.iter().all(|v| used.insert(*v))
        })
    }
}

/// True when `verts` lie in distinct parts and every `s`-subset is an edge.
pub fn is_clique(h: &MultipartiteHypergraph, verts: &[Vertex]) -> bool {
    use itertools::Itertools;
    let Ok(set) = Edge::new(verts.to_vec()) else {
        return false;
    };
    set.vertices()
        .iter()
        .copied()
        .combinations(h.shape().s())
        .all(|sub| h.contains(&Edge::new(sub).expect("subset of a transversal")))
}

/// Largest matching, with a witness.
pub fn matching_number(h: &MultipartiteHypergraph) -> (usize, Vec<Edge>) {
    let edges: Vec<&Edge> = h.edges().iter().collect();
    let sets: Vec<Vec<usize>> = edges
        .iter()
        .map(|e| e.vertices().iter().map(|&v| h.shape().vertex_id(v)).collect())
        .collect();
    let picked = max_packing(&sets, h.shape().vertex_count(), None);
    (picked.len(), picked.into_iter().map(|i| edges[i].clone()).collect())
}

fn check_order(h: &MultipartiteHypergraph, t: usize) -> Result<()> {
    let (s, r) = (h.shape().s(), h.shape().r());
    if t < s || t > r {
        return Err(Error::CliqueOrder { t, reason: format!("need s = {s} <= t <= r = {r}") });
    }
    Ok(())
}

/// All `t`-cliques, each as a part-sorted vertex list, in lexicographic order.
pub fn clique_list(h: &MultipartiteHypergraph, t: usize) -> Result<Vec<Vec<Vertex>>> {
    check_order(h, t)?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(t);
    extend_cliques(h, t, 1, &mut current, &mut out);
    Ok(out)
}

fn extend_cliques(h: &MultipartiteHypergraph, t: usize, from_part: usize, current: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
    use itertools::Itertools;
    if current.len() == t {
        out.push(current.clone());
        return;
    }
    let shape = h.shape();
    let s = shape.s();
    let parts_left = t - current.len();
    for part in from_part..=shape.r() + 1 - parts_left {
        for index in 1..=shape.size(part) {
            let v = Vertex::new(part, index);
            // every new s-subset through v must be an edge
            let ok = current.len() + 1 < s
                || current.iter().copied().combinations(s - 1).all(|mut sub| {
                    sub.push(v);
                    h.contains(&Edge::new(sub).expect("distinct parts"))
                });
            if ok {
                current.push(v);
                extend_cliques(h, t, part + 1, current, out);
                current.pop();
            }
        }
    }
}

/// Number of `t`-cliques (for `t = s`, the edge count).
pub fn count_cliques(h: &MultipartiteHypergraph, t: usize) -> Result<usize> {
    Ok(clique_list(h, t)?.len())
}

/// `t`-clique counts split by the set of parts each clique occupies.
pub fn count_cliques_by_support(h: &MultipartiteHypergraph, t: usize) -> Result<BTreeMap<Vec<usize>, usize>> {
    let mut out = BTreeMap::new();
    for c in clique_list(h, t)? {
        *out.entry(c.iter().map(|v| v.part).collect()).or_insert(0) += 1;
    }
    Ok(out)
}

fn packing_search(h: &MultipartiteHypergraph, t: usize, stop_at: Option<usize>) -> Result<CliquePacking> {
    let cliques = clique_list(h, t)?;
    let sets: Vec<Vec<usize>> = cliques
        .iter()
        .map(|c| c.iter().map(|&v| h.shape().vertex_id(v)).collect())
        .collect();
    let picked = max_packing(&sets, h.shape().vertex_count(), stop_at);
    Ok(CliquePacking { t, members: picked.into_iter().map(|i| cliques[i].clone()).collect() })
}

/// Maximum number of vertex-disjoint `t`-cliques, with a witness.
pub fn clique_packing_number(h: &MultipartiteHypergraph, t: usize) -> Result<CliquePacking> {
    packing_search(h, t, None)
}

/// True when `h` has no `k` vertex-disjoint `t`-cliques.
pub fn is_free(h: &MultipartiteHypergraph, k: usize, t: usize) -> Result<bool> {
    if k == 0 {
        return Ok(false);
    }
    Ok(packing_search(h, t, Some(k))?.len() < k)
}
