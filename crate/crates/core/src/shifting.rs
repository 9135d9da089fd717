//! Shifting toward smaller vertex indices within a part.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypercore::{edge_precedes, Edge, MultipartiteHypergraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShiftStep {
    pub u: Vertex,
    pub v: Vertex,
    pub before: usize,
    pub after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftTrace {
    pub steps: Vec<ShiftStep>,
    #[serde(rename = "final")]
    pub final_graph: MultipartiteHypergraph,
}

/// `S_uv`: every edge through `v` but not `u` moves to `u` unless its image
/// is already present.
pub fn shift(h: &MultipartiteHypergraph, u: Vertex, v: Vertex) -> Result<MultipartiteHypergraph> {
    h.shape().check_vertex(u)?;
    h.shape().check_vertex(v)?;
    if u.part != v.part {
        return Err(Error::CrossPartShift(u.part, u.index, v.part, v.index));
    }
    let edges = h.edges();
    let shifted: BTreeSet<Edge> = edges
        .iter()
        .map(|e| {
            if e.contains(v) && !e.contains(u) {
                let image = e.replace(v, u);
                if !edges.contains(&image) {
                    return image;
                }
            }
            e.clone()
        })
        .collect();
    Ok(MultipartiteHypergraph::from_trusted(h.shape().clone(), shifted))
}

/// Sum over edges of the indices of their vertices.
pub fn potential(h: &MultipartiteHypergraph) -> usize {
    h.edges().iter().map(Edge::index_sum).sum()
}

fn scan_pairs(h: &MultipartiteHypergraph) -> Vec<(Vertex, Vertex)> {
    let shape = h.shape();
    (1..=shape.r())
        .flat_map(|part| {
            (1..=shape.size(part))
                .tuple_combinations()
                .map(move |(j, jj)| (Vertex::new(part, j), Vertex::new(part, jj)))
        })
        .collect()
}

/// Shifts along the fixed scan order until nothing moves.
pub fn stabilize(h: &MultipartiteHypergraph) -> ShiftTrace {
    let pairs = scan_pairs(h);
    let mut current = h.clone();
    let mut steps = Vec::new();
    loop {
        let mut changed = false;
        for &(u, v) in &pairs {
            let next = shift(&current, u, v).expect("same-part pair");
            if next != current {
                steps.push(ShiftStep { u, v, before: potential(&current), after: potential(&next) });
                current = next;
                changed = true;
            }
        }
        if !changed {
            return ShiftTrace { steps, final_graph: current };
        }
    }
}

/// `S_ab(H) = H` for every same-part pair `a ≺ b`.
pub fn is_stable(h: &MultipartiteHypergraph) -> bool {
    scan_pairs(h).into_iter().all(|(a, b)| {
        h.edges()
            .iter()
            .all(|e| !e.contains(b) || e.contains(a) || h.contains(&e.replace(b, a)))
    })
}

/// Every edge brings along all same-part sets that precede it.
pub fn downward_closed(h: &MultipartiteHypergraph) -> bool {
    h.edges().iter().all(|e| {
        e.vertices()
            .iter()
            .map(|v| (1..=v.index).map(move |i| Vertex::new(v.part, i)))
            .multi_cartesian_product()
            .all(|verts| {
                let lower = Edge::new(verts).expect("one vertex per part");
                debug_assert!(matches!(edge_precedes(&lower, e), Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)));
                h.contains(&lower)
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{g_construction, h1_construction, h2_construction};
    use crate::hypercore::Shape;

    fn v(p: usize, i: usize) -> Vertex {
        Vertex::new(p, i)
    }

    fn graph(sizes: &[usize], edges: &[&[(usize, usize)]]) -> MultipartiteHypergraph {
        let shape = Shape::new(edges[0].len(), sizes.to_vec()).unwrap();
        let edges = edges.iter().map(|e| Edge::new(e.iter().map(|&(p, i)| v(p, i)).collect()).unwrap());
        MultipartiteHypergraph::new(shape, edges).unwrap()
    }

    #[test]
    fn shift_examples() {
        let h = graph(&[2, 2], &[&[(1, 2), (2, 1)]]);
        let s = shift(&h, v(1, 1), v(1, 2)).unwrap();
        assert_eq!(s, graph(&[2, 2], &[&[(1, 1), (2, 1)]]));
        let both = graph(&[2, 2], &[&[(1, 2), (2, 1)], &[(1, 1), (2, 1)]]);
        assert_eq!(shift(&both, v(1, 1), v(1, 2)).unwrap(), both);
        assert!(matches!(shift(&h, v(1, 1), v(2, 2)), Err(Error::CrossPartShift(1, 1, 2, 2))));
    }

    #[test]
    fn stabilize_examples() {
        let h = graph(&[2, 2], &[&[(1, 2), (2, 2)]]);
        let trace = stabilize(&h);
        assert_eq!(trace.final_graph, graph(&[2, 2], &[&[(1, 1), (2, 1)]]));
        assert_eq!(trace.steps.first().unwrap().before, 4);
        assert_eq!(trace.steps.last().unwrap().after, 2);
        assert!(trace.steps.iter().all(|s| s.after < s.before));

        let stable = graph(&[2, 2], &[&[(1, 1), (2, 1)]]);
        let trace = stabilize(&stable);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.final_graph, stable);
    }

    #[test]
    fn stability_predicates() {
        let shape = Shape::new(2, vec![2, 2, 3]).unwrap();
        let k = MultipartiteHypergraph::complete(&shape);
        assert!(is_stable(&k) && downward_closed(&k));
        let h = graph(&[2, 2], &[&[(1, 2), (2, 2)], &[(1, 1), (2, 1)], &[(1, 1), (2, 2)], &[(1, 2), (2, 1)]]);
        assert!(is_stable(&h));
        let partial = graph(&[2, 2], &[&[(1, 2), (2, 2)], &[(1, 1), (2, 1)]]);
        assert!(!is_stable(&partial));
        assert!(!downward_closed(&partial));
        for k in 1..=2 {
            for g in [h1_construction(&shape, k), h2_construction(&shape, k), g_construction(&shape, k)] {
                let g = g.unwrap();
                assert!(is_stable(&g) && downward_closed(&g));
            }
        }
    }

    #[test]
    fn trace_json() {
        let trace = stabilize(&graph(&[2, 2], &[&[(1, 2), (2, 1)]]));
        let json = serde_json::to_string(&trace).unwrap();
        assert_eq!(
            json,
            r#"{"steps":[{"u":[1,1],"v":[1,2],"before":3,"after":2}],"final":{"r":2,"s":2,"sizes":[2,2],"edges":[[[1,1],[2,1]]]}}"#
        );
    }
}
