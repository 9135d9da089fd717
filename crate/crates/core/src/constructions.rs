//! Extremal constructions and the cyclic matching partition of the complete
//! r-partite r-graph.
//!
//! All three constructions single out the same special vertices: the first
//! `k-1` vertices of part 1. `H1` keeps the edges meeting them; `H2` and `G`
//! delete edges through the remaining `n_1-k+1` vertices of part 1. With
//! this choice every construction is a stable hypergraph.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hypercore::{Edge, MultipartiteHypergraph, Shape, Vertex};

fn check_k(shape: &Shape, k: usize) -> Result<()> {
    shape.require_canonical()?;
    if k == 0 || k > shape.size(1) {
        return Err(Error::KOutOfRange { k, reason: format!("need 1 <= k <= n_1 = {}", shape.size(1)) });
    }
    Ok(())
}

/// Edges of `K^(s)` meeting `{a_{1,1}, ..., a_{1,k-1}}`.
pub fn h1_construction(shape: &Shape, k: usize) -> Result<MultipartiteHypergraph> {
    check_k(shape, k)?;
    let edges = MultipartiteHypergraph::complete(shape)
        .edges()
        .iter()
        .filter(|e| e.in_part(1).is_some_and(|v| v.index < k))
        .cloned()
        .collect();
    Ok(MultipartiteHypergraph::from_trusted(shape.clone(), edges))
}

/// `K^(s)` minus the edges of `K^(s)(V_1', V_2, ..., V_s)`, where
/// `V_1' = {a_{1,k}, ..., a_{1,n_1}}`.
pub fn h2_construction(shape: &Shape, k: usize) -> Result<MultipartiteHypergraph> {
    check_k(shape, k)?;
    let s = shape.s();
    let edges = MultipartiteHypergraph::complete(shape)
        .edges()
        .iter()
        .filter(|e| !(e.parts().eq(1..=s) && e.vertices()[0].index >= k))
        .cloned()
        .collect();
    Ok(MultipartiteHypergraph::from_trusted(shape.clone(), edges))
}

/// The graph `K_{n_1,...,n_r}` minus all edges between
/// `V_1' = {a_{1,k}, ..., a_{1,n_1}}` and `V_2`.
pub fn g_construction(shape: &Shape, k: usize) -> Result<MultipartiteHypergraph> {
    if shape.s() != 2 {
        return Err(Error::Uniformity(format!("the graph construction needs s = 2, got s = {}", shape.s())));
    }
    check_k(shape, k)?;
    let edges = MultipartiteHypergraph::complete(shape)
        .edges()
        .iter()
        .filter(|e| !(e.parts().eq([1, 2]) && e.vertices()[0].index >= k))
        .cloned()
        .collect();
    Ok(MultipartiteHypergraph::from_trusted(shape.clone(), edges))
}

/// Partition of `E(K^(r)_{n_1,...,n_r})` into `n_2...n_r` matchings of size
/// `n_1`, keyed by the 0-based offsets `(x_2, ..., x_r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingPartition {
    pub shape: Shape,
    pub classes: BTreeMap<Vec<usize>, Vec<Edge>>,
}

impl MatchingPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Checks every partition invariant: each class is a matching of size
    /// `n_1`, classes are disjoint, and together they cover the complete host.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let n1 = self.shape.size(1);
        let expected: usize = self.shape.sizes()[1..].iter().product();
        if self.classes.len() != expected {
            return Err(format!("{} classes, expected {expected}", self.classes.len()));
        }
        let mut seen = BTreeSet::new();
        for (key, class) in &self.classes {
            if class.len() != n1 {
                return Err(format!("class {key:?} has {} edges, expected {n1}", class.len()));
            }
            for (i, a) in class.iter().enumerate() {
                if class[i + 1..].iter().any(|b| !a.is_disjoint(b)) {
                    return Err(format!("class {key:?} is not a matching"));
                }
            }
            for e in class {
                if !seen.insert(e.clone()) {
                    return Err(format!("edge {e} appears in two classes"));
                }
            }
        }
        let complete = MultipartiteHypergraph::complete(&self.shape);
        if &seen != complete.edges() {
            return Err("classes do not cover the complete host".into());
        }
        Ok(())
    }
}

impl Serialize for MatchingPartition {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        struct Classes<'a>(&'a BTreeMap<Vec<usize>, Vec<Edge>>);
        impl Serialize for Classes<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = ser.serialize_map(Some(self.0.len()))?;
                for (key, class) in self.0 {
                    let key = key.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                    map.serialize_entry(&key, class)?;
                }
                map.end()
            }
        }
        let mut map = ser.serialize_map(Some(1))?;
        map.serialize_entry("classes", &Classes(&self.classes))?;
        map.end()
    }
}

/// Class `(x_2,...,x_r)` is `{ {v_{1,x}, v_{2,(x+x_2) mod n_2}, ...} : 0 <= x < n_1 }`
/// with 0-based vertex labels; reported edges use the usual 1-based indices.
pub fn matching_partition(shape: &Shape) -> Result<MatchingPartition> {
    if shape.s() != shape.r() {
        return Err(Error::Uniformity(format!("the matching partition needs s = r, got s = {}, r = {}", shape.s(), shape.r())));
    }
    shape.require_canonical()?;
    let sizes = shape.sizes();
    let n1 = sizes[0];
    let mut classes = BTreeMap::new();
    let mut key = vec![0usize; sizes.len() - 1];
    loop {
        let class = (0..n1)
            .map(|x| {
                let mut verts = vec![Vertex::new(1, x + 1)];
                for (i, &off) in key.iter().enumerate() {
                    let part = i + 2;
                    verts.push(Vertex::new(part, (x + off) % sizes[part - 1] + 1));
                }
                Edge::new(verts).expect("one vertex per part")
            })
            .collect();
        classes.insert(key.clone(), class);
        // odometer over Λ = [0,n_2-1] x ... x [0,n_r-1]
        let mut i = key.len();
        loop {
            if i == 0 {
                return Ok(MatchingPartition { shape: shape.clone(), classes });
            }
            i -= 1;
            key[i] += 1;
            if key[i] < sizes[i + 1] {
                break;
            }
            key[i] = 0;
        }
    }
}
