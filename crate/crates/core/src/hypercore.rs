//! Data model for r-partite s-uniform hypergraphs.
//!
//! Vertices are addressed by `(part, index)`, both 1-based. An edge holds at
//! most one vertex per part and keeps its vertices sorted by part, so two
//! edges over the same vertex set compare equal. A hypergraph stores its
//! edges in a `BTreeSet`, which fixes the deterministic iteration order every
//! solver and the shifting code rely on.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Part count, uniformity and part sizes of a complete multipartite host.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    s: usize,
    sizes: Vec<usize>,
}

impl Shape {
    pub fn new(s: usize, sizes: Vec<usize>) -> Result<Self> {
        let r = sizes.len();
        if r < 2 {
            return Err(Error::InvalidShape(format!("need at least 2 parts, got {r}")));
        }
        if s < 2 || s > r {
            return Err(Error::InvalidShape(format!("uniformity {s} must satisfy 2 <= s <= r = {r}")));
        }
        if let Some(pos) = sizes.iter().position(|&n| n == 0) {
            return Err(Error::InvalidShape(format!("part {} is empty", pos + 1)));
        }
        Ok(Shape { s, sizes })
    }

    /// A shape whose sizes must already be ascending.
    pub fn canonical(s: usize, sizes: Vec<usize>) -> Result<Self> {
        let shape = Shape::new(s, sizes)?;
        shape.require_canonical()?;
        Ok(shape)
    }

    pub fn r(&self) -> usize {
        self.sizes.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Size of part `part` (1-based).
    pub fn size(&self, part: usize) -> usize {
        self.sizes[part - 1]
    }

    /// True when `n_1 <= n_2 <= ... <= n_r`.
    pub fn is_canonical(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn require_canonical(&self) -> Result<()> {
        if self.is_canonical() {
            Ok(())
        } else {
            Err(Error::NotCanonical(self.sizes.clone()))
        }
    }

    /// Sorts the parts ascending. `perm[new_part - 1]` is the old part number.
    /// The sort is stable, so equal parts keep their relative order.
    pub fn canonicalize(&self) -> (Shape, Vec<usize>) {
        let mut perm: Vec<usize> = (1..=self.r()).collect();
        perm.sort_by_key(|&p| self.size(p));
        let sizes = perm.iter().map(|&p| self.size(p)).collect();
        (Shape { s: self.s, sizes }, perm)
    }

    /// Same sizes with a different uniformity.
    pub fn with_uniformity(&self, s: usize) -> Result<Shape> {
        Shape::new(s, self.sizes.clone())
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.part >= 1 && v.part <= self.r() && v.index >= 1 && v.index <= self.size(v.part)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { part: v.part, index: v.index })
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// All vertices, part by part.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..=self.r()).flat_map(move |p| (1..=self.size(p)).map(move |i| Vertex::new(p, i)))
    }

    /// Dense id of a vertex in `0..vertex_count()`, part by part.
    pub fn vertex_id(&self, v: Vertex) -> usize {
        self.sizes[..v.part - 1].iter().sum::<usize>() + v.index - 1
    }

    /// All `t`-sets with at most one vertex per part, in canonical order.
    pub fn transversals(&self, t: usize) -> Vec<Edge> {
        let mut out = Vec::new();
        for parts in (1..=self.r()).combinations(t) {
            for idx in parts.iter().map(|&p| 1..=self.size(p)).multi_cartesian_product() {
                let verts = parts.iter().zip(idx).map(|(&p, i)| Vertex::new(p, i)).collect();
                out.push(Edge(verts));
            }
        }
        out.sort();
        out
    }
}

impl Serialize for Shape {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("Shape", 3)?;
        st.serialize_field("r", &self.r())?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("sizes", &self.sizes)?;
        st.end()
    }
}

/// Vertex `a_{part,index}`. The derived `Ord` is the storage order
/// (part, then index); the within-part order of [`vertex_precedes`] is a
/// separate partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Vertex {
    pub part: usize,
    pub index: usize,
}

impl Vertex {
    pub const fn new(part: usize, index: usize) -> Self {
        Vertex { part, index }
    }
}

impl From<(usize, usize)> for Vertex {
    fn from((part, index): (usize, usize)) -> Self {
        Vertex { part, index }
    }
}

impl From<Vertex> for (usize, usize) {
    fn from(v: Vertex) -> Self {
        (v.part, v.index)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{},{}", self.part, self.index)
    }
}

/// A set of vertices from pairwise distinct parts, sorted by part.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Edge(Vec<Vertex>);

impl Edge {
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        vertices.sort();
        if vertices.is_empty() {
            return Err(Error::InvalidEdge("edge has no vertices".into()));
        }
        if vertices.windows(2).any(|w| w[0].part == w[1].part) {
            return Err(Error::InvalidEdge(format!(
                "two vertices share a part in {{{}}}",
                vertices.iter().join(", ")
            )));
        }
        Ok(Edge(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn parts(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|v| v.part)
    }

    /// The vertex this edge has in `part`, if any.
    pub fn in_part(&self, part: usize) -> Option<Vertex> {
        self.0.iter().copied().find(|v| v.part == part)
    }

    pub fn is_disjoint(&self, other: &Edge) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    pub fn intersects(&self, xs: &BTreeSet<Vertex>) -> bool {
        self.0.iter().any(|v| xs.contains(v))
    }

    /// `(self \ {from}) ∪ {to}`; `from` and `to` must share a part.
    pub fn replace(&self, from: Vertex, to: Vertex) -> Edge {
        debug_assert_eq!(from.part, to.part);
        let mut verts = self.0.clone();
        for v in verts.iter_mut() {
            if *v == from {
                *v = to;
            }
        }
        Edge(verts)
    }

    /// Sum of within-part indices, the per-edge term of the shifting potential.
    pub fn index_sum(&self) -> usize {
        self.0.iter().map(|v| v.index).sum()
    }

    fn valid_for(&self, shape: &Shape) -> bool {
        self.0.len() == shape.s() && self.0.iter().all(|v| shape.contains(*v))
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let verts = Vec::<Vertex>::deserialize(de)?;
        Edge::new(verts).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(", "))
    }
}

/// A subgraph of the complete r-partite s-graph of its shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HypergraphJson", into = "HypergraphJson")]
pub struct MultipartiteHypergraph {
    shape: Shape,
    edges: BTreeSet<Edge>,
}

/// Result of [`MultipartiteHypergraph::induced`]: the induced hypergraph on
/// the shrunken parts, and the old-to-new vertex relabeling.
#[derive(Debug, Clone)]
pub struct Induced {
    pub graph: MultipartiteHypergraph,
    pub remap: BTreeMap<Vertex, Vertex>,
}

impl MultipartiteHypergraph {
    pub fn new<I: IntoIterator<Item = Edge>>(shape: Shape, edges: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in edges {
            if !e.valid_for(&shape) {
                return Err(Error::InvalidEdge(format!(
                    "{e} is not an edge of the complete {}-partite {}-graph {:?}",
                    shape.r(),
                    shape.s(),
                    shape.sizes()
                )));
            }
            if !set.insert(e.clone()) {
                return Err(Error::InvalidEdge(format!("duplicate edge {e}")));
            }
        }
        Ok(MultipartiteHypergraph { shape, edges: set })
    }

    pub fn empty(shape: Shape) -> Self {
        MultipartiteHypergraph { shape, edges: BTreeSet::new() }
    }

    /// The complete r-partite s-graph `K^(s)_{n_1,...,n_r}`.
    pub fn complete(shape: &Shape) -> Self {
        let edges = shape.transversals(shape.s()).into_iter().collect();
        MultipartiteHypergraph { shape: shape.clone(), edges }
    }

    pub(crate) fn from_trusted(shape: Shape, edges: BTreeSet<Edge>) -> Self {
        MultipartiteHypergraph { shape, edges }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    /// Edges containing `u`.
    pub fn link(&self, u: Vertex) -> Result<Vec<Edge>> {
        self.shape.check_vertex(u)?;
        Ok(self.edges.iter().filter(|e| e.contains(u)).cloned().collect())
    }

    /// Edges containing both `u` and `v`.
    pub fn link_pair(&self, u: Vertex, v: Vertex) -> Result<Vec<Edge>> {
        self.shape.check_vertex(u)?;
        self.shape.check_vertex(v)?;
        Ok(self.edges.iter().filter(|e| e.contains(u) && e.contains(v)).cloned().collect())
    }

    pub fn degree(&self, u: Vertex) -> Result<usize> {
        self.link(u).map(|l| l.len())
    }

    /// Edges meeting `xs`.
    pub fn gamma(&self, xs: &BTreeSet<Vertex>) -> Result<Vec<Edge>> {
        for &v in xs {
            self.shape.check_vertex(v)?;
        }
        Ok(self.edges.iter().filter(|e| e.intersects(xs)).cloned().collect())
    }

    /// The sub-hypergraph induced by `keep`, with parts shrunk and vertices
    /// renumbered `1..` in their old order. Fails if a part would vanish,
    /// since every part of a shape must be non-empty.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Result<Induced> {
        for &v in keep {
            self.shape.check_vertex(v)?;
        }
        let mut remap = BTreeMap::new();
        let mut sizes = vec![0; self.shape.r()];
        for &v in keep {
            sizes[v.part - 1] += 1;
            remap.insert(v, Vertex::new(v.part, sizes[v.part - 1]));
        }
        let shape = Shape::new(self.shape.s(), sizes)?;
        let edges = self
            .edges
            .iter()
            .filter(|e| e.vertices().iter().all(|v| keep.contains(v)))
            .map(|e| Edge(e.vertices().iter().map(|v| remap[v]).collect()))
            .collect();
        Ok(Induced { graph: MultipartiteHypergraph { shape, edges }, remap })
    }

    /// `H \ S`: the hypergraph induced on the complement of `remove`.
    pub fn delete(&self, remove: &BTreeSet<Vertex>) -> Result<Induced> {
        for &v in remove {
            self.shape.check_vertex(v)?;
        }
        let keep = self.shape.vertices().filter(|v| !remove.contains(v)).collect();
        self.induced(&keep)
    }

    /// Applies a part relabeling: new part `i` is old part `perm[i - 1]`.
    pub fn relabel_parts(&self, perm: &[usize]) -> Result<Self> {
        let r = self.shape.r();
        let mut seen = vec![false; r];
        if perm.len() != r || perm.iter().any(|&p| p == 0 || p > r || std::mem::replace(&mut seen[p - 1], true)) {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation of 1..={r}")));
        }
        let mut old_to_new = vec![0; r + 1];
        for (i, &p) in perm.iter().enumerate() {
            old_to_new[p] = i + 1;
        }
        let sizes = perm.iter().map(|&p| self.shape.size(p)).collect();
        let shape = Shape::new(self.shape.s(), sizes)?;
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let verts = e.vertices().iter().map(|v| Vertex::new(old_to_new[v.part], v.index)).collect();
                Edge::new(verts)
            })
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(MultipartiteHypergraph { shape, edges })
    }

    /// Edges whose part set is exactly `parts` (sorted, 1-based).
    pub fn edges_on_parts(&self, parts: &[usize]) -> usize {
        self.edges.iter().filter(|e| e.parts().eq(parts.iter().copied())).count()
    }

    /// Canonical JSON encoding.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypergraph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("malformed hypergraph JSON: {e}")))
    }
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    r: usize,
    s: usize,
    sizes: Vec<usize>,
    edges: Vec<Edge>,
}

impl From<MultipartiteHypergraph> for HypergraphJson {
    fn from(h: MultipartiteHypergraph) -> Self {
        HypergraphJson {
            r: h.shape.r(),
            s: h.shape.s(),
            sizes: h.shape.sizes,
            edges: h.edges.into_iter().collect(),
        }
    }
}

impl TryFrom<HypergraphJson> for MultipartiteHypergraph {
    type Error = Error;

    fn try_from(j: HypergraphJson) -> Result<Self> {
        if j.r != j.sizes.len() {
            return Err(Error::InvalidShape(format!("r = {} but {} sizes given", j.r, j.sizes.len())));
        }
        MultipartiteHypergraph::new(Shape::new(j.s, j.sizes)?, j.edges)
    }
}

/// Within-part order: `Some(Less)` when `a ≺ b`, `Some(Greater)` when
/// `b ≺ a`, `None` for vertices of different parts.
pub fn vertex_precedes(a: Vertex, b: Vertex) -> Option<Ordering> {
    (a.part == b.part).then(|| a.index.cmp(&b.index))
}

/// Edge order induced by the vertex order. The pairing of vertices is forced
/// by parts, so edges on different part sets are incomparable.
pub fn edge_precedes(s1: &Edge, s2: &Edge) -> Option<Ordering> {
    if s1.len() != s2.len() || !s1.parts().eq(s2.parts()) {
        return None;
    }
    let mut le = true;
    let mut ge = true;
    for (a, b) in s1.vertices().iter().zip(s2.vertices()) {
        match a.index.cmp(&b.index) {
            Ordering::Less => ge = false,
            Ordering::Greater => le = false,
            Ordering::Equal => {}
        }
    }
    match (le, ge) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (false, false) => None,
    }
}
