//! Edge-colored r-partite r-uniform multi-hypergraphs and rainbow matchings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercore::{Edge, MultipartiteHypergraph, Shape, Vertex};
use crate::solvers::{clique_list, max_packing, CliquePacking};

/// Colors are `1..=colors`; an edge may repeat across colors but not within one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredHypergraph {
    shape: Shape,
    classes: Vec<Vec<Edge>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredEdge {
    pub edge: Edge,
    pub color: usize,
}

impl ColoredHypergraph {
    pub fn new(shape: Shape, colors: usize, edges: impl IntoIterator<Item = ColoredEdge>) -> Result<Self> {
        if shape.s() != shape.r() {
            return Err(Error::Uniformity(format!("colored hypergraphs need s = r, got s = {}, r = {}", shape.s(), shape.r())));
        }
        let mut classes = vec![BTreeSet::new(); colors];
        for ColoredEdge { edge, color } in edges {
            if color == 0 || color > colors {
                return Err(Error::InvalidColoring(format!("color {color} outside 1..={colors}")));
            }
            // validates the edge against the shape
            MultipartiteHypergraph::new(shape.clone(), [edge.clone()])?;
            if !classes[color - 1].insert(edge.clone()) {
                return Err(Error::InvalidColoring(format!("edge {edge} repeated in color {color}")));
            }
        }
        Ok(ColoredHypergraph { shape, classes: classes.into_iter().map(|c| c.into_iter().collect()).collect() })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn colors(&self) -> usize {
        self.classes.len()
    }

    /// Edges of color `c`, in canonical order.
    pub fn class(&self, c: usize) -> &[Edge] {
        &self.classes[c - 1]
    }

    /// All `(edge, color)` pairs, by color and then edge.
    pub fn edges(&self) -> impl Iterator<Item = ColoredEdge> + '_ {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(i, class)| class.iter().map(move |e| ColoredEdge { edge: e.clone(), color: i + 1 }))
    }

    pub fn edge_count(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("colored hypergraph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("malformed colored hypergraph JSON: {e}")))
    }
}

#[derive(Serialize, Deserialize)]
struct ColoredJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sizes: Option<Vec<usize>>,
    colors: usize,
    edges: Vec<ColoredEdge>,
}

impl Serialize for ColoredHypergraph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ColoredJson { sizes: Some(self.shape.sizes().to_vec()), colors: self.colors(), edges: self.edges().collect() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ColoredHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ColoredJson::deserialize(de)?;
        // without explicit sizes, the parts are as large as the edges need
        let sizes = match j.sizes {
            Some(sizes) => sizes,
            None => {
                let r = j.edges.first().map_or(0, |e| e.edge.len());
                let mut sizes = vec![1; r];
                for e in &j.edges {
                    for v in e.edge.vertices() {
                        if v.part == 0 || v.part > r {
                            return Err(D::Error::custom(format!("vertex {v} outside {r} parts")));
                        }
                        sizes[v.part - 1] = sizes[v.part - 1].max(v.index);
                    }
                }
                sizes
            }
        };
        let r = sizes.len();
        let shape = Shape::new(r, sizes).map_err(D::Error::custom)?;
        ColoredHypergraph::new(shape, j.colors, j.edges).map_err(D::Error::custom)
    }
}

fn ids(shape: &Shape, e: &Edge) -> Vec<usize> {
    e.vertices().iter().map(|&v| shape.vertex_id(v)).collect()
}

/// Every color class contains `k` pairwise disjoint edges.
pub fn is_fk_colored(c: &ColoredHypergraph, k: usize) -> bool {
    (1..=c.colors()).all(|color| {
        let sets: Vec<Vec<usize>> = c.class(color).iter().map(|e| ids(&c.shape, e)).collect();
        max_packing(&sets, c.shape.vertex_count(), Some(k)).len() >= k
    })
}

/// `k` pairwise disjoint edges of pairwise distinct colors, or `None`.
/// Colors are tried in ascending order and edges in canonical order, so the
/// result is the first such matching in that order.
pub fn find_rainbow_matching(c: &ColoredHypergraph, k: usize) -> Option<Vec<ColoredEdge>> {
    let mut search = Rainbow {
        c,
        used: vec![false; c.shape.vertex_count()],
        chosen: Vec::new(),
        k,
    };
    search.run(1).then(|| search.chosen.iter().map(|&(color, i)| ColoredEdge { edge: c.class(color)[i].clone(), color }).collect())
}

struct Rainbow<'a> {
    c: &'a ColoredHypergraph,
    used: Vec<bool>,
    chosen: Vec<(usize, usize)>,
    k: usize,
}

impl Rainbow<'_> {
    fn run(&mut self, color: usize) -> bool {
        let need = self.k - self.chosen.len();
        if need == 0 {
            return true;
        }
        if color > self.c.colors() || self.c.colors() - color + 1 < need {
            return false;
        }
        let shape = &self.c.shape;
        for (i, e) in self.c.class(color).iter().enumerate() {
            let vs = ids(shape, e);
            if vs.iter().any(|&v| self.used[v]) {
                continue;
            }
            vs.iter().for_each(|&v| self.used[v] = true);
            self.chosen.push((color, i));
            if self.run(color + 1) {
                return true;
            }
            self.chosen.pop();
            vs.iter().for_each(|&v| self.used[v] = false);
        }
        self.run(color + 1)
    }
}

/// For a graph on `V_1..V_r`, colors the `(r-1)`-cliques of each link
/// `G(u)`, `u ∈ V_r`, with the index of `u`.
pub fn link_clique_coloring(g: &MultipartiteHypergraph) -> Result<ColoredHypergraph> {
    let shape = g.shape();
    if shape.s() != 2 {
        return Err(Error::Uniformity(format!("link coloring needs a graph, got s = {}", shape.s())));
    }
    let r = shape.r();
    if r < 3 {
        return Err(Error::InvalidShape(format!("link coloring needs r >= 3, got r = {r}")));
    }
    let base = Shape::new(r - 1, shape.sizes()[..r - 1].to_vec())?;
    let edges = clique_list(g, r)?.into_iter().map(|mut clique| {
        let u = clique.pop().expect("an r-clique has a part-r vertex");
        ColoredEdge { edge: Edge::new(clique).expect("distinct parts"), color: u.index }
    });
    ColoredHypergraph::new(base, shape.size(r), edges)
}

/// Turns a rainbow matching of [`link_clique_coloring`] back into disjoint
/// `r`-cliques of `g` by appending each color's vertex of `V_r`.
pub fn lift(g: &MultipartiteHypergraph, matching: &[ColoredEdge]) -> CliquePacking {
    let r = g.shape().r();
    let members = matching
        .iter()
        .map(|m| {
            let mut verts = m.edge.vertices().to_vec();
            verts.push(Vertex::new(r, m.color));
            verts
        })
        .collect();
    CliquePacking { t: r, members }
}

/// The cyclic Latin square of order `n` as a coloring of `K_{n,n}`: edge
/// `a_{1,i} a_{2,j}` gets color `(i + j) mod n + 1` (0-based `i`, `j`).
pub fn latin_square_coloring(n: usize) -> Result<ColoredHypergraph> {
    let shape = Shape::new(2, vec![n, n])?;
    let edges = (0..n).flat_map(|i| {
        (0..n).map(move |j| ColoredEdge {
            edge: Edge::new(vec![Vertex::new(1, i + 1), Vertex::new(2, j + 1)]).expect("two parts"),
            color: (i + j) % n + 1,
        })
    });
    ColoredHypergraph::new(shape, n, edges)
}
