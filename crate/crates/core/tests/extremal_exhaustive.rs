//! The branch-and-bound optimum and witness against enumeration of every
//! edge subset of small hosts.

use itertools::Itertools;
use turanlab::solvers::{max_cliques_free, max_edges_free, Objective, SearchConfig};
use turanlab::{Edge, Shape, Vertex};

struct Brute {
    edges: Vec<Vec<(usize, usize)>>,
    /// forbidden cliques as (edge mask, vertex list)
    cliques: Vec<(u32, Vec<(usize, usize)>)>,
    units: Vec<u32>,
}

fn vertex_sets(sizes: &[usize], m: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for parts in (1..=sizes.len()).combinations(m) {
        for idx in parts.iter().map(|&p| 1..=sizes[p - 1]).multi_cartesian_product() {
            out.push(parts.iter().copied().zip(idx).collect::<Vec<_>>());
        }
    }
    out.sort();
    out
}

fn mask_of(edges: &[Vec<(usize, usize)>], s: usize, set: &[(usize, usize)]) -> u32 {
    set.iter()
        .copied()
        .combinations(s)
        .map(|sub| 1u32 << edges.iter().position(|e| *e == sub).unwrap())
        .fold(0, |a, b| a | b)
}

impl Brute {
    fn new(s: usize, sizes: &[usize], t: usize, units: Option<usize>) -> Brute {
        let edges = vertex_sets(sizes, s);
        assert!(edges.len() <= 20);
        let cliques = vertex_sets(sizes, t).into_iter().map(|c| (mask_of(&edges, s, &c), c)).collect();
        let units = match units {
            Some(q) => vertex_sets(sizes, q).iter().map(|c| mask_of(&edges, s, c)).collect(),
            None => (0..edges.len()).map(|i| 1u32 << i).collect(),
        };
        Brute { edges, cliques, units }
    }

    fn packs(&self, complete: &[&Vec<(usize, usize)>], used: &mut Vec<(usize, usize)>, from: usize, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        for i in from..complete.len() {
            if complete[i].iter().all(|v| !used.contains(v)) {
                let len = used.len();
                used.extend(complete[i].iter().copied());
                if self.packs(complete, used, i + 1, need - 1) {
                    return true;
                }
                used.truncate(len);
            }
        }
        false
    }

    /// (optimum, lexicographically least optimal edge list)
    fn solve(&self, k: usize) -> (u64, Vec<usize>) {
        let mut best: Option<(u64, Vec<usize>)> = None;
        for mask in 0u32..(1u32 << self.edges.len()) {
            let complete: Vec<_> = self.cliques.iter().filter(|(m, _)| mask & m == *m).map(|(_, c)| c).collect();
            if self.packs(&complete, &mut Vec::new(), 0, k) {
                continue;
            }
            let value = self.units.iter().filter(|&&u| mask & u == u).count() as u64;
            let set: Vec<usize> = (0..self.edges.len()).filter(|&i| mask >> i & 1 == 1).collect();
            let better = match &best {
                None => true,
                Some((v, s)) => value > *v || (value == *v && set < *s),
            };
            if better {
                best = Some((value, set));
            }
        }
        best.unwrap()
    }

    fn edge_list(&self, set: &[usize]) -> Vec<Edge> {
        set.iter()
            .map(|&i| Edge::new(self.edges[i].iter().map(|&(p, x)| Vertex::new(p, x)).collect()).unwrap())
            .collect()
    }
}

fn check(s: usize, sizes: &[usize], k: usize, t: usize, objective: Objective) {
    let shape = Shape::new(s, sizes.to_vec()).unwrap();
    let cfg = SearchConfig::default();
    let (brute, report) = match objective {
        Objective::Edges => (Brute::new(s, sizes, t, None), max_edges_free(&shape, k, t, &cfg).unwrap()),
        Objective::Cliques(q) => (Brute::new(s, sizes, t, Some(q)), max_cliques_free(&shape, k, q, t, &cfg).unwrap()),
    };
    let (opt, set) = brute.solve(k);
    let ctx = format!("s={s} sizes={sizes:?} k={k} t={t} {objective:?}");
    assert_eq!(report.optimum, opt, "{ctx}");
    let witness: Vec<Edge> = report.witness.edges().iter().cloned().collect();
    assert_eq!(witness, brute.edge_list(&set), "{ctx}");

    let split = SearchConfig { split_depth: 4, ..cfg };
    let par = match objective {
        Objective::Edges => max_edges_free(&shape, k, t, &split).unwrap(),
        Objective::Cliques(q) => max_cliques_free(&shape, k, q, t, &split).unwrap(),
    };
    assert_eq!((par.optimum, &par.witness), (report.optimum, &report.witness), "{ctx} split");
}

const GRAPH_SHAPES: &[&[usize]] = &[&[2, 2], &[2, 3], &[1, 2, 2], &[1, 2, 3], &[2, 2, 2], &[1, 1, 2, 2], &[1, 1, 1, 2], &[1, 1, 1, 1, 1]];

#[test]
fn graph_edge_objectives() {
    for sizes in GRAPH_SHAPES {
        let r = sizes.len();
        for k in 1..=3 {
            for t in 2..=r {
                check(2, sizes, k, t, Objective::Edges);
            }
        }
    }
}

#[test]
fn graph_clique_objectives() {
    for sizes in GRAPH_SHAPES {
        let r = sizes.len();
        if r < 3 {
            continue;
        }
        for k in 1..=2 {
            for t in 3..=r {
                for q in 3..=r {
                    check(2, sizes, k, t, Objective::Cliques(q));
                }
            }
        }
    }
}

#[test]
fn hypergraph_objectives() {
    for (s, sizes) in [(3, &[2, 2, 2][..]), (3, &[1, 2, 2, 2]), (3, &[1, 1, 2, 2]), (3, &[1, 1, 1, 1, 2])] {
        let r = sizes.len();
        for k in 1..=3 {
            for t in s..=r {
                check(s, sizes, k, t, Objective::Edges);
            }
        }
    }
}
