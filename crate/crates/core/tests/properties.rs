use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use turanlab::constructions::{g_construction, h1_construction, h2_construction, matching_partition};
use turanlab::formulas::*;
use turanlab::hypercore::{edge_precedes, Edge, MultipartiteHypergraph, Shape, Vertex};
use turanlab::lpbound::{lp_optimum, LpInstance};
use turanlab::shifting::{downward_closed, is_stable, potential, shift, stabilize};
use turanlab::solvers::{clique_packing_number, count_cliques, is_free, matching_number};

fn shape_strategy(max_r: usize, max_n: usize) -> impl Strategy<Value = Shape> {
    (2..=max_r)
        .prop_flat_map(move |r| (2..=r, proptest::collection::vec(1..=max_n, r)))
        .prop_map(|(s, mut sizes)| {
            sizes.sort();
            Shape::new(s, sizes).unwrap()
        })
}

fn subgraph_strategy(max_r: usize, max_n: usize) -> impl Strategy<Value = MultipartiteHypergraph> {
    shape_strategy(max_r, max_n).prop_flat_map(|shape| {
        let all: Vec<Edge> = MultipartiteHypergraph::complete(&shape).edges().iter().cloned().collect();
        let n = all.len();
        (Just(shape), Just(all), proptest::collection::vec(any::<bool>(), n))
            .prop_map(|(shape, all, keep)| {
                let edges = all.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e);
                MultipartiteHypergraph::new(shape, edges).unwrap()
            })
    })
}

/// Largest matching by trying every edge subset in decreasing size.
fn brute_matching(h: &MultipartiteHypergraph) -> usize {
    let edges: Vec<&Edge> = h.edges().iter().collect();
    (0..=edges.len())
        .rev()
        .find(|&m| edges.iter().combinations(m).any(|c| c.iter().tuple_combinations().all(|(a, b)| a.is_disjoint(b))))
        .unwrap()
}

fn same_part_pair(h: &MultipartiteHypergraph, part: usize, a: usize, b: usize) -> Option<(Vertex, Vertex)> {
    let part = part % h.shape().r() + 1;
    let n = h.shape().size(part);
    let (a, b) = (a % n + 1, b % n + 1);
    (a != b).then(|| (Vertex::new(part, a), Vertex::new(part, b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn complete_edge_count(shape in shape_strategy(5, 4)) {
        let want: BigUint = (1..=shape.r()).combinations(shape.s()).map(|a| n_a(shape.sizes(), &a)).sum();
        prop_assert_eq!(BigUint::from(MultipartiteHypergraph::complete(&shape).edge_count()), want);
    }

    #[test]
    fn gamma_and_delete_split_edges(h in subgraph_strategy(4, 3), pick in proptest::collection::vec(any::<bool>(), 12)) {
        let xs: BTreeSet<Vertex> = h.shape().vertices().zip(pick.iter().cycle()).filter(|(_, p)| **p).map(|(v, _)| v).collect();
        let gamma: BTreeSet<Edge> = h.gamma(&xs).unwrap().into_iter().collect();
        let survivors: BTreeSet<Edge> = h.edges().difference(&gamma).cloned().collect();
        prop_assert!(survivors.iter().all(|e| !e.intersects(&xs)));
        prop_assert_eq!(gamma.len() + survivors.len(), h.edge_count());
        if let Ok(del) = h.delete(&xs) {
            prop_assert_eq!(del.graph.edge_count(), survivors.len());
        }
    }

    #[test]
    fn degree_sum(h in subgraph_strategy(4, 3)) {
        let mut total = 0;
        for u in h.shape().vertices() {
            let d = h.degree(u).unwrap();
            prop_assert_eq!(d, h.link(u).unwrap().len());
            total += d;
        }
        prop_assert_eq!(total, h.shape().s() * h.edge_count());
    }

    #[test]
    fn precedence_is_partial_order(shape in shape_strategy(4, 3), seeds in proptest::collection::vec(0usize..1000, 3)) {
        let all: Vec<Edge> = MultipartiteHypergraph::complete(&shape).edges().iter().cloned().collect();
        let e: Vec<&Edge> = seeds.iter().map(|i| &all[i % all.len()]).collect();
        use std::cmp::Ordering::*;
        prop_assert_eq!(edge_precedes(e[0], e[0]), Some(Equal));
        if edge_precedes(e[0], e[1]) == Some(Equal) {
            prop_assert_eq!(e[0], e[1]);
        }
        if let Some(o) = edge_precedes(e[0], e[1]) {
            prop_assert_eq!(edge_precedes(e[1], e[0]), Some(o.reverse()));
        }
        let le = |a: &Edge, b: &Edge| matches!(edge_precedes(a, b), Some(Less | Equal));
        if le(e[0], e[1]) && le(e[1], e[2]) {
            prop_assert!(le(e[0], e[2]));
        }
    }

    #[test]
    fn json_round_trip(h in subgraph_strategy(4, 3)) {
        prop_assert_eq!(MultipartiteHypergraph::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn shift_preserves_size_and_never_grows_matching(h in subgraph_strategy(4, 3), part in 0usize..4, a in 0usize..3, b in 0usize..3) {
        if let Some((u, v)) = same_part_pair(&h, part, a, b) {
            let shifted = shift(&h, u, v).unwrap();
            prop_assert_eq!(shifted.edge_count(), h.edge_count());
            prop_assert!(matching_number(&shifted).0 <= matching_number(&h).0);
        }
    }

    #[test]
    fn stabilize_reaches_closed_fixpoint(h in subgraph_strategy(4, 3)) {
        let trace = stabilize(&h);
        prop_assert!(trace.steps.len() <= potential(&h));
        prop_assert!(trace.steps.iter().all(|s| s.after < s.before));
        prop_assert!(is_stable(&trace.final_graph));
        prop_assert!(downward_closed(&trace.final_graph));
        prop_assert_eq!(trace.final_graph.edge_count(), h.edge_count());
        prop_assert!(matching_number(&trace.final_graph).0 <= matching_number(&h).0);
    }

    #[test]
    fn stable_means_downward_closed(h in subgraph_strategy(3, 3)) {
        prop_assert_eq!(is_stable(&h), downward_closed(&h));
    }

    #[test]
    fn matching_number_is_exact(h in subgraph_strategy(3, 3)) {
        prop_assume!(h.edge_count() <= 14);
        let (nu, witness) = matching_number(&h);
        prop_assert_eq!(nu, brute_matching(&h));
        prop_assert!(witness.iter().tuple_combinations().all(|(a, b)| a.is_disjoint(b)));
        prop_assert!(witness.iter().all(|e| h.contains(e)));
    }

    #[test]
    fn packing_witness_is_valid(h in subgraph_strategy(4, 3), t_off in 0usize..3) {
        let t = (h.shape().s() + t_off).min(h.shape().r());
        let p = clique_packing_number(&h, t).unwrap();
        prop_assert!(p.verify(&h));
        prop_assert!(p.len() <= h.shape().size(1) || t < h.shape().r());
    }

    #[test]
    fn lp_ties_and_feasible_points(ws in proptest::collection::vec(1i64..8, 1..10), num in 1i64..60, den in 1i64..6, perm_seed in any::<u64>()) {
        let mut weights: Vec<BigRational> = ws.iter().map(|&w| BigRational::from_integer(w.into())).collect();
        weights.sort_by(|a, b| b.cmp(a));
        let budget = BigRational::new(num.into(), den.into());
        let inst = LpInstance::new(weights.clone(), budget.clone()).unwrap();
        let opt = lp_optimum(&inst);
        // permuting equal weights is invisible after sorting; rebuild from a shuffled list
        let mut shuffled = weights.clone();
        let n = shuffled.len();
        shuffled.rotate_left((perm_seed as usize) % n);
        prop_assert_eq!(lp_optimum(&LpInstance::from_unsorted(shuffled, budget.clone()).unwrap()), opt.clone());
        // any single full coordinate x_i = w_i fits when b >= 1 and cannot beat the optimum
        if budget >= BigRational::from_integer(1.into()) {
            prop_assert!(weights.iter().all(|w| *w <= opt));
        }
        let total: BigRational = weights.iter().sum();
        prop_assert!(opt <= total);
    }
}

fn grid() -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for r in 2..=4 {
        for sizes in (0..r).map(|_| 1..=3usize).multi_cartesian_product() {
            if sizes.windows(2).all(|w| w[0] <= w[1]) {
                for s in 2..=r {
                    out.push((s, sizes.clone()));
                }
            }
        }
    }
    out
}

#[test]
fn constructions_agree_with_formulas() {
    for (s, sizes) in grid() {
        let shape = Shape::new(s, sizes.clone()).unwrap();
        let r = sizes.len();
        for k in 1..=sizes[0] {
            let h1 = h1_construction(&shape, k).unwrap();
            let h2 = h2_construction(&shape, k).unwrap();
            assert_eq!(BigUint::from(h1.edge_count()), f_value(s, k, &sizes[1..]).unwrap());
            assert_eq!(BigUint::from(h2.edge_count()), g_value(s, k, &sizes).unwrap());
            assert!(matching_number(&h1).0 < k);
            assert!(clique_packing_number(&h2, r).unwrap().len() < k);
            assert!(is_stable(&h1) && is_stable(&h2));
            let graph = Shape::new(2, sizes.clone()).unwrap();
            let g = g_construction(&graph, k).unwrap();
            assert!(is_free(&g, k, r).unwrap());
            if r == 3 || sizes[2..].windows(2).all(|w| w[0] == w[1]) {
                assert_eq!(BigUint::from(count_cliques(&g, s).unwrap()), h_value(s, k, &sizes).unwrap());
            }
        }
    }
}

#[test]
fn formula_collapses_and_monotonicity() {
    for (s, sizes) in grid() {
        let r = sizes.len();
        for k in 1..=sizes[0] {
            let f = f_value(s, k, &sizes[1..]).unwrap();
            let g = g_value(s, k, &sizes).unwrap();
            let h = h_value(s, k, &sizes).unwrap();
            if s == 2 {
                assert_eq!(f, thm11_value(k, &sizes).unwrap());
                assert_eq!(g, thm12_value(k, &sizes).unwrap());
                assert_eq!(h, g);
            }
            if s == r {
                let l = lemma21_value(k, &sizes).unwrap();
                assert_eq!((&f, &g, &h), (&l, &l, &l));
            }
            if k < sizes[0] {
                assert!(f_value(s, k + 1, &sizes[1..]).unwrap() >= f);
                assert!(g_value(s, k + 1, &sizes).unwrap() >= g);
                assert!(h_value(s, k + 1, &sizes).unwrap() >= h);
            }
            for i in 0..r {
                let mut bigger = sizes.clone();
                bigger[i] += 1;
                if bigger.windows(2).all(|w| w[0] <= w[1]) {
                    assert!(f_value(s, k, &bigger[1..]).unwrap() >= f);
                    assert!(g_value(s, k, &bigger).unwrap() >= g);
                    assert!(h_value(s, k, &bigger).unwrap() >= h);
                }
            }
        }
    }
}

#[test]
fn matching_partition_on_grid() {
    for r in 2..=4 {
        for sizes in (0..r).map(|_| 1..=3usize).multi_cartesian_product() {
            if sizes.windows(2).all(|w| w[0] <= w[1]) {
                let p = matching_partition(&Shape::new(r, sizes).unwrap()).unwrap();
                p.verify().unwrap();
            }
        }
    }
}
