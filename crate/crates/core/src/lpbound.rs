//! The capped knapsack-style LP `max Σx_i  s.t. Σ x_i/w_i <= b, 0 <= x_i <= w_i`,
//! its budget builders, and the part-weighted edge and clique inequalities
//! satisfied by free subgraphs.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formulas::n_a;
use crate::hypercore::{MultipartiteHypergraph, Shape};
use crate::solvers::count_cliques_by_support;

/// Weights sorted non-increasing, all positive, and a non-negative budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpInstance {
    weights: Vec<BigRational>,
    budget: BigRational,
}

impl LpInstance {
    pub fn new(weights: Vec<BigRational>, budget: BigRational) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidLp("no weights".into()));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidLp("weights must be positive".into()));
        }
        if weights.windows(2).any(|p| p[0] < p[1]) {
            return Err(Error::InvalidLp("weights must be sorted non-increasing".into()));
        }
        // a zero budget arises from the builders when s = r and k = 1
        if budget.is_negative() {
            return Err(Error::InvalidLp("budget must be non-negative".into()));
        }
        Ok(LpInstance { weights, budget })
    }

    /// Sorts `weights` first.
    pub fn from_unsorted(mut weights: Vec<BigRational>, budget: BigRational) -> Result<Self> {
        weights.sort_by(|a, b| b.cmp(a));
        LpInstance::new(weights, budget)
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn budget(&self) -> &BigRational {
        &self.budget
    }
}

impl Serialize for LpInstance {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        struct Weights<'a>(&'a [BigRational]);
        impl Serialize for Weights<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = ser.serialize_seq(Some(self.0.len()))?;
                for w in self.0 {
                    seq.serialize_element(&RationalJson(w))?;
                }
                seq.end()
            }
        }
        let mut st = ser.serialize_struct("LpInstance", 2)?;
        st.serialize_field("weights", &Weights(&self.weights))?;
        st.serialize_field("budget", &RationalJson(&self.budget))?;
        st.end()
    }
}

/// `{"num": .., "den": ..}`, with numbers as JSON integers when they fit in
/// 64 bits and as decimal strings otherwise.
pub struct RationalJson<'a>(pub &'a BigRational);

impl Serialize for RationalJson<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        fn int<S: SerializeStruct>(st: &mut S, key: &'static str, x: &BigInt) -> std::result::Result<(), S::Error> {
            match x.to_i64() {
                Some(v) => st.serialize_field(key, &v),
                None => st.serialize_field(key, &x.to_string()),
            }
        }
        let mut st = ser.serialize_struct("Rational", 2)?;
        int(&mut st, "num", self.0.numer())?;
        int(&mut st, "den", self.0.denom())?;
        st.end()
    }
}

pub fn serialize_rational<S: Serializer>(x: &BigRational, ser: S) -> std::result::Result<S::Ok, S::Error> {
    RationalJson(x).serialize(ser)
}

/// `Σ_{i<=M} w_i + w_{M+1}(b - M)` with `M = ⌊b⌋`; the sum of all weights
/// once `b >= N`.
pub fn lp_optimum(inst: &LpInstance) -> BigRational {
    let m = inst.budget.floor();
    let n = inst.weights.len();
    let full = m.to_integer().to_usize().filter(|&m| m < n);
    match full {
        None => inst.weights.iter().sum(),
        Some(m_int) => {
            let head: BigRational = inst.weights[..m_int].iter().sum();
            head + &inst.weights[m_int] * (&inst.budget - m)
        }
    }
}

fn binomial(n: usize, m: usize) -> BigRational {
    if m > n {
        return BigRational::zero();
    }
    let v = (0..m).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1));
    BigRational::from_integer(v)
}

fn check_budget_args(r: usize, s: usize, k: usize, n1: usize) -> Result<()> {
    if s < 2 || s > r {
        return Err(Error::InvalidArgument(format!("need 2 <= s <= r, got s = {s}, r = {r}")));
    }
    if k == 0 || k > n1 {
        return Err(Error::KOutOfRange { k, reason: format!("need 1 <= k <= n_1 = {n1}") });
    }
    Ok(())
}

fn ratio(a: usize, b: usize) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// `C(r,s) - 1 + (k-1)/n_1`.
pub fn p1_budget(r: usize, s: usize, k: usize, n1: usize) -> Result<BigRational> {
    check_budget_args(r, s, k, n1)?;
    Ok(binomial(r, s) - BigRational::one() + ratio(k - 1, n1))
}

/// `C(r,s) - C(r-2,s-2) + (k-1)/n_1 · C(r-2,s-2)`.
pub fn p2_budget(r: usize, s: usize, k: usize, n1: usize) -> Result<BigRational> {
    check_budget_args(r, s, k, n1)?;
    let c = binomial(r - 2, s - 2);
    Ok(binomial(r, s) - &c + ratio(k - 1, n1) * c)
}

fn part_weights(shape: &Shape) -> Vec<BigRational> {
    (1..=shape.r())
        .combinations(shape.s())
        .map(|a| BigRational::from_integer(BigInt::from(n_a(shape.sizes(), &a))))
        .collect()
}

/// Weights `n_A` over `|A| = s` with the edge budget.
pub fn build_p1(shape: &Shape, k: usize) -> Result<LpInstance> {
    shape.require_canonical()?;
    let budget = p1_budget(shape.r(), shape.s(), k, shape.size(1))?;
    LpInstance::from_unsorted(part_weights(shape), budget)
}

/// Weights `n_A` over `|A| = s` with the clique budget; needs `n_3 = ... = n_r`.
pub fn build_p2(shape: &Shape, k: usize) -> Result<LpInstance> {
    shape.require_canonical()?;
    if shape.sizes()[2.min(shape.r())..].windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::InvalidArgument(format!("the clique program needs n_3 = ... = n_r, got {:?}", shape.sizes())));
    }
    let budget = p2_budget(shape.r(), shape.s(), k, shape.size(1))?;
    LpInstance::from_unsorted(part_weights(shape), budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityMode {
    /// Edges on each `s`-set of parts, against the edge budget.
    P1,
    /// `q`-cliques of a graph on each `q`-set of parts, against the clique budget.
    P2 { clique_order: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Feasibility {
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: BigRational,
    pub ok: bool,
}

/// Evaluates `Σ_A c(V_A)/n_A` and compares it to the budget, where `c(V_A)`
/// counts edges (or cliques) using exactly the parts in `A`.
pub fn feasibility_check(h: &MultipartiteHypergraph, k: usize, mode: FeasibilityMode) -> Result<Feasibility> {
    let shape = h.shape();
    let (r, n1) = (shape.r(), shape.size(1));
    let (order, counts, rhs) = match mode {
        FeasibilityMode::P1 => {
            let s = shape.s();
            let counts = count_cliques_by_support(h, s)?;
            (s, counts, p1_budget(r, s, k, n1)?)
        }
        FeasibilityMode::P2 { clique_order } => {
            if shape.s() != 2 {
                return Err(Error::Uniformity(format!("clique mode needs a graph, got s = {}", shape.s())));
            }
            let counts = count_cliques_by_support(h, clique_order)?;
            (clique_order, counts, p2_budget(r, clique_order, k, n1)?)
        }
    };
    let mut lhs = BigRational::zero();
    for a in (1..=r).combinations(order) {
        let c = counts.get(&a).copied().unwrap_or(0);
        if c > 0 {
            lhs += BigRational::new(BigInt::from(c), BigInt::from(n_a(shape.sizes(), &a)));
        }
    }
    let ok = lhs <= rhs;
    Ok(Feasibility { lhs, rhs, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{g_construction, h2_construction};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(ws: &[i64]) -> Vec<BigRational> {
        ws.iter().map(|&w| q(w, 1)).collect()
    }

    #[test]
    fn optimum_examples() {
        assert_eq!(lp_optimum(&LpInstance::new(ints(&[6, 4, 4, 2]), q(11, 4)).unwrap()), q(13, 1));
        assert_eq!(lp_optimum(&LpInstance::new(ints(&[3, 2]), q(1, 1)).unwrap()), q(3, 1));
        assert_eq!(lp_optimum(&LpInstance::new(ints(&[3, 2]), q(2, 1)).unwrap()), q(5, 1));
        assert_eq!(lp_optimum(&LpInstance::new(ints(&[3, 2]), q(7, 1)).unwrap()), q(5, 1));
        assert_eq!(lp_optimum(&LpInstance::new(ints(&[3, 2]), q(1, 2)).unwrap()), q(3, 2));
    }

    #[test]
    fn instance_validation() {
        assert!(LpInstance::new(ints(&[2, 3]), q(1, 1)).is_err());
        assert!(LpInstance::new(ints(&[2, 0]), q(1, 1)).is_err());
        assert!(LpInstance::new(ints(&[2]), q(-1, 1)).is_err());
        assert_eq!(lp_optimum(&LpInstance::new(ints(&[2]), q(0, 1)).unwrap()), q(0, 1));
        assert!(LpInstance::new(vec![], q(1, 1)).is_err());
    }

    #[test]
    fn budgets() {
        assert_eq!(p1_budget(3, 2, 2, 2).unwrap(), q(5, 2));
        assert_eq!(p2_budget(3, 2, 2, 2).unwrap(), q(5, 2));
        assert_eq!(p1_budget(4, 2, 1, 3).unwrap(), q(5, 1));
        assert_eq!(p2_budget(4, 3, 1, 3).unwrap(), q(2, 1));
        assert!(p1_budget(3, 2, 3, 2).is_err());
    }

    #[test]
    fn programs_match_constructions() {
        let shape = Shape::new(2, vec![2, 2, 2]).unwrap();
        assert_eq!(lp_optimum(&build_p1(&shape, 2).unwrap()), q(10, 1));
        assert_eq!(lp_optimum(&build_p2(&shape, 2).unwrap()), q(10, 1));
        // k = 1 drops the [s] block entirely
        let shape = Shape::new(2, vec![1, 2, 3]).unwrap();
        assert_eq!(lp_optimum(&build_p1(&shape, 1).unwrap()), q(9, 1));
        assert!(build_p2(&Shape::new(2, vec![1, 1, 2, 3]).unwrap(), 1).is_err());
    }

    #[test]
    fn feasibility_examples() {
        let shape = Shape::new(2, vec![2, 2, 2]).unwrap();
        let h2 = h2_construction(&shape, 2).unwrap();
        let f = feasibility_check(&h2, 2, FeasibilityMode::P1).unwrap();
        assert_eq!((f.lhs.clone(), f.rhs.clone(), f.ok), (q(5, 2), q(5, 2), true));
        let g = g_construction(&shape, 2).unwrap();
        let f = feasibility_check(&g, 2, FeasibilityMode::P2 { clique_order: 3 }).unwrap();
        assert_eq!(f.lhs, f.rhs);

        let empty = MultipartiteHypergraph::empty(shape.clone());
        let f = feasibility_check(&empty, 2, FeasibilityMode::P1).unwrap();
        assert!(f.ok && f.lhs.is_zero());

        let full = MultipartiteHypergraph::complete(&shape);
        let f = feasibility_check(&full, 1, FeasibilityMode::P1).unwrap();
        assert_eq!(f.lhs, q(3, 1));
        assert!(!f.ok);
    }

    #[test]
    fn json_encoding() {
        let inst = LpInstance::new(ints(&[3, 2]), q(3, 2)).unwrap();
        assert_eq!(
            serde_json::to_string(&inst).unwrap(),
            r#"{"weights":[{"num":3,"den":1},{"num":2,"den":1}],"budget":{"num":3,"den":2}}"#
        );
    }
}
