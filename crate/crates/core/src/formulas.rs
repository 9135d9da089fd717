//! Closed-form extremal values and theorem preconditions.
//!
//! Everything is evaluated in arbitrary precision. Evaluators refuse
//! non-ascending part sizes; use [`Shape::canonicalize`](crate::Shape::canonicalize)
//! first when the input order is arbitrary. Values are computed for every
//! `k >= 1`; whether the corresponding theorem actually applies is reported
//! separately through [`hypothesis_check`] and [`FormulaResult::hypothesis_ok`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// `n_A = prod_{i in A} n_i` for a 1-based index set `A`; `n_∅ = 1`.
pub fn n_a(sizes: &[usize], set: &[usize]) -> BigUint {
    set.iter().map(|&i| BigUint::from(sizes[i - 1])).product()
}

/// Sum of `n_A` over all `m`-subsets `A` of the given values (the elementary
/// symmetric polynomial `e_m`). `e_0 = 1`, and `e_m = 0` for `m > len`.
pub fn subset_product_sum(values: &[usize], m: usize) -> BigUint {
    let mut e = vec![BigUint::zero(); m + 1];
    e[0] = BigUint::one();
    for &x in values {
        let x = BigUint::from(x);
        for j in (1..=m).rev() {
            let add = &e[j - 1] * &x;
            e[j] += add;
        }
    }
    e.swap_remove(m)
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn check_ascending(sizes: &[usize]) -> Result<()> {
    if sizes.windows(2).all(|w| w[0] <= w[1]) {
        Ok(())
    } else {
        Err(Error::NotCanonical(sizes.to_vec()))
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::KOutOfRange { k, reason: "k must be at least 1".into() })
    } else {
        Ok(())
    }
}

fn check_sizes(s: usize, sizes: &[usize]) -> Result<()> {
    let r = sizes.len();
    if r < 2 || s < 2 || s > r {
        return Err(Error::InvalidShape(format!("need 2 <= s <= r, got s = {s}, r = {r}")));
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidShape("part sizes must be positive".into()));
    }
    check_ascending(sizes)
}

/// `f_k^(s)(n_2,...,n_r) = (k-1) * sum_{A ⊂ [2,r], |A| = s-1} n_A`.
/// `tail` holds `n_2, ..., n_r`.
pub fn f_value(s: usize, k: usize, tail: &[usize]) -> Result<BigUint> {
    check_k(k)?;
    if s < 2 || s > tail.len() + 1 {
        return Err(Error::InvalidShape(format!("need 2 <= s <= r = {}, got s = {s}", tail.len() + 1)));
    }
    if tail.contains(&0) {
        return Err(Error::InvalidShape("part sizes must be positive".into()));
    }
    check_ascending(tail)?;
    Ok(BigUint::from(k - 1) * subset_product_sum(tail, s - 1))
}

/// `g_k^(s) = sum_{|A| = s} n_A - n_[s] + (k-1) n_[2,s]`.
pub fn g_value(s: usize, k: usize, sizes: &[usize]) -> Result<BigUint> {
    check_k(k)?;
    check_sizes(s, sizes)?;
    let head: Vec<usize> = (1..=s).collect();
    let total = subset_product_sum(sizes, s);
    Ok(total - n_a(sizes, &head) + BigUint::from(k - 1) * n_a(sizes, &head[1..]))
}

/// `h_k^(s) = sum_{|A| = s, {1,2} ⊄ A} n_A + (k-1) n_2 sum_{A ⊂ [3,r], |A| = s-2} n_A`.
pub fn h_value(s: usize, k: usize, sizes: &[usize]) -> Result<BigUint> {
    check_k(k)?;
    check_sizes(s, sizes)?;
    let (n1, n2) = (BigUint::from(sizes[0]), BigUint::from(sizes[1]));
    let rest = subset_product_sum(&sizes[2..], s - 2);
    let without_both = subset_product_sum(sizes, s) - &n1 * &n2 * &rest;
    Ok(without_both + BigUint::from(k - 1) * n2 * rest)
}

/// `(k-1) n_2 ... n_r`, the value for `s = r`.
pub fn lemma21_value(k: usize, sizes: &[usize]) -> Result<BigUint> {
    check_k(k)?;
    check_sizes(2, sizes)?;
    Ok(BigUint::from(k - 1) * sizes[1..].iter().map(|&n| BigUint::from(n)).product::<BigUint>())
}

/// `(k-1)(n_2 + ... + n_r)`, the graph matching value.
pub fn thm11_value(k: usize, sizes: &[usize]) -> Result<BigUint> {
    check_k(k)?;
    check_sizes(2, sizes)?;
    Ok(BigUint::from(k - 1) * sizes[1..].iter().map(|&n| BigUint::from(n)).sum::<BigUint>())
}

/// `sum_{i<j} n_i n_j - n_1 n_2 + (k-1) n_2`, the graph `kK_r` value.
pub fn thm12_value(k: usize, sizes: &[usize]) -> Result<BigUint> {
    check_k(k)?;
    check_sizes(2, sizes)?;
    let mut pairs = BigUint::zero();
    for i in 0..sizes.len() {
        for j in i + 1..sizes.len() {
            pairs += BigUint::from(sizes[i] * sizes[j]);
        }
    }
    Ok(pairs - BigUint::from(sizes[0] * sizes[1]) + BigUint::from((k - 1) * sizes[1]))
}

/// `max{ C(ks-1, s), C(n, s) - C(n-k+1, s) }`.
pub fn emc_value(n: usize, s: usize, k: usize) -> Result<BigUint> {
    check_k(k)?;
    if s == 0 {
        return Err(Error::InvalidArgument("uniformity must be positive".into()));
    }
    if n < s * k {
        return Err(Error::InvalidArgument(format!("need n >= s*k = {}, got n = {n}", s * k)));
    }
    let small = binomial(k * s - 1, s);
    let star = binomial(n, s) - binomial(n - k + 1, s);
    Ok(small.max(star))
}

/// `(r+1)^(r+1) (k-1) k^(2r)`.
pub fn rainbow_bound(r: usize, k: usize) -> Result<BigUint> {
    if r == 0 || k == 0 {
        return Err(Error::InvalidArgument("r and k must be at least 1".into()));
    }
    let r32 = u32::try_from(r).map_err(|_| Error::InvalidArgument("r too large".into()))?;
    Ok(BigUint::from(r + 1).pow(r32 + 1) * BigUint::from(k - 1) * BigUint::from(k).pow(2 * r32))
}

/// Theorem preconditions known to [`hypothesis_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Graph matchings, `k <= n_1`.
    Thm11,
    /// Graph `kK_r`, `k <= n_1`.
    Thm12,
    /// s-graph matchings with the large-`n_1` thresholds.
    Thm13,
    /// s-graph `kK_r`, `k <= n_1`.
    Thm14,
    /// Clique counts with `n_3 = ... = n_r`.
    Thm15,
    /// Clique counts with `r >= 4` and `n_4 >= r^r (k-1) k^(2r-2)`.
    Thm16,
    /// Rainbow matching bound, `r, k >= 2`.
    Thm41,
    /// `s = r` matchings, `k <= n_1`.
    Lemma21,
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "thm11" => Theorem::Thm11,
            "thm12" => Theorem::Thm12,
            "thm13" => Theorem::Thm13,
            "thm14" => Theorem::Thm14,
            "thm15" => Theorem::Thm15,
            "thm16" => Theorem::Thm16,
            "thm41" => Theorem::Thm41,
            "lemma21" => Theorem::Lemma21,
            other => return Err(Error::UnknownTheorem(other.to_string())),
        })
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Theorem::Thm11 => "thm11",
            Theorem::Thm12 => "thm12",
            Theorem::Thm13 => "thm13",
            Theorem::Thm14 => "thm14",
            Theorem::Thm15 => "thm15",
            Theorem::Thm16 => "thm16",
            Theorem::Thm41 => "thm41",
            Theorem::Lemma21 => "lemma21",
        };
        f.write_str(name)
    }
}

/// Evaluates the precondition of `theorem` at `(s, k, n_1..n_r)`, with
/// `r = sizes.len()`. For [`Theorem::Thm41`] only `r` and `k` matter.
pub fn hypothesis_check(theorem: Theorem, s: usize, k: usize, sizes: &[usize]) -> Result<bool> {
    let r = sizes.len();
    if theorem == Theorem::Thm41 {
        return Ok(r >= 2 && k >= 2);
    }
    check_k(k)?;
    check_sizes(s, sizes)?;
    let n1 = sizes[0];
    let k_fits = k <= n1;
    Ok(match theorem {
        Theorem::Thm11 | Theorem::Thm12 => s == 2 && k_fits,
        Theorem::Lemma21 => s == r && k_fits,
        Theorem::Thm13 => {
            let (n1, s, k, r) = (n1 as u128, s as u128, k as u128, r as u128);
            if s + 2 <= r {
                n1 >= s.pow(3) * k + s * r
            } else if s + 1 == r {
                n1 >= s.pow(3) * k * k + s * r
            } else {
                n1 >= k
            }
        }
        Theorem::Thm14 => k_fits,
        Theorem::Thm15 => k_fits && sizes[2..].windows(2).all(|w| w[0] == w[1]),
        Theorem::Thm16 => {
            if r < 4 || !k_fits {
                false
            } else {
                let r32 = r as u32;
                let need = BigUint::from(r).pow(r32) * BigUint::from(k - 1) * BigUint::from(k).pow(2 * r32 - 2);
                BigUint::from(sizes[3]) >= need
            }
        }
        Theorem::Thm41 => unreachable!(),
    })
}

/// Which closed form a [`FormulaResult`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaId {
    F,
    G,
    H,
    Thm11,
    Thm12,
    Lemma21,
    Emc,
    RainbowBound,
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "f" => FormulaId::F,
            "g" => FormulaId::G,
            "h" => FormulaId::H,
            "thm11" => FormulaId::Thm11,
            "thm12" => FormulaId::Thm12,
            "lemma21" => FormulaId::Lemma21,
            "emc" => FormulaId::Emc,
            "rainbow-bound" | "rainbow_bound" => FormulaId::RainbowBound,
            other => return Err(Error::InvalidArgument(format!("unknown formula `{other}`"))),
        })
    }
}

/// Echo of the evaluator inputs; absent fields are omitted in JSON.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FormulaInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub k: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaResult {
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
    pub formula_id: FormulaId,
    pub inputs: FormulaInputs,
    pub hypothesis_ok: bool,
}

/// JSON number when it fits in 64 bits, decimal string otherwise.
pub fn serialize_big<S: Serializer>(v: &BigUint, ser: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => ser.serialize_u64(x),
        None => ser.serialize_str(&v.to_string()),
    }
}

/// Evaluates one formula with its hypothesis flag. `sizes` is always the full
/// `n_1..n_r` list (the `f` evaluator only reads `n_2..n_r`); `emc` reads `n`,
/// and `rainbow_bound` reads `r`.
pub fn evaluate(id: FormulaId, inputs: FormulaInputs) -> Result<FormulaResult> {
    let k = inputs.k;
    let sizes = inputs.sizes.as_slice();
    let s = inputs.s;
    let need_s = || s.ok_or_else(|| Error::InvalidArgument("this formula needs s".into()));
    let (value, hypothesis_ok) = match id {
        FormulaId::F => {
            let s = need_s()?;
            check_sizes(s, sizes)?;
            (f_value(s, k, &sizes[1..])?, hypothesis_check(Theorem::Thm13, s, k, sizes)?)
        }
        FormulaId::G => {
            let s = need_s()?;
            (g_value(s, k, sizes)?, hypothesis_check(Theorem::Thm14, s, k, sizes)?)
        }
        FormulaId::H => {
            let s = need_s()?;
            let ok = hypothesis_check(Theorem::Thm15, s, k, sizes)? || hypothesis_check(Theorem::Thm16, s, k, sizes)?;
            (h_value(s, k, sizes)?, ok)
        }
        FormulaId::Thm11 => (thm11_value(k, sizes)?, hypothesis_check(Theorem::Thm11, 2, k, sizes)?),
        FormulaId::Thm12 => (thm12_value(k, sizes)?, hypothesis_check(Theorem::Thm12, 2, k, sizes)?),
        FormulaId::Lemma21 => {
            let r = sizes.len();
            (lemma21_value(k, sizes)?, hypothesis_check(Theorem::Lemma21, r, k, sizes)?)
        }
        FormulaId::Emc => {
            let s = need_s()?;
            let n = inputs.n.ok_or_else(|| Error::InvalidArgument("emc needs n".into()))?;
            (emc_value(n, s, k)?, true)
        }
        FormulaId::RainbowBound => {
            let r = inputs.r.ok_or_else(|| Error::InvalidArgument("rainbow bound needs r".into()))?;
            (rainbow_bound(r, k)?, k >= 2 && r >= 2)
        }
    };
    let r = sizes.len();
    let mut inputs = inputs;
    if id != FormulaId::Emc && id != FormulaId::RainbowBound {
        inputs.r = Some(r);
    }
    Ok(FormulaResult { value, formula_id: id, inputs, hypothesis_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    /// Term-by-term reference: sum of n_A over explicit index subsets.
    fn brute_sum(sizes: &[usize], pool: &[usize], m: usize) -> BigUint {
        pool.iter().copied().combinations(m).map(|a| n_a(sizes, &a)).sum()
    }

    #[test]
    fn subset_product_sum_matches_enumeration() {
        let sizes = [1, 2, 2, 3, 4];
        let pool: Vec<usize> = (1..=5).collect();
        for m in 0..=6 {
            assert_eq!(subset_product_sum(&sizes, m), brute_sum(&sizes, &pool, m), "m = {m}");
        }
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_value(2, 2, &[2, 2]).unwrap(), big(4));
        assert_eq!(f_value(3, 1, &[2, 2, 3]).unwrap(), big(0));
        assert_eq!(f_value(3, 2, &[2, 2, 3]).unwrap(), big(16));
        assert!(f_value(2, 2, &[3, 2]).is_err());
        assert!(f_value(4, 2, &[2, 2]).is_err());
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_value(2, 2, &[2, 2, 2]).unwrap(), big(10));
        assert_eq!(g_value(3, 3, &[2, 3, 4]).unwrap(), big(2 * 12));
        assert_eq!(g_value(2, 2, &[1, 2, 2, 3]).unwrap(), big(23));
        assert!(g_value(2, 2, &[2, 1, 2]).is_err());
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_value(2, 2, &[2, 2, 2]).unwrap(), big(10));
        assert_eq!(h_value(3, 2, &[2, 2, 2]).unwrap(), big(4));
        assert_eq!(h_value(4, 3, &[3, 3, 4, 5]).unwrap(), big(2 * 3 * 4 * 5));
    }

    #[test]
    fn h_matches_definition_by_enumeration() {
        let sizes = [1, 2, 3, 3, 4];
        for s in 2..=5 {
            for k in 1..=3 {
                let mut want = BigUint::zero();
                for a in (1..=5).combinations(s) {
                    if !(a.contains(&1) && a.contains(&2)) {
                        want += n_a(&sizes, &a);
                    }
                }
                want += BigUint::from(k - 1) * big(2) * brute_sum(&sizes, &[3, 4, 5], s - 2);
                assert_eq!(h_value(s, k, &sizes).unwrap(), want);
            }
        }
    }

    #[test]
    fn theorem_values() {
        assert_eq!(lemma21_value(2, &[2, 2, 2]).unwrap(), big(4));
        assert_eq!(thm11_value(2, &[2, 2, 2]).unwrap(), big(4));
        assert_eq!(thm12_value(2, &[2, 2, 2]).unwrap(), big(10));
    }

    #[test]
    fn hypothesis_violation_is_flagged_not_rejected() {
        let res = evaluate(FormulaId::Thm11, FormulaInputs { k: 3, sizes: vec![2, 2, 2], ..Default::default() }).unwrap();
        assert!(!res.hypothesis_ok);
        assert_eq!(res.value, big(8));
    }

    #[test]
    fn emc_examples() {
        assert_eq!(emc_value(4, 2, 2).unwrap(), big(3));
        assert_eq!(emc_value(5, 2, 2).unwrap(), big(4));
        assert_eq!(emc_value(7, 3, 1).unwrap(), big(0));
        assert!(emc_value(3, 2, 2).is_err());
    }

    #[test]
    fn rainbow_examples() {
        assert_eq!(rainbow_bound(2, 2).unwrap(), big(432));
        assert_eq!(rainbow_bound(5, 1).unwrap(), big(0));
        assert_eq!(rainbow_bound(6, 10).unwrap(), BigUint::from(7u64.pow(7)) * big(9) * BigUint::from(10u64).pow(12));
    }

    #[test]
    fn hypotheses() {
        assert!(hypothesis_check(Theorem::Thm13, 3, 2, &[2, 2, 2]).unwrap());
        assert!(!hypothesis_check(Theorem::Thm13, 3, 2, &[2, 2, 2, 2]).unwrap());
        // s = r - 1 needs n_1 >= s^3 k^2 + s r = 27*4 + 12 = 120.
        assert!(hypothesis_check(Theorem::Thm13, 3, 2, &[120, 120, 120, 120]).unwrap());
        assert!(!hypothesis_check(Theorem::Thm13, 3, 2, &[119, 120, 120, 120]).unwrap());
        // s <= r - 2 needs n_1 >= s^3 k + s r = 27*2 + 15 = 69.
        assert!(hypothesis_check(Theorem::Thm13, 3, 2, &[69; 5]).unwrap());
        assert!(!hypothesis_check(Theorem::Thm13, 3, 2, &[68, 69, 69, 69, 69]).unwrap());
        assert!(hypothesis_check(Theorem::Thm15, 2, 2, &[2, 3, 4]).unwrap());
        assert!(!hypothesis_check(Theorem::Thm15, 2, 2, &[2, 3, 3, 4]).unwrap());
        assert!(hypothesis_check(Theorem::Thm16, 2, 1, &[1, 1, 1, 1]).unwrap());
        // 4^4 * 1 * 2^6 = 16384.
        assert!(!hypothesis_check(Theorem::Thm16, 2, 2, &[2, 2, 2, 16383]).unwrap());
        assert!(hypothesis_check(Theorem::Thm16, 2, 2, &[2, 2, 2, 16384]).unwrap());
        assert!("thm99".parse::<Theorem>().is_err());
    }

    #[test]
    fn formula_result_json() {
        let res = evaluate(FormulaId::G, FormulaInputs { s: Some(2), k: 2, sizes: vec![2, 2, 2], ..Default::default() }).unwrap();
        let json = serde_json::to_string(&res).unwrap();
        assert_eq!(
            json,
            r#"{"value":10,"formula_id":"g","inputs":{"s":2,"r":3,"k":2,"sizes":[2,2,2]},"hypothesis_ok":true}"#
        );
        let huge = evaluate(FormulaId::RainbowBound, FormulaInputs { r: Some(12), k: 9, ..Default::default() }).unwrap();
        assert!(serde_json::to_value(&huge).unwrap()["value"].is_string());
    }
}
