//! Cardinal arithmetic on sets and on sizes, plus rank.
//!
//! The set-level constructions follow the definitions literally and only
//! work on tiny inputs; the size-level versions are what callers normally use.

use crate::budget::Budget;
use crate::error::{too_large, Error, Result};
use crate::hf::HFSet;
use crate::linord::LinearOrdering;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::fmt;

/// The size |S| of a set. ≃_c and ≤_c are = and ≤ on these.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CardinalSize(pub BigUint);

impl CardinalSize {
    pub fn of(s: &HFSet) -> CardinalSize {
        CardinalSize(BigUint::from(s.len()))
    }
}

impl From<u64> for CardinalSize {
    fn from(n: u64) -> Self {
        CardinalSize(BigUint::from(n))
    }
}

impl fmt::Display for CardinalSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for CardinalSize {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

pub fn equinumerous(a: &HFSet, b: &HFSet) -> bool {
    a.len() == b.len()
}

/// The von Neumann natural n = {0, …, n−1}.
pub fn vn(n: usize) -> HFSet {
    let mut acc = HFSet::empty();
    for _ in 0..n {
        acc = acc.with(acc.clone());
    }
    acc
}

fn subsets_by_size(s: &HFSet) -> Vec<Vec<HFSet>> {
    let n = s.len();
    let kids = s.members();
    let mut classes = vec![Vec::new(); n + 1];
    for mask in 0u64..1 << n {
        let sub = HFSet::from_members((0..n).filter(|&i| mask >> i & 1 == 1).map(|i| kids[i].clone()));
        classes[mask.count_ones() as usize].push(sub);
    }
    classes
}

fn card_ordering(s: &HFSet, budget: &Budget) -> Result<LinearOrdering> {
    if s.len() > budget.card {
        return Err(too_large(format!("Card of a {}-element set", s.len()), budget.card));
    }
    // Classes of proper subsets under ≃_c, in increasing size.
    let mut classes = subsets_by_size(s);
    classes.pop();
    LinearOrdering::from_terms(classes.into_iter().map(HFSet::from_members).collect())
}

/// Card(S): the proper initial segments of the ordering of the classes of
/// proper subsets of S. One member of each size below |S|.
pub fn card_exact(s: &HFSet, budget: &Budget) -> Result<HFSet> {
    Ok(card_ordering(s, budget)?.in_seg())
}

/// Ord(S): Card(S) ordered by increasing cardinality.
pub fn ord_exact(s: &HFSet, budget: &Budget) -> Result<LinearOrdering> {
    let l = card_ordering(s, budget)?;
    LinearOrdering::from_terms(l.initial_segments().into_iter().map(|p| p.carrier().clone()).collect())
}

pub fn rank_fast(s: &HFSet) -> u32 {
    s.rank()
}

/// Rank(S): the ε-chains for S grouped by length, ordered by length.
pub fn rank_exact(s: &HFSet, budget: &Budget) -> Result<LinearOrdering> {
    let fan = s.epsilon_fan(budget)?;
    let mut by_len: Vec<Vec<HFSet>> = Vec::new();
    for chain in fan.members() {
        let k = chain.len();
        if by_len.len() < k {
            by_len.resize(k, Vec::new());
        }
        by_len[k - 1].push(chain.clone());
    }
    LinearOrdering::from_terms(by_len.into_iter().map(HFSet::from_members).collect())
}

pub fn succ_c(a: &HFSet) -> HFSet {
    a.with(a.clone())
}

pub fn product(a: &HFSet, b: &HFSet) -> HFSet {
    HFSet::from_members(
        a.members()
            .iter()
            .flat_map(|x| b.members().iter().map(move |y| HFSet::ordered_pair(x.clone(), y.clone()))),
    )
}

/// (a × {0}) ∪ (b × {1})
pub fn add_c(a: &HFSet, b: &HFSet) -> HFSet {
    product(a, &vn(1)).union(&product(b, &HFSet::singleton(vn(1))))
}

pub fn mul_c(a: &HFSet, b: &HFSet) -> HFSet {
    product(a, b)
}

/// a^b: all functions from b to a, as sets of ordered pairs.
pub fn exp_c(a: &HFSet, b: &HFSet, budget: &Budget) -> Result<HFSet> {
    let size = (a.len() as u128).checked_pow(b.len() as u32);
    if size.is_none_or(|n| n > budget.exp as u128) {
        return Err(too_large(format!("{}^{} functions", a.len(), b.len()), budget.exp));
    }
    let mut funcs = vec![HFSet::empty()];
    for x in b.members() {
        let mut next = Vec::with_capacity(funcs.len() * a.len());
        for f in &funcs {
            for y in a.members() {
                next.push(f.with(HFSet::ordered_pair(x.clone(), y.clone())));
            }
        }
        funcs = next;
    }
    Ok(HFSet::from_members(funcs))
}

pub fn size_pow(base: &BigUint, exp: u64, max_bits: u64) -> Result<BigUint> {
    if base.is_zero() || base.is_one() || exp == 0 {
        return Ok(if exp == 0 { BigUint::one() } else { base.clone() });
    }
    let bits = (base.bits() - 1).saturating_mul(exp);
    if bits > max_bits {
        return Err(too_large(format!("{base}^{exp}"), format!("{max_bits} bits")));
    }
    Ok(base.pow(exp as u32))
}

/// Least x with a ≤ x^n.
pub fn nth_root(n: u32, a: &BigUint) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Invalid("0th root".into()));
    }
    let mut x = a.nth_root(n);
    if &x.pow(n) < a {
        x += 1u8;
    }
    Ok(x)
}

/// Least x with a ≤ S^x.
pub fn log_base(s: &BigUint, a: &BigUint) -> Result<BigUint> {
    if s < &BigUint::from(2u8) {
        return Err(Error::Invalid(format!("logarithm to base {s}")));
    }
    let mut x = 0u64;
    let mut p = BigUint::one();
    while &p < a {
        p *= s;
        x += 1;
    }
    Ok(BigUint::from(x))
}

/// 2_k, with 2_0 = 1 and 2_(k+1) = 2^(2_k).
pub fn two_tower(k: u32, max_bits: u64) -> Result<BigUint> {
    tower(&BigUint::one(), k, max_bits)
}

/// 2^a_b: b-fold iterated exponentiation starting from a.
pub fn tower(a: &BigUint, b: u32, max_bits: u64) -> Result<BigUint> {
    let mut v = a.clone();
    for _ in 0..b {
        let e = v
            .to_u64()
            .filter(|&e| e <= max_bits)
            .ok_or_else(|| too_large("tower value", format!("{max_bits} bits")))?;
        v = BigUint::one() << e;
    }
    Ok(v)
}

/// Least x with a ≤ 2_x.
pub fn suplog2(a: &BigUint) -> u32 {
    let mut x = 0;
    let mut t = BigUint::one();
    while &t < a {
        // a fits in memory, so 2^t overshoots it long before t is huge
        let e = t.to_u64().expect("tower step exceeded a machine word");
        t = BigUint::one() << e;
        x += 1;
    }
    x
}

pub fn monus(a: &BigUint, b: &BigUint) -> BigUint {
    if a > b {
        a - b
    } else {
        BigUint::zero()
    }
}

pub fn bounded_sum(phi: impl Fn(u64) -> BigUint, s: u64) -> BigUint {
    (0..s).map(phi).sum()
}

pub fn bounded_product(phi: impl Fn(u64) -> BigUint, s: u64) -> BigUint {
    (0..s).map(phi).product()
}

/// The ordering L witnessing 2^a_b = c: First ≃ a, each next term is 2^
/// of its predecessor, Last ≃ c and |L| = b + 1. Terms are von Neumann
/// naturals, one of each size, as in Card(c + 1).
pub fn iterexp_witness(a: u64, b: u64, c: u64, bound: u64) -> Option<LinearOrdering> {
    let mut sizes = vec![a];
    for _ in 0..b {
        let last = *sizes.last().unwrap();
        let next = if last >= 64 { return None } else { 1u64 << last };
        if next > bound {
            return None;
        }
        sizes.push(next);
    }
    if *sizes.last().unwrap() != c || sizes.iter().any(|&s| s > bound) {
        return None;
    }
    LinearOrdering::from_terms(sizes.iter().map(|&s| vn(s as usize)).collect()).ok()
}

/// Clauses (a)–(d) of the graph relation, checked on a candidate ordering.
pub fn is_iterexp_witness(l: &LinearOrdering, a: u64, b: u64, c: u64) -> bool {
    let sizes: Vec<u64> = l.terms().iter().map(|t| t.len() as u64).collect();
    !sizes.is_empty()
        && sizes[0] == a
        && sizes.windows(2).all(|w| w[0] < 64 && w[1] == 1 << w[0])
        && *sizes.last().unwrap() == c
        && sizes.len() as u64 == b + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u64) -> HFSet {
        HFSet::from_code(n)
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn card_examples() {
        let b = Budget::default();
        assert!(card_exact(&c(0), &b).unwrap().is_empty());
        assert_eq!(card_exact(&c(1), &b).unwrap().len(), 1);
        let card = card_exact(&c(11), &b).unwrap();
        let mut sizes: Vec<usize> = card.members().iter().map(HFSet::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![0, 1, 2]);
        assert!(card_exact(&vn(5), &b).is_err());
        let ord = ord_exact(&c(11), &b).unwrap();
        assert_eq!(ord.terms().iter().map(HFSet::len).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn rank_examples() {
        let b = Budget::default();
        assert_eq!(rank_fast(&c(0)), 0);
        assert!(rank_exact(&c(0), &b).unwrap().is_empty());
        assert_eq!(rank_fast(&c(3)), 2);
        let s = c(1 << 16);
        assert_eq!(rank_fast(&s), 1 + rank_fast(&c(16)));
        assert_eq!(rank_exact(&c(11), &b).unwrap().len(), 3);
    }

    #[test]
    fn arithmetic_examples() {
        let b = Budget::default();
        assert_eq!(succ_c(&c(0)), c(1));
        assert_eq!(add_c(&vn(2), &vn(3)).len(), 5);
        assert_eq!(mul_c(&vn(2), &vn(3)).len(), 6);
        assert_eq!(exp_c(&vn(2), &vn(3), &b).unwrap().len(), 8);
        assert_eq!(exp_c(&vn(3), &vn(0), &b).unwrap().len(), 1);
        assert_eq!(exp_c(&vn(0), &vn(2), &b).unwrap().len(), 0);
    }

    #[test]
    fn root_log_examples() {
        assert_eq!(nth_root(2, &big(9)).unwrap(), big(3));
        assert_eq!(nth_root(2, &big(10)).unwrap(), big(4));
        assert_eq!(nth_root(3, &big(0)).unwrap(), big(0));
        assert_eq!(log_base(&big(2), &big(8)).unwrap(), big(3));
        assert_eq!(log_base(&big(2), &big(5)).unwrap(), big(3));
        assert_eq!(log_base(&big(10), &big(1)).unwrap(), big(0));
        assert!(log_base(&big(1), &big(5)).is_err());
    }

    #[test]
    fn root_log_scan_oracle() {
        for a in 0..2000u64 {
            for n in 1..5u32 {
                let scan = (0..).find(|x: &u64| x.pow(n) >= a).unwrap();
                assert_eq!(nth_root(n, &big(a)).unwrap(), big(scan));
            }
            for s in 2..6u64 {
                let scan = (0..).find(|&x| s.pow(x) >= a).unwrap();
                assert_eq!(log_base(&big(s), &big(a)).unwrap(), big(scan as u64));
            }
        }
    }

    #[test]
    fn suplog_examples() {
        assert_eq!(suplog2(&big(1)), 0);
        assert_eq!(suplog2(&big(5)), 3);
        assert_eq!(suplog2(&big(16)), 3);
        assert_eq!(suplog2(&big(17)), 4);
        assert_eq!(suplog2(&big(0)), 0);
    }

    #[test]
    fn towers() {
        let t: Vec<BigUint> = (0..5).map(|k| two_tower(k, 1 << 20).unwrap()).collect();
        assert_eq!(t, vec![big(1), big(2), big(4), big(16), big(65536)]);
        assert_eq!(two_tower(5, 1 << 20).unwrap().bits(), 65537);
        assert!(two_tower(6, 1 << 20).is_err());
    }

    #[test]
    fn witness_examples() {
        let w = iterexp_witness(1, 2, 4, 100).unwrap();
        assert_eq!(w.terms().iter().map(HFSet::len).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(is_iterexp_witness(&w, 1, 2, 4));
        assert_eq!(iterexp_witness(1, 0, 1, 100).unwrap().len(), 1);
        assert!(iterexp_witness(1, 2, 5, 100).is_none());
        assert!(iterexp_witness(1, 3, 16, 10).is_none());
    }

    #[test]
    fn sums_and_products() {
        assert_eq!(bounded_sum(big, 4), big(6));
        assert_eq!(bounded_product(|x| big(x + 1), 4), big(24));
        assert_eq!(bounded_sum(|_| big(0), 17), big(0));
        assert_eq!(monus(&big(3), &big(5)), big(0));
    }
}
