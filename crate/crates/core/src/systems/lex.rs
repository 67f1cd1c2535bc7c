//! Lexicographic orderings, the LEX and ACK systems, and ACK₀.
//!
//! With L listing sets in code order, comparing two subsets of Field(L) by
//! the greatest element of their symmetric difference is the same as
//! comparing their bitmasks over L's positions. Everything here enumerates
//! masks and cross-checks against the symmetric difference rule in tests.

use crate::budget::Budget;
use crate::cardarith::two_tower;
use crate::error::{too_large, Error, Result};
use crate::hf::HFSet;
use crate::linord::LinearOrdering;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// A successor that may fall outside the rule's intended domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step<T> {
    Value(T),
    /// The rule's precondition failed; the definition assigns an arbitrary value.
    DontCare,
}

/// l_k as a pure set: the Kuratowski ordering of the first k sets in code order.
pub fn ack_term_set(k: u64) -> HFSet {
    ack_ordering(k).carrier().clone()
}

fn ack_ordering(k: u64) -> LinearOrdering {
    LinearOrdering::from_terms((0..k).map(HFSet::from_code).collect()).expect("codes are distinct")
}

/// X ≤ Y in Lex(L): the L-greatest member of X △ Y, if any, lies in Y.
pub fn lex_le(l: &LinearOrdering, x: &HFSet, y: &HFSet) -> Result<bool> {
    let field = l.field();
    if !x.is_subset(&field) || !y.is_subset(&field) {
        return Err(Error::NotInField);
    }
    let d = x.symmetric_difference(y);
    match d.members().iter().max_by_key(|m| l.position(m)) {
        None => Ok(true),
        Some(top) => Ok(y.contains(top)),
    }
}

fn subset_of_mask(terms: &[HFSet], mask: u64) -> HFSet {
    HFSet::from_members((0..terms.len()).filter(|&i| mask >> i & 1 == 1).map(|i| terms[i].clone()))
}

/// The first m terms of Lex(L).
pub fn lex_prefix(l: &LinearOrdering, m: u64) -> Result<Vec<HFSet>> {
    let n = l.len();
    if n < 64 && m > 1u64 << n {
        return Err(Error::OutOfRange { value: m.to_string(), bound: format!("2^{n}") });
    }
    Ok((0..m).map(|mask| subset_of_mask(l.terms(), mask)).collect())
}

/// Lex(L), the ordering of P(Field(L)).
pub fn lex_step(l: &LinearOrdering, budget: &Budget) -> Result<LinearOrdering> {
    let n = l.len();
    if n >= 64 || 1u64 << n > budget.power {
        return Err(too_large(format!("Lex of a {n}-term ordering"), budget.power));
    }
    LinearOrdering::from_terms(lex_prefix(l, 1 << n)?)
}

/// The ACK index of L_j: 0 for j = 0, else 2_(j-1).
pub fn lex_index(j: u32, max_bits: u64) -> Result<BigUint> {
    if j == 0 {
        Ok(BigUint::zero())
    } else {
        two_tower(j - 1, max_bits)
    }
}

/// L_j = Lex^j([ ]), materialized.
pub fn lex_term(j: u32, budget: &Budget) -> Result<LinearOrdering> {
    let mut l = LinearOrdering::empty();
    for _ in 0..j {
        l = lex_step(&l, budget)?;
    }
    Ok(l)
}

/// The k with L_k ⊆_* l_n ⊊_* L_(k+1).
pub fn lex_anchor_index(n: &BigUint) -> u32 {
    let mut k = 0;
    // 2_(k) bounded by n + 1 keeps every tower step small.
    while lex_index(k + 1, n.bits() + 1).is_ok_and(|next| &next <= n) {
        k += 1;
    }
    k
}

/// The longest LEX term L with L ⊆_* l ⊊_* Lex(L), with its index.
pub fn lex_anchor(l: &LinearOrdering, budget: &Budget) -> Result<Option<(u32, LinearOrdering)>> {
    let mut found = None;
    let mut j = 0;
    loop {
        let idx = lex_index(j, budget.bits)?;
        if idx > BigUint::from(l.len()) {
            break;
        }
        let big = lex_term(j, budget)?;
        let n = big.len();
        let fits = n >= 64 || (l.len() as u64) < 1u64 << n;
        if big.is_prefix_of(l) && fits && lex_prefix(&big, l.len() as u64)?.as_slice() == l.terms() {
            found = Some((j, big));
        }
        j += 1;
    }
    Ok(found)
}

/// σ_ACK on a materialized ordering: the prefix of Lex(L) one longer than l.
pub fn ack_successor(l: &LinearOrdering, budget: &Budget) -> Result<Step<LinearOrdering>> {
    match lex_anchor(l, budget)? {
        None => Ok(Step::DontCare),
        Some((_, anchor)) => Ok(Step::Value(LinearOrdering::from_terms(lex_prefix(&anchor, l.len() as u64 + 1)?)?)),
    }
}

fn is_code(s: &HFSet, i: usize) -> bool {
    if i < 1 << 16 {
        *s == HFSet::from_code(i as u64)
    } else {
        s.code() == Some(&BigUint::from(i))
    }
}

/// Remove the longest run s_0, …, s_k of initial sets (in code order)
/// contained in S and add s_(k+1). On codes this is n ↦ n + 1.
pub fn ack0_successor(s: &HFSet) -> HFSet {
    let members = s.members();
    let j = members.iter().enumerate().take_while(|(i, m)| is_code(m, *i)).count();
    HFSet::from_members(members[j..].iter().cloned().chain([HFSet::decode(&BigUint::from(j))]))
}

/// One ACK term checked against the ACK₀ successor theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ack0Case {
    /// n + 1 for the term [s_0, …, s_n].
    pub term_len: u64,
    /// j for the anchor L_j.
    pub anchor: u32,
    pub subsets: usize,
    /// s_n < σ(s_n) in Lex(L).
    pub clause_i: bool,
    /// σ(s_n) ≤ a for every a ⊆ Field(L) above s_n.
    pub clause_ii: bool,
}

impl Ack0Case {
    pub fn holds(&self) -> bool {
        self.clause_i && self.clause_ii
    }
}

/// Every nonempty ACK term whose anchor has at most `max_field` terms,
/// checked against every subset of the anchor's field.
pub fn ack0_theorem_check(max_field: usize, budget: &Budget) -> Result<Vec<Ack0Case>> {
    let mut out = Vec::new();
    let mut j = 0;
    loop {
        let anchor = lex_term(j, budget)?;
        if anchor.len() > max_field {
            break;
        }
        let subsets = lex_step(&anchor, budget)?;
        let lo = anchor.len().max(1) as u64;
        let hi = 1u64 << anchor.len();
        for m in lo..hi {
            let l = ack_ordering(m);
            let found = lex_anchor(&l, budget)?.map(|(k, _)| k);
            if found != Some(j) {
                return Err(Error::Invalid(format!("l_{m} is anchored at {found:?}, expected L_{j}")));
            }
            let sn = l.last().expect("nonempty").clone();
            let next = ack0_successor(&sn);
            let clause_i = lex_le(&anchor, &sn, &next)? && sn != next;
            let mut clause_ii = true;
            for a in subsets.terms() {
                if lex_le(&anchor, a, &sn)? {
                    continue;
                }
                clause_ii &= lex_le(&anchor, &next, a)?;
            }
            out.push(Ack0Case { term_len: m, anchor: j, subsets: subsets.len(), clause_i, clause_ii });
        }
        j += 1;
    }
    Ok(out)
}

/// For [l_0, …, l_n] anchored at L_k, the size of the number ending at
/// L_(k+3), which should exceed 2^(n+1).
pub fn ack_closure_witness(n: &BigUint, max_bits: u64) -> Result<(u32, BigUint)> {
    let k = lex_anchor_index(n);
    Ok((k, lex_index(k + 3, max_bits)? + 1u8))
}

/// ACK indices of l_k up to `limit` as u64 where possible.
pub(crate) fn small_index(k: &BigUint, limit: u64) -> Result<u64> {
    k.to_u64().filter(|&k| k <= limit).ok_or_else(|| too_large(format!("l_{k}"), limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn c(n: u64) -> HFSet {
        HFSet::from_code(n)
    }

    fn ord(codes: &[u64]) -> LinearOrdering {
        LinearOrdering::from_terms(codes.iter().map(|&n| c(n)).collect()).unwrap()
    }

    #[test]
    fn lex_step_examples() {
        let b = Budget::default();
        assert_eq!(lex_step(&LinearOrdering::empty(), &b).unwrap(), ord(&[0]));
        assert_eq!(lex_step(&ord(&[0]), &b).unwrap(), ord(&[0, 1]));
        // {∅,{∅}} ≤ {{∅},{{∅}}} over [∅,{∅},{{∅}}].
        let l = ord(&[0, 1, 2]);
        assert!(lex_le(&l, &c(0b11), &c(0b110)).unwrap());
        assert!(!lex_le(&l, &c(0b110), &c(0b11)).unwrap());
        assert_eq!(lex_step(&l, &b).unwrap().len(), 8);
    }

    /// Mask order agrees with the symmetric difference rule, for orderings
    /// that are not in code order too.
    #[test]
    fn masks_match_definition() {
        let b = Budget::default();
        for l in [ord(&[2, 0, 5]), ord(&[7, 3, 1, 0]), ord(&[0, 1, 2, 3])] {
            let lx = lex_step(&l, &b).unwrap();
            for (i, x) in lx.terms().iter().enumerate() {
                for (j, y) in lx.terms().iter().enumerate() {
                    assert_eq!(lex_le(&l, x, y).unwrap(), i <= j);
                }
            }
        }
        assert_eq!(lex_le(&ord(&[0]), &c(2), &c(0)), Err(Error::NotInField));
    }

    #[test]
    fn lex_terms_are_ack_terms() {
        let b = Budget::default();
        for j in 0..5 {
            let l = lex_term(j, &b).unwrap();
            let idx = lex_index(j, b.bits).unwrap().to_u64().unwrap();
            assert_eq!(l.carrier(), &ack_term_set(idx));
        }
        assert_eq!(lex_index(5, b.bits).unwrap(), BigUint::from(65536u32));
        assert_eq!(lex_index(6, b.bits).unwrap(), BigUint::one() << 65536);
    }

    #[test]
    fn ack_successor_examples() {
        let b = Budget::default();
        assert_eq!(ack_successor(&LinearOrdering::empty(), &b).unwrap(), Step::Value(ord(&[0])));
        assert_eq!(ack_successor(&ord(&[0, 1]), &b).unwrap(), Step::Value(ord(&[0, 1, 2])));
        // l_4 is the LEX term L_3; its successor starts Lex(l_4) = l_16.
        assert_eq!(ack_successor(&ord(&[0, 1, 2, 3]), &b).unwrap(), Step::Value(ord(&[0, 1, 2, 3, 4])));
        assert_eq!(ack_successor(&ord(&[1, 0]), &b).unwrap(), Step::DontCare);
        for k in 0..40 {
            assert_eq!(ack_successor(&ack_ordering(k), &b).unwrap(), Step::Value(ack_ordering(k + 1)), "l_{k}");
        }
    }

    #[test]
    fn anchors() {
        let b = Budget::default();
        let expect = |n: u64| match n {
            0 => 0,
            1 => 1,
            2..=3 => 2,
            4..=15 => 3,
            _ => 4,
        };
        for n in 0..40u64 {
            assert_eq!(lex_anchor_index(&BigUint::from(n)), expect(n));
            assert_eq!(lex_anchor(&ack_ordering(n), &b).unwrap().unwrap().0, expect(n));
        }
        assert_eq!(lex_anchor_index(&BigUint::from(65536u32)), 5);
    }

    #[test]
    fn ack0_examples() {
        assert_eq!(ack0_successor(&c(0)), c(1));
        assert_eq!(ack0_successor(&c(1)), c(2));
        assert_eq!(ack0_successor(&c(2)), c(3));
        let mut s = c(0);
        for k in 1..=1024u64 {
            s = ack0_successor(&s);
            assert_eq!(s, c(k));
        }
    }

    #[test]
    fn ack0_theorem() {
        let cases = ack0_theorem_check(4, &Budget::default()).unwrap();
        assert_eq!(cases.len(), 15);
        assert!(cases.iter().all(Ack0Case::holds));
    }

    #[test]
    fn closure_witness() {
        for n in 0..16u64 {
            let (k, w) = ack_closure_witness(&BigUint::from(n), 1 << 20).unwrap();
            assert!(k <= 3);
            assert!(w > BigUint::one() << (n + 1));
        }
    }
}
