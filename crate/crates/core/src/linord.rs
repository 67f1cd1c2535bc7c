//! Kuratowski linear orderings: an ordering is the set of the fields of its
//! nonempty initial segments.

use crate::error::{Error, Result};
use crate::hf::HFSet;
use once_cell::sync::OnceCell;
use serde_json::Value;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

/// A validated Kuratowski ordering. The carrier is the source of truth; the
/// term list and position index are derived caches.
#[derive(Clone)]
pub struct LinearOrdering {
    carrier: HFSet,
    terms: Arc<[HFSet]>,
    index: Arc<OnceCell<HashMap<u64, usize>>>,
}

/// Clauses (i)–(iv) checked literally. Quadratic, used for cross-checks.
pub fn validate_clauses(s: &HFSet) -> bool {
    let members = s.members();
    if s.contains(&HFSet::empty()) {
        return false;
    }
    if !s.is_empty() && !members.iter().any(|x| x.len() == 1) {
        return false;
    }
    let field = s.union_all();
    for x in members {
        if *x == field {
            continue;
        }
        let extends = field
            .members()
            .iter()
            .any(|y| !x.contains(y) && s.contains(&x.with(y.clone())));
        if !extends {
            return false;
        }
    }
    members
        .iter()
        .enumerate()
        .all(|(i, x)| members[i + 1..].iter().all(|y| x.is_subset(y) || y.is_subset(x)))
}

/// Same answer as `validate_clauses`: the members, sorted by size, must
/// have sizes 1, 2, …, n and each must include its predecessor.
pub fn validate(s: &HFSet) -> bool {
    chain_terms(s).is_some()
}

fn chain_terms(s: &HFSet) -> Option<Vec<HFSet>> {
    let n = s.len();
    let mut by_size: Vec<Option<&HFSet>> = vec![None; n + 1];
    for x in s.members() {
        let k = x.len();
        if k == 0 || k > n || by_size[k].is_some() {
            return None;
        }
        by_size[k] = Some(x);
    }
    let mut terms = Vec::with_capacity(n);
    let mut prev = HFSet::empty();
    for seg in by_size.into_iter().skip(1) {
        let seg = seg?;
        if !prev.is_subset(seg) {
            return None;
        }
        terms.push(seg.difference(&prev).members()[0].clone());
        prev = seg.clone();
    }
    Some(terms)
}

impl LinearOrdering {
    fn build(carrier: HFSet, terms: Vec<HFSet>) -> LinearOrdering {
        LinearOrdering { carrier, terms: terms.into(), index: Arc::new(OnceCell::new()) }
    }

    pub fn empty() -> LinearOrdering {
        LinearOrdering::build(HFSet::empty(), Vec::new())
    }

    pub fn from_carrier(s: HFSet) -> Result<LinearOrdering> {
        let terms = chain_terms(&s).ok_or(Error::NotAnOrdering)?;
        Ok(LinearOrdering::build(s, terms))
    }

    pub fn from_terms(ts: Vec<HFSet>) -> Result<LinearOrdering> {
        let mut seen = HashSet::with_capacity(ts.len());
        for (i, t) in ts.iter().enumerate() {
            if !seen.insert(t.id()) {
                return Err(Error::DuplicateTerm(i));
            }
        }
        Ok(LinearOrdering::build(HFSet::kuratowski(&ts), ts))
    }

    pub fn carrier(&self) -> &HFSet {
        &self.carrier
    }

    pub fn terms(&self) -> &[HFSet] {
        &self.terms
    }

    /// ⋃L, which is also the largest element of the carrier.
    pub fn field(&self) -> HFSet {
        self.carrier.members().iter().max_by_key(|x| x.len()).cloned().unwrap_or_else(HFSet::empty)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn position(&self, a: &HFSet) -> Option<usize> {
        self.index
            .get_or_init(|| self.terms.iter().enumerate().map(|(i, t)| (t.id(), i)).collect())
            .get(&a.id())
            .copied()
    }

    pub fn in_field(&self, a: &HFSet) -> bool {
        self.position(a).is_some()
    }

    /// a <_L b: some initial segment contains a but not b.
    pub fn less_than(&self, a: &HFSet, b: &HFSet) -> Result<bool> {
        let (i, j) = (self.position(a), self.position(b));
        match (i, j) {
            (Some(i), Some(j)) => Ok(i < j),
            _ => Err(Error::NotInField),
        }
    }

    pub fn first(&self) -> Option<&HFSet> {
        self.terms.first()
    }

    pub fn last(&self) -> Option<&HFSet> {
        self.terms.last()
    }

    /// Clamped: the successor of the last term is itself.
    pub fn next(&self, a: &HFSet) -> Result<HFSet> {
        let i = self.position(a).ok_or(Error::NotInField)?;
        Ok(self.terms[(i + 1).min(self.len() - 1)].clone())
    }

    /// Clamped: the predecessor of the first term is itself.
    pub fn prev(&self, a: &HFSet) -> Result<HFSet> {
        let i = self.position(a).ok_or(Error::NotInField)?;
        Ok(self.terms[i.saturating_sub(1)].clone())
    }

    /// L₁ ⊆_* L₂, decided as plain inclusion of carriers.
    pub fn is_initial_segment(&self, other: &LinearOrdering) -> bool {
        self.carrier.is_subset(&other.carrier)
    }

    /// The same relation decided on term lists; used to cross-check.
    pub fn is_prefix_of(&self, other: &LinearOrdering) -> bool {
        self.len() <= other.len() && self.terms.iter().zip(other.terms.iter()).all(|(a, b)| a == b)
    }

    pub fn prefix(&self, k: usize) -> LinearOrdering {
        let k = k.min(self.len());
        let segs: Vec<HFSet> =
            self.carrier.members().iter().filter(|x| x.len() <= k).cloned().collect();
        LinearOrdering::build(HFSet::from_sorted(segs), self.terms[..k].to_vec())
    }

    /// The proper initial segments [ ], [t₁], …, in increasing length.
    pub fn initial_segments(&self) -> Vec<LinearOrdering> {
        (0..self.len()).map(|k| self.prefix(k)).collect()
    }

    /// InSeg(L) as a set of carriers.
    pub fn in_seg(&self) -> HFSet {
        HFSet::from_members(self.initial_segments().into_iter().map(|l| l.carrier))
    }

    pub fn concat(ls: &[LinearOrdering]) -> Result<LinearOrdering> {
        let mut seen = HashSet::new();
        let mut terms = Vec::new();
        for (i, l) in ls.iter().enumerate() {
            for t in l.terms() {
                if !seen.insert(t.id()) {
                    return Err(Error::Overlap(i));
                }
                terms.push(t.clone());
            }
        }
        LinearOrdering::from_terms(terms)
    }

    /// The unique f with f(First) = a and f(Next x) = g(f x), as values
    /// parallel to the terms.
    pub fn recursion_along(&self, a: HFSet, mut g: impl FnMut(&HFSet) -> HFSet) -> Result<Vec<HFSet>> {
        if self.is_empty() {
            return Err(Error::Empty("recursion along [ ]"));
        }
        let mut out = Vec::with_capacity(self.len());
        out.push(a);
        for _ in 1..self.len() {
            let v = g(out.last().unwrap());
            out.push(v);
        }
        Ok(out)
    }

    /// The local function built by recursion, as a set of ordered pairs.
    pub fn recursion_graph(&self, a: HFSet, g: impl FnMut(&HFSet) -> HFSet) -> Result<HFSet> {
        let vals = self.recursion_along(a, g)?;
        Ok(HFSet::from_members(
            self.terms.iter().zip(vals).map(|(t, v)| HFSet::ordered_pair(t.clone(), v)),
        ))
    }

    /// L₁ ≃_o L₂ iff they have the same length.
    pub fn order_equiv(&self, other: &LinearOrdering) -> bool {
        self.len() == other.len()
    }

    /// The order isomorphism as a set of ordered pairs, when one exists.
    pub fn isomorphism(&self, other: &LinearOrdering) -> Option<HFSet> {
        (self.len() == other.len()).then(|| {
            HFSet::from_members(
                self.terms.iter().zip(other.terms.iter()).map(|(a, b)| HFSet::ordered_pair(a.clone(), b.clone())),
            )
        })
    }

    /// Checks Φ along L the way an induction proof would: the base case and
    /// every step. Returns the first failing position of the hypotheses, or
    /// whether the conclusion then holds everywhere.
    pub fn induction(&self, mut phi: impl FnMut(&HFSet) -> bool) -> InductionOutcome {
        let Some(first) = self.first() else {
            return InductionOutcome::Holds;
        };
        if !phi(first) {
            return InductionOutcome::BaseFails;
        }
        for (i, w) in self.terms.windows(2).enumerate() {
            if phi(&w[0]) && !phi(&w[1]) {
                return InductionOutcome::StepFails(i);
            }
        }
        if self.terms.iter().all(phi) {
            InductionOutcome::Holds
        } else {
            InductionOutcome::Violated
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|t| t.code().map_or(Value::Null, |c| Value::String(c.to_string())))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<LinearOrdering> {
        let arr = v.as_array().ok_or_else(|| Error::Invalid("ordering JSON must be an array".into()))?;
        let terms = arr
            .iter()
            .map(|x| match x {
                Value::String(s) => s
                    .parse()
                    .map(|n| HFSet::decode(&n))
                    .map_err(|_| Error::Invalid(format!("bad code `{s}`"))),
                Value::Object(_) => HFSet::from_json(x),
                _ => Err(Error::Invalid("ordering entries must be code strings".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        LinearOrdering::from_terms(terms)
    }

    /// Parses `[t1, t2, ...]` with brace or `#n` terms inside.
    pub fn parse(text: &str) -> Result<LinearOrdering> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or(Error::Syntax { col: 1, msg: "expected `[...]`".into() })?;
        if inner.trim().is_empty() {
            return Ok(LinearOrdering::empty());
        }
        let mut terms = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, ch) in inner.char_indices() {
            match ch {
                '{' => depth += 1,
                '}' => depth -= 1,
                ',' if depth == 0 => {
                    terms.push(inner[start..i].trim().parse::<HFSet>()?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        terms.push(inner[start..].trim().parse::<HFSet>()?);
        LinearOrdering::from_terms(terms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InductionOutcome {
    /// Hypotheses hold and so does the conclusion.
    Holds,
    BaseFails,
    StepFails(usize),
    /// Hypotheses hold but the conclusion fails somewhere (never expected).
    Violated,
}

impl PartialEq for LinearOrdering {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier
    }
}

impl Eq for LinearOrdering {}

impl fmt::Display for LinearOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&t.braces())?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for LinearOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;

    fn c(n: u64) -> HFSet {
        HFSet::from_code(n)
    }

    fn lo(codes: &[u64]) -> LinearOrdering {
        LinearOrdering::from_terms(codes.iter().map(|&n| c(n)).collect()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&c(0)));
        let (a, b) = (c(1), c(2));
        let bad_i = HFSet::pair(c(0), HFSet::pair(a.clone(), b.clone()));
        assert!(!validate(&bad_i) && !validate_clauses(&bad_i));
        let bad_iv = HFSet::pair(HFSet::pair(a.clone(), b.clone()), HFSet::pair(a, c(3)));
        assert!(!validate(&bad_iv) && !validate_clauses(&bad_iv));
    }

    #[test]
    fn validators_agree() {
        for n in 0..1 << 14 {
            let s = c(n);
            assert_eq!(validate(&s), validate_clauses(&s), "code {n}");
        }
    }

    #[test]
    fn from_terms_examples() {
        assert!(lo(&[]).carrier().is_empty());
        assert_eq!(lo(&[0]).carrier(), &c(2));
        // {{∅},{∅,{∅}}}: member codes 1 and 3, so 2^1 + 2^3.
        assert_eq!(lo(&[0, 1]).carrier().code_u64(), Some(10));
        assert_eq!(LinearOrdering::from_terms(vec![c(1), c(1)]).unwrap_err(), Error::DuplicateTerm(1));
    }

    #[test]
    fn from_carrier_round_trip() {
        let l = lo(&[5, 0, 9, 2]);
        let back = LinearOrdering::from_carrier(l.carrier().clone()).unwrap();
        assert_eq!(back.terms(), l.terms());
        assert_eq!(l.field(), HFSet::from_members([c(5), c(0), c(9), c(2)]));
    }

    #[test]
    fn less_than_examples() {
        let l = lo(&[0, 1]);
        assert!(l.less_than(&c(0), &c(1)).unwrap());
        assert!(!l.less_than(&c(1), &c(0)).unwrap());
        assert!(!l.less_than(&c(1), &c(1)).unwrap());
        assert_eq!(l.less_than(&c(7), &c(1)), Err(Error::NotInField));
    }

    #[test]
    fn clamped_next_prev() {
        let l = lo(&[3, 1, 4]);
        assert_eq!(l.next(&c(1)).unwrap(), c(4));
        assert_eq!(l.next(&c(4)).unwrap(), c(4));
        assert_eq!(l.prev(&c(3)).unwrap(), c(3));
    }

    #[test]
    fn initial_segment_examples() {
        assert!(lo(&[]).is_initial_segment(&lo(&[4, 2])));
        assert!(lo(&[0]).is_initial_segment(&lo(&[0, 1])));
        assert!(!lo(&[1]).is_initial_segment(&lo(&[0, 1])));
        assert_eq!(lo(&[0, 1, 2]).prefix(2), lo(&[0, 1]));
        assert_eq!(lo(&[0, 1, 2]).in_seg().len(), 3);
    }

    #[test]
    fn concat_examples() {
        assert!(LinearOrdering::concat(&[]).unwrap().is_empty());
        assert_eq!(LinearOrdering::concat(&[lo(&[0]), lo(&[1])]).unwrap(), lo(&[0, 1]));
        assert_eq!(LinearOrdering::concat(&[lo(&[0, 1]), lo(&[2])]).unwrap().terms(), lo(&[0, 1, 2]).terms());
        assert_eq!(LinearOrdering::concat(&[lo(&[0, 1]), lo(&[1])]), Err(Error::Overlap(1)));
    }

    #[test]
    fn recursion_examples() {
        let f = lo(&[7]).recursion_along(c(5), |x| x.clone()).unwrap();
        assert_eq!(f, vec![c(5)]);
        let f = lo(&[0, 1, 2]).recursion_along(c(0), |x| HFSet::singleton(x.clone())).unwrap();
        assert_eq!(f, vec![c(0), c(1), c(2)]);
        let b = Budget::default();
        let f = lo(&[0, 1, 2, 3]).recursion_along(c(0), |x| x.power_set(&b).unwrap()).unwrap();
        // V_0..V_3 have codes 0, 1, 3, 15.
        let oracle: Vec<HFSet> = [0u64, 1, 3, 15].iter().map(|&n| c(n)).collect();
        assert_eq!(f, oracle);
    }

    #[test]
    fn order_equiv_examples() {
        assert!(lo(&[]).order_equiv(&lo(&[])));
        assert!(lo(&[0]).order_equiv(&lo(&[1])));
        assert!(!lo(&[0]).order_equiv(&lo(&[0, 1])));
        assert!(lo(&[0, 1]).isomorphism(&lo(&[2, 3])).is_some());
    }

    #[test]
    fn induction_combinator() {
        let l = lo(&[0, 1, 2, 4, 16]);
        assert_eq!(l.induction(|x| x.len() <= 1), InductionOutcome::Holds);
        assert_eq!(l.induction(|x| !x.is_empty()), InductionOutcome::BaseFails);
        assert_eq!(l.induction(|x| x.code_u64().unwrap() < 4), InductionOutcome::StepFails(2));
    }

    #[test]
    fn text_and_json() {
        let l = lo(&[0, 1, 11]);
        assert_eq!(l.to_string(), "[{}, {{}}, {{},{{}},{{},{{}}}}]");
        assert_eq!(LinearOrdering::parse(&l.to_string()).unwrap(), l);
        assert_eq!(LinearOrdering::parse("[#0, #1, #11]").unwrap(), l);
        assert_eq!(LinearOrdering::from_json(&l.to_json()).unwrap(), l);
        assert!(LinearOrdering::parse("[]").unwrap().is_empty());
    }
}
