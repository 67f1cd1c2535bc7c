//! Iteration systems: a starting term plus a successor rule. The numbers of
//! a system are the orderings generated from the starting term, its terms
//! the members of those orderings.
//!
//! Terms are kept in a [`Term`] rather than as raw sets because the ACK
//! terms l_k have astronomically large codes long before k gets
//! interesting, and numerals are more legible as digit strings.

mod ackphi;
mod lex;
mod measures;

pub use ackphi::{is_regular, Phi, Stage, StagePlan};
pub use lex::{
    ack0_successor, ack0_theorem_check, ack_closure_witness, ack_successor, ack_term_set, lex_anchor, lex_anchor_index,
    lex_index, lex_le, lex_step, lex_term, Ack0Case, Step,
};
pub use measures::{
    ack_to_ch_suplog, base_down, base_up, ch_lex, ch_to_vn, ch_to_z, len_down, len_up, lex_ch, v_set,
};

use crate::budget::Budget;
use crate::cardarith::vn;
use crate::error::{too_large, Error, Result};
use crate::hf::HFSet;
use crate::linord::LinearOrdering;
use crate::numerals::{digits_of, increment, value_of, NumerationBase, Numeral};
use crate::term_lang::Closure;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

/// The base of a numeral term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum NumeralBase {
    Fixed(HFSet),
    /// InSeg of the ordering with these terms.
    InSeg(Arc<[Term]>),
}

/// A numeral whose length ordering is made of terms of another system.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumeralTerm {
    pub base_size: usize,
    pub base: NumeralBase,
    /// Little-endian.
    pub digits: Vec<usize>,
    pub length: Arc<[Term]>,
}

impl NumeralTerm {
    pub fn value(&self) -> BigUint {
        value_of(&self.digits, self.base_size)
    }

    /// (S, (L', f)) as in the numerals module.
    pub fn materialize(&self, budget: &Budget) -> Result<HFSet> {
        let base = match &self.base {
            NumeralBase::Fixed(s) => NumerationBase::new(s.clone())?,
            NumeralBase::InSeg(ts) => NumerationBase::new(ordering_of(ts, budget)?.in_seg())?,
        };
        let length = ordering_of(&self.length, budget)?;
        Numeral::new(base, self.digits.clone())?.to_set(&length)
    }
}

fn ordering_of(ts: &[Term], budget: &Budget) -> Result<LinearOrdering> {
    LinearOrdering::from_terms(ts.iter().map(|t| t.materialize(budget)).collect::<Result<Vec<_>>>()?)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Set(HFSet),
    /// l_k, the ordering of the first k sets in code order.
    Ack(Arc<BigUint>),
    Numeral(Arc<NumeralTerm>),
}

impl Term {
    pub fn ack(k: impl Into<BigUint>) -> Term {
        Term::Ack(Arc::new(k.into()))
    }

    pub fn as_set(&self) -> Option<&HFSet> {
        match self {
            Term::Set(s) => Some(s),
            _ => None,
        }
    }

    pub fn ack_index(&self) -> Option<&BigUint> {
        match self {
            Term::Ack(k) => Some(k),
            _ => None,
        }
    }

    pub fn as_numeral(&self) -> Option<&NumeralTerm> {
        match self {
            Term::Numeral(n) => Some(n),
            _ => None,
        }
    }

    /// The pure set this term stands for.
    pub fn materialize(&self, budget: &Budget) -> Result<HFSet> {
        match self {
            Term::Set(s) => Ok(s.clone()),
            Term::Ack(k) => {
                let k = k.to_u64().filter(|&k| k <= budget.ackset).ok_or_else(|| too_large(format!("l_{k}"), budget.ackset))?;
                Ok(ack_term_set(k))
            }
            Term::Numeral(n) => n.materialize(budget),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Term::Set(s) => s.to_json(),
            Term::Ack(k) => json!({ "ack": k.to_string() }),
            Term::Numeral(n) => json!({
                "base_size": n.base_size,
                "digits": n.digits,
                "value": n.value().to_string(),
                "length": n.length.iter().map(Term::to_json).collect::<Vec<_>>(),
            }),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Set(s) => match s.braces_limited(64) {
                Some(b) => f.write_str(&b),
                None => write!(f, "{s:?}"),
            },
            Term::Ack(k) => write!(f, "l_{k}"),
            Term::Numeral(n) => {
                write!(f, "{}⟨", n.base_size)?;
                for (i, d) in n.digits.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{d}")?;
                }
                f.write_str("⟩")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq)]
pub enum System {
    Vn,
    Z,
    Ch,
    Lex,
    Ack,
    Ack0,
    /// N[S]
    FixedBase { inner: Arc<System>, base: NumerationBase },
    /// N⟨L⟩ with L the von Neumann ordering of `len` terms.
    FixedLength { inner: Arc<System>, len: usize },
    AckPhi(Arc<StagePlan>),
    /// Any starting set with a term-language successor.
    Closure { name: String, initial: HFSet, step: Arc<Closure> },
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            System::Vn => f.write_str("vn"),
            System::Z => f.write_str("z"),
            System::Ch => f.write_str("ch"),
            System::Lex => f.write_str("lex"),
            System::Ack => f.write_str("ack"),
            System::Ack0 => f.write_str("ack0"),
            System::FixedBase { inner, base } => write!(f, "base:{inner}:{}", base.size()),
            System::FixedLength { inner, len } => write!(f, "len:{inner}:{len}"),
            System::AckPhi(p) => write!(f, "ackphi:{}:{}", p.phi.name(), p.k),
            System::Closure { name, .. } => f.write_str(name),
        }
    }
}

impl fmt::Debug for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn not_a_term(sys: &System, t: &Term) -> Error {
    Error::NotATerm(format!("{sys}: {t}"))
}

impl System {
    /// `vn`, `z`, `ch`, `lex`, `ack`, `ack0`, `base:<sys>:<size>`,
    /// `len:<sys>:<length>`, `ackphi:<phi>:<K>`.
    pub fn parse(spec: &str, budget: &Budget) -> Result<System> {
        let bad = || Error::BadSpec(spec.to_string());
        let spec = spec.trim();
        Ok(match spec {
            "vn" => System::Vn,
            "z" => System::Z,
            "ch" => System::Ch,
            "lex" => System::Lex,
            "ack" => System::Ack,
            "ack0" => System::Ack0,
            _ => {
                if let Some(rest) = spec.strip_prefix("base:") {
                    let (inner, n) = rest.rsplit_once(':').ok_or_else(bad)?;
                    let n: usize = n.parse().map_err(|_| bad())?;
                    System::fixed_base(System::parse(inner, budget)?, NumerationBase::vn(n).map_err(|_| bad())?)
                } else if let Some(rest) = spec.strip_prefix("len:") {
                    let (inner, n) = rest.rsplit_once(':').ok_or_else(bad)?;
                    let n: usize = n.parse().map_err(|_| bad())?;
                    System::fixed_length(System::parse(inner, budget)?, n).map_err(|_| bad())?
                } else if let Some(rest) = spec.strip_prefix("ackphi:") {
                    let (phi, k) = rest.split_once(':').ok_or_else(bad)?;
                    let phi = Phi::parse(phi).ok_or_else(bad)?;
                    let k: u64 = k.parse().map_err(|_| bad())?;
                    System::AckPhi(Arc::new(StagePlan::new(phi, k, budget)?))
                } else {
                    return Err(bad());
                }
            }
        })
    }

    pub fn fixed_base(inner: System, base: NumerationBase) -> System {
        System::FixedBase { inner: Arc::new(inner), base }
    }

    pub fn fixed_length(inner: System, len: usize) -> Result<System> {
        if len < 2 {
            return Err(Error::Invalid(format!("fixed length extension needs at least 2 digits, got {len}")));
        }
        Ok(System::FixedLength { inner: Arc::new(inner), len })
    }

    pub fn closure(name: &str, initial: HFSet, step: Closure) -> System {
        System::Closure { name: name.to_string(), initial, step: Arc::new(step) }
    }

    pub fn ack_phi(phi: Phi, k: u64, budget: &Budget) -> Result<System> {
        Ok(System::AckPhi(Arc::new(StagePlan::new(phi, k, budget)?)))
    }

    pub fn initial(&self) -> Term {
        match self {
            System::Vn | System::Z | System::Ch | System::Ack0 => Term::Set(HFSet::empty()),
            System::Lex | System::Ack | System::AckPhi(_) => Term::ack(0u8),
            System::Closure { initial, .. } => Term::Set(initial.clone()),
            System::FixedBase { inner, base } => Term::Numeral(Arc::new(NumeralTerm {
                base_size: base.size(),
                base: NumeralBase::Fixed(base.carrier().clone()),
                digits: vec![0],
                length: Arc::from(vec![inner.initial()]),
            })),
            System::FixedLength { inner, len } => {
                let zero = inner.initial();
                // The successor of 0_N always exists; a budget failure this
                // early would mean an unusable inner system anyway.
                let one = inner.successor(&zero, &Budget::default()).expect("second term of the inner system");
                Term::Numeral(Arc::new(NumeralTerm {
                    base_size: 2,
                    base: NumeralBase::InSeg(Arc::from(vec![zero, one])),
                    digits: vec![0; *len],
                    length: Arc::from((0..*len).map(|i| Term::Set(vn(i))).collect::<Vec<_>>()),
                }))
            }
        }
    }

    pub fn successor(&self, t: &Term, budget: &Budget) -> Result<Term> {
        match (self, t) {
            (System::Vn, Term::Set(x)) => Ok(Term::Set(x.with(x.clone()))),
            (System::Z, Term::Set(x)) => Ok(Term::Set(HFSet::singleton(x.clone()))),
            (System::Ch, Term::Set(x)) => Ok(Term::Set(x.power_set(budget)?)),
            (System::Ack0, Term::Set(x)) => Ok(Term::Set(ack0_successor(x))),
            (System::Closure { step, .. }, Term::Set(x)) => Ok(Term::Set(step.apply(x, budget)?)),
            (System::Ack, Term::Ack(k)) => Ok(Term::ack(k.as_ref() + 1u8)),
            (System::Lex, Term::Ack(k)) => {
                let e = k.to_u64().filter(|&e| e <= budget.bits).ok_or_else(|| too_large(format!("l_(2^{k})"), format!("{} bits", budget.bits)))?;
                Ok(Term::ack(BigUint::one() << e))
            }
            (System::AckPhi(plan), Term::Ack(k)) => Ok(Term::ack(plan.successor(k)?)),
            (System::FixedBase { inner, base }, Term::Numeral(n)) => {
                let v = n.value() + 1u8;
                let digits = digits_of(&v, base.size());
                let mut length = n.length.to_vec();
                length.truncate(digits.len());
                while length.len() < digits.len() {
                    let next = inner.successor(length.last().expect("lengths are never empty"), budget)?;
                    length.push(next);
                }
                Ok(Term::Numeral(Arc::new(NumeralTerm { digits, length: Arc::from(length), ..(**n).clone() })))
            }
            (System::FixedLength { inner, len }, Term::Numeral(n)) => {
                let NumeralBase::InSeg(prefix) = &n.base else {
                    return Err(not_a_term(self, t));
                };
                let mut digits = n.digits.clone();
                if increment(&mut digits, n.base_size) {
                    return Ok(Term::Numeral(Arc::new(NumeralTerm { digits, ..(**n).clone() })));
                }
                // Every digit was at its maximum: move to the next base and
                // write |S|^|L| there.
                let mut terms = prefix.to_vec();
                terms.push(inner.successor(terms.last().expect("bases have two or more terms"), budget)?);
                let b = terms.len();
                let mut digits = digits_of(&BigUint::from(n.base_size).pow(*len as u32), b);
                digits.resize(*len, 0);
                Ok(Term::Numeral(Arc::new(NumeralTerm {
                    base_size: b,
                    base: NumeralBase::InSeg(Arc::from(terms)),
                    digits,
                    length: n.length.clone(),
                })))
            }
            _ => Err(not_a_term(self, t)),
        }
    }

    /// k_N = σ^k(0_N).
    pub fn nth_term(&self, k: u64, budget: &Budget) -> Result<Term> {
        if k > budget.terms {
            return Err(too_large(format!("term {k}"), budget.terms));
        }
        let mut t = self.initial();
        for _ in 0..k {
            t = self.successor(&t, budget)?;
        }
        Ok(t)
    }

    /// The first n terms.
    pub fn enumerate(&self, n: u64, budget: &Budget) -> Result<Vec<Term>> {
        if n > budget.terms {
            return Err(too_large(format!("{n} terms"), budget.terms));
        }
        let mut out: Vec<Term> = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let t = match out.last() {
                None => self.initial(),
                Some(prev) => self.successor(prev, budget)?,
            };
            out.push(t);
        }
        Ok(out)
    }

    /// The number with k + 1 terms, ending at k_N.
    pub fn nth_number(&self, k: u64, budget: &Budget) -> Result<SystemNumber> {
        Ok(SystemNumber { system: self.clone(), terms: self.enumerate(k + 1, budget)? })
    }

    /// First term is 0_N and each next term is the successor of the one
    /// before it.
    pub fn gen_check_terms(&self, terms: &[Term], budget: &Budget) -> Result<bool> {
        if terms.is_empty() {
            return Ok(true);
        }
        if terms[0] != self.initial() {
            return Ok(false);
        }
        for w in terms.windows(2) {
            if self.successor(&w[0], budget)? != w[1] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Gen for a materialized ordering: its terms are the first |L| terms
    /// of the system.
    pub fn gen_check(&self, l: &LinearOrdering, budget: &Budget) -> Result<bool> {
        let mut t = self.initial();
        for (i, x) in l.terms().iter().enumerate() {
            if i > 0 {
                t = self.successor(&t, budget)?;
            }
            if &t.materialize(budget)? != x {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// σ(Last(L)) ∉ Field(L) for every generated L with at most n terms.
    pub fn is_natural_upto(&self, n: u64, budget: &Budget) -> Result<bool> {
        let mut seen = HashSet::new();
        for t in self.enumerate(n + 1, budget)? {
            if !seen.insert(t) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The number whose last term is `t`.
    pub fn recover(&self, t: &Term, budget: &Budget) -> Result<SystemNumber> {
        let number = |terms: Vec<Term>| SystemNumber { system: self.clone(), terms };
        let sets = |v: Vec<HFSet>| number(v.into_iter().map(Term::Set).collect());
        match (self, t) {
            (System::Vn, Term::Set(x)) => {
                let n = x.len();
                if vn(n) != *x {
                    return Err(not_a_term(self, t));
                }
                Ok(sets((0..=n).map(vn).collect()))
            }
            (System::Z, Term::Set(x)) => {
                let mut chain = vec![x.clone()];
                let mut cur = x.clone();
                while !cur.is_empty() {
                    if cur.len() != 1 {
                        return Err(not_a_term(self, t));
                    }
                    cur = cur.members()[0].clone();
                    chain.push(cur.clone());
                }
                chain.reverse();
                Ok(sets(chain))
            }
            (System::Ch, Term::Set(x)) => {
                let mut chain = vec![HFSet::empty()];
                for _ in 0..x.rank() {
                    let next = chain.last().unwrap().power_set(budget)?;
                    chain.push(next);
                }
                if chain.last() != Some(x) {
                    return Err(not_a_term(self, t));
                }
                Ok(sets(chain))
            }
            (System::Lex, Term::Ack(k)) => {
                let mut out = vec![Term::ack(0u8)];
                while out.last().and_then(Term::ack_index).is_some_and(|i| i < k.as_ref()) {
                    let next = self.successor(out.last().unwrap(), budget)?;
                    out.push(next);
                }
                if out.last() != Some(t) {
                    return Err(not_a_term(self, t));
                }
                Ok(number(out))
            }
            (System::Ack, Term::Ack(k)) => {
                let k = k.to_u64().filter(|&k| k < budget.terms).ok_or_else(|| too_large(format!("number ending at l_{k}"), budget.terms))?;
                Ok(number((0..=k).map(Term::ack).collect()))
            }
            (System::Ack0, _) => Err(Error::Unsupported("ACK₀ numbers cannot be recovered from their terms".into())),
            (System::Closure { name, .. }, _) => Err(Error::Unsupported(format!("no recovery rule for {name}"))),
            (System::AckPhi(plan), Term::Ack(k)) => {
                let pos = plan.position_of(k)?.ok_or_else(|| not_a_term(self, t))?;
                let pos = pos.to_u64().ok_or_else(|| too_large("recovered number", budget.terms))?;
                Ok(number(self.enumerate(pos + 1, budget)?))
            }
            (System::FixedBase { .. } | System::FixedLength { .. }, Term::Numeral(n)) => {
                // The k-th term codes k, so the value says how far to go.
                let v = n.value().to_u64().filter(|&v| v < budget.terms).ok_or_else(|| too_large("recovered number", budget.terms))?;
                let terms = self.enumerate(v + 1, budget)?;
                if terms.last() != Some(t) {
                    return Err(not_a_term(self, t));
                }
                Ok(number(terms))
            }
            _ => Err(not_a_term(self, t)),
        }
    }

    /// Whether recover is defined for this system.
    pub fn has_recovery(&self) -> bool {
        !matches!(self, System::Ack0 | System::Closure { .. })
    }

    pub fn to_json(&self) -> Value {
        json!({ "system": self.to_string() })
    }
}

/// A number of a system: its first few terms, in order.
#[derive(Clone, PartialEq)]
pub struct SystemNumber {
    pub system: System,
    pub terms: Vec<Term>,
}

impl SystemNumber {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn last(&self) -> Option<&Term> {
        self.terms.last()
    }

    pub fn size(&self) -> BigUint {
        BigUint::from(self.terms.len())
    }

    pub fn is_valid(&self, budget: &Budget) -> Result<bool> {
        self.system.gen_check_terms(&self.terms, budget)
    }

    pub fn to_ordering(&self, budget: &Budget) -> Result<LinearOrdering> {
        ordering_of(&self.terms, budget)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "system": self.system.to_string(),
            "terms": self.terms.iter().map(Term::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Debug for SystemNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.system, self.terms)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linord::LinearOrdering;

    fn b() -> Budget {
        Budget::default()
    }

    fn c(n: u64) -> HFSet {
        HFSet::from_code(n)
    }

    fn sys(spec: &str) -> System {
        System::parse(spec, &b()).unwrap()
    }

    fn ord(codes: &[u64]) -> LinearOrdering {
        LinearOrdering::from_terms(codes.iter().map(|&n| c(n)).collect()).unwrap()
    }

    fn values(s: &System, n: u64) -> Vec<u64> {
        s.enumerate(n, &b()).unwrap().iter().map(|t| t.as_numeral().unwrap().value().to_u64().unwrap()).collect()
    }

    #[test]
    fn gen_examples() {
        assert!(System::Vn.gen_check(&LinearOrdering::empty(), &b()).unwrap());
        assert!(System::Vn.gen_check(&ord(&[0, 1]), &b()).unwrap());
        assert!(!System::Vn.gen_check(&ord(&[1]), &b()).unwrap());
        assert!(System::Z.gen_check(&ord(&[0, 1, 2, 4]), &b()).unwrap());
        assert!(!System::Vn.gen_check(&ord(&[0, 1, 2]), &b()).unwrap());
        assert!(System::Ack0.gen_check(&ord(&[0, 1, 2, 3, 4]), &b()).unwrap());
    }

    #[test]
    fn nth_term_examples() {
        assert_eq!(System::Vn.nth_term(2, &b()).unwrap(), Term::Set(c(3)));
        assert_eq!(System::Z.nth_term(3, &b()).unwrap(), Term::Set(c(4)));
        assert_eq!(System::Ch.nth_term(2, &b()).unwrap(), Term::Set(c(3)));
        assert_eq!(System::Lex.nth_term(4, &b()).unwrap(), Term::ack(16u8));
        let n = System::Ack.nth_number(3, &b()).unwrap();
        assert_eq!(n.to_ordering(&b()).unwrap().len(), 4);
    }

    #[test]
    fn recover_examples() {
        let r = System::Vn.recover(&Term::Set(c(3)), &b()).unwrap();
        assert_eq!(r.terms, [0, 1, 3].map(|n| Term::Set(c(n))));
        let r = System::Z.recover(&Term::Set(c(2)), &b()).unwrap();
        assert_eq!(r.terms, [0, 1, 2].map(|n| Term::Set(c(n))));
        let r = System::Ack.recover(&Term::ack(1u8), &b()).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.last().unwrap().materialize(&b()).unwrap(), ord(&[0]).carrier().clone());
        assert!(System::Vn.recover(&Term::Set(c(2)), &b()).is_err());
        assert!(System::Z.recover(&Term::Set(c(3)), &b()).is_err());
        assert!(System::Ch.recover(&Term::Set(c(7)), &b()).is_err());
        assert!(System::Lex.recover(&Term::ack(3u8), &b()).is_err());
        assert!(matches!(System::Ack0.recover(&Term::Set(c(3)), &b()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn recovery_round_trips() {
        for s in ["vn", "z", "ch", "lex", "ack", "base:vn:2", "base:ch:3", "len:z:2", "len:vn:3", "ackphi:double:1", "base:base:z:2:2"] {
            let s = sys(s);
            let n = match s {
                System::Ch | System::Lex => 5,
                _ => 30,
            };
            for (i, t) in s.enumerate(n, &b()).unwrap().iter().enumerate() {
                let r = s.recover(t, &b()).unwrap();
                assert_eq!(r.len(), i + 1, "{s} {t}");
                assert!(r.is_valid(&b()).unwrap());
            }
        }
    }

    #[test]
    fn natural_systems() {
        for s in ["vn", "z", "ack", "ack0", "base:vn:2", "base:z:3", "len:vn:2", "len:ch:2", "ackphi:double:1"] {
            assert!(sys(s).is_natural_upto(30, &b()).unwrap(), "{s}");
        }
        assert!(sys("ch").is_natural_upto(5, &b()).unwrap());
        // One term per stage after the first; stage 6 would start at 2_6.
        assert!(sys("ackphi:succ:0").is_natural_upto(6, &b()).unwrap());
        assert!(matches!(sys("ackphi:succ:0").is_natural_upto(7, &b()), Err(Error::TooLarge { .. })));
        assert!(sys("lex").is_natural_upto(5, &b()).unwrap());
        let stuck = System::closure("stuck", HFSet::empty(), Closure::new("x", "U(x)").unwrap());
        assert!(!stuck.is_natural_upto(3, &b()).unwrap());
    }

    #[test]
    fn closure_matches_builtin() {
        let vn2 = System::closure("vn2", HFSet::empty(), Closure::new("x", "U({x, {x, x}})").unwrap());
        assert_eq!(vn2.enumerate(8, &b()).unwrap(), System::Vn.enumerate(8, &b()).unwrap());
        let ch2 = System::closure("ch2", HFSet::empty(), Closure::new("x", "P(x)").unwrap());
        assert_eq!(ch2.enumerate(5, &b()).unwrap(), System::Ch.enumerate(5, &b()).unwrap());
    }

    #[test]
    fn fixed_base_examples() {
        let s = sys("base:vn:2");
        let ts = s.enumerate(40, &b()).unwrap();
        assert_eq!(values(&s, 40), (0..40).collect::<Vec<_>>());
        // 2^k needs k + 1 digits.
        for k in 0..5 {
            assert_eq!(ts[1 << k].as_numeral().unwrap().length.len(), k + 1);
        }
        assert_eq!(ts[5].to_string(), "2⟨1,0,1⟩");
        let zero = ts[0].as_numeral().unwrap();
        assert_eq!((zero.digits.clone(), zero.length.len()), (vec![0], 1));
        for spec in ["base:vn:3", "base:z:4", "base:ch:2"] {
            let s = sys(spec);
            let n = 64;
            assert_eq!(values(&s, n), (0..n).collect::<Vec<_>>(), "{spec}");
        }
        assert!(ts[6].materialize(&b()).is_ok());
    }

    #[test]
    fn fixed_length_examples() {
        let s = sys("len:vn:2");
        let ts = s.enumerate(20, &b()).unwrap();
        assert_eq!(values(&s, 20), (0..20).collect::<Vec<_>>());
        // The base of size 2 runs out after 2^2 terms; 4 is written in base 3.
        let four = ts[4].as_numeral().unwrap();
        assert_eq!((four.base_size, four.digits.clone()), (3, vec![1, 1]));
        let last_binary = ts[3].as_numeral().unwrap();
        assert_eq!((last_binary.base_size, last_binary.digits.clone()), (2, vec![1, 1]));
        assert_eq!(ts[8].as_numeral().unwrap().digits, vec![2, 2]);
        assert!(System::fixed_length(System::Vn, 1).is_err());
        let s = sys("len:ch:2");
        assert_eq!(values(&s, 36), (0..36).collect::<Vec<_>>());
        let init = s.initial().materialize(&b()).unwrap();
        assert!(init.len() == 2);
    }

    #[test]
    fn ack_terms() {
        let terms = System::Ack.enumerate(20, &b()).unwrap();
        for (k, t) in terms.iter().enumerate() {
            let l = LinearOrdering::from_carrier(t.materialize(&b()).unwrap()).unwrap();
            assert_eq!(l.len(), k);
            assert!(l.field().is_transitive());
        }
        let lex: Vec<Term> = System::Lex.enumerate(5, &b()).unwrap();
        assert!(lex.iter().all(|t| terms.contains(t)));
    }

    #[test]
    fn spec_parsing() {
        for s in ["vn", "base:vn:2", "len:ch:3", "ackphi:double:1", "base:len:z:2:3"] {
            assert_eq!(sys(s).to_string(), s);
        }
        for s in ["nope", "base:vn", "base:vn:1", "len:vn:x", "ackphi:double", "ackphi:id:1", "ackphi:square:2"] {
            assert!(System::parse(s, &b()).is_err(), "{s}");
        }
    }

    #[test]
    fn wrong_term_kind() {
        assert!(matches!(System::Vn.successor(&Term::ack(1u8), &b()), Err(Error::NotATerm(_))));
        assert!(matches!(System::Ack.successor(&Term::Set(c(0)), &b()), Err(Error::NotATerm(_))));
    }
}
