//! Numeration bases and positional numerals. Digit sequences are stored
//! little-endian: the first digit counts units.

use crate::budget::Budget;
use crate::cardarith::vn;
use crate::error::{too_large, Error, Result};
use crate::hf::HFSet;
use crate::linord::LinearOrdering;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use std::fmt;

/// A set with at least two members and exactly one member of each size
/// below its own. Digits are the members ordered by size, so 0_S = ∅.
#[derive(Clone, PartialEq, Eq)]
pub struct NumerationBase {
    carrier: HFSet,
    digits: Vec<HFSet>,
}

pub fn is_numeration_base(s: &HFSet) -> bool {
    NumerationBase::new(s.clone()).is_ok()
}

impl NumerationBase {
    pub fn new(carrier: HFSet) -> Result<NumerationBase> {
        let n = carrier.len();
        if n < 2 {
            return Err(Error::NotABase);
        }
        let mut digits: Vec<Option<HFSet>> = vec![None; n];
        for m in carrier.members() {
            match digits.get_mut(m.len()) {
                Some(slot @ None) => *slot = Some(m.clone()),
                _ => return Err(Error::NotABase),
            }
        }
        let digits = digits.into_iter().collect::<Option<Vec<_>>>().ok_or(Error::NotABase)?;
        Ok(NumerationBase { carrier, digits })
    }

    /// The von Neumann natural of size n, for n ≥ 2.
    pub fn vn(n: usize) -> Result<NumerationBase> {
        NumerationBase::new(vn(n))
    }

    pub fn carrier(&self) -> &HFSet {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.digits.len()
    }

    pub fn digit(&self, i: usize) -> &HFSet {
        &self.digits[i]
    }

    pub fn max_digit(&self) -> usize {
        self.digits.len() - 1
    }

    /// The size of `d` if it is a digit of this base.
    pub fn digit_index(&self, d: &HFSet) -> Option<usize> {
        self.carrier.contains(d).then(|| d.len())
    }
}

impl fmt::Debug for NumerationBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "base({})", self.size())
    }
}

/// Σ dᵢ·bⁱ over little-endian digits.
pub fn value_of(digits: &[usize], base: usize) -> BigUint {
    digits.iter().rev().fold(BigUint::zero(), |acc, &d| acc * base + d)
}

/// Shortest little-endian expansion of v; zero has no digits.
pub fn digits_of(v: &BigUint, base: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut v = v.clone();
    let b = BigUint::from(base);
    while !v.is_zero() {
        let (q, r) = v.div_rem(&b);
        out.push(r.to_usize().unwrap());
        v = q;
    }
    out
}

/// Adds one in place with carry. Returns false (leaving all zeros) when the
/// fixed width overflows.
pub fn increment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        if *d + 1 < base {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

#[derive(Clone, PartialEq, Eq)]
pub struct Numeral {
    base: NumerationBase,
    digits: Vec<usize>,
}

impl Numeral {
    pub fn new(base: NumerationBase, digits: Vec<usize>) -> Result<Numeral> {
        if let Some(&d) = digits.iter().find(|&&d| d >= base.size()) {
            return Err(Error::OutOfRange { value: d.to_string(), bound: base.size().to_string() });
        }
        Ok(Numeral { base, digits })
    }

    pub fn base(&self) -> &NumerationBase {
        &self.base
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn coded_value(&self) -> BigUint {
        value_of(&self.digits, self.base.size())
    }

    /// Last digit nonzero; the empty numeral counts as proper.
    pub fn is_proper(&self) -> bool {
        self.digits.last().is_none_or(|&d| d != 0)
    }

    /// (S, (L', f)) where L' is the prefix of `length` as long as the digit
    /// sequence and f sends its i-th term to the i-th digit.
    pub fn to_set(&self, length: &LinearOrdering) -> Result<HFSet> {
        if length.len() < self.len() {
            return Err(Error::Invalid("length ordering shorter than the numeral".into()));
        }
        let l = length.prefix(self.len());
        let f = HFSet::from_members(
            l.terms().iter().zip(&self.digits).map(|(t, &d)| HFSet::ordered_pair(t.clone(), self.base.digit(d).clone())),
        );
        Ok(HFSet::ordered_pair(self.base.carrier.clone(), HFSet::ordered_pair(l.carrier().clone(), f)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.carrier.code().map(|c| c.to_string()),
            "base_size": self.base.size(),
            "digits": self.digits,
        })
    }
}

/// `b⟨d0,d1,…⟩` with b the base size and digits little-endian.
impl fmt::Display for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⟨", self.base.size())?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("⟩")
    }
}

impl fmt::Debug for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The proper numeral for v whose length is an initial segment of `max_len`.
pub fn numeral_from_value(base: &NumerationBase, v: &BigUint, max_len: &LinearOrdering) -> Result<Numeral> {
    let digits = digits_of(v, base.size());
    if digits.len() > max_len.len() {
        return Err(Error::OutOfRange {
            value: v.to_string(),
            bound: format!("{}^{}", base.size(), max_len.len()),
        });
    }
    Numeral::new(base.clone(), digits)
}

/// Num_S(L): one proper numeral per value below |S|^|L|, ascending.
pub fn num_enumeration(base: &NumerationBase, length: &LinearOrdering, budget: &Budget) -> Result<Vec<Numeral>> {
    let count = (base.size() as u128).checked_pow(length.len() as u32).filter(|&n| n <= budget.terms as u128);
    let count = count.ok_or_else(|| too_large(format!("{}^{} numerals", base.size(), length.len()), budget.terms))?;
    (0..count as u64).map(|v| numeral_from_value(base, &BigUint::from(v), length)).collect()
}

/// Num_S(L) materialized as a Kuratowski ordering of numeral sets.
pub fn num_ordering(base: &NumerationBase, length: &LinearOrdering, budget: &Budget) -> Result<LinearOrdering> {
    let nums = num_enumeration(base, length, budget)?;
    LinearOrdering::from_terms(nums.iter().map(|n| n.to_set(length)).collect::<Result<Vec<_>>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u64) -> HFSet {
        HFSet::from_code(n)
    }

    fn len_ord(k: usize) -> LinearOrdering {
        LinearOrdering::from_terms((0..k).map(vn).collect()).unwrap()
    }

    /// Oracle: every digit string, filtered to proper ones, sorted by value.
    fn brute(base: usize, len: usize) -> Vec<u64> {
        let mut vals = Vec::new();
        for l in 0..=len {
            let total = base.pow(l as u32);
            for mut k in 0..total {
                let mut ds = Vec::new();
                for _ in 0..l {
                    ds.push(k % base);
                    k /= base;
                }
                if ds.last().is_none_or(|&d| d != 0) {
                    vals.push(ds.iter().rev().fold(0u64, |a, &d| a * base as u64 + d as u64));
                }
            }
        }
        vals.sort();
        vals
    }

    #[test]
    fn base_examples() {
        assert!(is_numeration_base(&c(3)));
        assert!(!is_numeration_base(&c(1)));
        assert!(!is_numeration_base(&HFSet::pair(c(1), c(2))));
        for k in 2..6 {
            assert!(is_numeration_base(&len_ord(k).in_seg()));
        }
    }

    #[test]
    fn value_examples() {
        let ten = NumerationBase::vn(10).unwrap();
        assert_eq!(Numeral::new(ten.clone(), vec![9, 3, 2]).unwrap().coded_value(), BigUint::from(239u32));
        let two = NumerationBase::vn(2).unwrap();
        assert_eq!(Numeral::new(two.clone(), vec![1, 1, 0]).unwrap().coded_value(), BigUint::from(3u32));
        assert!(Numeral::new(two.clone(), vec![]).unwrap().coded_value().is_zero());
        assert!(Numeral::new(two, vec![2]).is_err());
    }

    #[test]
    fn proper_examples() {
        let two = NumerationBase::vn(2).unwrap();
        assert!(!Numeral::new(two.clone(), vec![1, 1, 0]).unwrap().is_proper());
        assert!(Numeral::new(two.clone(), vec![1, 1]).unwrap().is_proper());
        assert!(Numeral::new(two, vec![]).unwrap().is_proper());
    }

    #[test]
    fn enumeration_examples() {
        let b = Budget::default();
        let two = NumerationBase::vn(2).unwrap();
        let three = NumerationBase::vn(3).unwrap();
        let vals = |base: &NumerationBase, k| {
            num_enumeration(base, &len_ord(k), &b).unwrap().iter().map(|n| n.coded_value().to_u64().unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(vals(&two, 2), vec![0, 1, 2, 3]);
        assert_eq!(vals(&three, 1), vec![0, 1, 2]);
        assert_eq!(vals(&two, 0), vec![0]);
        for s in 2..5 {
            for l in 0..5 {
                assert_eq!(vals(&NumerationBase::vn(s).unwrap(), l), brute(s, l));
            }
        }
    }

    #[test]
    fn from_value_examples() {
        let two = NumerationBase::vn(2).unwrap();
        let ten = NumerationBase::vn(10).unwrap();
        assert_eq!(numeral_from_value(&two, &BigUint::from(3u8), &len_ord(3)).unwrap().digits(), &[1, 1]);
        assert_eq!(numeral_from_value(&ten, &BigUint::from(239u32), &len_ord(3)).unwrap().digits(), &[9, 3, 2]);
        assert!(numeral_from_value(&ten, &BigUint::zero(), &len_ord(0)).unwrap().is_empty());
        assert!(numeral_from_value(&two, &BigUint::from(4u8), &len_ord(2)).is_err());
    }

    #[test]
    fn materialized_ordering() {
        let b = Budget::default();
        let two = NumerationBase::vn(2).unwrap();
        let l = num_ordering(&two, &len_ord(3), &b).unwrap();
        assert_eq!(l.len(), 8);
        let n = Numeral::new(two, vec![1, 0, 1]).unwrap();
        assert_eq!(l.terms()[5], n.to_set(&len_ord(3)).unwrap());
        assert_eq!(n.to_string(), "2⟨1,0,1⟩");
    }

    #[test]
    fn increment_carries() {
        let mut d = vec![1, 1, 0];
        assert!(increment(&mut d, 2));
        assert_eq!(d, vec![0, 0, 1]);
        let mut d = vec![2, 2];
        assert!(!increment(&mut d, 3));
        assert_eq!(d, vec![0, 0]);
    }
}
