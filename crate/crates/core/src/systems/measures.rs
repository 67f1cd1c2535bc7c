//! Maps between systems. The measures keep the number of terms; the
//! representation maps change it by a known function.

use super::lex::{lex_anchor_index, small_index};
use super::{NumeralBase, NumeralTerm, System, SystemNumber, Term};
use crate::budget::Budget;
use crate::cardarith::{log_base, nth_root, suplog2, vn};
use crate::error::{too_large, Error, Result};
use crate::hf::HFSet;
use crate::numerals::digits_of;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::sync::Arc;

fn expect_system(n: &SystemNumber, sys: &System, budget: &Budget) -> Result<()> {
    if &n.system != sys || !n.is_valid(budget)? {
        return Err(Error::NotANumber(format!("{sys}: {n:?}")));
    }
    Ok(())
}

fn sets(n: &SystemNumber) -> Result<Vec<&HFSet>> {
    n.terms.iter().map(|t| t.as_set().ok_or_else(|| Error::NotANumber(format!("{n:?}")))).collect()
}

fn count(n: &BigUint, budget: &Budget) -> Result<u64> {
    n.to_u64().filter(|&n| n <= budget.terms).ok_or_else(|| too_large(format!("{n} terms"), budget.terms))
}

/// V_i, the i-th term of CH, built from its code 2^(2_(i-1)) − 1 when small.
pub fn v_set(i: u32, budget: &Budget) -> Result<HFSet> {
    let mut v = HFSet::empty();
    for _ in 0..i {
        v = v.power_set(budget)?;
    }
    Ok(v)
}

fn from_ch(l: &SystemNumber, target: System, term: impl Fn(usize) -> HFSet, budget: &Budget) -> Result<SystemNumber> {
    expect_system(l, &System::Ch, budget)?;
    let Some(last) = sets(l)?.last().copied().cloned() else {
        return Ok(SystemNumber { system: target, terms: vec![] });
    };
    // The terms of the target that lie in P(Last(L)).
    let mut terms = Vec::new();
    let mut i = 0;
    while term(i).is_subset(&last) {
        terms.push(Term::Set(term(i)));
        i += 1;
    }
    Ok(SystemNumber { system: target, terms })
}

/// The VN terms that are subsets of the last CH term.
pub fn ch_to_vn(l: &SystemNumber, budget: &Budget) -> Result<SystemNumber> {
    from_ch(l, System::Vn, vn, budget)
}

/// The Z terms that are subsets of the last CH term.
pub fn ch_to_z(l: &SystemNumber, budget: &Budget) -> Result<SystemNumber> {
    let z = |i: usize| (0..i).fold(HFSet::empty(), |x, _| HFSet::singleton(x));
    from_ch(l, System::Z, z, budget)
}

/// [V_0, …, V_n] ↦ [L_0, …, L_n] with L_(i+1) = Lex(L_i).
pub fn ch_lex(l: &SystemNumber, budget: &Budget) -> Result<SystemNumber> {
    expect_system(l, &System::Ch, budget)?;
    Ok(SystemNumber { system: System::Lex, terms: System::Lex.enumerate(l.len() as u64, budget)? })
}

/// [L_0, …, L_n] ↦ [Field(L_0), …, Field(L_n)].
pub fn lex_ch(l: &SystemNumber, budget: &Budget) -> Result<SystemNumber> {
    expect_system(l, &System::Lex, budget)?;
    let terms = l
        .terms
        .iter()
        .map(|t| {
            let k = small_index(t.ack_index().expect("LEX terms are ACK terms"), budget.power)?;
            Ok(Term::Set(HFSet::from_members((0..k).map(HFSet::from_code))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SystemNumber { system: System::Ch, terms })
}

fn fixed_base_parts(sys: &System) -> Result<(&Arc<System>, usize)> {
    match sys {
        System::FixedBase { inner, base } => Ok((inner, base.size())),
        _ => Err(Error::Invalid(format!("{sys} is not a fixed base extension"))),
    }
}

fn fixed_length_parts(sys: &System) -> Result<(&Arc<System>, usize)> {
    match sys {
        System::FixedLength { inner, len } => Ok((inner, *len)),
        _ => Err(Error::Invalid(format!("{sys} is not a fixed length extension"))),
    }
}

/// η₁: L ↦ Num_S(L) as a number of N[S], of size |S|^|L|. The empty
/// numeral is replaced by the initial term of N[S].
pub fn base_up(sys: &System, l: &SystemNumber, budget: &Budget) -> Result<SystemNumber> {
    let (inner, s) = fixed_base_parts(sys)?;
    expect_system(l, inner, budget)?;
    let n = count(&BigUint::from(s).pow(l.len() as u32), budget)?;
    let System::FixedBase { base, .. } = sys else { unreachable!() };
    let mut terms = vec![sys.initial()];
    for v in 1..n {
        let digits = digits_of(&BigUint::from(v), s);
        terms.push(Term::Numeral(Arc::new(NumeralTerm {
            base_size: s,
            base: NumeralBase::Fixed(base.carrier().clone()),
            length: Arc::from(&l.terms[..digits.len()]),
            digits,
        })));
    }
    Ok(SystemNumber { system: sys.clone(), terms })
}

/// An N-number of size log_S |X| for an N[S]-number X.
pub fn base_down(sys: &System, x: &SystemNumber, budget: &Budget) -> Result<SystemNumber> {
    let (inner, s) = fixed_base_parts(sys)?;
    expect_system(x, sys, budget)?;
    let n = count(&log_base(&BigUint::from(s), &x.size())?, budget)?;
    Ok(SystemNumber { system: (**inner).clone(), terms: inner.enumerate(n, budget)? })
}

/// The first |L'|^|L| terms of N⟨L⟩ for an N-number L'.
pub fn len_up(sys: &System, l: &SystemNumber, budget: &Budget) -> Result<SystemNumber> {
    let (inner, len) = fixed_length_parts(sys)?;
    expect_system(l, inner, budget)?;
    let n = count(&l.size().pow(len as u32), budget)?;
    Ok(SystemNumber { system: sys.clone(), terms: sys.enumerate(n, budget)? })
}

/// An N-number of size ⌈|X|^(1/|L|)⌉ for an N⟨L⟩-number X.
pub fn len_down(sys: &System, x: &SystemNumber, budget: &Budget) -> Result<SystemNumber> {
    let (inner, len) = fixed_length_parts(sys)?;
    expect_system(x, sys, budget)?;
    let n = count(&nth_root(len as u32, &x.size())?, budget)?;
    Ok(SystemNumber { system: (**inner).clone(), terms: inner.enumerate(n, budget)? })
}

/// For [l_0, …, l_n] anchored at L_k, the first suplog₂(n + 1) terms of
/// [V_0, …, V_k]. Also returns k + 1, the length of the full anchor.
pub fn ack_to_ch_suplog(l: &SystemNumber, budget: &Budget) -> Result<(SystemNumber, u32)> {
    expect_system(l, &System::Ack, budget)?;
    let Some(last) = l.last() else {
        return Ok((SystemNumber { system: System::Ch, terms: vec![] }, 0));
    };
    let anchor = lex_anchor_index(last.ack_index().expect("ACK terms")) + 1;
    let size = suplog2(&l.size());
    let terms = (0..size).map(|i| v_set(i, budget).map(Term::Set)).collect::<Result<Vec<_>>>()?;
    Ok((SystemNumber { system: System::Ch, terms }, anchor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerals::NumerationBase;
    use num_traits::{One, Zero};

    fn b() -> Budget {
        Budget::default()
    }

    fn num(sys: &System, n: u64) -> SystemNumber {
        SystemNumber { system: sys.clone(), terms: sys.enumerate(n, &b()).unwrap() }
    }

    #[test]
    fn ch_measures() {
        for n in 0..=5 {
            let ch = num(&System::Ch, n);
            let v = ch_to_vn(&ch, &b()).unwrap();
            let z = ch_to_z(&ch, &b()).unwrap();
            assert_eq!(v, num(&System::Vn, n));
            assert_eq!(z, num(&System::Z, n));
            let lx = ch_lex(&ch, &b()).unwrap();
            assert_eq!(lx.len(), ch.len());
            assert_eq!(lex_ch(&lx, &b()).unwrap(), ch);
        }
        assert!(ch_to_vn(&num(&System::Vn, 3), &b()).is_err());
    }

    #[test]
    fn v_sets() {
        assert_eq!(v_set(3, &b()).unwrap(), HFSet::from_code(15));
        assert_eq!(v_set(4, &b()).unwrap().len(), 16);
        assert_eq!(v_set(5, &b()).unwrap().code(), Some(&((BigUint::one() << 65536) - 1u8)));
    }

    #[test]
    fn fixed_base_maps() {
        for s in 2..=4 {
            let sys = System::fixed_base(System::Vn, NumerationBase::vn(s).unwrap());
            for k in 0..=4u64 {
                let l = num(&System::Vn, k);
                let up = base_up(&sys, &l, &b()).unwrap();
                assert_eq!(up.len() as u64, (s as u64).pow(k as u32));
                assert!(up.is_valid(&b()).unwrap());
                let down = base_down(&sys, &up, &b()).unwrap();
                assert_eq!(down, l);
            }
        }
    }

    #[test]
    fn fixed_length_maps() {
        let sys = System::fixed_length(System::Z, 2).unwrap();
        for n in 2..=5u64 {
            let l = num(&System::Z, n);
            let up = len_up(&sys, &l, &b()).unwrap();
            assert_eq!(up.len() as u64, n * n);
            assert_eq!(len_down(&sys, &up, &b()).unwrap(), l);
        }
    }

    #[test]
    fn suplog_map() {
        let five = num(&System::Ack, 5);
        let (ch, anchor) = ack_to_ch_suplog(&five, &b()).unwrap();
        assert_eq!(ch.len(), 3);
        assert!(anchor >= 3);
        assert!(ch.is_valid(&b()).unwrap());
        for n in 0..=40u64 {
            let (ch, anchor) = ack_to_ch_suplog(&num(&System::Ack, n), &b()).unwrap();
            assert_eq!(ch.len() as u32, suplog2(&BigUint::from(n)));
            assert!(anchor as usize >= ch.len() || n.is_zero());
        }
    }
}
