//! ACK_φ: ACK terms interpolated between LEX terms so that φ is exactly as
//! strong as the system allows.

use crate::budget::Budget;
use crate::cardarith::{monus, suplog2, two_tower};
use crate::error::{too_large, Error, Result};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Size-level functions with a name usable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phi {
    Double,
    Square,
    Succ,
    Exp,
}

impl Phi {
    pub fn parse(name: &str) -> Option<Phi> {
        Some(match name {
            "double" => Phi::Double,
            "square" => Phi::Square,
            "succ" => Phi::Succ,
            "exp" => Phi::Exp,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Phi::Double => "double",
            Phi::Square => "square",
            Phi::Succ => "succ",
            Phi::Exp => "exp",
        }
    }

    pub fn apply(self, x: &BigUint, max_bits: u64) -> Result<BigUint> {
        let v = match self {
            Phi::Double => x << 1u8,
            Phi::Square => x * x,
            Phi::Succ => x + 1u8,
            Phi::Exp => {
                let e = x.to_u64().filter(|&e| e <= max_bits).ok_or_else(|| too_large(format!("2^{x}"), format!("{max_bits} bits")))?;
                BigUint::one() << e
            }
        };
        if v.bits() > max_bits {
            return Err(too_large(format!("{}({x})", self.name()), format!("{max_bits} bits")));
        }
        Ok(v)
    }
}

/// Checks, for K ≤ x ≤ y ≤ probe: x < φ(x), φ(x) ∸ x ≤ 2^y − y and
/// φ(x) ≤ φ(y).
pub fn is_regular(phi: impl Fn(&BigUint) -> BigUint, k: u64, probe: u64) -> bool {
    let vals: Vec<(BigUint, BigUint)> = (k..=probe).map(|x| (BigUint::from(x), phi(&BigUint::from(x)))).collect();
    for (i, (x, fx)) in vals.iter().enumerate() {
        if fx <= x {
            return false;
        }
        for (y, fy) in &vals[i..] {
            let room = (BigUint::one() << y.to_u64().unwrap()) - y;
            if monus(fx, x) > room || fx > fy {
                return false;
            }
        }
    }
    true
}

/// The terms added at one stage: `count` consecutive ACK indices from `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub n: u32,
    pub start: BigUint,
    pub count: BigUint,
    /// Terms generated by the end of this stage, φ^n(2_N).
    pub h: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagePlan {
    pub phi: Phi,
    pub k: u64,
    pub n: u32,
    max_bits: u64,
}

/// Largest x probed for regularity.
const PROBE: u64 = 64;

impl StagePlan {
    pub fn new(phi: Phi, k: u64, budget: &Budget) -> Result<StagePlan> {
        let f = |x: &BigUint| phi.apply(x, 1 << 16).expect("probe values are small");
        if !is_regular(f, k, PROBE.max(k)) {
            return Err(Error::NotRegular(format!("{} above {k}", phi.name())));
        }
        // Least N with φ(x) < 2_N for every x ≤ K.
        let mut top = BigUint::zero();
        for x in 0..=k {
            top = top.max(phi.apply(&BigUint::from(x), budget.bits)?);
        }
        let n = suplog2(&(top + 1u8));
        Ok(StagePlan { phi, k, n, max_bits: budget.bits })
    }

    pub fn two_n(&self) -> BigUint {
        two_tower(self.n, self.max_bits).expect("N is small")
    }

    /// h_m = φ^m(2_N).
    pub fn h(&self, m: u32) -> Result<BigUint> {
        let mut h = self.two_n();
        for _ in 0..m {
            h = self.phi.apply(&h, self.max_bits)?;
        }
        Ok(h)
    }

    pub fn stage(&self, m: u32) -> Result<Stage> {
        if m == 0 {
            let h = self.two_n();
            return Ok(Stage { n: 0, start: BigUint::zero(), count: h.clone(), h });
        }
        let prev = self.h(m - 1)?;
        let h = self.phi.apply(&prev, self.max_bits)?;
        let start = two_tower(self.n + m - 1, self.max_bits)?;
        Ok(Stage { n: m, start, count: &h - &prev, h })
    }

    /// The stage holding l_i, if any.
    fn locate(&self, i: &BigUint) -> Result<Option<Stage>> {
        let mut m = 0;
        loop {
            let st = self.stage(m)?;
            if i < &st.start {
                return Ok(None);
            }
            if i < &(&st.start + &st.count) {
                return Ok(Some(st));
            }
            m += 1;
        }
    }

    /// The index following l_i; past a stage's end this jumps to the next
    /// stage's start.
    pub fn successor(&self, i: &BigUint) -> Result<BigUint> {
        let st = self.locate(i)?.ok_or_else(|| Error::NotATerm(format!("ackphi: l_{i}")))?;
        let next = i + 1u8;
        if next < &st.start + &st.count {
            Ok(next)
        } else {
            Ok(self.stage(st.n + 1)?.start)
        }
    }

    /// Position of l_i in the system's sequence of terms.
    pub fn position_of(&self, i: &BigUint) -> Result<Option<BigUint>> {
        let Some(st) = self.locate(i)? else {
            return Ok(None);
        };
        let before = if st.n == 0 { BigUint::zero() } else { self.h(st.n - 1)? };
        Ok(Some(before + (i - &st.start)))
    }

    /// |γ(L)| for a number of size m: h_0 when m ≤ K, otherwise h_(j+1)
    /// for the least j with m ≤ h_j.
    pub fn gamma_size(&self, m: &BigUint) -> Result<BigUint> {
        if m <= &BigUint::from(self.k) {
            return self.h(0);
        }
        let mut j = 0;
        while &self.h(j)? < m {
            j += 1;
        }
        self.h(j + 1)
    }

    /// k_(m+1) < 2^e − e for e = 2_(N+m), by bit length once e is large.
    pub fn regularity_holds(&self, m: u32) -> Result<bool> {
        let k = self.h(m + 1)? - self.h(m)?;
        // An e past the bit cap exceeds every count the cap can hold.
        let e = match two_tower(self.n + m, self.max_bits) {
            Ok(e) => e,
            Err(Error::TooLarge { .. }) => return Ok(k.bits() < self.max_bits),
            Err(e) => return Err(e),
        };
        match e.to_u64().filter(|&e| e <= 1 << 16) {
            Some(small) => Ok(k < (BigUint::one() << small) - &e),
            None => Ok(BigUint::from(k.bits() + 1) <= e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn regularity_examples() {
        assert!(is_regular(|x| x * 2u8, 1, 64));
        assert!(!is_regular(|x| x.clone(), 0, 64));
        assert!(!is_regular(|x| x.clone(), 5, 64));
        // x = y = 3 breaks the second clause: 9 − 3 > 2^3 − 3.
        assert!(!is_regular(|x| x * x, 2, 16));
        assert!(is_regular(|x| x * x, 4, 16));
        assert!(is_regular(|x| x * x, 4, 64));
    }

    #[test]
    fn double_plan() {
        let p = StagePlan::new(Phi::Double, 1, &Budget::default()).unwrap();
        assert_eq!(p.n, 2);
        let hs: Vec<_> = (0..4).map(|m| p.h(m).unwrap()).collect();
        assert_eq!(hs, [4u8, 8, 16, 32].map(BigUint::from));
        let s1 = p.stage(1).unwrap();
        assert_eq!((s1.start.clone(), s1.count.clone()), (big(4), big(4)));
        let s2 = p.stage(2).unwrap();
        assert_eq!((s2.start.clone(), s2.count.clone(), s2.h.clone()), (big(16), big(8), big(16)));
        assert_eq!(p.stage(3).unwrap().start, big(65536));
        assert_eq!(p.stage(4).unwrap().start, BigUint::one() << 65536);
        for m in 0..3 {
            assert!(p.regularity_holds(m).unwrap());
        }
    }

    #[test]
    fn successor_skips_gaps() {
        let p = StagePlan::new(Phi::Double, 1, &Budget::default()).unwrap();
        let mut i = big(0);
        let mut seen = vec![];
        for _ in 0..20 {
            seen.push(i.clone());
            i = p.successor(&i).unwrap();
        }
        let expect: Vec<u64> = (0..8).chain(16..24).chain(65536..65540).collect();
        assert_eq!(seen, expect.into_iter().map(big).collect::<Vec<_>>());
        assert_eq!(p.position_of(&big(17)).unwrap(), Some(big(9)));
        assert_eq!(p.position_of(&big(10)).unwrap(), None);
        assert!(p.successor(&big(10)).is_err());
    }

    #[test]
    fn gamma_sizes() {
        let p = StagePlan::new(Phi::Double, 1, &Budget::default()).unwrap();
        assert_eq!(p.gamma_size(&big(1)).unwrap(), big(4));
        assert_eq!(p.gamma_size(&big(5)).unwrap(), big(16));
        for m in 0..=16u64 {
            assert!(p.gamma_size(&big(m)).unwrap() >= big(2 * m));
        }
    }

    #[test]
    fn other_phis() {
        let b = Budget::default();
        let sq = StagePlan::new(Phi::Square, 4, &b).unwrap();
        // φ(4) = 16 is not below 2_3 = 16.
        assert_eq!(sq.n, 4);
        assert_eq!(sq.h(1).unwrap(), BigUint::one() << 32);
        assert!(sq.regularity_holds(0).unwrap());
        assert!(StagePlan::new(Phi::Square, 2, &b).is_err());
        assert!(StagePlan::new(Phi::Succ, 0, &b).is_ok());
    }
}
