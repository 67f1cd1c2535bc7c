//! Materialization limits and suite parameters, overridable as `key=value` lists.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest power set (in result elements) that will be built.
    pub power: u64,
    /// Largest |TC(S)| for which the ε-fan is enumerated.
    pub fan: usize,
    /// Largest |S| for the exact Card(S) construction.
    pub card: usize,
    /// Largest set-level exponent result.
    pub exp: u64,
    /// Longest ACK term that will be materialized as a set.
    pub ackset: u64,
    /// Cap on the bit length of tower values and stage boundaries.
    pub bits: u64,
    /// Cap on enumerated terms and numbers.
    pub terms: u64,
    /// Exhaustive ranges run over codes below 2^codes.
    pub codes: u32,
    /// Random cases per randomized check.
    pub samples: usize,
    /// Environments per corpus term.
    pub envs: usize,
    /// Environment values have codes below 2^env_bits.
    pub env_bits: u32,
    /// Iterations of the ACK₀ successor.
    pub ack0: u64,
    /// Terms checked per numeral system.
    pub numerals: u64,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            power: 1 << 20,
            fan: 12,
            card: 4,
            exp: 1 << 12,
            ackset: 1 << 12,
            bits: 1 << 20,
            terms: 1 << 20,
            codes: 16,
            samples: 10_000,
            envs: 100,
            env_bits: 12,
            ack0: 1024,
            numerals: 256,
            seed: 0x5eed,
        }
    }
}

impl Budget {
    /// Apply a comma separated `key=value` list on top of `self`.
    pub fn apply(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| Error::BadBudget(item.into()))?;
            let bad = || Error::BadBudget(item.to_string());
            let n: u64 = v.trim().parse().map_err(|_| bad())?;
            match k.trim() {
                "power" => self.power = n,
                "fan" => self.fan = n as usize,
                "card" => self.card = n as usize,
                "exp" => self.exp = n,
                "ackset" => self.ackset = n,
                "bits" => self.bits = n,
                "terms" => self.terms = n,
                "codes" => self.codes = u32::try_from(n).ok().filter(|&c| c <= 24).ok_or_else(bad)?,
                "samples" => self.samples = n as usize,
                "envs" => self.envs = n as usize,
                "env_bits" => self.env_bits = u32::try_from(n).ok().filter(|&c| c <= 16).ok_or_else(bad)?,
                "ack0" => self.ack0 = n,
                "numerals" => self.numerals = n,
                "seed" => self.seed = n,
                _ => return Err(bad()),
            }
        }
        Ok(self)
    }

    pub fn parse(spec: &str) -> Result<Self> {
        Budget::default().apply(spec)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let b = Budget::parse("fan=5, codes=10,seed=7").unwrap();
        assert_eq!((b.fan, b.codes, b.seed), (5, 10, 7));
        assert_eq!(b.power, Budget::default().power);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Budget::parse("fan").is_err());
        assert!(Budget::parse("nope=1").is_err());
        assert!(Budget::parse("codes=99").is_err());
    }
}
