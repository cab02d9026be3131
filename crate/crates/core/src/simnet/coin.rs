//! Idealized common coin with a budgeted failure model.
//!
//! A flip is keyed by (ABA instance, iteration). On the first request the
//! outcome is fixed for all parties: an adversary-forced failure while the
//! instance's budget lasts, otherwise a common uniform bit with probability p
//! and independent per-party bits with probability 1 - p.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::path::Path;
use crate::party::PartyId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoinOutcome {
    Common(bool),
    Split(Vec<bool>),
    Forced(Vec<bool>),
}

impl CoinOutcome {
    pub fn bit(&self, party: PartyId) -> bool {
        match self {
            CoinOutcome::Common(b) => *b,
            CoinOutcome::Split(v) | CoinOutcome::Forced(v) => v[party],
        }
    }
}

#[derive(Debug)]
pub struct CoinOracle {
    p: f64,
    budget: usize,
    rng: ChaCha8Rng,
    flips: HashMap<(Path, u32), CoinOutcome>,
    spent: HashMap<Path, usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CoinStats {
    pub flips: usize,
    pub common: usize,
    pub forced: usize,
    /// Largest number of forced failures spent on one instance.
    pub max_spent: usize,
}

impl CoinOracle {
    pub fn new(p: f64, budget: usize, rng: ChaCha8Rng) -> CoinOracle {
        CoinOracle { p, budget, rng, flips: HashMap::new(), spent: HashMap::new() }
    }

    /// The outcome of flip `k` of instance `path`, deciding it if new.
    /// `attack` is consulted only for undecided flips.
    pub fn flip(&mut self, path: Path, k: u32, n: usize, attack: impl FnOnce() -> Option<Vec<bool>>) -> &CoinOutcome {
        if !self.flips.contains_key(&(path, k)) {
            let spent = self.spent.entry(path).or_insert(0);
            let forced = if *spent < self.budget { attack() } else { None };
            let outcome = match forced {
                Some(bits) => {
                    assert_eq!(bits.len(), n, "one forced coin bit per party");
                    *spent += 1;
                    CoinOutcome::Forced(bits)
                }
                None if self.rng.gen_bool(self.p) => CoinOutcome::Common(self.rng.gen()),
                None => CoinOutcome::Split((0..n).map(|_| self.rng.gen()).collect()),
            };
            self.flips.insert((path, k), outcome);
        }
        &self.flips[&(path, k)]
    }

    pub fn stats(&self) -> CoinStats {
        let max_spent = self.spent.values().copied().max().unwrap_or(0);
        let mut s = CoinStats { flips: self.flips.len(), max_spent, ..CoinStats::default() };
        for o in self.flips.values() {
            match o {
                CoinOutcome::Common(_) => s.common += 1,
                CoinOutcome::Forced(_) => s.forced += 1,
                CoinOutcome::Split(_) => {}
            }
        }
        s
    }
}
