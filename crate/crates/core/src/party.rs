//! Party identifiers and compact party sets.

use std::fmt;

/// 0-based party index. Party `i` evaluates at α = i + 1.
pub type PartyId = usize;

/// Maximum number of parties supported by [`PartySet`].
pub const MAX_PARTIES: usize = 64;

/// A set of parties stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartySet(pub u64);

impl PartySet {
    pub const EMPTY: PartySet = PartySet(0);

    pub fn all(n: usize) -> PartySet {
        if n >= 64 {
            PartySet(u64::MAX)
        } else {
            PartySet((1u64 << n) - 1)
        }
    }

    pub fn contains(&self, p: PartyId) -> bool {
        p < 64 && self.0 >> p & 1 == 1
    }

    pub fn insert(&mut self, p: PartyId) -> bool {
        let had = self.contains(p);
        self.0 |= 1 << p;
        !had
    }

    pub fn remove(&mut self, p: PartyId) {
        self.0 &= !(1 << p);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, o: &PartySet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn union(&self, o: &PartySet) -> PartySet {
        PartySet(self.0 | o.0)
    }

    pub fn intersect(&self, o: &PartySet) -> PartySet {
        PartySet(self.0 & o.0)
    }

    pub fn minus(&self, o: &PartySet) -> PartySet {
        PartySet(self.0 & !o.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = PartyId> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    /// The `k` lowest-indexed members.
    pub fn first(&self, k: usize) -> PartySet {
        PartySet::from_iter(self.iter().take(k))
    }
}

impl fmt::Debug for PartySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<PartyId> for PartySet {
    fn from_iter<I: IntoIterator<Item = PartyId>>(it: I) -> PartySet {
        let mut s = PartySet::EMPTY;
        for p in it {
            s.insert(p);
        }
        s
    }
}
