//! Graded voting: three Acast waves (input, vote, re-vote).

use crate::broadcast::Acast;
use crate::party::{PartyId, PartySet};
use crate::simnet::{Body, Cx, Value};

/// A graded bit: `bit` is `None` (Λ) exactly when `grade` is 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Graded {
    pub bit: Option<bool>,
    pub grade: u8,
}

/// Majority of the bits of `members` in `bits`; ties go to 1.
pub fn majority(members: PartySet, bits: u64) -> bool {
    let ones = (members.0 & bits).count_ones() as usize;
    2 * ones >= members.len()
}

/// A dynamic set of (party, bit) pairs that remembers arrival order.
#[derive(Clone, Debug, Default)]
struct BitSet {
    members: PartySet,
    bits: u64,
    order: Vec<PartyId>,
}

impl BitSet {
    fn add(&mut self, p: PartyId, b: bool) {
        if !self.members.contains(p) {
            self.members.insert(p);
            self.bits |= (b as u64) << p;
            self.order.push(p);
        }
    }

    /// Whether every cited (party, bit) pair is in this set.
    fn covers(&self, members: PartySet, bits: u64) -> bool {
        members.is_subset(&self.members) && (bits ^ self.bits) & members.0 == 0
    }

    /// The first `k` members to arrive.
    fn first(&self, k: usize) -> (PartySet, u64) {
        let m = PartySet::from_iter(self.order[..k].iter().copied());
        (m, self.bits & m.0)
    }
}

#[derive(Clone, Debug)]
pub struct Vote {
    t: usize,
    started: bool,
    input: bool,
    acasts: Vec<Acast>,
    /// 𝒳_i, 𝒴_i, Z_i.
    xs: BitSet,
    ys: BitSet,
    zs: BitSet,
    pending_votes: Vec<(PartyId, PartySet, u64, bool)>,
    pending_revotes: Vec<(PartyId, PartySet, u64, bool)>,
    my_y: Option<(PartySet, u64)>,
    voted: bool,
    revoted: bool,
    output: Option<Graded>,
}

impl Vote {
    pub fn new(n: usize, t: usize) -> Vote {
        Vote {
            t,
            started: false,
            input: false,
            acasts: (0..3 * n).map(|k| Acast::new(k % n, t)).collect(),
            xs: BitSet::default(),
            ys: BitSet::default(),
            zs: BitSet::default(),
            pending_votes: Vec::new(),
            pending_revotes: Vec::new(),
            my_y: None,
            voted: false,
            revoted: false,
            output: None,
        }
    }

    pub fn output(&self) -> Option<Graded> {
        self.output
    }

    pub fn start(&mut self, cx: &mut Cx, input: bool) -> Option<Graded> {
        if self.started {
            return None;
        }
        self.started = true;
        self.input = input;
        let me = cx.me();
        cx.sub(me as u16, |cx| self.acasts[me].input(cx, Value::Bit(input)));
        self.progress(cx)
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<Graded> {
        let n = cx.n();
        let &[seg] = path else { return None };
        let k = seg as usize;
        if k >= 3 * n {
            return None;
        }
        let out = cx.sub(seg, |cx| self.acasts[k].on_message(cx, from, body))?;
        let sender = k % n;
        match (k / n, out) {
            (0, Value::Bit(b)) => self.xs.add(sender, b),
            (1, Value::Vote { members, bits, bit }) => self.pending_votes.push((sender, members, bits, bit)),
            (2, Value::Vote { members, bits, bit }) => self.pending_revotes.push((sender, members, bits, bit)),
            _ => return None,
        }
        self.progress(cx)
    }

    fn progress(&mut self, cx: &mut Cx) -> Option<Graded> {
        if self.output.is_some() {
            return None;
        }
        let n = cx.n();
        let quota = n - self.t;
        let me = cx.me() as u16;
        // justified votes join 𝒴_i; justified re-votes join Z_i
        let xs = &self.xs;
        let ys = &mut self.ys;
        self.pending_votes.retain(|&(p, m, bits, bit)| {
            let ok = m.len() == quota && xs.covers(m, bits);
            if ok && bit == majority(m, bits) {
                ys.add(p, bit);
            }
            m.len() == quota && !ok
        });
        if self.started && !self.voted && self.xs.members.len() >= quota {
            self.voted = true;
            let (m, bits) = self.xs.first(quota);
            let v = Value::Vote { members: m, bits, bit: majority(m, bits) };
            cx.sub(n as u16 + me, |cx| self.acasts[n + me as usize].input(cx, v));
        }
        if self.voted && self.my_y.is_none() && self.ys.members.len() >= quota {
            let (m, bits) = self.ys.first(quota);
            self.my_y = Some((m, bits));
            let v = Value::Vote { members: m, bits, bit: majority(m, bits) };
            self.revoted = true;
            cx.sub(2 * n as u16 + me, |cx| self.acasts[2 * n + me as usize].input(cx, v));
        }
        let ys = &self.ys;
        let zs = &mut self.zs;
        self.pending_revotes.retain(|&(p, m, bits, bit)| {
            let ok = m.len() == quota && ys.covers(m, bits);
            if ok && bit == majority(m, bits) {
                zs.add(p, bit);
            }
            m.len() == quota && !ok
        });
        let (ym, ybits) = self.my_y?;
        if !self.revoted || self.zs.members.len() < quota {
            return None;
        }
        let (zm, zbits) = self.zs.first(quota);
        let same = |m: PartySet, bits: u64| -> Option<bool> {
            match (m.0 & bits).count_ones() as usize {
                0 => Some(false),
                c if c == m.len() => Some(true),
                _ => None,
            }
        };
        let out = if let Some(s) = same(ym, ybits) {
            Graded { bit: Some(s), grade: 2 }
        } else if let Some(s) = same(zm, zbits) {
            Graded { bit: Some(s), grade: 1 }
        } else {
            Graded { bit: None, grade: 0 }
        };
        self.output = Some(out);
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_ties_to_one() {
        let m = PartySet::from_iter([0, 1, 2, 3]);
        assert!(majority(m, 0b0011));
        assert!(!majority(m, 0b0001));
        assert!(majority(PartySet::from_iter([1, 2, 3]), 0b0110));
    }
}
