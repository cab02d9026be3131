//! Randomized binary agreement from graded votes and a common coin, with
//! ready-message amplification for termination.
//!
//! Once a party outputs it stops iterating: its 2t + 1 readies include t + 1
//! honest ones, so every honest party reaches the output through the ready
//! layer alone.

use std::collections::BTreeMap;

use super::vote::{Graded, Vote};
use crate::party::{PartyId, PartySet};
use crate::simnet::{Body, Cx, Time, COIN_TAG};

/// Iteration cap: traffic for later iterations is ignored (10·n² iterations).
pub fn iteration_cap(n: usize) -> u32 {
    10 * (n * n) as u32
}

#[derive(Clone, Debug)]
pub struct Aba {
    t: usize,
    start: Option<Time>,
    b: bool,
    k: u32,
    first: Option<Graded>,
    votes: BTreeMap<u32, Vote>,
    readies: [PartySet; 2],
    ready_sent: bool,
    committed: bool,
    output: Option<bool>,
}

impl Aba {
    pub fn new(t: usize) -> Aba {
        Aba {
            t,
            start: None,
            b: false,
            k: 0,
            first: None,
            votes: BTreeMap::new(),
            readies: [PartySet::EMPTY; 2],
            ready_sent: false,
            committed: false,
            output: None,
        }
    }

    pub fn output(&self) -> Option<bool> {
        self.output
    }

    pub fn started(&self) -> bool {
        self.start.is_some()
    }

    /// Iterations begun so far.
    pub fn iterations(&self) -> u32 {
        self.k + 1
    }

    pub fn start(&mut self, cx: &mut Cx, input: bool) -> Option<bool> {
        if self.start.is_some() {
            return None;
        }
        self.start = Some(cx.now());
        self.b = input;
        self.start_vote(cx, 0)
    }

    fn vote_mut(&mut self, n: usize, idx: u32) -> &mut Vote {
        let t = self.t;
        self.votes.entry(idx).or_insert_with(|| Vote::new(n, t))
    }

    fn start_vote(&mut self, cx: &mut Cx, idx: u32) -> Option<bool> {
        let n = cx.n();
        let b = self.b;
        let g = cx.sub(idx as u16, |cx| self.vote_mut(n, idx).start(cx, b))?;
        self.on_vote(cx, idx, g)
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<bool> {
        if self.output.is_some() && !path.is_empty() {
            return None;
        }
        match (path, body) {
            ([], Body::AbaReady(b)) => self.on_ready(cx, from, *b),
            ([seg, rest @ ..], _) => {
                let idx = *seg as u32;
                let n = cx.n();
                if idx >= 2 * iteration_cap(n) {
                    return None;
                }
                let g = cx.sub(*seg, |cx| self.vote_mut(n, idx).on_message(cx, from, rest, body))?;
                self.on_vote(cx, idx, g)
            }
            _ => None,
        }
    }

    fn on_vote(&mut self, cx: &mut Cx, idx: u32, g: Graded) -> Option<bool> {
        if self.start.is_none() || self.output.is_some() {
            return None;
        }
        if idx == 2 * self.k && self.first.is_none() {
            self.first = Some(g);
            cx.request_coin(self.k);
        } else if idx == 2 * self.k + 1 && self.first.is_some() {
            if g.grade > 0 {
                self.b = g.bit.expect("graded bit");
            }
            if g.grade == 2 && !self.committed {
                self.committed = true;
                self.send_ready(cx, self.b);
            }
            self.k += 1;
            self.first = None;
            return self.start_vote(cx, 2 * self.k);
        }
        None
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) -> Option<bool> {
        if self.output.is_some() {
            return None;
        }
        if path.is_empty() && tag >= COIN_TAG {
            let k = ((tag - COIN_TAG) >> 1) as u32;
            let coin = tag & 1 == 1;
            if k == self.k {
                if let Some(g) = self.first {
                    if g.grade < 2 {
                        self.b = coin;
                    }
                    return self.start_vote(cx, 2 * self.k + 1);
                }
            }
        }
        None
    }

    fn send_ready(&mut self, cx: &mut Cx, b: bool) {
        if !self.ready_sent {
            self.ready_sent = true;
            cx.send_all(Body::AbaReady(b));
        }
    }

    fn on_ready(&mut self, cx: &mut Cx, from: PartyId, b: bool) -> Option<bool> {
        let set = &mut self.readies[b as usize];
        if set.contains(from) {
            return None;
        }
        set.insert(from);
        let c = set.len();
        if c > self.t {
            self.send_ready(cx, b);
        }
        if c > 2 * self.t && self.output.is_none() {
            self.output = Some(b);
            self.votes.clear();
            if let Some(start) = self.start {
                cx.milestone("aba", start);
            }
            return Some(b);
        }
        None
    }
}
