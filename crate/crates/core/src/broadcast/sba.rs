//! Synchronous Byzantine agreement by phase king, padded to T_BGP.
//!
//! t + 1 phases of three Δ-rounds each. Round 1: everyone sends its value and
//! proposes a value seen n - t times. Round 2: everyone sends its proposal and
//! adopts a value proposed t + 1 times, calling it strong at n - t. Round 3:
//! the phase king (party φ) sends its value, which non-strong parties adopt.
//! The decision is output at start + T_BGP. A round-1 or round-2 quota shortfall
//! (fewer than n - t messages, impossible in a synchronous run) makes the
//! output ⊥.

use crate::party::{PartyId, PartySet};
use crate::simnet::{Body, Cx, Opt, Time};

const OUTPUT: u64 = u64::MAX >> 2;

#[derive(Clone, Debug, Default)]
struct Round {
    from: PartySet,
    tally: Vec<(Option<Opt>, usize)>,
}

impl Round {
    fn add(&mut self, from: PartyId, v: &Option<Opt>) {
        if self.from.contains(from) {
            return;
        }
        self.from.insert(from);
        match self.tally.iter_mut().find(|(x, _)| x == v) {
            Some((_, c)) => *c += 1,
            None => self.tally.push((v.clone(), 1)),
        }
    }

    /// The most frequent entry (first seen on ties).
    fn top(&self) -> Option<(&Option<Opt>, usize)> {
        let mut best: Option<(&Option<Opt>, usize)> = None;
        for (v, c) in &self.tally {
            if best.is_none_or(|(_, b)| *c > b) {
                best = Some((v, *c));
            }
        }
        best
    }
}

#[derive(Clone, Debug)]
pub struct Sba {
    t: usize,
    start: Option<Time>,
    v: Opt,
    proposal: Option<Opt>,
    strong: bool,
    /// Next round to be closed.
    next: usize,
    rounds: Vec<Round>,
    quota_failed: bool,
    output: Option<Opt>,
}

impl Sba {
    pub fn new(t: usize) -> Sba {
        Sba {
            t,
            start: None,
            v: None,
            proposal: None,
            strong: false,
            next: 0,
            rounds: vec![Round::default(); 3 * (t + 1)],
            quota_failed: false,
            output: None,
        }
    }

    pub fn output(&self) -> Option<&Opt> {
        self.output.as_ref()
    }

    pub fn started(&self) -> bool {
        self.start.is_some()
    }

    pub fn start(&mut self, cx: &mut Cx, input: Opt) {
        if self.start.is_some() {
            return;
        }
        self.start = Some(cx.now());
        self.v = input;
        self.open_round(cx, 0);
    }

    fn open_round(&mut self, cx: &mut Cx, r: usize) {
        let phase = (r / 3) as u8;
        match r % 3 {
            0 => cx.send_all(Body::Sba1(phase, self.v.clone())),
            1 => cx.send_all(Body::Sba2(phase, self.proposal.clone())),
            _ => {
                if cx.me() == (r / 3) % cx.n() {
                    cx.send_all(Body::Sba3(phase, self.v.clone()));
                }
            }
        }
        let start = self.start.expect("started");
        cx.timer_at(start + (r as Time + 1) * cx.delta(), r as u64);
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, body: &Body) {
        // round-2 entries keep "no proposal" (None) apart from "propose ⊥" (Some(None))
        let (r, v) = match body {
            Body::Sba1(ph, x) => (3 * *ph as usize, Some(x.clone())),
            Body::Sba2(ph, p) => (3 * *ph as usize + 1, p.clone()),
            Body::Sba3(ph, x) if from == (*ph as usize) % cx.n() => (3 * *ph as usize + 2, Some(x.clone())),
            _ => return,
        };
        if r >= self.next && r < self.rounds.len() {
            self.rounds[r].add(from, &v);
        }
    }

    /// Returns the output at start + T_BGP.
    pub fn on_timer(&mut self, cx: &mut Cx, tag: u64) -> Option<Opt> {
        if tag == OUTPUT {
            let out = if self.quota_failed { None } else { self.v.clone() };
            self.output = Some(out.clone());
            return Some(out);
        }
        let r = tag as usize;
        if r != self.next {
            return None;
        }
        self.close_round(cx, r);
        self.next += 1;
        if self.next < self.rounds.len() {
            self.open_round(cx, self.next);
        } else {
            let start = self.start.expect("started");
            cx.timer_at(start + cx.timing().bgp, OUTPUT);
        }
        None
    }

    fn close_round(&mut self, cx: &mut Cx, r: usize) {
        let n = cx.n();
        let t = self.t;
        let round = std::mem::take(&mut self.rounds[r]);
        match r % 3 {
            0 | 1 if round.from.len() < n - t => self.quota_failed = true,
            _ => {}
        }
        match r % 3 {
            0 => {
                self.proposal = match round.top() {
                    Some((Some(x), c)) if c >= n - t => Some(x.clone()),
                    _ => None,
                };
            }
            1 => {
                self.strong = false;
                let best = round
                    .tally
                    .iter()
                    .filter_map(|(p, c)| p.as_ref().map(|x| (x, *c)))
                    .fold(None::<(&Opt, usize)>, |b, (x, c)| if b.is_none_or(|(_, bc)| c > bc) { Some((x, c)) } else { b });
                if let Some((x, c)) = best {
                    if c > t {
                        self.v = x.clone();
                        self.strong = c >= n - t;
                    }
                }
            }
            _ => {
                if !self.strong {
                    if let Some((Some(x), _)) = round.top() {
                        self.v = x.clone();
                    }
                }
            }
        }
    }
}
