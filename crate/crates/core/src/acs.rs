//! Agreement on a common subset: every party deals through its own VSS, then
//! one BA per dealer decides whether that dealer's sharing is used.
//!
//! Child segments: VSS of dealer j at `j`, BA about dealer j at `n + j`.

use std::collections::BTreeMap;

use crate::agreement::Ba;
use crate::algebra::{Fe, UniPoly};
use crate::party::{PartyId, PartySet};
use crate::simnet::{Body, Cx, Params, Time};
use crate::vss::Vss;

const T_OPEN: u64 = 1;
const T_DONE: u64 = 2;

/// One BA input, with the number of BA instances that had output 1 when it
/// was given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaInput {
    pub at: Time,
    pub instance: PartyId,
    pub bit: bool,
    pub ones_seen: usize,
}

/// n BA instances run with the 1-then-0 discipline: input 1 for every
/// candidate once opened, input 0 for the rest only after n - t_s instances
/// have decided 1.
#[derive(Clone, Debug)]
pub struct Selector {
    n: usize,
    t_s: usize,
    base: u16,
    bas: Vec<Ba>,
    candidates: PartySet,
    open: bool,
    ones: PartySet,
    decided: PartySet,
    inputs: Vec<BaInput>,
    output: Option<PartySet>,
}

impl Selector {
    /// The BA about party j lives at segment `base + j`.
    pub fn new(n: usize, t_s: usize, base: u16) -> Selector {
        Selector {
            n,
            t_s,
            base,
            bas: (0..n).map(|_| Ba::new(n, t_s)).collect(),
            candidates: PartySet::EMPTY,
            open: false,
            ones: PartySet::EMPTY,
            decided: PartySet::EMPTY,
            inputs: Vec::new(),
            output: None,
        }
    }

    /// Parties whose BA decided 1, once all n have decided.
    pub fn output(&self) -> Option<PartySet> {
        self.output
    }

    pub fn inputs(&self) -> &[BaInput] {
        &self.inputs
    }

    pub fn ba(&self, j: PartyId) -> &Ba {
        &self.bas[j]
    }

    pub fn owns(&self, seg: u16) -> bool {
        seg >= self.base && ((seg - self.base) as usize) < self.n
    }

    /// From now on every candidate gets input 1.
    pub fn open(&mut self, cx: &mut Cx) -> Option<PartySet> {
        self.open = true;
        for j in self.candidates.iter() {
            self.input(cx, j, true);
        }
        self.progress(cx)
    }

    /// Marks party j as having delivered.
    pub fn candidate(&mut self, cx: &mut Cx, j: PartyId) -> Option<PartySet> {
        self.candidates.insert(j);
        if self.open {
            self.input(cx, j, true);
        }
        self.progress(cx)
    }

    fn input(&mut self, cx: &mut Cx, j: PartyId, bit: bool) {
        let ba = &mut self.bas[j];
        if ba.started() || ba.output().is_some() {
            return;
        }
        self.inputs.push(BaInput { at: cx.now(), instance: j, bit, ones_seen: self.ones.len() });
        if let Some(b) = cx.sub(self.base + j as u16, |cx| ba.start(cx, bit)) {
            self.record(j, b);
        }
    }

    fn record(&mut self, j: PartyId, b: bool) {
        self.decided.insert(j);
        if b {
            self.ones.insert(j);
        }
    }

    fn progress(&mut self, cx: &mut Cx) -> Option<PartySet> {
        if self.output.is_some() {
            return None;
        }
        if self.ones.len() >= self.n - self.t_s {
            for j in 0..self.n {
                if !self.candidates.contains(j) {
                    self.input(cx, j, false);
                }
            }
        }
        if self.decided.len() == self.n {
            self.output = Some(self.ones);
            return self.output;
        }
        None
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<PartySet> {
        let (&seg, rest) = path.split_first()?;
        let j = (seg - self.base) as usize;
        if let Some(b) = cx.sub(seg, |cx| self.bas[j].on_message(cx, from, rest, body)) {
            self.record(j, b);
        }
        self.progress(cx)
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) -> Option<PartySet> {
        let (&seg, rest) = path.split_first()?;
        let j = (seg - self.base) as usize;
        if let Some(b) = cx.sub(seg, |cx| self.bas[j].on_timer(cx, rest, tag)) {
            self.record(j, b);
        }
        self.progress(cx)
    }
}

/// The common subset and, for each member, this party's shares of its L
/// polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcsOutput {
    pub cs: PartySet,
    pub shares: BTreeMap<PartyId, Vec<Fe>>,
}

#[derive(Clone, Debug)]
pub struct Acs {
    n: usize,
    vss: Vec<Vss>,
    selector: Selector,
    start: Option<Time>,
    shares: BTreeMap<PartyId, Vec<Fe>>,
    cs: Option<PartySet>,
    padded: bool,
    output: Option<AcsOutput>,
}

impl Acs {
    /// Every dealer shares `l` polynomials.
    pub fn new(p: &Params, l: usize) -> Acs {
        let n = p.n;
        let t_wps = p.timing().wps;
        Acs {
            n,
            vss: (0..n).map(|j| Vss::new(n, p.t_s, p.t_a, l, j, p.delta, t_wps)).collect(),
            selector: Selector::new(n, p.t_s, n as u16),
            start: None,
            shares: BTreeMap::new(),
            cs: None,
            padded: false,
            output: None,
        }
    }

    pub fn output(&self) -> Option<&AcsOutput> {
        self.output.as_ref()
    }

    pub fn vss(&self, j: PartyId) -> &Vss {
        &self.vss[j]
    }

    pub fn selector(&self) -> &Selector {
        &self.selector
    }

    /// Every party at the common start time; `polys` is this party's input.
    pub fn start(&mut self, cx: &mut Cx, polys: &[UniPoly]) {
        if self.start.is_some() {
            return;
        }
        let now = cx.now();
        self.start = Some(now);
        let me = cx.me();
        for (j, v) in self.vss.iter_mut().enumerate() {
            cx.sub(j as u16, |cx| {
                v.start(cx);
                if j == me {
                    v.deal(cx, polys);
                }
            });
        }
        cx.timer_at(now + cx.timing().vss, T_OPEN);
        cx.timer_at(now + cx.timing().acs, T_DONE);
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<AcsOutput> {
        let (&seg, rest) = path.split_first()?;
        if (seg as usize) < self.n {
            let j = seg as usize;
            let out = cx.sub(seg, |cx| self.vss[j].on_message(cx, from, rest, body));
            self.on_vss(cx, j, out);
        } else if self.selector.owns(seg) {
            if let Some(cs) = self.selector.on_message(cx, from, path, body) {
                self.cs = Some(cs);
            }
        }
        self.progress(cx)
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) -> Option<AcsOutput> {
        match path.split_first() {
            None if tag == T_OPEN => {
                if let Some(cs) = self.selector.open(cx) {
                    self.cs = Some(cs);
                }
            }
            None if tag == T_DONE => self.padded = true,
            Some((&seg, rest)) if (seg as usize) < self.n => {
                let j = seg as usize;
                let out = cx.sub(seg, |cx| self.vss[j].on_timer(cx, rest, tag));
                self.on_vss(cx, j, out);
            }
            Some((&seg, _)) if self.selector.owns(seg) => {
                if let Some(cs) = self.selector.on_timer(cx, path, tag) {
                    self.cs = Some(cs);
                }
            }
            _ => {}
        }
        self.progress(cx)
    }

    fn on_vss(&mut self, cx: &mut Cx, j: PartyId, out: Option<Vec<Fe>>) {
        if let Some(s) = out {
            self.shares.insert(j, s);
            if let Some(cs) = self.selector.candidate(cx, j) {
                self.cs = Some(cs);
            }
        }
    }

    fn progress(&mut self, cx: &mut Cx) -> Option<AcsOutput> {
        if self.output.is_some() || !self.padded {
            return None;
        }
        let cs = self.cs?;
        if cs.iter().any(|j| !self.shares.contains_key(&j)) {
            return None;
        }
        let shares = cs.iter().map(|j| (j, self.shares[&j].clone())).collect();
        let out = AcsOutput { cs, shares };
        self.output = Some(out.clone());
        if let Some(start) = self.start {
            cx.milestone("acs", start);
        }
        Some(out)
    }
}
