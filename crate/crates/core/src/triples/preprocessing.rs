//! Preprocessing: every party deals triples through its own TripSh, a BA per
//! dealer fixes the providers, and each batch of the first 2d + 1 providers'
//! triples is transformed and sampled at fresh points.
//!
//! Child segments: TripSh of dealer j at `j`, BA about dealer j at `n + j`,
//! the extraction Beaver batch at `2n`.

use std::collections::BTreeMap;

use crate::acs::Selector;
use crate::algebra::Fe;
use crate::party::{PartyId, PartySet};
use crate::simnet::{Body, Cx, Params, Time};

use super::open::{Beaver, BeaverItem};
use super::tripsh::TripSh;
use super::{beta, extend, position, Triple};

const T_OPEN: u64 = 1;
const T_DONE: u64 = 2;

/// (d, yield): extraction runs on 2d + 1 providers with d = ⌊(n - t_s - 1)/2⌋
/// and gives d + 1 - t_s triples per batch.
pub fn extract_params(n: usize, t_s: usize) -> (usize, usize) {
    let d = (n - t_s - 1) / 2;
    (d, d + 1 - t_s)
}

/// Batches each dealer shares so that `c_m` triples come out.
pub fn batches(n: usize, t_s: usize, c_m: usize) -> usize {
    c_m.div_ceil(extract_params(n, t_s).1)
}

#[derive(Clone, Debug)]
pub struct PreProcessing {
    n: usize,
    t_s: usize,
    c_m: usize,
    l: usize,
    tripsh: Vec<TripSh>,
    selector: Selector,
    extract: Beaver,
    start: Option<Time>,
    provided: BTreeMap<PartyId, Vec<Triple>>,
    cs: Option<PartySet>,
    heads: Vec<(Vec<Fe>, Vec<Fe>, Vec<Fe>)>,
    padded: bool,
    triples: Option<Vec<Triple>>,
    output: Option<Vec<Triple>>,
}

impl PreProcessing {
    pub fn new(p: &Params, c_m: usize) -> PreProcessing {
        let n = p.n;
        let l = batches(n, p.t_s, c_m);
        PreProcessing {
            n,
            t_s: p.t_s,
            c_m,
            l,
            tripsh: (0..n).map(|j| TripSh::new(p, j, l)).collect(),
            selector: Selector::new(n, p.t_s, n as u16),
            extract: Beaver::new(p.t_s),
            start: None,
            provided: BTreeMap::new(),
            cs: None,
            heads: Vec::new(),
            padded: false,
            triples: None,
            output: None,
        }
    }

    pub fn output(&self) -> Option<&[Triple]> {
        self.output.as_deref()
    }

    /// The first n - t_s parties whose BA decided 1.
    pub fn cs(&self) -> Option<PartySet> {
        self.cs
    }

    pub fn selector(&self) -> &Selector {
        &self.selector
    }

    /// The Beaver batch of the extraction step.
    pub fn extraction(&self) -> &Beaver {
        &self.extract
    }

    pub fn tripsh(&self, j: PartyId) -> &TripSh {
        &self.tripsh[j]
    }

    /// Every party at the common start time. `dealt` and `verification`
    /// override this party's own TripSh dealing and its verification triples.
    pub fn start(&mut self, cx: &mut Cx, dealt: Option<Vec<Triple>>, verification: Option<Vec<Triple>>) {
        if self.start.is_some() {
            return;
        }
        let now = cx.now();
        self.start = Some(now);
        let me = cx.me();
        for (j, ts) in self.tripsh.iter_mut().enumerate() {
            let dealt = if j == me { dealt.clone() } else { None };
            let verification = verification.clone();
            cx.sub(j as u16, |cx| ts.start(cx, dealt, verification));
        }
        cx.timer_at(now + cx.timing().tripsh, T_OPEN);
        cx.timer_at(now + cx.timing().tripgen, T_DONE);
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<Vec<Triple>> {
        let (&seg, rest) = path.split_first()?;
        let j = seg as usize;
        if j < self.n {
            let out = cx.sub(seg, |cx| self.tripsh[j].on_message(cx, from, rest, body));
            self.on_provided(cx, j, out.map(|o| o.triples));
        } else if self.selector.owns(seg) {
            let out = self.selector.on_message(cx, from, path, body);
            self.on_selected(cx, out);
        } else if j == 2 * self.n {
            let out = cx.sub(seg, |cx| self.extract.on_message(cx, from, body));
            self.on_extracted(cx, out);
        }
        self.progress(cx)
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) -> Option<Vec<Triple>> {
        match path.split_first() {
            None if tag == T_OPEN => {
                let out = self.selector.open(cx);
                self.on_selected(cx, out);
            }
            None if tag == T_DONE => self.padded = true,
            Some((&seg, rest)) if (seg as usize) < self.n => {
                let j = seg as usize;
                let out = cx.sub(seg, |cx| self.tripsh[j].on_timer(cx, rest, tag));
                self.on_provided(cx, j, out.map(|o| o.triples));
            }
            Some((&seg, _)) if self.selector.owns(seg) => {
                let out = self.selector.on_timer(cx, path, tag);
                self.on_selected(cx, out);
            }
            _ => {}
        }
        self.progress(cx)
    }

    fn on_provided(&mut self, cx: &mut Cx, j: PartyId, out: Option<Vec<Triple>>) {
        if let Some(t) = out {
            self.provided.insert(j, t);
            let sel = self.selector.candidate(cx, j);
            self.on_selected(cx, sel);
            self.begin_extract(cx);
        }
    }

    fn on_selected(&mut self, cx: &mut Cx, out: Option<PartySet>) {
        if let Some(ones) = out {
            self.cs = Some(ones.first(self.n - self.t_s));
            self.begin_extract(cx);
        }
    }

    /// One transformation per batch over the first 2d + 1 providers.
    fn begin_extract(&mut self, cx: &mut Cx) {
        if self.extract.started() {
            return;
        }
        let Some(cs) = self.cs else { return };
        let (d, _) = extract_params(self.n, self.t_s);
        let used: Vec<PartyId> = cs.iter().take(2 * d + 1).collect();
        if used.iter().any(|j| !self.provided.contains_key(j)) {
            return;
        }
        let f = cx.field();
        let mut items = Vec::new();
        self.heads.clear();
        for b in 0..self.l {
            let col = |c: usize| -> Vec<Fe> { used.iter().map(|j| self.provided[j][b][c]).collect() };
            let (x, y, z) = (col(0), col(1), col(2));
            let mut head = (x[..=d].to_vec(), y[..=d].to_vec(), z[..=d].to_vec());
            for k in d + 1..2 * d + 1 {
                let p = position(f, k);
                let (xk, yk) = (extend(&x[..=d], p), extend(&y[..=d], p));
                head.0.push(xk);
                head.1.push(yk);
                items.push(BeaverItem { x: xk, y: yk, a: x[k], b: y[k], c: z[k] });
            }
            self.heads.push(head);
        }
        let seg = 2 * self.n as u16;
        let out = cx.sub(seg, |cx| self.extract.start(cx, items));
        self.on_extracted(cx, out);
    }

    fn on_extracted(&mut self, cx: &mut Cx, out: Option<Vec<Fe>>) {
        let Some(z) = out else { return };
        let (d, per) = extract_params(self.n, self.t_s);
        let f = cx.field();
        for (b, head) in self.heads.iter_mut().enumerate() {
            head.2.extend_from_slice(&z[b * d..(b + 1) * d]);
        }
        let mut triples = Vec::with_capacity(self.l * per);
        for (xs, ys, zs) in &self.heads {
            for j in 0..per {
                let p = beta(f, self.n, j);
                triples.push([extend(&xs[..=d], p), extend(&ys[..=d], p), extend(&zs[..=2 * d], p)]);
            }
        }
        triples.truncate(self.c_m);
        self.triples = Some(triples);
    }

    fn progress(&mut self, cx: &mut Cx) -> Option<Vec<Triple>> {
        if !self.padded || self.output.is_some() {
            return None;
        }
        let out = self.triples.clone()?;
        self.output = Some(out.clone());
        if let Some(start) = self.start {
            cx.milestone("tripgen", start);
        }
        Some(out)
    }
}
