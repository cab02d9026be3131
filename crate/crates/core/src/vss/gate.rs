//! Phases III to VI shared by WPS and VSS: OK/NOK broadcasts, the dealer's
//! (𝒲, ℰ, ℱ) announcement, acceptance, the ΠBA vote on it, and the
//! (ℰ′, ℱ′) star fallback.
//!
//! Child segments: OK/NOK broadcast of P_i about P_j at `i * n + j`, then the
//! (𝒲, ℰ, ℱ) broadcast, the star broadcast and the ΠBA instance.

use std::collections::BTreeMap;

use crate::agreement::Ba;
use crate::algebra::{Fe, SymBivarPoly};
use crate::broadcast::{Bc, BcOut};
use crate::party::{PartyId, PartySet};
use crate::simnet::{Body, Cx, Time, Value};
use crate::stargraph::{compute_w, find_star, is_star, ConsistencyGraph, Star};

const T_OKNOK: u64 = 100;
const T_DECIDE: u64 = 101;
const T_ACCEPT: u64 = 102;
const T_DEADLINE: u64 = 103;

/// Who may use their own row, and whose values fill in for everybody else.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Resolved {
    /// 0 for the (𝒲, ℰ, ℱ) branch, 1 for the star branch.
    pub branch: u8,
    pub own: PartySet,
    pub support: PartySet,
}

#[derive(Clone, Debug)]
struct Snapshot {
    graph: ConsistencyGraph,
    ok_regular: Vec<u64>,
    nok_regular: BTreeMap<(PartyId, PartyId), (u16, Fe)>,
}

#[derive(Clone, Debug)]
pub struct Gate {
    n: usize,
    t_s: usize,
    t_a: usize,
    dealer: PartyId,
    /// Offset of the OK/NOK phase from the instance start.
    offset: Time,
    anchor: Option<Time>,
    oknok: Vec<Bc>,
    wef: Bc,
    star: Bc,
    ba: Ba,
    graph: ConsistencyGraph,
    ok_regular: Vec<u64>,
    nok_regular: BTreeMap<(PartyId, PartyId), (u16, Fe)>,
    declared: PartySet,
    snapshot: Option<Snapshot>,
    bivars: Option<Vec<SymBivarPoly>>,
    accepted: Option<bool>,
    ba_out: Option<bool>,
    branch: Option<bool>,
    star_open: bool,
    star_buffer: Vec<(PartyId, Vec<u16>, Body)>,
    star_sent: bool,
    resolved: Option<Resolved>,
}

impl Gate {
    pub fn new(n: usize, t_s: usize, t_a: usize, dealer: PartyId, offset: Time) -> Gate {
        Gate {
            n,
            t_s,
            t_a,
            dealer,
            offset,
            anchor: None,
            oknok: (0..n * n).map(|k| Bc::new(k / n, t_s)).collect(),
            wef: Bc::new(dealer, t_s),
            star: Bc::new(dealer, t_s),
            ba: Ba::new(n, t_s),
            graph: ConsistencyGraph::new(n),
            ok_regular: vec![0; n],
            nok_regular: BTreeMap::new(),
            declared: PartySet::EMPTY,
            snapshot: None,
            bivars: None,
            accepted: None,
            ba_out: None,
            branch: None,
            star_open: false,
            star_buffer: Vec::new(),
            star_sent: false,
            resolved: None,
        }
    }

    /// First segment free for the owner's own children.
    pub fn segments(n: usize) -> u16 {
        (n * n + 3) as u16
    }

    fn wef_seg(&self) -> u16 {
        (self.n * self.n) as u16
    }

    fn star_seg(&self) -> u16 {
        self.wef_seg() + 1
    }

    fn ba_seg(&self) -> u16 {
        self.wef_seg() + 2
    }

    pub fn graph(&self) -> &ConsistencyGraph {
        &self.graph
    }

    pub fn accepted(&self) -> Option<bool> {
        self.accepted
    }

    pub fn ba_output(&self) -> Option<bool> {
        self.ba_out
    }

    pub fn resolved(&self) -> Option<Resolved> {
        self.resolved
    }

    /// The (𝒲, ℰ, ℱ) triple as received, in any mode.
    pub fn wef(&self) -> Option<&Value> {
        self.wef.value()
    }

    pub fn star_value(&self) -> Option<&Value> {
        self.star.value()
    }

    /// NOK broadcasts seen in regular mode, keyed by (accuser, accused).
    pub fn regular_noks(&self) -> &BTreeMap<(PartyId, PartyId), (u16, Fe)> {
        &self.nok_regular
    }

    /// Dealer only: the bivariate polynomials behind the rows, for NOK pruning.
    pub fn set_bivars(&mut self, bivars: Vec<SymBivarPoly>) {
        self.bivars = Some(bivars);
    }

    pub fn start(&mut self, cx: &mut Cx) {
        if self.anchor.is_some() {
            return;
        }
        let now = cx.now();
        let tm = *cx.timing();
        self.anchor = Some(now);
        let o = now + self.offset;
        cx.timer_at(o, T_OKNOK);
        cx.timer_at(o + tm.bc, T_DECIDE);
        cx.timer_at(o + 2 * tm.bc, T_ACCEPT);
        cx.timer_at(o + 2 * tm.bc + tm.ba, T_DEADLINE);
    }

    /// Broadcasts this party's verdict (OK or NOK) about `j`, once.
    pub fn declare(&mut self, cx: &mut Cx, j: PartyId, verdict: Value) {
        if self.declared.contains(j) {
            return;
        }
        self.declared.insert(j);
        let seg = cx.me() * self.n + j;
        let bc = &mut self.oknok[seg];
        cx.sub(seg as u16, |cx| bc.input(cx, verdict));
    }

    pub fn declared(&self) -> PartySet {
        self.declared
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        let Some((&seg, rest)) = path.split_first() else { return };
        let k = seg as usize;
        if k < self.n * self.n {
            let out = cx.sub(seg, |cx| self.oknok[k].on_message(cx, from, rest, body));
            self.on_oknok(k, out);
        } else if seg == self.wef_seg() {
            cx.sub(seg, |cx| self.wef.on_message(cx, from, rest, body));
        } else if seg == self.star_seg() {
            if !self.star_open {
                self.star_buffer.push((from, rest.to_vec(), body.clone()));
                return;
            }
            cx.sub(seg, |cx| self.star.on_message(cx, from, rest, body));
        } else if seg == self.ba_seg() {
            if let Some(b) = cx.sub(seg, |cx| self.ba.on_message(cx, from, rest, body)) {
                self.ba_out = Some(b);
            }
        }
        self.advance(cx);
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        match path.split_first() {
            None => match tag {
                T_OKNOK => {
                    for (k, bc) in self.oknok.iter_mut().enumerate() {
                        cx.sub(k as u16, |cx| bc.start(cx));
                    }
                }
                T_DECIDE => self.decide(cx),
                T_ACCEPT => self.accept(cx),
                T_DEADLINE => {
                    self.star_open = true;
                    let seg = self.star_seg();
                    let star = &mut self.star;
                    cx.sub(seg, |cx| star.start(cx));
                    for (from, rest, body) in std::mem::take(&mut self.star_buffer) {
                        cx.sub(seg, |cx| star.on_message(cx, from, &rest, &body));
                    }
                }
                _ => return,
            },
            Some((&seg, rest)) => {
                let k = seg as usize;
                if k < self.n * self.n {
                    let out = cx.sub(seg, |cx| self.oknok[k].on_timer(cx, rest, tag));
                    self.on_oknok(k, out);
                } else if seg == self.wef_seg() {
                    cx.sub(seg, |cx| self.wef.on_timer(cx, rest, tag));
                } else if seg == self.star_seg() {
                    cx.sub(seg, |cx| self.star.on_timer(cx, rest, tag));
                } else if seg == self.ba_seg() {
                    if let Some(b) = cx.sub(seg, |cx| self.ba.on_timer(cx, rest, tag)) {
                        self.ba_out = Some(b);
                    }
                }
            }
        }
        self.advance(cx);
    }

    fn on_oknok(&mut self, k: usize, out: Option<BcOut>) {
        let (i, j) = (k / self.n, k % self.n);
        let (v, regular) = match out {
            Some(BcOut::Regular(Some(v))) => (v, true),
            Some(BcOut::Fallback(v)) => (v, false),
            _ => return,
        };
        match v {
            Value::Ok => {
                self.graph.record_ok(i, j);
                if regular {
                    self.ok_regular[i] |= 1 << j;
                }
            }
            Value::Nok { idx, val } if regular => {
                self.nok_regular.insert((i, j), (idx, val));
            }
            _ => {}
        }
    }

    /// Phase IV for the dealer, and the snapshot every party judges against.
    fn decide(&mut self, cx: &mut Cx) {
        self.snapshot = Some(Snapshot {
            graph: self.graph.clone(),
            ok_regular: self.ok_regular.clone(),
            nok_regular: self.nok_regular.clone(),
        });
        let seg = self.wef_seg();
        let wef = &mut self.wef;
        cx.sub(seg, |cx| wef.start(cx));
        if cx.me() != self.dealer {
            return;
        }
        let mut g = self.graph.clone();
        if let Some(bivars) = &self.bivars {
            let f = cx.field();
            for (&(i, j), &(idx, val)) in &self.nok_regular {
                let truth = bivars.get(idx as usize).map(|q| q.eval(f.alpha(j), f.alpha(i)));
                if truth != Some(val) {
                    g.prune(i);
                }
            }
        }
        let w = compute_w(&g, self.t_s);
        if let Some(s) = find_star(&g.induced(&w), self.t_s) {
            cx.sub(seg, |cx| wef.input(cx, Value::Wef { w, e: s.e, f: s.f }));
        }
    }

    fn accept(&mut self, cx: &mut Cx) {
        let ok = match (self.wef.regular_value(), &self.snapshot) {
            (Some(Value::Wef { w, e, f }), Some(snap)) => self.acceptable(snap, w, &Star { e: *e, f: *f }),
            _ => false,
        };
        self.accepted = Some(ok);
        let seg = self.ba_seg();
        let ba = &mut self.ba;
        if let Some(b) = cx.sub(seg, |cx| ba.start(cx, !ok)) {
            self.ba_out = Some(b);
        }
    }

    fn acceptable(&self, snap: &Snapshot, w: &PartySet, star: &Star) -> bool {
        let need = self.n - self.t_s;
        let conflict = snap.nok_regular.iter().any(|(&(j, k), &(idx, v))| {
            w.contains(j)
                && w.contains(k)
                && snap.nok_regular.get(&(k, j)).is_some_and(|&(idx2, v2)| idx2 == idx && v2 != v)
        });
        if conflict || !star.f.is_subset(w) {
            return false;
        }
        let g = &snap.graph;
        let degrees = w.iter().all(|j| g.degree(j) >= need && g.neighbors(j).intersect(w).len() >= need);
        let regular = w.iter().all(|j| {
            g.neighbors(j).intersect(w).iter().all(|k| snap.ok_regular[j] >> k & 1 == 1 && snap.ok_regular[k] >> j & 1 == 1)
        });
        degrees && regular && is_star(&g.induced(w), star, self.t_s)
    }

    fn advance(&mut self, cx: &mut Cx) {
        if self.resolved.is_some() {
            return;
        }
        let Some(anchor) = self.anchor else { return };
        let tm = cx.timing();
        let deadline = anchor + self.offset + 2 * tm.bc + tm.ba;
        if self.branch.is_none() {
            match self.ba_out {
                Some(b) if cx.now() >= deadline => self.branch = Some(b),
                _ => return,
            }
        }
        if self.branch == Some(false) {
            if let Some(Value::Wef { w, f, .. }) = self.wef.value() {
                self.resolved = Some(Resolved { branch: 0, own: *w, support: *f });
            }
            return;
        }
        if cx.me() == self.dealer && !self.star_sent {
            if let Some(s) = find_star(&self.graph, self.t_a) {
                self.star_sent = true;
                let seg = self.star_seg();
                let star = &mut self.star;
                cx.sub(seg, |cx| star.input(cx, Value::Star { e: s.e, f: s.f }));
            }
        }
        if let Some(Value::Star { e, f }) = self.star.value() {
            let s = Star { e: *e, f: *f };
            if is_star(&self.graph, &s, self.t_a) {
                self.resolved = Some(Resolved { branch: 1, own: s.f, support: s.f });
            }
        }
    }
}
