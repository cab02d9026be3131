//! Shared circuit evaluation: inputs through ACS, triples from
//! preprocessing, one Beaver batch per multiplicative level, public output
//! and the ready-based termination.
//!
//! Child segments: input ACS (0), preprocessing (1), output opening (2),
//! the Beaver batch of level k at `2 + k`. Ready messages travel on the
//! instance path itself.

use std::collections::BTreeMap;

use crate::acs::Acs;
use crate::algebra::{Fe, UniPoly};
use crate::party::{PartyId, PartySet};
use crate::simnet::{Body, Cx, Params, Time};
use crate::triples::{Beaver, BeaverItem, Opening, PreProcessing, Triple};

use super::circuit::{Circuit, Gate};

const ACS: u16 = 0;
const PRE: u16 = 1;
const OUT: u16 = 2;

#[derive(Clone, Debug)]
pub struct CirEval {
    t_s: usize,
    circuit: Circuit,
    cone: Vec<bool>,
    depths: Vec<usize>,
    mul_index: Vec<Option<usize>>,
    acs: Acs,
    pre: Option<PreProcessing>,
    levels: Vec<Beaver>,
    open: Opening,
    start: Option<Time>,
    cs: Option<PartySet>,
    triples: Option<Vec<Triple>>,
    wires: Vec<Option<Fe>>,
    next_level: usize,
    reconstructed: Option<Fe>,
    readies: BTreeMap<PartyId, Fe>,
    sent_ready: bool,
    output: Option<Fe>,
    done: bool,
}

impl CirEval {
    pub fn new(p: &Params, circuit: Circuit) -> CirEval {
        let c_m = circuit.mul_count();
        let depth = circuit.depth();
        CirEval {
            t_s: p.t_s,
            cone: circuit.cone(),
            depths: circuit.wire_depths(),
            mul_index: circuit.mul_index(),
            acs: Acs::new(p, 1),
            pre: (c_m > 0).then(|| PreProcessing::new(p, c_m)),
            levels: (0..depth).map(|_| Beaver::new(p.t_s)).collect(),
            open: Opening::new(p.t_s),
            start: None,
            cs: None,
            triples: None,
            wires: vec![None; circuit.wires],
            next_level: 1,
            reconstructed: None,
            readies: BTreeMap::new(),
            sent_ready: false,
            output: None,
            done: false,
            circuit,
        }
    }

    pub fn output(&self) -> Option<Fe> {
        self.output
    }

    /// Parties whose inputs were taken; the others count as 0.
    pub fn cs(&self) -> Option<PartySet> {
        self.cs
    }

    /// This party's share of every wire computed so far.
    pub fn wires(&self) -> &[Option<Fe>] {
        &self.wires
    }

    /// The value this party reconstructed before the ready exchange.
    pub fn reconstructed(&self) -> Option<Fe> {
        self.reconstructed
    }

    pub fn acs(&self) -> &Acs {
        &self.acs
    }

    pub fn preprocessing(&self) -> Option<&PreProcessing> {
        self.pre.as_ref()
    }

    /// `input` is shared through ACS; `dealt` and `verification` are passed
    /// to this party's triple dealing.
    pub fn start(&mut self, cx: &mut Cx, input: Fe, dealt: Option<Vec<Triple>>, verification: Option<Vec<Triple>>) {
        if self.start.is_some() {
            return;
        }
        self.start = Some(cx.now());
        let poly = UniPoly::random_with_constant(input, self.t_s, cx.rng());
        let acs = &mut self.acs;
        cx.sub(ACS, |cx| acs.start(cx, &[poly]));
        match &mut self.pre {
            Some(pre) => cx.sub(PRE, |cx| pre.start(cx, dealt, verification)),
            None => self.triples = Some(Vec::new()),
        }
    }

    /// Returns the output once 2t_s + 1 matching readies arrived; the party
    /// is terminated at that point.
    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<Fe> {
        match path.split_first() {
            None => self.on_ready(cx, from, body),
            Some((&ACS, rest)) => {
                let out = cx.sub(ACS, |cx| self.acs.on_message(cx, from, rest, body));
                if let Some(o) = out {
                    self.on_inputs(o.cs, &o.shares, cx.field().zero());
                }
            }
            Some((&PRE, rest)) => {
                let Some(pre) = &mut self.pre else { return None };
                self.triples = self.triples.take().or(cx.sub(PRE, |cx| pre.on_message(cx, from, rest, body)));
            }
            Some((&OUT, _)) => {
                let out = cx.sub(OUT, |cx| self.open.on_message(cx, from, body));
                self.on_opened(cx, out);
            }
            Some((&seg, _)) => {
                let level = seg as usize - 2;
                if level >= 1 && level <= self.levels.len() {
                    let out = cx.sub(seg, |cx| self.levels[level - 1].on_message(cx, from, body));
                    self.on_level(level, out);
                }
            }
        }
        self.advance(cx);
        self.finish(cx)
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) -> Option<Fe> {
        match path.split_first() {
            Some((&ACS, rest)) => {
                let out = cx.sub(ACS, |cx| self.acs.on_timer(cx, rest, tag));
                if let Some(o) = out {
                    self.on_inputs(o.cs, &o.shares, cx.field().zero());
                }
            }
            Some((&PRE, rest)) => {
                let Some(pre) = &mut self.pre else { return None };
                self.triples = self.triples.take().or(cx.sub(PRE, |cx| pre.on_timer(cx, rest, tag)));
            }
            _ => {}
        }
        self.advance(cx);
        self.finish(cx)
    }

    fn on_inputs(&mut self, cs: PartySet, shares: &BTreeMap<PartyId, Vec<Fe>>, zero: Fe) {
        self.cs = Some(cs);
        for (j, w) in self.wires.iter_mut().enumerate().take(self.circuit.n) {
            *w = Some(shares.get(&j).map_or(zero, |v| v[0]));
        }
    }

    fn on_level(&mut self, level: usize, out: Option<Vec<Fe>>) {
        let Some(z) = out else { return };
        let outs: Vec<usize> = self.level_gates(level).into_iter().map(|g| self.circuit.gates[g].out()).collect();
        for (w, v) in outs.into_iter().zip(z) {
            self.wires[w] = Some(v);
        }
    }

    /// Multiplication gates of the output cone at `level`.
    fn level_gates(&self, level: usize) -> Vec<usize> {
        (0..self.circuit.gates.len())
            .filter(|&g| self.cone[g] && self.circuit.gates[g].is_mul() && self.depths[self.circuit.gates[g].out()] == level)
            .collect()
    }

    /// Local linear gates whose inputs are known.
    fn sweep(&mut self) {
        for (g, gate) in self.circuit.gates.iter().enumerate() {
            if !self.cone[g] || self.wires[gate.out()].is_some() {
                continue;
            }
            let w = &self.wires;
            let v = match *gate {
                Gate::Add { a, b, .. } => w[a].zip(w[b]).map(|(x, y)| x + y),
                Gate::AddConst { a, c, .. } => w[a].map(|x| x + c),
                Gate::MulConst { a, c, .. } => w[a].map(|x| x * c),
                Gate::Mul { .. } => None,
            };
            self.wires[gate.out()] = v;
        }
    }

    fn advance(&mut self, cx: &mut Cx) {
        if self.cs.is_none() || self.triples.is_none() || self.open.started() {
            return;
        }
        loop {
            self.sweep();
            if let Some(y) = self.wires[self.circuit.output] {
                let out = cx.sub(OUT, |cx| self.open.open(cx, vec![y]));
                self.on_opened(cx, out);
                return;
            }
            let level = self.next_level;
            if level > self.levels.len() {
                return;
            }
            if self.levels[level - 1].output().is_some() {
                self.next_level += 1;
                continue;
            }
            if self.levels[level - 1].started() {
                return;
            }
            let triples = self.triples.as_ref().expect("triples");
            let gates = self.level_gates(level);
            let items: Vec<BeaverItem> = gates
                .iter()
                .map(|&g| {
                    let Gate::Mul { a, b, .. } = self.circuit.gates[g] else { unreachable!() };
                    let t = triples[self.mul_index[g].expect("mul gate")];
                    let (x, y) = (self.wires[a].expect("level input"), self.wires[b].expect("level input"));
                    BeaverItem { x, y, a: t[0], b: t[1], c: t[2] }
                })
                .collect();
            let seg = (2 + level) as u16;
            let out = cx.sub(seg, |cx| self.levels[level - 1].start(cx, items));
            self.on_level(level, out);
        }
    }

    fn on_opened(&mut self, cx: &mut Cx, out: Option<Vec<Fe>>) {
        let Some(y) = out else { return };
        self.reconstructed = Some(y[0]);
        self.send_ready(cx, y[0]);
    }

    fn send_ready(&mut self, cx: &mut Cx, y: Fe) {
        if !self.sent_ready {
            self.sent_ready = true;
            cx.send_all(Body::MpcReady(y));
        }
    }

    fn on_ready(&mut self, cx: &mut Cx, from: PartyId, body: &Body) {
        let Body::MpcReady(v) = body else { return };
        if self.readies.contains_key(&from) {
            return;
        }
        self.readies.insert(from, *v);
        let count = self.readies.values().filter(|x| *x == v).count();
        if count > self.t_s {
            self.send_ready(cx, *v);
        }
        if count > 2 * self.t_s && self.output.is_none() {
            self.output = Some(*v);
        }
    }

    fn finish(&mut self, cx: &mut Cx) -> Option<Fe> {
        let y = self.output?;
        if self.done {
            return None;
        }
        self.done = true;
        if let Some(start) = self.start {
            cx.milestone("cireval", start);
        }
        cx.terminate();
        Some(y)
    }
}
