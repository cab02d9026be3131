//! Party-level roots that run one protocol instance at path /0, recording
//! each party's outputs with their times. Used by tests and the CLI.

use std::collections::BTreeMap;

use crate::acs::{Acs, AcsOutput};
use crate::agreement::{Aba, Ba};
use crate::broadcast::{Bc, BcOut};
use crate::mpc::{CirEval, Circuit};
use crate::party::{PartyId, PartySet};
use crate::algebra::{Fe, UniPoly};
use crate::simnet::{Adversary, Body, Cx, Node, Params, RunStatus, SimConfig, Time, Value, World};
use crate::triples::{PreProcessing, TripSh, TripShOutput, Triple};
use crate::vss::{Vss, Wps};

const ROOT: u16 = 0;

/// One ΠBC instance; `sender` broadcasts `input` at time 0.
pub struct BcNode {
    pub sender: PartyId,
    pub input: Value,
    pub bc: Bc,
    pub log: Vec<(Time, BcOut)>,
}

impl BcNode {
    pub fn new(t: usize, sender: PartyId, input: Value) -> BcNode {
        BcNode { sender, input, bc: Bc::new(sender, t), log: Vec::new() }
    }

    fn push(&mut self, cx: &mut Cx, out: Option<BcOut>) {
        if let Some(o) = out {
            self.log.push((cx.now(), o));
            cx.notify();
        }
    }
}

impl Node for BcNode {
    fn start(&mut self, cx: &mut Cx) {
        let (bc, me, sender, input) = (&mut self.bc, cx.me(), self.sender, self.input.clone());
        cx.sub(ROOT, |cx| {
            bc.start(cx);
            if me == sender {
                bc.input(cx, input);
            }
        });
    }

    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.bc.on_message(cx, from, rest, body));
            self.push(cx, out);
        }
    }

    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.bc.on_timer(cx, rest, tag));
            self.push(cx, out);
        }
    }
}

/// One ABA instance started at time 0.
pub struct AbaNode {
    pub input: bool,
    pub aba: Aba,
    pub output: Option<(Time, bool)>,
}

impl AbaNode {
    pub fn new(t: usize, input: bool) -> AbaNode {
        AbaNode { input, aba: Aba::new(t), output: None }
    }

    fn push(&mut self, cx: &mut Cx, out: Option<bool>) {
        if let Some(b) = out {
            self.output.get_or_insert((cx.now(), b));
            cx.notify();
        }
    }
}

impl Node for AbaNode {
    fn start(&mut self, cx: &mut Cx) {
        let (aba, input) = (&mut self.aba, self.input);
        let out = cx.sub(ROOT, |cx| aba.start(cx, input));
        self.push(cx, out);
    }

    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.aba.on_message(cx, from, rest, body));
            self.push(cx, out);
        }
    }

    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.aba.on_timer(cx, rest, tag));
            self.push(cx, out);
        }
    }
}

/// One ΠBA instance started at time 0.
pub struct BaNode {
    pub input: bool,
    pub ba: Ba,
    pub output: Option<(Time, bool)>,
}

impl BaNode {
    pub fn new(n: usize, t: usize, input: bool) -> BaNode {
        BaNode { input, ba: Ba::new(n, t), output: None }
    }

    fn push(&mut self, cx: &mut Cx, out: Option<bool>) {
        if let Some(b) = out {
            self.output.get_or_insert((cx.now(), b));
            cx.notify();
        }
    }
}

impl Node for BaNode {
    fn start(&mut self, cx: &mut Cx) {
        let (ba, input) = (&mut self.ba, self.input);
        let out = cx.sub(ROOT, |cx| ba.start(cx, input));
        self.push(cx, out);
    }

    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.ba.on_message(cx, from, rest, body));
            self.push(cx, out);
        }
    }

    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.ba.on_timer(cx, rest, tag));
            self.push(cx, out);
        }
    }
}

/// One WPS instance (batch of `polys.len()` polynomials) started at time 0.
pub struct WpsNode {
    pub polys: Option<Vec<UniPoly>>,
    pub wps: Wps,
    pub output: Option<(Time, Vec<Fe>)>,
}

impl WpsNode {
    /// `polys` is the dealer's input (ignored at other parties).
    pub fn new(p: &Params, dealer: PartyId, polys: Option<Vec<UniPoly>>) -> WpsNode {
        let l = polys.as_ref().map_or(1, |v| v.len());
        WpsNode { wps: Wps::new(p.n, p.t_s, p.t_a, l, dealer, p.delta), polys, output: None }
    }

    fn push(&mut self, cx: &mut Cx, out: Option<Vec<Fe>>) {
        if let Some(s) = out {
            self.output.get_or_insert((cx.now(), s));
            cx.notify();
        }
    }
}

impl Node for WpsNode {
    fn start(&mut self, cx: &mut Cx) {
        let (wps, polys) = (&mut self.wps, self.polys.take());
        cx.sub(ROOT, |cx| {
            wps.start(cx);
            if let Some(p) = polys.filter(|_| cx.me() == wps.dealer()) {
                wps.deal(cx, &p);
            }
        });
    }

    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.wps.on_message(cx, from, rest, body));
            self.push(cx, out);
        }
    }

    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.wps.on_timer(cx, rest, tag));
            self.push(cx, out);
        }
    }
}

/// One VSS instance started at time 0.
pub struct VssNode {
    pub polys: Option<Vec<UniPoly>>,
    pub vss: Vss,
    pub output: Option<(Time, Vec<Fe>)>,
}

impl VssNode {
    pub fn new(p: &Params, dealer: PartyId, polys: Option<Vec<UniPoly>>) -> VssNode {
        let l = polys.as_ref().map_or(1, |v| v.len());
        let tm = p.timing();
        VssNode { vss: Vss::new(p.n, p.t_s, p.t_a, l, dealer, p.delta, tm.wps), polys, output: None }
    }

    fn push(&mut self, cx: &mut Cx, out: Option<Vec<Fe>>) {
        if let Some(s) = out {
            self.output.get_or_insert((cx.now(), s));
            cx.notify();
        }
    }
}

impl Node for VssNode {
    fn start(&mut self, cx: &mut Cx) {
        let (vss, polys) = (&mut self.vss, self.polys.take());
        cx.sub(ROOT, |cx| {
            vss.start(cx);
            if let Some(p) = polys.filter(|_| cx.me() == vss.dealer()) {
                vss.deal(cx, &p);
            }
        });
    }

    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.vss.on_message(cx, from, rest, body));
            self.push(cx, out);
        }
    }

    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.vss.on_timer(cx, rest, tag));
            self.push(cx, out);
        }
    }
}

/// One ACS instance started at time 0; every party inputs `polys`.
pub struct AcsNode {
    pub polys: Vec<UniPoly>,
    pub acs: Acs,
    pub output: Option<(Time, AcsOutput)>,
}

impl AcsNode {
    pub fn new(p: &Params, polys: Vec<UniPoly>) -> AcsNode {
        AcsNode { acs: Acs::new(p, polys.len()), polys, output: None }
    }

    fn push(&mut self, cx: &mut Cx, out: Option<AcsOutput>) {
        if let Some(o) = out {
            self.output.get_or_insert((cx.now(), o));
            cx.notify();
        }
    }
}

impl Node for AcsNode {
    fn start(&mut self, cx: &mut Cx) {
        let (acs, polys) = (&mut self.acs, &self.polys);
        cx.sub(ROOT, |cx| acs.start(cx, polys));
    }

    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.acs.on_message(cx, from, rest, body));
            self.push(cx, out);
        }
    }

    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.acs.on_timer(cx, rest, tag));
            self.push(cx, out);
        }
    }
}

/// Overrides of a party's own triple inputs; `None` keeps the honest
/// random choice.
#[derive(Clone, Debug, Default)]
pub struct TripleInputs {
    pub dealt: Option<Vec<Triple>>,
    pub verification: Option<Vec<Triple>>,
}

/// One TripSh instance for `dealer` with L = `l`, started at time 0.
pub struct TripShNode {
    pub inputs: TripleInputs,
    pub tripsh: TripSh,
    pub output: Option<(Time, TripShOutput)>,
}

impl TripShNode {
    pub fn new(p: &Params, dealer: PartyId, l: usize, inputs: TripleInputs) -> TripShNode {
        TripShNode { tripsh: TripSh::new(p, dealer, l), inputs, output: None }
    }

    fn push(&mut self, cx: &mut Cx, out: Option<TripShOutput>) {
        if let Some(o) = out {
            self.output.get_or_insert((cx.now(), o));
            cx.notify();
        }
    }
}

impl Node for TripShNode {
    fn start(&mut self, cx: &mut Cx) {
        let (ts, inp) = (&mut self.tripsh, self.inputs.clone());
        cx.sub(ROOT, |cx| ts.start(cx, inp.dealt, inp.verification));
    }

    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.tripsh.on_message(cx, from, rest, body));
            self.push(cx, out);
        }
    }

    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.tripsh.on_timer(cx, rest, tag));
            self.push(cx, out);
        }
    }
}

/// One preprocessing run for `c_m` triples, started at time 0.
pub struct PreProcNode {
    pub inputs: TripleInputs,
    pub pre: PreProcessing,
    pub output: Option<(Time, Vec<Triple>)>,
}

impl PreProcNode {
    pub fn new(p: &Params, c_m: usize, inputs: TripleInputs) -> PreProcNode {
        PreProcNode { pre: PreProcessing::new(p, c_m), inputs, output: None }
    }

    fn push(&mut self, cx: &mut Cx, out: Option<Vec<Triple>>) {
        if let Some(o) = out {
            self.output.get_or_insert((cx.now(), o));
            cx.notify();
        }
    }
}

impl Node for PreProcNode {
    fn start(&mut self, cx: &mut Cx) {
        let (pre, inp) = (&mut self.pre, self.inputs.clone());
        cx.sub(ROOT, |cx| pre.start(cx, inp.dealt, inp.verification));
    }

    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.pre.on_message(cx, from, rest, body));
            self.push(cx, out);
        }
    }

    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.pre.on_timer(cx, rest, tag));
            self.push(cx, out);
        }
    }
}

/// One circuit evaluation started at time 0 with this party's `input`.
pub struct MpcNode {
    pub input: Fe,
    pub triples: TripleInputs,
    pub eval: CirEval,
    pub output: Option<(Time, Fe)>,
}

impl MpcNode {
    pub fn new(p: &Params, circuit: Circuit, input: Fe, triples: TripleInputs) -> MpcNode {
        MpcNode { input, triples, eval: CirEval::new(p, circuit), output: None }
    }

    fn push(&mut self, cx: &mut Cx, out: Option<Fe>) {
        if let Some(y) = out {
            self.output.get_or_insert((cx.now(), y));
            cx.notify();
        }
    }
}

impl Node for MpcNode {
    fn start(&mut self, cx: &mut Cx) {
        let (eval, input, t) = (&mut self.eval, self.input, self.triples.clone());
        cx.sub(ROOT, |cx| eval.start(cx, input, t.dealt, t.verification));
    }

    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.eval.on_message(cx, from, rest, body));
            self.push(cx, out);
        }
    }

    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        if let [ROOT, rest @ ..] = path {
            let out = cx.sub(ROOT, |cx| self.eval.on_timer(cx, rest, tag));
            self.push(cx, out);
        }
    }
}

/// Honest results of a circuit evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpcOutcome {
    /// Output and local termination time of every honest party that output.
    pub outputs: BTreeMap<PartyId, (Time, Fe)>,
    /// Input subset as seen by each honest party.
    pub cs: BTreeMap<PartyId, PartySet>,
}

impl MpcOutcome {
    pub fn of(world: &World<MpcNode>) -> MpcOutcome {
        let honest = world.core().honest();
        MpcOutcome {
            outputs: honest.iter().filter_map(|i| world.party(i).output.map(|o| (i, o))).collect(),
            cs: honest.iter().filter_map(|i| world.party(i).eval.cs().map(|c| (i, c))).collect(),
        }
    }

    /// The single honest output value, if all honest outputs agree.
    pub fn common(&self) -> Option<Fe> {
        let mut vals = self.outputs.values().map(|(_, y)| *y);
        let y = vals.next()?;
        vals.all(|v| v == y).then_some(y)
    }

    /// f(x') with x'_j = 0 for parties outside the (common) input subset.
    pub fn expected(&self, circuit: &Circuit, inputs: &[Fe]) -> Option<Fe> {
        let cs = *self.cs.values().next()?;
        let x: Vec<Fe> = inputs.iter().enumerate().map(|(j, v)| if cs.contains(j) { *v } else { v.field().zero() }).collect();
        Some(circuit.eval(&x))
    }
}

/// Runs `circuit` with one input per party; `triples[i]` overrides party
/// i's triple dealing.
pub fn evaluate_circuit(
    cfg: SimConfig,
    adversary: Box<dyn Adversary>,
    circuit: &Circuit,
    inputs: &[Fe],
    triples: &[TripleInputs],
    budget: u64,
) -> (World<MpcNode>, RunStatus, MpcOutcome) {
    let p = cfg.params.clone();
    let mut w = World::new(cfg, adversary, |i| {
        MpcNode::new(&p, circuit.clone(), inputs[i], triples.get(i).cloned().unwrap_or_default())
    });
    let status = w.run(budget);
    let out = MpcOutcome::of(&w);
    (w, status, out)
}
