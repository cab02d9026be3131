//! Bracha's reliable broadcast.

use crate::party::{PartyId, PartySet};
use crate::simnet::{Body, Cx, Value};

#[derive(Clone, Debug)]
pub struct Acast {
    sender: PartyId,
    t: usize,
    echoed: bool,
    readied: bool,
    echo_from: PartySet,
    ready_from: PartySet,
    echoes: Vec<(Value, usize)>,
    readies: Vec<(Value, usize)>,
    output: Option<Value>,
}

fn bump(tally: &mut Vec<(Value, usize)>, v: &Value) -> usize {
    match tally.iter_mut().find(|(x, _)| x == v) {
        Some((_, c)) => {
            *c += 1;
            *c
        }
        None => {
            tally.push((v.clone(), 1));
            1
        }
    }
}

impl Acast {
    pub fn new(sender: PartyId, t: usize) -> Acast {
        Acast {
            sender,
            t,
            echoed: false,
            readied: false,
            echo_from: PartySet::EMPTY,
            ready_from: PartySet::EMPTY,
            echoes: Vec::new(),
            readies: Vec::new(),
            output: None,
        }
    }

    pub fn sender(&self) -> PartyId {
        self.sender
    }

    pub fn output(&self) -> Option<&Value> {
        self.output.as_ref()
    }

    /// Sender only: start the broadcast of `m`.
    pub fn input(&mut self, cx: &mut Cx, m: Value) {
        debug_assert_eq!(cx.me(), self.sender);
        cx.send_all(Body::AcastInit(m));
    }

    /// Handles one message; returns the output when it is first obtained.
    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, body: &Body) -> Option<Value> {
        let n = cx.n();
        match body {
            Body::AcastInit(m) if from == self.sender && !self.echoed => {
                self.echoed = true;
                cx.send_all(Body::AcastEcho(m.clone()));
                None
            }
            Body::AcastEcho(m) if !self.echo_from.contains(from) => {
                self.echo_from.insert(from);
                if bump(&mut self.echoes, m) >= n - self.t {
                    self.send_ready(cx, m);
                }
                None
            }
            Body::AcastReady(m) if !self.ready_from.contains(from) => {
                self.ready_from.insert(from);
                let c = bump(&mut self.readies, m);
                if c > self.t {
                    self.send_ready(cx, m);
                }
                if c >= n - self.t && self.output.is_none() {
                    self.output = Some(m.clone());
                    return self.output.clone();
                }
                None
            }
            _ => None,
        }
    }

    fn send_ready(&mut self, cx: &mut Cx, m: &Value) {
        if !self.readied {
            self.readied = true;
            cx.send_all(Body::AcastReady(m.clone()));
        }
    }
}
