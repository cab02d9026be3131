//! Hybrid Byzantine agreement: ΠBC round on the inputs, then ABA.

use super::aba::Aba;
use crate::broadcast::Bc;
use crate::party::{PartyId, PartySet};
use crate::simnet::{Body, Cx, Time, Value};

const ABA_START: u64 = 1;

#[derive(Clone, Debug)]
pub struct Ba {
    t: usize,
    start: Option<Time>,
    input: bool,
    bcs: Vec<Bc>,
    aba: Aba,
    aba_input: Option<bool>,
    output: Option<bool>,
}

impl Ba {
    pub fn new(n: usize, t: usize) -> Ba {
        Ba {
            t,
            start: None,
            input: false,
            bcs: (0..n).map(|j| Bc::new(j, t)).collect(),
            aba: Aba::new(t),
            aba_input: None,
            output: None,
        }
    }

    pub fn output(&self) -> Option<bool> {
        self.output
    }

    pub fn started(&self) -> bool {
        self.start.is_some()
    }

    pub fn input(&self) -> Option<bool> {
        self.start.map(|_| self.input)
    }

    /// The bit this party fed to ABA.
    pub fn aba_input(&self) -> Option<bool> {
        self.aba_input
    }

    pub fn aba(&self) -> &Aba {
        &self.aba
    }

    pub fn start(&mut self, cx: &mut Cx, input: bool) -> Option<bool> {
        if self.start.is_some() {
            return None;
        }
        self.start = Some(cx.now());
        self.input = input;
        let me = cx.me();
        for j in 0..self.bcs.len() {
            let bc = &mut self.bcs[j];
            cx.sub(j as u16, |cx| {
                bc.start(cx);
                if j == me {
                    bc.input(cx, Value::Bit(input));
                }
            });
        }
        cx.timer_at(cx.now() + cx.timing().bc, ABA_START);
        None
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<bool> {
        let n = self.bcs.len();
        let (&seg, rest) = path.split_first()?;
        let j = seg as usize;
        if j < n {
            // fallback upgrades are never consumed here
            cx.sub(seg, |cx| self.bcs[j].on_message(cx, from, rest, body));
            None
        } else if j == n {
            let out = cx.sub(seg, |cx| self.aba.on_message(cx, from, rest, body))?;
            self.finish(cx, out)
        } else {
            None
        }
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) -> Option<bool> {
        let n = self.bcs.len();
        match path.split_first() {
            None if tag == ABA_START => {
                let mut r = PartySet::EMPTY;
                let mut ones = 0;
                for (j, bc) in self.bcs.iter().enumerate() {
                    if let Some(Value::Bit(b)) = bc.regular_value() {
                        r.insert(j);
                        ones += *b as usize;
                    }
                }
                let v = if r.len() >= n - self.t { 2 * ones >= r.len() } else { self.input };
                self.aba_input = Some(v);
                let out = cx.sub(n as u16, |cx| self.aba.start(cx, v))?;
                self.finish(cx, out)
            }
            Some((&seg, rest)) if (seg as usize) < n => {
                let j = seg as usize;
                cx.sub(seg, |cx| self.bcs[j].on_timer(cx, rest, tag));
                None
            }
            Some((&seg, rest)) if seg as usize == n => {
                let out = cx.sub(seg, |cx| self.aba.on_timer(cx, rest, tag))?;
                self.finish(cx, out)
            }
            _ => None,
        }
    }

    fn finish(&mut self, cx: &mut Cx, out: bool) -> Option<bool> {
        if self.output.is_some() {
            return None;
        }
        self.output = Some(out);
        if let Some(start) = self.start {
            cx.milestone("ba", start);
        }
        Some(out)
    }
}
