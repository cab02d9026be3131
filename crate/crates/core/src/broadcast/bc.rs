//! Broadcast with a regular mode (fixed at T_BC) and a fallback mode.

use super::acast::Acast;
use super::sba::Sba;
use crate::party::PartyId;
use crate::simnet::{Body, Cx, Opt, Time, Value};

const ACAST: u16 = 0;
const SBA: u16 = 1;
const SBA_START: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BcOut {
    /// Regular-mode output at start + T_BC (`None` is ⊥).
    Regular(Opt),
    /// A ⊥ output upgraded through the fallback mode.
    Fallback(Value),
}

#[derive(Clone, Debug)]
pub struct Bc {
    acast: Acast,
    sba: Sba,
    start: Option<Time>,
    acast_out: Option<Value>,
    regular: Option<Opt>,
    fallback: Option<Value>,
}

impl Bc {
    pub fn new(sender: PartyId, t: usize) -> Bc {
        Bc { acast: Acast::new(sender, t), sba: Sba::new(t), start: None, acast_out: None, regular: None, fallback: None }
    }

    pub fn sender(&self) -> PartyId {
        self.acast.sender()
    }

    pub fn started(&self) -> bool {
        self.start.is_some()
    }

    /// Regular-mode output, once decided.
    pub fn regular(&self) -> Option<&Opt> {
        self.regular.as_ref()
    }

    /// Non-⊥ regular output.
    pub fn regular_value(&self) -> Option<&Value> {
        self.regular.as_ref().and_then(|r| r.as_ref())
    }

    /// The current output through either mode, if not ⊥.
    pub fn value(&self) -> Option<&Value> {
        self.regular_value().or(self.fallback.as_ref())
    }

    pub fn fallback(&self) -> Option<&Value> {
        self.fallback.as_ref()
    }

    /// Starts this party's participation (every party, at the common time).
    pub fn start(&mut self, cx: &mut Cx) {
        if self.start.is_none() {
            self.start = Some(cx.now());
            cx.timer_at(cx.now() + 3 * cx.delta(), SBA_START);
        }
    }

    /// Sender only: broadcast `m`.
    pub fn input(&mut self, cx: &mut Cx, m: Value) {
        cx.sub(ACAST, |cx| self.acast.input(cx, m));
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<BcOut> {
        match path {
            [ACAST] => {
                let m = cx.sub(ACAST, |cx| self.acast.on_message(cx, from, body))?;
                self.acast_out = Some(m.clone());
                if self.regular == Some(None) && self.fallback.is_none() {
                    self.fallback = Some(m.clone());
                    return Some(BcOut::Fallback(m));
                }
                None
            }
            [SBA] => {
                cx.sub(SBA, |cx| self.sba.on_message(cx, from, body));
                None
            }
            _ => None,
        }
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) -> Option<BcOut> {
        match path {
            [] if tag == SBA_START => {
                let input = self.acast_out.clone();
                cx.sub(SBA, |cx| self.sba.start(cx, input));
                None
            }
            [SBA] => {
                let decided = cx.sub(SBA, |cx| self.sba.on_timer(cx, tag))?;
                let out = match (&self.acast_out, decided) {
                    (Some(a), Some(s)) if *a == s => Some(s),
                    _ => None,
                };
                self.regular = Some(out.clone());
                if let Some(start) = self.start {
                    cx.milestone("bc", start);
                }
                match (&out, &self.acast_out) {
                    (None, Some(m)) => {
                        self.fallback = Some(m.clone());
                        Some(BcOut::Fallback(m.clone()))
                    }
                    _ => Some(BcOut::Regular(out)),
                }
            }
            _ => None,
        }
    }
}
