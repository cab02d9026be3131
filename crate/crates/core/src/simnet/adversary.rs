//! The adversary interface: corruption set, outgoing-message interception,
//! coin attacks and (in asynchronous runs) message scheduling.

use std::rc::Rc;

use super::msg::Body;
use super::params::{Params, Time, Timing};
use super::path::Path;
use crate::party::{PartyId, PartySet};

/// What the adversary may look at when it acts.
pub struct AdvEnv<'a> {
    pub params: &'a Params,
    pub timing: &'a Timing,
    pub now: Time,
    pub corrupt: PartySet,
}

/// A message a corrupt party's honest code wants to send.
pub struct Outgoing<'a> {
    pub from: PartyId,
    pub to: PartyId,
    pub path: &'a Path,
    pub body: &'a Rc<Body>,
}

/// A message the adversary actually sends on behalf of a corrupt party.
/// `delay` is extra sending delay on top of the network's.
#[derive(Clone, Debug)]
pub struct Emit {
    pub from: PartyId,
    pub to: PartyId,
    pub path: Path,
    pub body: Rc<Body>,
    pub delay: Time,
}

impl Emit {
    pub fn forward(msg: &Outgoing) -> Emit {
        Emit { from: msg.from, to: msg.to, path: *msg.path, body: Rc::clone(msg.body), delay: 0 }
    }
}

/// A single colluding adversary controlling every corrupt party. Corrupt
/// parties run the honest code; everything they send passes through
/// [`Adversary::outgoing`], which may drop, rewrite, delay or add messages.
pub trait Adversary {
    fn corrupt(&self) -> PartySet;

    fn name(&self) -> &str {
        "custom"
    }

    fn outgoing(&mut self, env: &AdvEnv, msg: Outgoing, out: &mut Vec<Emit>) {
        let _ = env;
        out.push(Emit::forward(&msg));
    }

    /// Per-party coin bits for ABA iteration `k` of the instance at `path`, if
    /// the adversary wants this flip to fail. Granted only while the
    /// instance's failure budget lasts.
    fn coin_attack(&mut self, env: &AdvEnv, path: &Path, k: u32) -> Option<Vec<bool>> {
        let _ = (env, path, k);
        None
    }

    /// Delivery delay for an asynchronous-mode message; `None` defers to the
    /// configured scheduler.
    fn async_delay(&mut self, env: &AdvEnv, from: PartyId, to: PartyId, path: &Path, body: &Body) -> Option<Time> {
        let _ = (env, from, to, path, body);
        None
    }
}

/// No corruptions.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoAdversary;

impl Adversary for NoAdversary {
    fn corrupt(&self) -> PartySet {
        PartySet::EMPTY
    }

    fn name(&self) -> &str {
        "none"
    }
}

/// Corrupt parties that follow the protocol (useful to check that
/// bookkeeping of corrupt parties does not change honest behaviour).
#[derive(Clone, Copy, Debug)]
pub struct Passive(pub PartySet);

impl Adversary for Passive {
    fn corrupt(&self) -> PartySet {
        self.0
    }

    fn name(&self) -> &str {
        "passive"
    }
}

/// Corrupt parties that never send anything.
#[derive(Clone, Copy, Debug)]
pub struct Silent(pub PartySet);

impl Adversary for Silent {
    fn corrupt(&self) -> PartySet {
        self.0
    }

    fn name(&self) -> &str {
        "silent"
    }

    fn outgoing(&mut self, _env: &AdvEnv, _msg: Outgoing, _out: &mut Vec<Emit>) {}
}

impl<A: Adversary + ?Sized> Adversary for Box<A> {
    fn corrupt(&self) -> PartySet {
        (**self).corrupt()
    }
    fn name(&self) -> &str {
        (**self).name()
    }
    fn outgoing(&mut self, env: &AdvEnv, msg: Outgoing, out: &mut Vec<Emit>) {
        (**self).outgoing(env, msg, out)
    }
    fn coin_attack(&mut self, env: &AdvEnv, path: &Path, k: u32) -> Option<Vec<bool>> {
        (**self).coin_attack(env, path, k)
    }
    fn async_delay(&mut self, env: &AdvEnv, from: PartyId, to: PartyId, path: &Path, body: &Body) -> Option<Time> {
        (**self).async_delay(env, from, to, path, body)
    }
}
