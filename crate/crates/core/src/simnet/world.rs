//! The event loop: party runtimes, timers, network delivery and bookkeeping.

use std::collections::{BTreeMap, VecDeque};
use std::io::Write;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::adversary::{AdvEnv, Adversary, Emit, Outgoing};
use super::coin::{CoinOracle, CoinStats};
use super::msg::{Body, Fnv64};
use super::params::{Params, Time, Timing};
use super::path::Path;
use crate::algebra::Field;
use crate::party::{PartyId, PartySet};

/// Timer tags at or above this value are reserved for coin deliveries.
pub const COIN_TAG: u64 = 1 << 62;

/// How messages are delayed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetMode {
    /// Every message takes exactly Δ.
    Sync,
    /// Uniform delay in (0, Δ], channels kept FIFO.
    SyncJitter,
    Async(Scheduler),
}

impl NetMode {
    pub fn is_sync(&self) -> bool {
        !matches!(self, NetMode::Async(_))
    }
}

/// Asynchronous-mode delay policies. All delays are finite, so every message
/// is eventually delivered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheduler {
    /// Uniform delay in [1, max_delay] ticks.
    FairRandom { max_delay: Time },
    /// Fair-random, except that everything to or from `victim` is held back
    /// an extra `hold` ticks.
    Starve { victim: PartyId, max_delay: Time, hold: Time },
    /// Delays chosen by [`Adversary::async_delay`], fair-random otherwise.
    Adversarial { max_delay: Time },
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub params: Params,
    pub mode: NetMode,
    pub seed: u64,
    pub transcript: bool,
}

impl SimConfig {
    pub fn sync(params: Params, seed: u64) -> SimConfig {
        SimConfig { params, mode: NetMode::Sync, seed, transcript: false }
    }

    /// Fair-random asynchronous delays of up to 3Δ.
    pub fn fair_async(params: Params, seed: u64) -> SimConfig {
        let max_delay = 3 * params.delta;
        SimConfig { params, mode: NetMode::Async(Scheduler::FairRandom { max_delay }), seed, transcript: false }
    }

    pub fn with_mode(mut self, mode: NetMode) -> SimConfig {
        self.mode = mode;
        self
    }

    pub fn with_transcript(mut self) -> SimConfig {
        self.transcript = true;
        self
    }
}

/// A party-level protocol: the root of one party's instance tree.
pub trait Node {
    fn start(&mut self, cx: &mut Cx);
    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body);
    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64);
}

/// A sub-protocol instance reached the end of its run at `end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Milestone {
    pub party: PartyId,
    pub path: String,
    pub kind: &'static str,
    pub start: Time,
    pub end: Time,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub events: u64,
    pub sent: u64,
    pub delivered: u64,
    /// Deliveries discarded because the receiver had terminated.
    pub discarded: u64,
    pub timers: u64,
    pub field_elems: u64,
    pub by_kind: [(u64, u64); 11],
    /// Largest (deliver - send) over messages from honest senders.
    pub max_honest_latency: Time,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    /// No events left.
    Quiescent,
    /// The stop predicate held.
    Stopped,
    /// Event budget exhausted first.
    Budget,
}

#[derive(Serialize)]
struct Record<'a> {
    ev: &'static str,
    t: Time,
    from: usize,
    to: usize,
    tag: String,
    label: &'a str,
    digest: String,
}

struct Transcript {
    sink: Option<Box<dyn Write>>,
    digest: Fnv64,
    lines: u64,
}

enum EventKind {
    Deliver { from: u8, to: u8, path: Path, body: Rc<Body>, sent: Time },
    Timer { party: u8, path: Path, tag: u64 },
}

/// Queue entry; the payload sits in `Core::slab`.
struct Event {
    key: u128,
    slot: u32,
}

/// Pending events bucketed by `key >> 55` (time, timer flag, priority).
/// Sequence numbers only grow, so FIFO order inside a bucket is key order.
#[derive(Default)]
struct EventQueue {
    buckets: BTreeMap<u128, VecDeque<Event>>,
}

impl EventQueue {
    fn push(&mut self, ev: Event) {
        self.buckets.entry(ev.key >> 55).or_default().push_back(ev);
    }

    /// Puts back an event just taken by `pop`.
    fn unpop(&mut self, ev: Event) {
        self.buckets.entry(ev.key >> 55).or_default().push_front(ev);
    }

    fn pop(&mut self) -> Option<Event> {
        let mut first = self.buckets.first_entry()?;
        let ev = first.get_mut().pop_front().expect("buckets are never empty");
        if first.get().is_empty() {
            first.remove();
        }
        Some(ev)
    }
}

/// Everything in a world except the party runtimes.
pub struct Core {
    params: Params,
    timing: Timing,
    mode: NetMode,
    now: Time,
    queue: EventQueue,
    slab: Vec<Option<EventKind>>,
    free: Vec<u32>,
    seq: u64,
    net_rng: ChaCha8Rng,
    party_rng: Vec<ChaCha8Rng>,
    adversary: Box<dyn Adversary>,
    corrupt: PartySet,
    coin: CoinOracle,
    fifo: Vec<Time>,
    terminated: Vec<Option<Time>>,
    stats: Stats,
    milestones: Vec<Milestone>,
    transcript: Option<Transcript>,
    emit_buf: Vec<Emit>,
    dirty: bool,
}

impl Core {
    // Ordering at equal times: deliveries before timers; among timers the
    // deeper instance first, so children settle before parents read them.
    fn key(&mut self, time: Time, timer: bool, depth: usize) -> u128 {
        self.seq += 1;
        let prio = if timer { 255 - depth as u128 } else { 0 };
        (time as u128) << 64 | (timer as u128) << 63 | prio << 55 | self.seq as u128
    }

    fn send(&mut self, from: PartyId, to: PartyId, path: Path, body: Rc<Body>) {
        if self.terminated[from].is_some() {
            return;
        }
        if self.corrupt.contains(from) {
            let mut out = std::mem::take(&mut self.emit_buf);
            let env = AdvEnv { params: &self.params, timing: &self.timing, now: self.now, corrupt: self.corrupt };
            self.adversary.outgoing(&env, Outgoing { from, to, path: &path, body: &body }, &mut out);
            for e in out.drain(..) {
                assert!(self.corrupt.contains(e.from), "adversary may only speak for corrupt parties");
                self.schedule(e.from, e.to, e.path, e.body, e.delay);
            }
            self.emit_buf = out;
        } else {
            self.schedule(from, to, path, body, 0);
        }
    }

    fn schedule(&mut self, from: PartyId, to: PartyId, path: Path, body: Rc<Body>, extra: Time) {
        let n = self.params.n;
        let d = self.params.delta;
        let send_at = self.now + extra;
        let at = match self.mode {
            NetMode::Sync => send_at + d,
            NetMode::SyncJitter => {
                let at = send_at + self.net_rng.gen_range(1..=d);
                let slot = &mut self.fifo[from * n + to];
                let at = at.max(*slot);
                *slot = at;
                at
            }
            NetMode::Async(s) => {
                let (max_delay, hold) = match s {
                    Scheduler::FairRandom { max_delay } => (max_delay, 0),
                    Scheduler::Starve { victim, max_delay, hold } => {
                        (max_delay, if from == victim || to == victim { hold } else { 0 })
                    }
                    Scheduler::Adversarial { max_delay } => {
                        let env = AdvEnv { params: &self.params, timing: &self.timing, now: self.now, corrupt: self.corrupt };
                        match self.adversary.async_delay(&env, from, to, &path, &body) {
                            Some(delay) => (0, delay.max(1)),
                            None => (max_delay, 0),
                        }
                    }
                };
                let base = if max_delay == 0 { 0 } else { self.net_rng.gen_range(1..=max_delay) };
                send_at + base + hold
            }
        };
        self.stats.sent += 1;
        self.stats.field_elems += body.field_elems() as u64;
        let k = body.kind();
        self.stats.by_kind[k].0 += 1;
        self.stats.by_kind[k].1 += body.field_elems() as u64;
        if self.transcript.is_some() {
            self.record("send", from, to, &path, body.label(), body.digest());
        }
        let key = self.key(at, false, 0);
        self.enqueue(key, EventKind::Deliver { from: from as u8, to: to as u8, path, body, sent: send_at });
    }

    fn enqueue(&mut self, key: u128, kind: EventKind) {
        let slot = match self.free.pop() {
            Some(s) => {
                self.slab[s as usize] = Some(kind);
                s
            }
            None => {
                self.slab.push(Some(kind));
                (self.slab.len() - 1) as u32
            }
        };
        self.queue.push(Event { key, slot });
    }

    fn set_timer(&mut self, party: PartyId, path: Path, at: Time, tag: u64) {
        let at = at.max(self.now);
        let key = self.key(at, true, path.depth());
        self.enqueue(key, EventKind::Timer { party: party as u8, path, tag });
    }

    fn record(&mut self, ev: &'static str, from: PartyId, to: PartyId, path: &Path, label: &str, digest: u64) {
        let t = self.now;
        let Some(tr) = self.transcript.as_mut() else { return };
        let rec = Record { ev, t, from, to, tag: path.to_string(), label, digest: format!("{digest:016x}") };
        let line = serde_json::to_string(&rec).expect("records serialize");
        use std::hash::Hasher;
        tr.digest.write(line.as_bytes());
        tr.digest.write(b"\n");
        tr.lines += 1;
        if let Some(sink) = tr.sink.as_mut() {
            writeln!(sink, "{line}").expect("transcript sink writable");
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn timing(&self) -> &Timing {
        &self.timing
    }

    pub fn now(&self) -> Time {
        self.now
    }

    pub fn mode(&self) -> NetMode {
        self.mode
    }

    pub fn corrupt(&self) -> PartySet {
        self.corrupt
    }

    pub fn honest(&self) -> PartySet {
        PartySet::all(self.params.n).minus(&self.corrupt)
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn coin_stats(&self) -> CoinStats {
        self.coin.stats()
    }

    pub fn milestones(&self) -> &[Milestone] {
        &self.milestones
    }

    pub fn terminated_at(&self, party: PartyId) -> Option<Time> {
        self.terminated[party]
    }

    pub fn adversary_name(&self) -> &str {
        self.adversary.name()
    }
}

/// A party's handle on the world while it handles one event.
pub struct Cx<'a> {
    core: &'a mut Core,
    me: PartyId,
    path: Path,
}

impl<'a> Cx<'a> {
    pub fn me(&self) -> PartyId {
        self.me
    }

    pub fn now(&self) -> Time {
        self.core.now
    }

    pub fn params(&self) -> &Params {
        &self.core.params
    }

    pub fn timing(&self) -> &Timing {
        &self.core.timing
    }

    pub fn field(&self) -> Field {
        self.core.params.field
    }

    pub fn n(&self) -> usize {
        self.core.params.n
    }

    pub fn delta(&self) -> Time {
        self.core.params.delta
    }

    pub fn is_sync(&self) -> bool {
        self.core.mode.is_sync()
    }

    /// The current instance's path.
    pub fn path(&self) -> Path {
        self.path
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.core.party_rng[self.me]
    }

    /// Runs `f` inside child instance `seg`.
    pub fn sub<R>(&mut self, seg: u16, f: impl FnOnce(&mut Cx) -> R) -> R {
        self.path.push(seg);
        let r = f(self);
        self.path.pop();
        r
    }

    pub fn send(&mut self, to: PartyId, body: Body) {
        self.core.send(self.me, to, self.path, Rc::new(body));
    }

    pub fn send_all(&mut self, body: Body) {
        let body = Rc::new(body);
        for to in 0..self.core.params.n {
            self.core.send(self.me, to, self.path, Rc::clone(&body));
        }
    }

    /// Fires `on_timer(tag)` for this instance at `at` (immediately if past).
    pub fn timer_at(&mut self, at: Time, tag: u64) {
        self.core.set_timer(self.me, self.path, at, tag);
    }

    /// Timer at the next multiple of Δ (now, if now is one).
    pub fn timer_aligned(&mut self, tag: u64) {
        let at = self.core.timing.align(self.core.now);
        self.timer_at(at, tag);
    }

    /// Asks the coin oracle for flip `k` of this instance. The bit arrives
    /// as a timer with tag `COIN_TAG | k << 1 | bit` after the coin's
    /// duration (sync) or a scheduler delay (async).
    pub fn request_coin(&mut self, k: u32) {
        let core = &mut *self.core;
        let n = core.params.n;
        let path = self.path;
        let env = AdvEnv { params: &core.params, timing: &core.timing, now: core.now, corrupt: core.corrupt };
        let adversary = &mut core.adversary;
        let bit = core.coin.flip(path, k, n, || adversary.coin_attack(&env, &path, k)).bit(self.me);
        let delay = match core.mode {
            NetMode::Sync | NetMode::SyncJitter => core.timing.coin,
            NetMode::Async(_) => core.net_rng.gen_range(1..=3 * core.params.delta),
        };
        let at = core.now + delay;
        core.set_timer(self.me, path, at, COIN_TAG | (k as u64) << 1 | bit as u64);
    }

    /// Records that the current instance (started at `start`) finished now.
    pub fn milestone(&mut self, kind: &'static str, start: Time) {
        let m = Milestone { party: self.me, path: self.path.to_string(), kind, start, end: self.core.now };
        if self.core.transcript.is_some() {
            let path = self.path;
            self.core.record(kind, self.me, self.me, &path, "milestone", start);
        }
        self.core.milestones.push(m);
        self.core.dirty = true;
    }

    /// Marks a state change the stop predicate may care about.
    pub fn notify(&mut self) {
        self.core.dirty = true;
    }

    /// Stops this party: later deliveries and timers for it are discarded
    /// and it sends nothing more. Idempotent.
    pub fn terminate(&mut self) {
        if self.core.terminated[self.me].is_none() {
            self.core.terminated[self.me] = Some(self.core.now);
            self.core.dirty = true;
        }
    }
}

/// A simulated execution: one [`Node`] per party plus the shared core.
pub struct World<P> {
    core: Core,
    parties: Vec<P>,
    started: bool,
}

impl<P: Node> World<P> {
    pub fn new(cfg: SimConfig, adversary: Box<dyn Adversary>, mut make: impl FnMut(PartyId) -> P) -> World<P> {
        let n = cfg.params.n;
        let corrupt = adversary.corrupt();
        assert!(corrupt.is_subset(&PartySet::all(n)), "corrupt parties out of range");
        let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
        let net_rng = ChaCha8Rng::seed_from_u64(master.gen());
        let coin_rng = ChaCha8Rng::seed_from_u64(master.gen());
        let party_rng = (0..n).map(|_| ChaCha8Rng::seed_from_u64(master.gen())).collect();
        let timing = cfg.params.timing();
        let core = Core {
            coin: CoinOracle::new(cfg.params.coin_p, cfg.params.coin_budget(), coin_rng),
            timing,
            mode: cfg.mode,
            now: 0,
            queue: EventQueue::default(),
            slab: Vec::new(),
            free: Vec::new(),
            seq: 0,
            net_rng,
            party_rng,
            adversary,
            corrupt,
            fifo: vec![0; n * n],
            terminated: vec![None; n],
            stats: Stats::default(),
            milestones: Vec::new(),
            transcript: cfg.transcript.then(|| Transcript { sink: None, digest: Fnv64::default(), lines: 0 }),
            emit_buf: Vec::new(),
            dirty: false,
            params: cfg.params,
        };
        World { parties: (0..n).map(&mut make).collect(), core, started: false }
    }

    /// Streams transcript lines to `sink` (requires `SimConfig::transcript`).
    pub fn set_transcript_sink(&mut self, sink: Box<dyn Write>) {
        if let Some(t) = self.core.transcript.as_mut() {
            t.sink = Some(sink);
        }
    }

    pub fn core(&self) -> &Core {
        &self.core
    }

    pub fn party(&self, i: PartyId) -> &P {
        &self.parties[i]
    }

    pub fn parties(&self) -> &[P] {
        &self.parties
    }

    pub fn now(&self) -> Time {
        self.core.now
    }

    /// FNV digest over all transcript lines so far.
    pub fn transcript_digest(&self) -> Option<u64> {
        use std::hash::Hasher;
        self.core.transcript.as_ref().map(|t| t.digest.finish())
    }

    pub fn transcript_lines(&self) -> u64 {
        self.core.transcript.as_ref().map_or(0, |t| t.lines)
    }

    fn start(&mut self) {
        if self.started {
            return;
        }
        self.started = true;
        for i in 0..self.parties.len() {
            let mut cx = Cx { core: &mut self.core, me: i, path: Path::ROOT };
            self.parties[i].start(&mut cx);
        }
    }

    /// Runs until no events remain or `max_events` have been processed.
    pub fn run(&mut self, max_events: u64) -> RunStatus {
        self.run_until(max_events, |_| false)
    }

    /// Like [`World::run`], but also stops once `stop` holds. The predicate
    /// is re-evaluated only after events that recorded something.
    pub fn run_until(&mut self, max_events: u64, mut stop: impl FnMut(&World<P>) -> bool) -> RunStatus {
        self.start();
        if stop(self) {
            return RunStatus::Stopped;
        }
        let mut budget = max_events;
        while let Some(ev) = self.core.queue.pop() {
            if budget == 0 {
                self.core.queue.unpop(ev);
                return RunStatus::Budget;
            }
            budget -= 1;
            self.dispatch(ev);
            if self.core.dirty {
                self.core.dirty = false;
                if stop(self) {
                    return RunStatus::Stopped;
                }
            }
        }
        RunStatus::Quiescent
    }

    fn dispatch(&mut self, ev: Event) {
        let time = (ev.key >> 64) as Time;
        debug_assert!(time >= self.core.now, "time runs forward");
        self.core.now = time;
        self.core.stats.events += 1;
        let kind = self.core.slab[ev.slot as usize].take().expect("queued event");
        self.core.free.push(ev.slot);
        match kind {
            EventKind::Deliver { from, to, path, body, sent } => {
                let (from, to) = (from as usize, to as usize);
                if self.core.terminated[to].is_some() {
                    self.core.stats.discarded += 1;
                    return;
                }
                self.core.stats.delivered += 1;
                if !self.core.corrupt.contains(from) {
                    let lat = time - sent;
                    let s = &mut self.core.stats;
                    s.max_honest_latency = s.max_honest_latency.max(lat);
                }
                if self.core.transcript.is_some() {
                    self.core.record("deliver", from, to, &path, body.label(), body.digest());
                }
                let mut cx = Cx { core: &mut self.core, me: to, path: Path::ROOT };
                self.parties[to].on_message(&mut cx, from, path.segments(), &body);
            }
            EventKind::Timer { party, path, tag } => {
                let party = party as usize;
                if self.core.terminated[party].is_some() {
                    return;
                }
                self.core.stats.timers += 1;
                if self.core.transcript.is_some() {
                    self.core.record("timer", party, party, &path, "timer", tag);
                }
                let mut cx = Cx { core: &mut self.core, me: party, path: Path::ROOT };
                self.parties[party].on_timer(&mut cx, path.segments(), tag);
            }
        }
    }
}
