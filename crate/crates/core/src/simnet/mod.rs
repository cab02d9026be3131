//! Deterministic discrete-event simulation of n parties on a synchronous or
//! asynchronous network, with a pluggable Byzantine adversary.
//!
//! Time is counted in ticks; `Params::delta` ticks make one Δ. In
//! asynchronous runs the same clock is used, but delays are chosen by the
//! scheduler and carry no bound.

pub mod adversary;
pub mod coin;
pub mod msg;
pub mod params;
pub mod path;
pub mod world;

pub use adversary::{AdvEnv, Adversary, Emit, NoAdversary, Outgoing, Passive, Silent};
pub use coin::{CoinOutcome, CoinStats};
pub use msg::{Body, Opt, Value};
pub use params::{Params, ParamsError, Time, Timing};
pub use path::Path;
pub use world::{Cx, Milestone, NetMode, Node, RunStatus, Scheduler, SimConfig, Stats, World, COIN_TAG};
