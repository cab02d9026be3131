//! Protocol parameters and the derived timing schedule.

use thiserror::Error;

use crate::algebra::Field;
use crate::party::MAX_PARTIES;

/// Simulated time, in ticks. One Δ is `Params::delta` ticks.
pub type Time = u64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("need 3*t_s + t_a < n (n = {n}, t_s = {t_s}, t_a = {t_a})")]
    Thresholds { n: usize, t_s: usize, t_a: usize },
    #[error("t_a = {t_a} exceeds t_s = {t_s}")]
    AsyncAboveSync { t_s: usize, t_a: usize },
    #[error("n = {0} is outside 2..={MAX_PARTIES}")]
    PartyCount(usize),
    #[error("delta must be positive")]
    ZeroDelta,
    #[error("coin success probability {0} is not in (0, 1]")]
    CoinP(f64),
    #[error("k_aba = {0} leaves no time for the coin (need k_aba >= 20)")]
    KAba(u64),
    #[error("field of order {p} too small for {n} parties (need p > 2n + 1)")]
    SmallField { p: u64, n: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub n: usize,
    pub t_s: usize,
    pub t_a: usize,
    /// Ticks per Δ.
    pub delta: Time,
    /// The ABA constant k: T_ABA = k·Δ, coin duration (k - 19)·Δ.
    pub k_aba: u64,
    pub coin_p: f64,
    pub field: Field,
    /// Adversary-forced coin failures allowed per ABA instance; `None` means t(n - t).
    pub coin_budget: Option<usize>,
}

impl Params {
    /// Defaults: Δ = 1 tick, k = 20, p = 1/4, the 61-bit Mersenne field.
    pub fn new(n: usize, t_s: usize, t_a: usize) -> Params {
        Params { n, t_s, t_a, delta: 1, k_aba: 20, coin_p: 0.25, field: Field::mersenne61(), coin_budget: None }
    }

    pub fn with_field(mut self, field: Field) -> Params {
        self.field = field;
        self
    }

    pub fn with_delta(mut self, delta: Time) -> Params {
        self.delta = delta;
        self
    }

    pub fn with_coin_p(mut self, p: f64) -> Params {
        self.coin_p = p;
        self
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let Params { n, t_s, t_a, .. } = *self;
        if !(2..=MAX_PARTIES).contains(&n) {
            return Err(ParamsError::PartyCount(n));
        }
        if 3 * t_s + t_a >= n {
            return Err(ParamsError::Thresholds { n, t_s, t_a });
        }
        if t_a > t_s {
            return Err(ParamsError::AsyncAboveSync { t_s, t_a });
        }
        if self.delta == 0 {
            return Err(ParamsError::ZeroDelta);
        }
        if !(self.coin_p > 0.0 && self.coin_p <= 1.0) {
            return Err(ParamsError::CoinP(self.coin_p));
        }
        if self.k_aba < 20 {
            return Err(ParamsError::KAba(self.k_aba));
        }
        if self.field.modulus() <= 2 * n as u64 + 1 {
            return Err(ParamsError::SmallField { p: self.field.modulus(), n });
        }
        Ok(())
    }

    pub fn coin_budget(&self) -> usize {
        self.coin_budget.unwrap_or(self.t_s * (self.n - self.t_s))
    }

    pub fn timing(&self) -> Timing {
        Timing::new(self)
    }
}

/// The deadlines of every sub-protocol, in ticks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Timing {
    pub delta: Time,
    pub coin: Time,
    pub bgp: Time,
    pub bc: Time,
    pub aba: Time,
    pub ba: Time,
    pub wps: Time,
    pub vss: Time,
    pub acs: Time,
    pub tripsh: Time,
    pub tripgen: Time,
}

impl Timing {
    pub fn new(p: &Params) -> Timing {
        let d = p.delta;
        let n = p.n as u64;
        let bgp = (12 * n - 6) * d;
        let bc = 3 * d + bgp;
        let aba = p.k_aba * d;
        let ba = bc + aba;
        let wps = 2 * d + 2 * bc + ba;
        let vss = d + wps + 2 * bc + ba;
        let acs = vss + 2 * ba;
        let tripsh = acs + 4 * d;
        let tripgen = tripsh + 2 * ba + d;
        Timing { delta: d, coin: (p.k_aba - 19) * d, bgp, bc, aba, ba, wps, vss, acs, tripsh, tripgen }
    }

    /// Smallest multiple of Δ that is ≥ `now`.
    pub fn align(&self, now: Time) -> Time {
        now.div_ceil(self.delta) * self.delta
    }

    /// Sync deadline of circuit evaluation for multiplicative depth `depth`.
    pub fn cir_eval(&self, depth: usize) -> Time {
        self.tripgen + (depth as u64 + 2) * self.delta
    }

    pub fn in_deltas(&self, t: Time) -> f64 {
        t as f64 / self.delta as f64
    }
}
