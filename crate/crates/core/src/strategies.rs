//! A cookbook of Byzantine strategies, each a named set of message hooks.

use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::hash::{Hash, Hasher};

use crate::algebra::{SymBivarPoly, UniPoly};
use crate::party::{PartyId, PartySet};
use crate::simnet::msg::Fnv64;
use crate::simnet::{AdvEnv, Adversary, Body, Emit, Outgoing, Path, Time, Value};

type Hook = dyn FnMut(&AdvEnv, Outgoing, &mut Vec<Emit>, &mut ChaCha8Rng);
type CoinHook = dyn FnMut(&AdvEnv, &Path, u32, &mut ChaCha8Rng) -> Option<Vec<bool>>;

/// An adversary assembled from closures.
pub struct Scripted {
    name: String,
    corrupt: PartySet,
    rng: ChaCha8Rng,
    hook: Box<Hook>,
    coin: Option<Box<CoinHook>>,
}

impl Scripted {
    pub fn new(
        name: &str,
        corrupt: PartySet,
        seed: u64,
        hook: impl FnMut(&AdvEnv, Outgoing, &mut Vec<Emit>, &mut ChaCha8Rng) + 'static,
    ) -> Scripted {
        Scripted { name: name.to_string(), corrupt, rng: ChaCha8Rng::seed_from_u64(seed), hook: Box::new(hook), coin: None }
    }

    pub fn with_coin_attack(
        mut self,
        f: impl FnMut(&AdvEnv, &Path, u32, &mut ChaCha8Rng) -> Option<Vec<bool>> + 'static,
    ) -> Scripted {
        self.coin = Some(Box::new(f));
        self
    }
}

impl Adversary for Scripted {
    fn corrupt(&self) -> PartySet {
        self.corrupt
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn outgoing(&mut self, env: &AdvEnv, msg: Outgoing, out: &mut Vec<Emit>) {
        (self.hook)(env, msg, out, &mut self.rng)
    }

    fn coin_attack(&mut self, env: &AdvEnv, path: &Path, k: u32) -> Option<Vec<bool>> {
        let rng = &mut self.rng;
        self.coin.as_mut().and_then(|f| f(env, path, k, rng))
    }
}

fn rewrite(msg: &Outgoing, body: Body) -> Emit {
    Emit { from: msg.from, to: msg.to, path: *msg.path, body: Rc::new(body), delay: 0 }
}

/// Honest parties split in two halves by index parity.
fn lower_half(env: &AdvEnv, p: PartyId) -> bool {
    let honest: Vec<PartyId> = (0..env.params.n).filter(|&i| !env.corrupt.contains(i)).collect();
    honest.iter().position(|&h| h == p).is_some_and(|k| k < honest.len() / 2)
}

/// Follows the protocol.
pub fn passive(corrupt: PartySet) -> Scripted {
    Scripted::new("passive", corrupt, 0, |_, m, out, _| out.push(Emit::forward(&m)))
}

/// Sends nothing at all.
pub fn silent(corrupt: PartySet) -> Scripted {
    Scripted::new("silent", corrupt, 0, |_, _, _, _| {})
}

/// Acast senders tell half the honest parties one value and the rest another.
pub fn equivocate_init(corrupt: PartySet, seed: u64) -> Scripted {
    Scripted::new("equivocate-init", corrupt, seed, |env, m, out, _| match &**m.body {
        Body::AcastInit(v) if !lower_half(env, m.to) => out.push(rewrite(&m, Body::AcastInit(twist(v)))),
        _ => out.push(Emit::forward(&m)),
    })
}

/// Acast inits go out `delay` ticks late.
pub fn late_init(corrupt: PartySet, delay: Time) -> Scripted {
    Scripted::new("late-init", corrupt, 0, move |_, m, out, _| {
        let mut e = Emit::forward(&m);
        if matches!(&**m.body, Body::AcastInit(_)) {
            e.delay = delay;
        }
        out.push(e)
    })
}

/// Acast inits reach only the first `reach` honest parties.
pub fn partial_init(corrupt: PartySet, reach: usize) -> Scripted {
    Scripted::new("partial-init", corrupt, 0, move |env, m, out, _| {
        if matches!(&**m.body, Body::AcastInit(_)) {
            let rank = (0..m.to).filter(|&i| !env.corrupt.contains(i)).count();
            if env.corrupt.contains(m.to) || rank >= reach {
                return;
            }
        }
        out.push(Emit::forward(&m))
    })
}

/// Random values in every agreement round, chosen per recipient.
pub fn sba_noise(corrupt: PartySet, seed: u64) -> Scripted {
    Scripted::new("sba-noise", corrupt, seed, |_, m, out, rng| {
        let pick = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3) {
            0 => None,
            1 => Some(Value::Msg(rng.gen_range(0..3))),
            _ => Some(Value::Bit(rng.gen())),
        };
        let body = match &**m.body {
            Body::Sba1(ph, _) => Body::Sba1(*ph, pick(rng)),
            Body::Sba2(ph, _) => Body::Sba2(*ph, rng.gen_bool(0.5).then(|| pick(rng))),
            Body::Sba3(ph, _) => Body::Sba3(*ph, pick(rng)),
            _ => return out.push(Emit::forward(&m)),
        };
        out.push(rewrite(&m, body))
    })
}

/// Corrupt senders' ABA readies and votes carry random bits; coin flips are
/// attacked whenever allowed, splitting the honest parties.
pub fn coin_splitter(corrupt: PartySet, seed: u64) -> Scripted {
    Scripted::new("coin-splitter", corrupt, seed, |_, m, out, rng| match &**m.body {
        Body::AbaReady(_) => out.push(rewrite(&m, Body::AbaReady(rng.gen()))),
        Body::AcastInit(Value::Bit(_)) => out.push(rewrite(&m, Body::AcastInit(Value::Bit(rng.gen())))),
        _ => out.push(Emit::forward(&m)),
    })
    .with_coin_attack(|env, _, _, _| Some((0..env.params.n).map(|i| lower_half(env, i)).collect()))
}

/// A different value of the same kind.
pub fn twist(v: &Value) -> Value {
    match v {
        Value::Bit(b) => Value::Bit(!b),
        Value::Msg(x) => Value::Msg(x.wrapping_add(1)),
        Value::Ok => Value::Msg(0),
        Value::Nok { idx, val } => Value::Nok { idx: *idx, val: *val + val.field().one() },
        Value::Wef { w, e, f } => Value::Wef { w: *w, e: *e, f: f.minus(e) },
        Value::Star { f, .. } => Value::Star { e: PartySet::EMPTY, f: *f },
        Value::Vote { members, bits, bit } => Value::Vote { members: *members, bits: *bits, bit: !bit },
    }
}

/// Adds to each row the matching row of a second symmetric polynomial Z
/// (fixed per instance and `salt`), so the shifted rows are mutually
/// consistent but off the original bivariate polynomial.
fn shift_rows(env: &AdvEnv, path: &Path, to: PartyId, rows: &[UniPoly], salt: u64) -> Vec<UniPoly> {
    let mut h = Fnv64::default();
    (path, salt).hash(&mut h);
    let mut rng = ChaCha8Rng::seed_from_u64(h.finish());
    let f = env.params.field;
    let t = env.params.t_s;
    rows.iter()
        .map(|r| {
            let z = SymBivarPoly::embed(&UniPoly::random(f, t, &mut rng), t, &mut rng).expect("degree t");
            r.add(&z.row_at(f.alpha(to)))
        })
        .collect()
}

/// Dealer rows come from two different bivariate polynomials: one for the
/// lower half of the honest parties, another for everyone else.
pub fn split_rows(corrupt: PartySet, seed: u64) -> Scripted {
    Scripted::new("split-dealer", corrupt, seed, move |env, m, out, _| match &**m.body {
        Body::Rows(rows) if !lower_half(env, m.to) => {
            out.push(rewrite(&m, Body::Rows(shift_rows(env, m.path, m.to, rows, seed))))
        }
        _ => out.push(Emit::forward(&m)),
    })
}

/// The first `victims` honest parties get rows off the dealer's polynomial.
pub fn bad_rows(corrupt: PartySet, seed: u64, victims: usize) -> Scripted {
    Scripted::new("bad-rows", corrupt, seed, move |env, m, out, _| match &**m.body {
        Body::Rows(rows) if !env.corrupt.contains(m.to) && (0..m.to).filter(|&i| !env.corrupt.contains(i)).count() < victims => {
            out.push(rewrite(&m, Body::Rows(shift_rows(env, m.path, m.to, rows, seed))))
        }
        _ => out.push(Emit::forward(&m)),
    })
}

/// Rows reach only the first `reach` honest parties.
pub fn drop_rows(corrupt: PartySet, reach: usize) -> Scripted {
    Scripted::new("drop-rows", corrupt, 0, move |env, m, out, _| {
        if matches!(&**m.body, Body::Rows(_)) {
            let rank = (0..m.to).filter(|&i| !env.corrupt.contains(i)).count();
            if !env.corrupt.contains(m.to) && rank >= reach {
                return;
            }
        }
        out.push(Emit::forward(&m))
    })
}

/// (𝒲, ℰ, ℱ) and star broadcasts are equivocated towards half the parties.
pub fn equivocate_sets(corrupt: PartySet, seed: u64) -> Scripted {
    Scripted::new("equivocate-sets", corrupt, seed, |env, m, out, rng| match &**m.body {
        Body::AcastInit(v @ (Value::Wef { .. } | Value::Star { .. })) if !lower_half(env, m.to) => {
            let w = match v {
                Value::Wef { w, e, f } => {
                    let drop = w.iter().nth(rng.gen_range(0..w.len().max(1))).unwrap_or(0);
                    let mut w2 = *w;
                    w2.remove(drop);
                    Value::Wef { w: w2, e: *e, f: *f }
                }
                other => twist(other),
            };
            out.push(rewrite(&m, Body::AcastInit(w)))
        }
        _ => out.push(Emit::forward(&m)),
    })
}

/// Sends its rows, then nothing else.
pub fn rows_then_silent(corrupt: PartySet) -> Scripted {
    Scripted::new("rows-then-silent", corrupt, 0, |_, m, out, _| {
        if matches!(&**m.body, Body::Rows(_)) {
            out.push(Emit::forward(&m))
        }
    })
}

/// Corrupt parties accuse everyone with a random NOK.
pub fn false_noks(corrupt: PartySet, seed: u64) -> Scripted {
    Scripted::new("false-noks", corrupt, seed, |env, m, out, rng| match &**m.body {
        Body::AcastInit(Value::Ok) => {
            let val = env.params.field.random(rng);
            out.push(rewrite(&m, Body::AcastInit(Value::Nok { idx: 0, val })))
        }
        _ => out.push(Emit::forward(&m)),
    })
}

/// Ready messages of the output layer carry a wrong value.
pub fn fake_ready(corrupt: PartySet) -> Scripted {
    Scripted::new("fake-ready", corrupt, 0, |_, m, out, _| match &**m.body {
        Body::MpcReady(y) => out.push(rewrite(&m, Body::MpcReady(*y + y.field().one()))),
        _ => out.push(Emit::forward(&m)),
    })
}

/// Corrupts every share sent for a public reconstruction.
pub fn bad_shares(corrupt: PartySet, seed: u64) -> Scripted {
    Scripted::new("bad-shares", corrupt, seed, |env, m, out, rng| match &**m.body {
        Body::Share(v) => {
            let v = v.iter().map(|_| env.params.field.random(rng)).collect();
            out.push(rewrite(&m, Body::Share(v)))
        }
        _ => out.push(Emit::forward(&m)),
    })
}

/// Strategy names accepted by [`by_name`], each with the hooks it installs.
pub const CATALOGUE: &[(&str, &str)] = &[
    ("none", "no corrupt party misbehaves (corrupt parties, if any, stay passive)"),
    ("passive", "forwards every message unchanged"),
    ("silent", "drops every outgoing message"),
    ("equivocate-init", "Acast inits: twisted value to the upper half of the honest parties"),
    ("late-init", "Acast inits delayed by 3Δ"),
    ("partial-init", "Acast inits reach only the first honest party"),
    ("sba-noise", "phase-king rounds: random payload per recipient"),
    ("coin-splitter", "ABA readies and votes random; coin flips split the honest parties"),
    ("split-dealer", "dealer rows: upper half of the honest parties get rows of a second polynomial"),
    ("bad-rows", "dealer rows: the first honest party gets a shifted row"),
    ("drop-rows", "dealer rows reach only the first honest party"),
    ("equivocate-sets", "(W, E, F) and star broadcasts: altered sets to half the honest parties"),
    ("rows-then-silent", "sends its dealer rows, then nothing"),
    ("false-noks", "every OK replaced by a random NOK"),
    ("fake-ready", "output-layer ready messages carry y + 1"),
    ("bad-shares", "every share sent for public reconstruction is random"),
];

/// The adversary behind a catalogue name.
pub fn by_name(name: &str, corrupt: PartySet, seed: u64, delta: Time) -> Option<Box<dyn Adversary>> {
    let adv: Box<dyn Adversary> = match name {
        "none" => Box::new(Scripted::new("none", corrupt, seed, |_, m, out, _| out.push(Emit::forward(&m)))),
        "passive" => Box::new(passive(corrupt)),
        "silent" => Box::new(silent(corrupt)),
        "equivocate-init" => Box::new(equivocate_init(corrupt, seed)),
        "late-init" => Box::new(late_init(corrupt, 3 * delta)),
        "partial-init" => Box::new(partial_init(corrupt, 1)),
        "sba-noise" => Box::new(sba_noise(corrupt, seed)),
        "coin-splitter" => Box::new(coin_splitter(corrupt, seed)),
        "split-dealer" => Box::new(split_rows(corrupt, seed)),
        "bad-rows" => Box::new(bad_rows(corrupt, seed, 1)),
        "drop-rows" => Box::new(drop_rows(corrupt, 1)),
        "equivocate-sets" => Box::new(equivocate_sets(corrupt, seed)),
        "rows-then-silent" => Box::new(rows_then_silent(corrupt)),
        "false-noks" => Box::new(false_noks(corrupt, seed)),
        "fake-ready" => Box::new(fake_ready(corrupt)),
        "bad-shares" => Box::new(bad_shares(corrupt, seed)),
        _ => return None,
    };
    Some(adv)
}
