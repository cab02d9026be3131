//! Experiment runner behind the `bobmpc` binary: a key=value config and a
//! circuit file go in; a transcript, a summary and the invariant checks come
//! out.
//!
//! Config keys (all optional except where the defaults do not fit):
//!
//! ```text
//! n = 5
//! t_s = 1
//! t_a = 1
//! prime = 2305843009213693951
//! delta = 1
//! mode = sync            # sync | sync-jitter | async
//! scheduler = fair       # fair | adversarial | starve:<party>[:<hold ticks>]
//! adversary = none       # see strategies::CATALOGUE
//! corrupt = auto         # auto | comma-separated party indices | empty
//! coin_p = 0.25
//! k_aba = 20
//! seed = 0
//! event_budget = 4000000000
//! inputs = 1,2,3,4,5     # default: random from the seed
//! transcript = milestones  # milestones | full
//! ```
//!
//! Exit codes: 0 run completed and every enabled check held, 1 a check
//! failed, 2 invalid config or circuit, 3 event budget exhausted.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{interpolate, Fe, Field};
use crate::harness::{MpcNode, MpcOutcome, TripleInputs};
use crate::mpc::{CirEval, Circuit, CircuitError};
use crate::party::{PartyId, PartySet};
use crate::simnet::{Body, NetMode, Params, ParamsError, RunStatus, Scheduler, SimConfig, Time, World};
use crate::strategies;
use crate::vss::Vss;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Names accepted by `--check`.
pub const CHECKS: &[&str] = &[
    "termination",
    "agreement",
    "correctness",
    "cs",
    "deadline",
    "milestones",
    "wire-degree",
    "vss-commitment",
    "triples",
    "ready-safety",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("bad value {value:?} for {key}")]
    BadValue { key: String, value: String },
    #[error("prime {0} is not prime")]
    Prime(u64),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("unknown adversary {0:?}")]
    Adversary(String),
    #[error("corrupt set {set:?} is larger than the {t} parties tolerated in this mode")]
    TooManyCorrupt { set: Vec<PartyId>, t: usize },
    #[error("corrupt party {0} out of range")]
    CorruptRange(PartyId),
    #[error("expected {n} inputs, got {got}")]
    Inputs { n: usize, got: usize },
    #[error("unknown check {0:?}")]
    Check(String),
    #[error("circuit: {0}")]
    Circuit(#[from] CircuitError),
    #[error("circuit has {got} inputs, config has n = {n}")]
    CircuitArity { n: usize, got: usize },
    #[error("{path}: {err}")]
    Io { path: String, err: io::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TranscriptMode {
    Milestones,
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Corruption {
    Auto,
    Set(PartySet),
}

#[derive(Clone, Debug)]
pub struct Config {
    pub params: Params,
    pub mode: NetMode,
    pub adversary: String,
    pub corrupt: Corruption,
    pub seed: u64,
    pub event_budget: u64,
    pub inputs: Option<Vec<u64>>,
    pub transcript: TranscriptMode,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut kv = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let bad = |k: &str, v: &str| ConfigError::BadValue { key: k.to_string(), value: v.to_string() };
        fn num<T: std::str::FromStr>(kv: &BTreeMap<String, String>, k: &str, default: T) -> Result<T, ConfigError> {
            match kv.get(k) {
                None => Ok(default),
                Some(v) => v.parse().map_err(|_| ConfigError::BadValue { key: k.to_string(), value: v.clone() }),
            }
        }
        const KEYS: &[&str] = &[
            "n", "t_s", "t_a", "prime", "delta", "mode", "scheduler", "adversary", "corrupt", "coin_p", "k_aba", "seed",
            "event_budget", "inputs", "transcript",
        ];
        if let Some(k) = kv.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(ConfigError::UnknownKey(k.clone()));
        }
        let prime: u64 = num(&kv, "prime", Field::mersenne61().modulus())?;
        let field = Field::new(prime).map_err(|_| ConfigError::Prime(prime))?;
        let mut params = Params::new(num(&kv, "n", 5)?, num(&kv, "t_s", 1)?, num(&kv, "t_a", 1)?)
            .with_field(field)
            .with_delta(num(&kv, "delta", 1)?)
            .with_coin_p(num(&kv, "coin_p", 0.25)?);
        params.k_aba = num(&kv, "k_aba", 20)?;
        params.validate()?;
        let max_delay = 3 * params.delta;
        let sched = kv.get("scheduler").map_or("fair", |s| s.as_str());
        let scheduler = match sched.split(':').collect::<Vec<_>>().as_slice() {
            ["fair"] => Scheduler::FairRandom { max_delay },
            ["adversarial"] => Scheduler::Adversarial { max_delay },
            ["starve", v, rest @ ..] if rest.len() <= 1 => {
                let victim: PartyId = v.parse().map_err(|_| bad("scheduler", sched))?;
                let hold = match rest {
                    [h] => h.parse().map_err(|_| bad("scheduler", sched))?,
                    _ => 50 * params.delta,
                };
                if victim >= params.n {
                    return Err(bad("scheduler", sched));
                }
                Scheduler::Starve { victim, max_delay, hold }
            }
            _ => return Err(bad("scheduler", sched)),
        };
        let mode = match kv.get("mode").map_or("sync", |s| s.as_str()) {
            "sync" => NetMode::Sync,
            "sync-jitter" => NetMode::SyncJitter,
            "async" => NetMode::Async(scheduler),
            other => return Err(bad("mode", other)),
        };
        let adversary = kv.get("adversary").cloned().unwrap_or_else(|| "none".to_string());
        if !strategies::CATALOGUE.iter().any(|(n, _)| *n == adversary) {
            return Err(ConfigError::Adversary(adversary));
        }
        let corrupt = match kv.get("corrupt").map(|s| s.as_str()) {
            None | Some("auto") => Corruption::Auto,
            Some(list) => {
                let mut set = PartySet::EMPTY;
                for p in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let i: PartyId = p.parse().map_err(|_| bad("corrupt", list))?;
                    if i >= params.n {
                        return Err(ConfigError::CorruptRange(i));
                    }
                    set.insert(i);
                }
                Corruption::Set(set)
            }
        };
        let inputs = match kv.get("inputs") {
            None => None,
            Some(list) => {
                let v: Vec<u64> =
                    list.split(',').map(|s| s.trim().parse::<u64>()).collect::<Result<_, _>>().map_err(|_| bad("inputs", list))?;
                if v.len() != params.n {
                    return Err(ConfigError::Inputs { n: params.n, got: v.len() });
                }
                Some(v)
            }
        };
        let transcript = match kv.get("transcript").map_or("milestones", |s| s.as_str()) {
            "milestones" => TranscriptMode::Milestones,
            "full" => TranscriptMode::Full,
            other => return Err(bad("transcript", other)),
        };
        let cfg = Config {
            params,
            mode,
            adversary,
            corrupt,
            seed: num(&kv, "seed", 0)?,
            event_budget: num(&kv, "event_budget", 4_000_000_000)?,
            inputs,
            transcript,
        };
        let t = cfg.tolerated();
        let set = cfg.corrupt_set();
        if set.len() > t {
            return Err(ConfigError::TooManyCorrupt { set: set.iter().collect(), t });
        }
        Ok(cfg)
    }

    /// t_s in the synchronous modes, t_a otherwise.
    pub fn tolerated(&self) -> usize {
        if self.mode.is_sync() {
            self.params.t_s
        } else {
            self.params.t_a
        }
    }

    /// `auto`: no one with adversary `none`, else the last tolerated parties.
    pub fn corrupt_set(&self) -> PartySet {
        match &self.corrupt {
            Corruption::Set(s) => *s,
            Corruption::Auto if self.adversary == "none" => PartySet::EMPTY,
            Corruption::Auto => PartySet::from_iter(self.params.n - self.tolerated()..self.params.n),
        }
    }

    pub fn inputs(&self, seed: u64) -> Vec<Fe> {
        let f = self.params.field;
        match &self.inputs {
            Some(v) => v.iter().map(|x| f.elem(*x % f.modulus())).collect(),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1a2b_3c4d);
                (0..self.params.n).map(|_| f.random(&mut rng)).collect()
            }
        }
    }
}

/// Which checks run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSel(Vec<&'static str>);

impl CheckSel {
    pub fn parse(list: &str) -> Result<CheckSel, ConfigError> {
        match list {
            "all" => Ok(CheckSel(CHECKS.to_vec())),
            "none" => Ok(CheckSel(Vec::new())),
            list => list
                .split(',')
                .map(|c| CHECKS.iter().copied().find(|k| *k == c.trim()).ok_or_else(|| ConfigError::Check(c.to_string())))
                .collect::<Result<_, _>>()
                .map(CheckSel),
        }
    }

    pub fn enabled(&self, name: &str) -> bool {
        self.0.contains(&name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum CheckResult {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct PartySummary {
    pub party: PartyId,
    pub honest: bool,
    pub output: Option<u64>,
    /// Local termination time, in ticks and in Δ.
    pub time: Option<Time>,
    pub time_delta: Option<f64>,
    pub cs: Option<Vec<PartyId>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Traffic {
    pub messages: u64,
    pub field_elems: u64,
    /// Field elements times the bit length of p.
    pub bits: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub n: usize,
    pub t_s: usize,
    pub t_a: usize,
    pub prime: u64,
    pub delta: Time,
    pub mode: String,
    pub adversary: String,
    pub corrupt: Vec<PartyId>,
    pub seed: u64,
    pub gates: usize,
    pub c_m: usize,
    pub d_m: usize,
    pub status: String,
    pub end_time: Time,
    pub deadline: Time,
    pub inputs: Vec<u64>,
    pub expected: Option<u64>,
    pub common_output: Option<u64>,
    pub parties: Vec<PartySummary>,
    pub events: u64,
    pub messages: u64,
    pub field_elems: u64,
    pub bits: u64,
    pub by_message: BTreeMap<String, Traffic>,
    pub by_layer: BTreeMap<String, Traffic>,
    pub milestones: BTreeMap<String, (usize, Time, Time)>,
    pub transcript_digest: String,
    pub transcript_lines: u64,
    pub checks: BTreeMap<String, CheckResult>,
}

pub struct Outcome {
    pub exit: i32,
    pub summary: Summary,
    pub world: World<MpcNode>,
}

fn layer(label: &str) -> &'static str {
    match label {
        "init" | "echo" | "ready" => "broadcast",
        "sba1" | "sba2" | "sba3" | "aba-ready" => "agreement",
        "rows" | "points" => "sharing",
        "share" => "reconstruction",
        _ => "termination",
    }
}

fn mode_name(m: NetMode) -> String {
    match m {
        NetMode::Sync => "sync".into(),
        NetMode::SyncJitter => "sync-jitter".into(),
        NetMode::Async(Scheduler::FairRandom { .. }) => "async/fair".into(),
        NetMode::Async(Scheduler::Adversarial { .. }) => "async/adversarial".into(),
        NetMode::Async(Scheduler::Starve { victim, hold, .. }) => format!("async/starve:{victim}:{hold}"),
    }
}

/// Runs one experiment; writes `transcript.jsonl`, `summary.json` and
/// `checks.json` to `out` when given.
pub fn run_experiment(cfg: &Config, circuit: &Circuit, seed: u64, out: Option<&Path>, checks: &CheckSel) -> Result<Outcome, ConfigError> {
    if circuit.n != cfg.params.n {
        return Err(ConfigError::CircuitArity { n: cfg.params.n, got: circuit.n });
    }
    let p = &cfg.params;
    let corrupt = cfg.corrupt_set();
    let adv = strategies::by_name(&cfg.adversary, corrupt, seed, p.delta).ok_or_else(|| ConfigError::Adversary(cfg.adversary.clone()))?;
    let inputs = cfg.inputs(seed);
    let sim = SimConfig::sync(p.clone(), seed).with_mode(cfg.mode).with_transcript();
    let mut world = World::new(sim, adv, |i| MpcNode::new(p, circuit.clone(), inputs[i], TripleInputs::default()));
    let io = |path: &Path, err: io::Error| ConfigError::Io { path: path.display().to_string(), err };
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        if cfg.transcript == TranscriptMode::Full {
            let path = dir.join("transcript.jsonl");
            let file = fs::File::create(&path).map_err(|e| io(&path, e))?;
            world.set_transcript_sink(Box::new(BufWriter::new(file)));
        }
    }
    let status = world.run(cfg.event_budget);
    let outcome = MpcOutcome::of(&world);
    let results: BTreeMap<String, CheckResult> = CHECKS
        .iter()
        .map(|&name| {
            let r = if checks.enabled(name) {
                run_check(name, &world, &outcome, circuit, &inputs, status)
            } else {
                CheckResult::Skipped("disabled".into())
            };
            (name.to_string(), r)
        })
        .collect();
    let summary = summarize(cfg, circuit, seed, &world, &outcome, &inputs, status, results);
    if let Some(dir) = out {
        let write = |name: &str, text: String| -> Result<(), ConfigError> {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| io(&path, e))
        };
        if cfg.transcript == TranscriptMode::Milestones {
            let lines: Vec<String> =
                world.core().milestones().iter().map(|m| serde_json::to_string(m).expect("milestones serialize")).collect();
            write("transcript.jsonl", lines.join("\n") + "\n")?;
        }
        write("summary.json", serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n")?;
        write("checks.json", serde_json::to_string_pretty(&summary.checks).expect("checks serialize") + "\n")?;
    }
    let exit = if status == RunStatus::Budget {
        EXIT_BUDGET
    } else if summary.checks.values().any(|c| matches!(c, CheckResult::Fail(_))) {
        EXIT_CHECK
    } else {
        EXIT_OK
    };
    Ok(Outcome { exit, summary, world })
}

#[allow(clippy::too_many_arguments)]
fn summarize(
    cfg: &Config,
    circuit: &Circuit,
    seed: u64,
    world: &World<MpcNode>,
    outcome: &MpcOutcome,
    inputs: &[Fe],
    status: RunStatus,
    checks: BTreeMap<String, CheckResult>,
) -> Summary {
    let p = &cfg.params;
    let core = world.core();
    let stats = core.stats();
    let bits_per_elem = 64 - u64::from(p.field.modulus().leading_zeros());
    let mut by_message = BTreeMap::new();
    let mut by_layer: BTreeMap<String, Traffic> = BTreeMap::new();
    for (k, label) in Body::LABELS.iter().enumerate() {
        let (messages, field_elems) = stats.by_kind[k];
        let bits = field_elems * bits_per_elem;
        by_message.insert(label.to_string(), Traffic { messages, field_elems, bits });
        let l = by_layer.entry(layer(label).to_string()).or_default();
        l.messages += messages;
        l.field_elems += field_elems;
        l.bits += bits;
    }
    let mut milestones: BTreeMap<String, (usize, Time, Time)> = BTreeMap::new();
    for m in core.milestones() {
        let d = m.end - m.start;
        let e = milestones.entry(m.kind.to_string()).or_insert((0, d, d));
        *e = (e.0 + 1, e.1.min(d), e.2.max(d));
    }
    let parties = (0..p.n)
        .map(|i| {
            let node = world.party(i);
            PartySummary {
                party: i,
                honest: !core.corrupt().contains(i),
                output: node.output.map(|o| o.1.value()),
                time: node.output.map(|o| o.0),
                time_delta: node.output.map(|o| o.0 as f64 / p.delta as f64),
                cs: node.eval.cs().map(|s| s.iter().collect()),
            }
        })
        .collect();
    Summary {
        n: p.n,
        t_s: p.t_s,
        t_a: p.t_a,
        prime: p.field.modulus(),
        delta: p.delta,
        mode: mode_name(cfg.mode),
        adversary: cfg.adversary.clone(),
        corrupt: core.corrupt().iter().collect(),
        seed,
        gates: circuit.gates.len(),
        c_m: circuit.mul_count(),
        d_m: circuit.depth(),
        status: format!("{status:?}").to_lowercase(),
        end_time: world.now(),
        deadline: core.timing().cir_eval(circuit.depth()),
        inputs: inputs.iter().map(|x| x.value()).collect(),
        expected: outcome.expected(circuit, inputs).map(|y| y.value()),
        common_output: outcome.common().map(|y| y.value()),
        parties,
        events: stats.events,
        messages: stats.sent,
        field_elems: stats.field_elems,
        bits: stats.field_elems * bits_per_elem,
        by_message,
        by_layer,
        milestones,
        transcript_digest: format!("{:016x}", world.transcript_digest().unwrap_or(0)),
        transcript_lines: world.transcript_lines(),
        checks,
    }
}

fn verdict(ok: bool, detail: impl FnOnce() -> String) -> CheckResult {
    if ok {
        CheckResult::Pass
    } else {
        CheckResult::Fail(detail())
    }
}

/// Every VSS instance of one party's evaluation, in a fixed order.
fn vss_instances(eval: &CirEval, n: usize) -> Vec<(String, &Vss)> {
    let mut v: Vec<(String, &Vss)> = (0..n).map(|j| (format!("input/{j}"), eval.acs().vss(j))).collect();
    if let Some(pre) = eval.preprocessing() {
        for j in 0..n {
            let ts = pre.tripsh(j);
            v.push((format!("tripsh/{j}"), ts.vss()));
            v.extend((0..n).map(|k| (format!("tripsh/{j}/verify/{k}"), ts.acs().vss(k))));
        }
    }
    v
}

fn degree_ok(field: Field, t: usize, shares: &[(PartyId, Fe)]) -> bool {
    let pts: Vec<(Fe, Fe)> = shares.iter().map(|(i, v)| (field.alpha(*i), *v)).collect();
    pts.len() <= t + 1 || interpolate(&pts, t).is_ok()
}

fn run_check(name: &str, w: &World<MpcNode>, out: &MpcOutcome, circuit: &Circuit, inputs: &[Fe], status: RunStatus) -> CheckResult {
    let core = w.core();
    let p = core.params();
    let honest: Vec<PartyId> = core.honest().iter().collect();
    let sync = core.mode().is_sync();
    if status == RunStatus::Budget && name != "agreement" {
        return CheckResult::Skipped("event budget exhausted".into());
    }
    match name {
        "termination" => verdict(out.outputs.len() == honest.len(), || format!("{} of {} honest parties output", out.outputs.len(), honest.len())),
        "agreement" => {
            let vals: std::collections::BTreeSet<u64> = out.outputs.values().map(|o| o.1.value()).collect();
            verdict(vals.len() <= 1, || format!("honest outputs {vals:?}"))
        }
        "correctness" => {
            let cs: std::collections::BTreeSet<PartySet> = out.cs.values().copied().collect();
            if cs.len() > 1 {
                return CheckResult::Fail(format!("honest parties disagree on the input subset: {cs:?}"));
            }
            let want = out.expected(circuit, inputs);
            verdict(out.outputs.values().all(|o| Some(o.1) == want), || format!("expected {want:?}"))
        }
        "cs" => {
            let bad: Vec<PartyId> = out
                .cs
                .iter()
                .filter(|(_, cs)| cs.len() < p.n - p.t_s || (sync && !core.honest().is_subset(cs)))
                .map(|(i, _)| *i)
                .collect();
            verdict(bad.is_empty(), || format!("parties {bad:?} hold a short subset or miss an honest party"))
        }
        "deadline" => {
            if !sync {
                return CheckResult::Skipped("asynchronous run".into());
            }
            let deadline = core.timing().cir_eval(circuit.depth());
            let late: Vec<PartyId> = out.outputs.iter().filter(|(_, o)| o.0 > deadline).map(|(i, _)| *i).collect();
            verdict(late.is_empty(), || format!("parties {late:?} output after {deadline}"))
        }
        "milestones" => {
            if core.mode() != NetMode::Sync || !core.corrupt().is_empty() {
                return CheckResult::Skipped("exact only in fault-free runs with fixed delays".into());
            }
            let tm = core.timing();
            let off: Vec<String> = core
                .milestones()
                .iter()
                .filter_map(|m| {
                    let want = match m.kind {
                        "bc" => tm.bc,
                        "ba" => tm.ba,
                        "wps" => tm.wps,
                        "vss" => tm.vss,
                        "acs" => tm.acs,
                        "tripsh" => tm.tripsh,
                        "tripgen" => tm.tripgen,
                        _ => return None,
                    };
                    (m.end - m.start != want).then(|| format!("{} at {} took {}", m.kind, m.path, m.end - m.start))
                })
                .collect();
            verdict(off.is_empty(), || off.join("; "))
        }
        "wire-degree" => {
            let bad: Vec<usize> = (0..circuit.wires)
                .filter(|&k| {
                    let shares: Vec<(PartyId, Fe)> = honest.iter().filter_map(|&i| w.party(i).eval.wires()[k].map(|v| (i, v))).collect();
                    shares.len() == honest.len() && !degree_ok(p.field, p.t_s, &shares)
                })
                .collect();
            verdict(bad.is_empty(), || format!("wires {bad:?} above degree t_s"))
        }
        "vss-commitment" => {
            let per_party: Vec<Vec<(String, &Vss)>> = honest.iter().map(|&i| vss_instances(&w.party(i).eval, p.n)).collect();
            let mut bad = Vec::new();
            for (k, (label, _)) in per_party[0].iter().enumerate() {
                let outs: Vec<(PartyId, &[Fe])> =
                    honest.iter().zip(&per_party).filter_map(|(&i, v)| v[k].1.output().map(|o| (i, o))).collect();
                let Some(len) = outs.first().map(|o| o.1.len()) else { continue };
                let ok = (0..len).all(|l| degree_ok(p.field, p.t_s, &outs.iter().map(|(i, o)| (*i, o[l])).collect::<Vec<_>>()));
                if !ok {
                    bad.push(label.clone());
                }
            }
            verdict(bad.is_empty(), || format!("honest shares off a degree-t_s polynomial in {bad:?}"))
        }
        "triples" => {
            let outs: Vec<(PartyId, &[[Fe; 3]])> =
                honest.iter().filter_map(|&i| w.party(i).eval.preprocessing().and_then(|pre| pre.output()).map(|o| (i, o))).collect();
            if outs.len() <= p.t_s {
                return CheckResult::Skipped("no preprocessing output".into());
            }
            let count = outs[0].1.len();
            for k in 0..count {
                let mut t = [p.field.zero(); 3];
                for (c, v) in t.iter_mut().enumerate() {
                    let pts: Vec<(Fe, Fe)> = outs.iter().map(|(i, o)| (p.field.alpha(*i), o[k][c])).collect();
                    match interpolate(&pts, p.t_s) {
                        Ok(q) => *v = q.constant_term(),
                        Err(_) => return CheckResult::Fail(format!("triple {k} component {c} above degree t_s")),
                    }
                }
                if t[0] * t[1] != t[2] {
                    return CheckResult::Fail(format!("triple {k} is not a multiplication triple"));
                }
            }
            CheckResult::Pass
        }
        "ready-safety" => {
            let bad: Vec<u64> = out
                .outputs
                .values()
                .map(|o| o.1)
                .filter(|y| honest.iter().filter(|&&i| w.party(i).eval.reconstructed() == Some(*y)).count() <= p.t_s)
                .map(|y| y.value())
                .collect();
            verdict(bad.is_empty(), || format!("outputs {bad:?} reconstructed by at most t_s honest parties"))
        }
        other => CheckResult::Skipped(format!("unknown check {other}")),
    }
}

#[derive(Parser, Debug)]
#[command(name = "bobmpc", version, about = "Run a simulated best-of-both-worlds MPC experiment")]
pub struct Args {
    /// key=value configuration file
    #[arg(long)]
    pub config: PathBuf,
    /// circuit file
    #[arg(long)]
    pub circuit: PathBuf,
    /// overrides the config seed
    #[arg(long, env = "BOBMPC_SEED")]
    pub seed: Option<u64>,
    /// output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// all | none | comma-separated check names
    #[arg(long, default_value = "all")]
    pub check: String,
    /// no report on stdout
    #[arg(long)]
    pub quiet: bool,
}

fn load(args: &Args) -> Result<(Config, Circuit, CheckSel), ConfigError> {
    let read = |p: &Path| fs::read_to_string(p).map_err(|err| ConfigError::Io { path: p.display().to_string(), err });
    let cfg = Config::parse(&read(&args.config)?)?;
    let circuit = Circuit::parse(cfg.params.field, &read(&args.circuit)?)?;
    let checks = CheckSel::parse(&args.check)?;
    Ok((cfg, circuit, checks))
}

/// The binary's entry point; returns the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = load(&args).and_then(|(cfg, circuit, checks)| {
        let seed = args.seed.unwrap_or(cfg.seed);
        run_experiment(&cfg, &circuit, seed, Some(&args.out), &checks)
    });
    match result {
        Ok(o) => {
            if !args.quiet {
                let _ = report(&o.summary, &args.out, &mut io::stdout().lock());
            }
            o.exit
        }
        Err(e) => {
            eprintln!("bobmpc: {e}");
            EXIT_CONFIG
        }
    }
}

fn report(s: &Summary, out: &Path, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "n={} t_s={} t_a={} mode={} adversary={} corrupt={:?} seed={}", s.n, s.t_s, s.t_a, s.mode, s.adversary, s.corrupt, s.seed)?;
    writeln!(w, "circuit: {} gates, c_M={} D_M={}; status {}", s.gates, s.c_m, s.d_m, s.status)?;
    match s.common_output {
        Some(y) => writeln!(w, "output {y} (expected {:?}), deadline {}", s.expected, s.deadline)?,
        None => writeln!(w, "no common output")?,
    }
    for p in s.parties.iter().filter(|p| p.honest) {
        writeln!(w, "  P{}: {:?} at {:?}", p.party, p.output, p.time)?;
    }
    writeln!(w, "{} messages, {} field elements", s.messages, s.field_elems)?;
    for (name, r) in &s.checks {
        writeln!(w, "  {name}: {r:?}")?;
    }
    writeln!(w, "artifacts in {}", out.display())
}
