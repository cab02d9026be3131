//! Acceptance run: one PASS/FAIL line per criterion, then a non-zero exit
//! if any failed. Timing milestones and counts are compared exactly;
//! runtimes against the limits below.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bobmpc::algebra::{interpolate, rs_decode, Fe, Field, UniPoly};
use bobmpc::broadcast::BcOut;
use bobmpc::harness::{evaluate_circuit, BaNode, BcNode, MpcNode, MpcOutcome, PreProcNode, TripShNode, TripleInputs, VssNode};
use bobmpc::mpc::Circuit;
use bobmpc::party::{PartyId, PartySet};
use bobmpc::sharing::{OecSession, Sharing};
use bobmpc::simnet::{Adversary, NetMode, NoAdversary, Node, Params, RunStatus, SimConfig, Time, Value, World};
use bobmpc::stargraph::{find_star, ConsistencyGraph, Star};
use bobmpc::strategies;
use bobmpc::triples::{beaver, random_triples, SharedTriple, Triple};
use common::privacy::{preprocessing_counts, vss_counts, wps_counts};
use common::{exhaustive_decode, permutations};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT_1: Duration = Duration::from_secs(10);
const LIMIT_2: Duration = Duration::from_secs(30);
const LIMIT_4: Duration = Duration::from_secs(120);
const LIMIT_8: Duration = Duration::from_secs(300);
const BUDGET: u64 = 4_000_000_000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn run<N: Node>(p: &Params, mode: NetMode, seed: u64, adv: Box<dyn Adversary>, make: impl FnMut(PartyId) -> N) -> World<N> {
    let cfg = SimConfig::sync(p.clone(), seed).with_mode(mode);
    let mut w = World::new(cfg, adv, make);
    assert_eq!(w.run(BUDGET), RunStatus::Quiescent, "run did not quiesce");
    w
}

fn fair(p: &Params, seed: u64) -> NetMode {
    SimConfig::fair_async(p.clone(), seed).mode
}

/// Interpolates each coordinate of the honest share vectors at degree t;
/// `None` if some coordinate is off every degree-t polynomial.
fn open(p: &Params, shares: &[(PartyId, Vec<Fe>)]) -> Option<Vec<Fe>> {
    let l = shares.first()?.1.len();
    (0..l)
        .map(|k| {
            let pts: Vec<(Fe, Fe)> = shares.iter().map(|(i, s)| (p.field.alpha(*i), s[k])).collect();
            interpolate(&pts, p.t_s).ok().map(|q| q.constant_term())
        })
        .collect()
}

fn flatten(ts: &[Triple]) -> Vec<Fe> {
    ts.iter().flat_map(|t| t.iter().copied()).collect()
}

// 1 ------------------------------------------------------------------------

fn algebra_oec() -> Outcome {
    let f = Field::new(17).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let d = rng.gen_range(0..=2);
        let r = rng.gen_range(0..=2);
        let m = rng.gen_range(d + 1..=(d + 2 * r + 3).min(16));
        let q = UniPoly::random(f, d, &mut rng);
        let mut pts: Vec<(Fe, Fe)> = (1..=m as u64).map(|x| (f.elem(x), q.eval(f.elem(x)))).collect();
        for k in 0..rng.gen_range(0..=r + 1).min(m) {
            pts[k * 2 % m].1 += f.elem(rng.gen_range(1..17));
        }
        if rs_decode(d, r, &pts).ok().flatten() != exhaustive_decode(f, d, r, &pts) {
            mismatches += 1;
        }
    }
    ensure!(mismatches == 0, "rs_decode differs from exhaustive search in {mismatches} of 1000 cases");
    let (n, t) = (5, 1);
    let orders = permutations(n);
    let (mut sessions, mut misdecoded, mut stalled) = (0u64, 0u64, 0u64);
    for d in 1..=2 {
        for _ in 0..2 {
            let q = UniPoly::random(f, d, &mut rng);
            let mut patterns: Vec<(Option<PartyId>, Option<Fe>)> = vec![(None, None)];
            for bad in 0..n {
                patterns.push((Some(bad), None));
                patterns.extend(f.elements().map(|v| (Some(bad), Some(v))));
            }
            for (bad, claim) in &patterns {
                for order in &orders {
                    sessions += 1;
                    let mut s = OecSession::new(f, d, t, PartySet::all(n));
                    let mut out = None;
                    for &i in order {
                        let v = if Some(i) == *bad { *claim } else { Some(q.eval(f.alpha(i))) };
                        if let Some(o) = v.and_then(|v| s.admit(i, v)) {
                            misdecoded += (o != q) as u64;
                            out.get_or_insert(o);
                        }
                    }
                    stalled += out.is_none() as u64;
                }
            }
        }
    }
    ensure!(misdecoded == 0 && stalled == 0, "OEC: {misdecoded} wrong outputs, {stalled} sessions without output");
    Ok(format!("1000 rs_decode cases equal to exhaustive search; {sessions} OEC sessions (n=5, t=1, every corruption pattern and arrival order) all correct"))
}

// 2 ------------------------------------------------------------------------

/// Star validity straight from the definition, on an explicit edge set.
fn star_by_definition(n: usize, t: usize, edges: &BTreeSet<(usize, usize)>, s: &Star) -> bool {
    let e: Vec<usize> = s.e.iter().collect();
    let fs: Vec<usize> = s.f.iter().collect();
    e.iter().all(|x| fs.contains(x))
        && fs.iter().all(|&x| x < n)
        && e.len() + 2 * t >= n
        && fs.len() + t >= n
        && e.iter().all(|&a| fs.iter().all(|&b| a == b || edges.contains(&(a.min(b), a.max(b)))))
}

fn random_edges(n: usize, density: f64, rng: &mut ChaCha8Rng) -> BTreeSet<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(density)).collect()
}

fn star_finder() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut planted, mut free_found) = (0, 0);
    for n in 5..=10 {
        for _ in 0..500 {
            let t = rng.gen_range(1..=((n - 1) / 3).max(1));
            let mut edges = random_edges(n, rng.gen_range(0.0..0.7), &mut rng);
            let mut ids: Vec<usize> = (0..n).collect();
            ids.shuffle(&mut rng);
            for &a in &ids[..n - t] {
                for &b in &ids[..n - t] {
                    if a < b {
                        edges.insert((a, b));
                    }
                }
            }
            let g = ConsistencyGraph::from_edges(n, edges.iter().copied());
            let Some(s) = find_star(&g, t) else { return Err(format!("no star with a planted clique (n={n}, t={t})")) };
            ensure!(star_by_definition(n, t, &edges, &s), "invalid star {s:?} (n={n}, t={t})");
            planted += 1;
        }
        for _ in 0..500 {
            let t = ((n - 1) / 3).max(1);
            let edges = random_edges(n, rng.gen_range(0.2..0.95), &mut rng);
            let g = ConsistencyGraph::from_edges(n, edges.iter().copied());
            if let Some(s) = find_star(&g, t) {
                ensure!(star_by_definition(n, t, &edges, &s), "invalid star {s:?} on a plant-free graph (n={n})");
                free_found += 1;
            }
        }
    }
    Ok(format!("{planted} planted graphs all gave valid stars; 3000 plant-free graphs, {free_found} stars returned, all valid"))
}

// 3 ------------------------------------------------------------------------

fn run_bc(p: &Params, mode: NetMode, seed: u64, sender: PartyId, adv: Box<dyn Adversary>) -> World<BcNode> {
    run(p, mode, seed, adv, |_| BcNode::new(p.t_s, sender, Value::Msg(7)))
}

/// Per honest party, the first non-⊥ output; errors on two distinct values.
fn bc_firsts(w: &World<BcNode>) -> Result<Vec<Option<(Time, Value)>>, String> {
    let mut seen: Option<Value> = None;
    let mut firsts = Vec::new();
    for i in w.core().honest().iter() {
        let mut first = None;
        for (at, out) in &w.party(i).log {
            let v = match out {
                BcOut::Regular(r) => r.clone(),
                BcOut::Fallback(v) => Some(v.clone()),
            };
            if let Some(v) = v {
                ensure!(seen.as_ref().is_none_or(|s| *s == v), "two distinct honest outputs");
                seen = Some(v.clone());
                first.get_or_insert((*at, v));
            }
        }
        firsts.push(first);
    }
    Ok(firsts)
}

fn broadcast_suite() -> Outcome {
    let mut runs = 0;
    for (n, t_s) in [(5, 1), (8, 2)] {
        let p = Params::new(n, t_s, 1);
        let deadline = (12 * n as u64 - 3) * p.delta;
        ensure!(p.timing().bc == deadline, "T_BC formula");
        for sender in 0..n {
            let w = run_bc(&p, NetMode::Sync, sender as u64, sender, Box::new(NoAdversary));
            runs += 1;
            for i in 0..n {
                ensure!(
                    w.party(i).log == vec![(deadline, BcOut::Regular(Some(Value::Msg(7))))],
                    "n={n} sender {sender}: party {i} logged {:?}",
                    w.party(i).log
                );
            }
        }
        let corrupt = PartySet::from_iter(0..t_s);
        for seed in 0..12u64 {
            let advs: Vec<Box<dyn Adversary>> = vec![
                Box::new(strategies::equivocate_init(corrupt, seed)),
                Box::new(strategies::late_init(corrupt, seed % (12 * n as u64))),
                Box::new(strategies::partial_init(corrupt, seed as usize % n)),
                Box::new(strategies::silent(corrupt)),
                Box::new(strategies::sba_noise(corrupt, seed)),
            ];
            for adv in advs {
                let name = adv.name().to_string();
                let w = run_bc(&p, NetMode::Sync, seed, 0, adv);
                runs += 1;
                let firsts = bc_firsts(&w).map_err(|e| format!("{name} n={n} seed {seed}: {e}"))?;
                let fallback = w
                    .core()
                    .honest()
                    .iter()
                    .flat_map(|i| w.party(i).log.iter())
                    .filter(|(_, o)| matches!(o, BcOut::Fallback(_)))
                    .map(|(at, _)| *at)
                    .min();
                if let Some(t0) = fallback {
                    for f in &firsts {
                        ensure!(f.as_ref().is_some_and(|(at, _)| *at <= t0 + 2 * p.delta), "{name} n={n} seed {seed}: fallback spread above 2Δ");
                    }
                }
            }
        }
    }
    let p = Params::new(5, 1, 1);
    let corrupt = PartySet::from_iter([4]);
    for seed in 0..100 {
        let w = run_bc(&p, fair(&p, seed), seed, 1, Box::new(strategies::sba_noise(corrupt, seed)));
        let firsts = bc_firsts(&w).map_err(|e| format!("async seed {seed}: {e}"))?;
        ensure!(firsts.iter().all(|f| f.as_ref().map(|x| &x.1) == Some(&Value::Msg(7))), "async seed {seed}: honest sender value not delivered");
        let w = run_bc(&p, fair(&p, seed), seed, 4, Box::new(strategies::equivocate_init(corrupt, seed)));
        let firsts = bc_firsts(&w).map_err(|e| format!("async seed {seed}: {e}"))?;
        let some = firsts.iter().filter(|f| f.is_some()).count();
        ensure!(some == 0 || some == firsts.len(), "async seed {seed}: {some} of {} honest parties output", firsts.len());
        runs += 2;
    }
    Ok(format!("{runs} runs: honest senders at exactly (12n-3)Δ, 5 corrupt-sender strategies consistent with fallback spread ≤ 2Δ, 100 async seeds clean"))
}

// 4 ------------------------------------------------------------------------

fn run_ba(p: &Params, mode: NetMode, seed: u64, inputs: &[bool], adv: Box<dyn Adversary>) -> World<BaNode> {
    let cfg = SimConfig::sync(p.clone(), seed).with_mode(mode);
    let mut w = World::new(cfg, adv, |i| BaNode::new(p.n, p.t_s, inputs[i]));
    let honest = w.core().honest();
    assert_eq!(w.run_until(BUDGET, |w| honest.iter().all(|i| w.party(i).output.is_some())), RunStatus::Stopped);
    w
}

fn ba_common(w: &World<BaNode>) -> Result<(bool, Time), String> {
    let outs: Vec<(Time, bool)> = w.core().honest().iter().filter_map(|i| w.party(i).output).collect();
    ensure!(outs.len() == w.core().honest().len(), "an honest party did not decide");
    let bits: BTreeSet<bool> = outs.iter().map(|o| o.1).collect();
    ensure!(bits.len() == 1, "honest parties decided {bits:?}");
    Ok((outs[0].1, outs.iter().map(|o| o.0).max().unwrap()))
}

fn agreement_suite() -> Outcome {
    for (n, t) in [(5, 1), (8, 2)] {
        let p = Params::new(n, t, 1);
        let tm = p.timing();
        ensure!(tm.ba == tm.bc + p.k_aba * p.delta, "T_BA formula");
        for b in [false, true] {
            let w = run_ba(&p, NetMode::Sync, 0, &vec![b; n], Box::new(NoAdversary));
            ensure!(w.parties().iter().all(|x| x.output == Some((tm.ba, b))), "unanimous {b}, n={n}: not exactly at T_BA");
        }
        let corrupt = PartySet::from_iter(n - t..n);
        for seed in 0..20u64 {
            let inputs: Vec<bool> = (0..n).map(|i| (i as u64 + seed).is_multiple_of(3)).collect();
            let adv: Box<dyn Adversary> = match seed % 3 {
                0 => Box::new(strategies::coin_splitter(corrupt, seed)),
                1 => Box::new(strategies::sba_noise(corrupt, seed)),
                _ => Box::new(strategies::equivocate_init(corrupt, seed)),
            };
            let w = run_ba(&p, NetMode::Sync, seed, &inputs, adv);
            let (_, last) = ba_common(&w).map_err(|e| format!("mixed sync n={n} seed {seed}: {e}"))?;
            ensure!(last <= tm.ba, "mixed sync n={n} seed {seed}: decided at {last} > {}", tm.ba);
        }
    }
    let p = Params::new(5, 1, 1);
    let corrupt = PartySet::from_iter([3]);
    let (mut forced, mut unanimous) = (0, 0);
    for seed in 0..200u64 {
        let uni = seed % 2 == 0;
        let inputs: Vec<bool> = (0..5).map(|i| if uni { seed % 4 == 0 } else { (i as u64 + seed).is_multiple_of(2) }).collect();
        let w = run_ba(&p, fair(&p, seed), seed, &inputs, Box::new(strategies::coin_splitter(corrupt, seed)));
        let (b, _) = ba_common(&w).map_err(|e| format!("async seed {seed}: {e}"))?;
        let cs = w.core().coin_stats();
        ensure!(cs.max_spent <= p.coin_budget(), "seed {seed}: {} forced failures on one instance", cs.max_spent);
        forced += cs.forced;
        if uni {
            unanimous += 1;
            ensure!(b == inputs[0], "async seed {seed}: validity");
        }
    }
    ensure!(forced > 0, "no coin failure was forced");
    Ok(format!(
        "sync deadlines exact (n=5, 8), 40 mixed sync runs agree by T_BA, 200 async seeds agree ({forced} forced coin failures), validity in {unanimous}/{unanimous} unanimous seeds"
    ))
}

// 5 ------------------------------------------------------------------------

fn vss_suite() -> Outcome {
    let polys = |p: &Params, l: usize, seed: u64| -> Vec<UniPoly> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..l).map(|_| UniPoly::random(p.field, p.t_s, &mut rng)).collect()
    };
    let at = |p: &Params, qs: &[UniPoly], i: PartyId| -> Vec<Fe> { qs.iter().map(|q| q.eval(p.field.alpha(i))).collect() };
    let outs = |w: &World<VssNode>| -> Vec<(PartyId, Time, Vec<Fe>)> {
        w.core().honest().iter().filter_map(|i| w.party(i).output.as_ref().map(|(t, s)| (i, *t, s.clone()))).collect()
    };
    let strip = |o: &[(PartyId, Time, Vec<Fe>)]| -> Vec<(PartyId, Vec<Fe>)> { o.iter().map(|(i, _, s)| (*i, s.clone())).collect() };
    let dealers = |corrupt: PartySet, seed: u64, n: usize| -> Vec<Box<dyn Adversary>> {
        vec![
            Box::new(strategies::split_rows(corrupt, seed)),
            Box::new(strategies::bad_rows(corrupt, seed, 1 + seed as usize % 2)),
            Box::new(strategies::drop_rows(corrupt, n - 2 * corrupt.len() - seed as usize % 2)),
            Box::new(strategies::equivocate_sets(corrupt, seed)),
            Box::new(strategies::late_init(corrupt, 1 + seed % (6 * n as u64))),
            Box::new(strategies::rows_then_silent(corrupt)),
        ]
    };
    let mut corrupt_runs = 0;
    let mut spread_max = 0;
    for (n, t_s, seeds) in [(5, 1, 12u64), (8, 2, 3)] {
        let p = Params::new(n, t_s, 1);
        let qs = polys(&p, 2, 7);
        let w = run(&p, NetMode::Sync, 1, Box::new(NoAdversary), |_| VssNode::new(&p, 0, Some(qs.clone())));
        for i in 0..n {
            ensure!(w.party(i).output == Some((p.timing().vss, at(&p, &qs, i))), "honest dealer n={n}: party {i} not exact at T_VSS");
        }
        let corrupt = PartySet::from_iter(0..t_s);
        for seed in 0..seeds {
            for adv in dealers(corrupt, seed, n) {
                let name = adv.name().to_string();
                let w = run(&p, NetMode::Sync, seed, adv, |_| VssNode::new(&p, 0, Some(qs.clone())));
                corrupt_runs += 1;
                let o = outs(&w);
                if o.is_empty() {
                    continue;
                }
                ensure!(o.len() == n - t_s, "{name} n={n} seed {seed}: only {} honest outputs", o.len());
                ensure!(open(&p, &strip(&o)).is_some(), "{name} n={n} seed {seed}: commitment check failed");
                let first = o.iter().map(|x| x.1).min().unwrap();
                let last = o.iter().map(|x| x.1).max().unwrap();
                spread_max = spread_max.max(last - first);
                ensure!(last - first <= 2 * p.delta, "{name} n={n} seed {seed}: straggler spread {}", last - first);
            }
        }
    }
    let p = Params::new(5, 1, 1);
    let qs = polys(&p, 1, 9);
    let corrupt = PartySet::from_iter([4]);
    for seed in 0..100u64 {
        let adv: Box<dyn Adversary> = match seed % 3 {
            0 => Box::new(NoAdversary),
            1 => Box::new(strategies::false_noks(corrupt, seed)),
            _ => Box::new(strategies::silent(corrupt)),
        };
        let w = run(&p, fair(&p, seed), seed, adv, |_| VssNode::new(&p, 0, Some(qs.clone())));
        for i in w.core().honest().iter() {
            ensure!(w.party(i).output.as_ref().map(|o| &o.1) == Some(&at(&p, &qs, i)), "async seed {seed}: party {i}");
        }
    }
    let corrupt = PartySet::from_iter([0]);
    for seed in 0..10u64 {
        for adv in dealers(corrupt, seed, 5) {
            let name = adv.name().to_string();
            let w = run(&p, fair(&p, seed), seed, adv, |_| VssNode::new(&p, 0, Some(qs.clone())));
            corrupt_runs += 1;
            let o = outs(&w);
            ensure!(o.is_empty() || o.len() == 4, "{name} async seed {seed}: partial output");
            ensure!(o.is_empty() || open(&p, &strip(&o)).is_some(), "{name} async seed {seed}: commitment check failed");
        }
    }
    Ok(format!(
        "honest dealers exact at T_VSS (n=5, 8), 100 async seeds correct, {corrupt_runs} corrupt-dealer runs (6 strategies) pass the commitment check, max sync spread {spread_max}Δ ≤ 2Δ"
    ))
}

// 6 ------------------------------------------------------------------------

fn privacy() -> Outcome {
    let flat = |c: &BTreeMap<u64, u64>, what: &str| -> Result<u64, String> {
        let first = *c.values().next().unwrap_or(&0);
        ensure!(c.len() == 17 && first > 0 && c.values().all(|x| *x == first), "{what}: counts differ {c:?}");
        Ok(first)
    };
    let w = flat(&wps_counts(0), "WPS")?;
    let v = flat(&vss_counts(0), "VSS")?;
    let pre = preprocessing_counts(1);
    let first = *pre.values().next().unwrap_or(&0);
    ensure!(pre.len() == 17 * 17 && first > 0 && pre.values().all(|x| *x == first), "preprocessing: counts differ");
    Ok(format!("completions per candidate: WPS {w} for all 17 secrets, VSS {v} for all 17, preprocessing {first} for all 289 (a, b)"))
}

// 7 ------------------------------------------------------------------------

fn triples_suite() -> Outcome {
    let f = Field::new(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..1000 {
        let (n, t) = if case % 2 == 0 { (5, 1) } else { (8, 2) };
        let (x, y) = (f.random(&mut rng), f.random(&mut rng));
        let tr = [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)];
        let z = beaver(&Sharing::deal(x, t, n, &mut rng), &Sharing::deal(y, t, n, &mut rng), &SharedTriple::deal(tr, t, n, &mut rng))
            .map_err(|e| format!("{e:?}"))?
            .reconstruct()
            .map_err(|e| format!("{e:?}"))?;
        ensure!(z - x * y == tr[2] - tr[0] * tr[1], "Beaver identity, case {case}");
    }
    let p = Params::new(5, 1, 1);
    let dealer = 3;
    let corrupt = PartySet::from_iter([dealer]);
    let l = 2;
    let mut bad_runs = 0;
    for seed in 0..12u64 {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mut ts = random_triples(p.field, l * (2 * p.t_s + 1), &mut r);
        let k = seed as usize % ts.len();
        match seed % 3 {
            0 => ts[k][2] += p.field.one(),
            1 => ts[k][0] += p.field.one(),
            _ => ts.iter_mut().for_each(|t| t[2] = p.field.random(&mut r)),
        }
        let mode = if seed % 2 == 0 { NetMode::Sync } else { fair(&p, seed) };
        let w = run(&p, mode, seed, Box::new(strategies::passive(corrupt)), |i| {
            let dealt = (i == dealer).then(|| ts.clone());
            TripShNode::new(&p, dealer, l, TripleInputs { dealt, verification: None })
        });
        for i in w.core().honest().iter() {
            let out = &w.party(i).output.as_ref().ok_or(format!("bad dealer seed {seed}: party {i} no output"))?.1;
            ensure!(out.discarded && out.triples == vec![[p.field.zero(); 3]; l], "bad dealer seed {seed}: party {i} kept the dealing");
        }
        bad_runs += 1;
    }
    let mut pre_runs = 0;
    for c_m in [1usize, 4, 10] {
        for sync in [true, false] {
            for seed in 0..50u64 {
                let mode = if sync { NetMode::Sync } else { fair(&p, seed) };
                let cheat = (seed % 5 == 0).then_some(1);
                let adv: Box<dyn Adversary> = match cheat {
                    Some(c) => Box::new(strategies::passive(PartySet::from_iter([c]))),
                    None => Box::new(NoAdversary),
                };
                let bad = {
                    let mut r = ChaCha8Rng::seed_from_u64(seed);
                    let mut ts = random_triples(p.field, 3 * (2 * p.t_s + 1) * c_m, &mut r);
                    ts[0][2] += p.field.one();
                    ts
                };
                let w = run(&p, mode, seed, adv, |i| {
                    let dealt = (Some(i) == cheat).then(|| bad.clone());
                    PreProcNode::new(&p, c_m, TripleInputs { dealt, verification: None })
                });
                let shares: Vec<(PartyId, Vec<Fe>)> =
                    w.core().honest().iter().filter_map(|i| w.party(i).output.as_ref().map(|o| (i, flatten(&o.1)))).collect();
                let tag = format!("c_M={c_m} {} seed {seed}", if sync { "sync" } else { "async" });
                ensure!(shares.len() == w.core().honest().len(), "{tag}: missing honest output");
                ensure!(shares.iter().all(|s| s.1.len() == 3 * c_m), "{tag}: wrong triple count");
                let opened = open(&p, &shares).ok_or(format!("{tag}: a triple component is above degree t_s"))?;
                for t in opened.chunks(3) {
                    ensure!(t[0] * t[1] == t[2], "{tag}: non-multiplicative triple");
                }
                pre_runs += 1;
            }
        }
    }
    Ok(format!(
        "1000 Beaver cases; {bad_runs} bad-triple dealings all replaced by (0,0,0); {pre_runs} preprocessing runs (c_M 1/4/10, both modes, 50 seeds) all multiplicative and degree ≤ t_s"
    ))
}

// 8 ------------------------------------------------------------------------

fn mpc_run(p: &Params, mode: NetMode, seed: u64, c: &Circuit, x: &[Fe], triples: &[TripleInputs], adv: Box<dyn Adversary>) -> (World<MpcNode>, MpcOutcome) {
    let cfg = SimConfig::sync(p.clone(), seed).with_mode(mode);
    let (w, status, out) = evaluate_circuit(cfg, adv, c, x, triples, BUDGET);
    assert_eq!(status, RunStatus::Quiescent);
    (w, out)
}

fn mpc_correct(w: &World<MpcNode>, out: &MpcOutcome, c: &Circuit, x: &[Fe]) -> Result<Fe, String> {
    let honest = w.core().honest();
    ensure!(out.outputs.len() == honest.len(), "{} of {} honest parties output", out.outputs.len(), honest.len());
    let sets: BTreeSet<PartySet> = out.cs.values().copied().collect();
    ensure!(sets.len() == 1, "input subsets differ");
    let y = out.common().ok_or("honest outputs differ")?;
    ensure!(Some(y) == out.expected(c, x), "output {y:?} is not f on the common subset");
    Ok(y)
}

fn end_to_end() -> Outcome {
    let p = Params::new(5, 1, 1);
    let tm = p.timing();
    let c = Circuit::product(5, 3);
    ensure!((c.depth(), c.mul_count()) == (2, 2), "circuit shape");
    let pinned = [("bc", 57), ("ba", 77), ("wps", 193), ("vss", 385), ("acs", 539), ("tripsh", 543), ("tripgen", 698)];
    for (kind, want) in pinned {
        let got = match kind {
            "bc" => tm.bc,
            "ba" => tm.ba,
            "wps" => tm.wps,
            "vss" => tm.vss,
            "acs" => tm.acs,
            "tripsh" => tm.tripsh,
            _ => tm.tripgen,
        };
        ensure!(got == want, "T_{kind} = {got}, expected {want}");
    }
    let deadline = 120 * 5 + 2 + 6 * 20 - 20;
    ensure!(tm.cir_eval(2) == deadline, "cir_eval(2) = {}", tm.cir_eval(2));
    let x: Vec<Fe> = [3u64, 5, 7, 11, 13].iter().map(|v| p.field.elem(*v)).collect();
    let (w, out) = mpc_run(&p, NetMode::Sync, 1, &c, &x, &[], Box::new(NoAdversary));
    let y = mpc_correct(&w, &out, &c, &x)?;
    ensure!(y == p.field.elem(105), "3·5·7 = {y:?}");
    let end = out.outputs.values().map(|o| o.0).max().unwrap();
    ensure!(end <= deadline, "honest sync run ended at {end} > {deadline}");
    let mut hit = BTreeMap::new();
    for m in w.core().milestones() {
        if let Some((_, want)) = pinned.iter().find(|(k, _)| *k == m.kind) {
            ensure!(m.end - m.start == *want, "{} at {} took {}", m.kind, m.path, m.end - m.start);
            *hit.entry(m.kind).or_insert(0) += 1;
        }
    }
    ensure!(hit.len() == pinned.len(), "milestones seen: {hit:?}");
    for seed in 0..100u64 {
        let bad = (seed % 5) as usize;
        let corrupt = PartySet::from_iter([bad]);
        let mut xs: Vec<Fe> = (0..5).map(|i| p.field.elem(i + 2)).collect();
        xs[bad] = p.field.elem(1000 + seed);
        let adv: Box<dyn Adversary> = match seed % 5 {
            0 => Box::new(strategies::silent(corrupt)),
            1 => Box::new(strategies::bad_shares(corrupt, seed)),
            2 => Box::new(strategies::fake_ready(corrupt)),
            3 => Box::new(strategies::bad_rows(corrupt, seed, 1)),
            _ => Box::new(strategies::split_rows(corrupt, seed)),
        };
        let (w, out) = mpc_run(&p, fair(&p, seed), seed, &c, &xs, &[], adv);
        mpc_correct(&w, &out, &c, &xs).map_err(|e| format!("async seed {seed}: {e}"))?;
    }
    let corrupt = PartySet::from_iter([2]);
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let mut bad_triple = random_triples(p.field, 3, &mut r);
    bad_triple[0][2] += p.field.one();
    let mut triples = vec![TripleInputs::default(); 5];
    triples[2].dealt = Some(bad_triple);
    let advs: Vec<Box<dyn Adversary>> =
        vec![Box::new(strategies::fake_ready(corrupt)), Box::new(strategies::bad_shares(corrupt, 3)), Box::new(strategies::silent(corrupt))];
    for adv in advs {
        let name = adv.name().to_string();
        let (w, out) = mpc_run(&p, NetMode::Sync, 4, &c, &x, &triples, adv);
        mpc_correct(&w, &out, &c, &x).map_err(|e| format!("sync {name}: {e}"))?;
        ensure!(out.cs.values().all(|s| w.core().honest().is_subset(s)), "sync {name}: an honest party left out of CS");
        ensure!(out.outputs.values().all(|o| o.0 <= deadline), "sync {name}: output after {deadline}");
    }
    Ok(format!("honest sync output 105 at {end} ≤ {deadline} with all 7 milestones exact; 100 async seeds with a Byzantine party correct; 3 sync Byzantine runs keep all honest parties in CS"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 8] = [
        ("algebra/OEC oracle suite", algebra_oec, Some(LIMIT_1)),
        ("star finder", star_finder, Some(LIMIT_2)),
        ("broadcast property suite", broadcast_suite, None),
        ("Byzantine agreement", agreement_suite, Some(LIMIT_4)),
        ("VSS suite", vss_suite, None),
        ("privacy by enumeration", privacy, None),
        ("triples", triples_suite, None),
        ("end-to-end circuit evaluation", end_to_end, Some(LIMIT_8)),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.contains(&(k + 1)) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if took > *l => Err(format!("took {took:.1?}, limit {l:?}")),
            (r, _) => r,
        };
        let bound = limit.map_or(String::new(), |l| format!(" < {l:?}"));
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{took:.1?}{bound}]", k + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {e} [{took:.1?}]", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
