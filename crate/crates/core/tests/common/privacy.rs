//! Privacy by enumeration at p = 17, n = 5, t_s = 1, L = 1 with one
//! passively corrupt party: every dealer-randomness completion consistent
//! with what the corrupt party received is counted, per candidate secret.

use std::collections::BTreeMap;

use bobmpc::algebra::{interpolate, Fe, Field, SymBivarPoly, UniPoly};
use bobmpc::harness::{PreProcNode, TripleInputs, VssNode, WpsNode};
use bobmpc::party::{PartyId, PartySet};
use bobmpc::simnet::{Body, Cx, NetMode, Node, Params, RunStatus, SimConfig, World};
use bobmpc::strategies;
use bobmpc::triples::{beta, extract_params, position, Triple};
use bobmpc::vss::Gate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CORRUPT: PartyId = 0;

pub fn params() -> Params {
    Params::new(5, 1, 1).with_field(Field::new(17).unwrap())
}

/// Wraps a node and keeps every message it receives.
pub struct Recorder<N> {
    pub inner: N,
    pub received: Vec<(PartyId, Vec<u16>, Body)>,
}

impl<N: Node> Node for Recorder<N> {
    fn start(&mut self, cx: &mut Cx) {
        self.inner.start(cx)
    }

    fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) {
        self.received.push((from, path.to_vec(), body.clone()));
        self.inner.on_message(cx, from, path, body)
    }

    fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) {
        self.inner.on_timer(cx, path, tag)
    }
}

fn record<N: Node>(p: &Params, seed: u64, make: impl FnMut(PartyId) -> N) -> World<Recorder<N>> {
    let mut make = make;
    let cfg = SimConfig::sync(p.clone(), seed).with_mode(NetMode::Sync);
    let adv = Box::new(strategies::passive(PartySet::from_iter([CORRUPT])));
    let mut w = World::new(cfg, adv, |i| Recorder { inner: make(i), received: Vec::new() });
    assert_eq!(w.run(1_000_000_000), RunStatus::Quiescent);
    w
}

/// Symmetric degree-1 bivariate polynomials with F(0, y) = s + q1·y.
fn bivariates(f: Field, s: Fe) -> Vec<SymBivarPoly> {
    let mut out = Vec::new();
    for q1 in f.elements() {
        for c11 in f.elements() {
            out.push(SymBivarPoly::from_coeffs(f, vec![vec![s, q1], vec![q1, c11]]).unwrap());
        }
    }
    out
}

/// Completions of the symmetric bivariate polynomial behind `q` (F(0, y) = q(y)).
fn embeddings(q: &UniPoly) -> Vec<SymBivarPoly> {
    let f = q.field();
    let c = q.with_degree(1).unwrap();
    let (a, b) = (c.coeffs()[0], c.coeffs()[1]);
    f.elements().map(|c11| SymBivarPoly::from_coeffs(f, vec![vec![a, b], vec![b, c11]]).unwrap()).collect()
}

/// Does `g` explain the Rows/Points of one WPS instance seen by the
/// corrupt party?
fn wps_consistent(g: &SymBivarPoly, msgs: &[&(PartyId, Vec<u16>, Body)], dealer: PartyId) -> bool {
    let f = g.field();
    let me = f.alpha(CORRUPT);
    msgs.iter().all(|(from, _, body)| match body {
        Body::Rows(r) => *from == dealer && r.len() == 1 && r[0] == g.row_at(me),
        Body::Points(v) => v.len() == 1 && v[0] == g.eval(me, f.alpha(*from)),
        _ => true,
    })
}

/// Every field element the corrupt party received sits in a Rows or
/// Points message, so those are its whole view of the dealer's randomness.
fn assert_only_rows_and_points(received: &[(PartyId, Vec<u16>, Body)]) {
    for (_, path, body) in received {
        if !matches!(body, Body::Rows(_) | Body::Points(_)) {
            assert_eq!(body.field_elems(), 0, "unexpected field elements at {path:?}: {body:?}");
        }
    }
}

/// Consistent completions per candidate secret for an honest-dealer WPS.
pub fn wps_counts(seed: u64) -> BTreeMap<u64, u64> {
    let p = params();
    let dealer = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = UniPoly::random(p.field, 1, &mut rng);
    let w = record(&p, seed, |_| WpsNode::new(&p, dealer, Some(vec![q.clone()])));
    let view = &w.party(CORRUPT).received;
    assert_only_rows_and_points(view);
    let msgs: Vec<_> = view.iter().filter(|(_, path, _)| path.len() == 1).collect();
    assert!(msgs.iter().any(|(_, _, b)| matches!(b, Body::Rows(_))));
    p.field
        .elements()
        .map(|s| (s.value(), bivariates(p.field, s).into_iter().filter(|g| wps_consistent(g, &msgs, dealer)).count() as u64))
        .collect()
}

/// Same for an honest-dealer VSS: the dealer's bivariate polynomial plus,
/// for every honest row holder j, the bivariate polynomial of its WPS of
/// row j (the corrupt party's own WPS is its own randomness).
pub fn vss_counts(seed: u64) -> BTreeMap<u64, u64> {
    let p = params();
    let dealer = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = UniPoly::random(p.field, 1, &mut rng);
    let w = record(&p, seed, |_| VssNode::new(&p, dealer, Some(vec![q.clone()])));
    let view = &w.party(CORRUPT).received;
    assert_only_rows_and_points(view);
    let base = Gate::segments(p.n);
    let outer: Vec<_> = view.iter().filter(|(_, path, _)| path.len() == 1).collect();
    let inner: Vec<Vec<_>> =
        (0..p.n).map(|j| view.iter().filter(|(_, path, _)| path.len() == 2 && path[1] == base + j as u16).collect()).collect();
    assert!(inner.iter().enumerate().all(|(j, m)| j == CORRUPT || !m.is_empty()));
    p.field
        .elements()
        .map(|s| {
            let mut count = 0u64;
            for g in bivariates(p.field, s).into_iter().filter(|g| wps_consistent(g, &outer, dealer)) {
                let mut ways = 1u64;
                for (j, msgs) in inner.iter().enumerate().filter(|(j, _)| *j != CORRUPT) {
                    let row = g.row_at(p.field.alpha(j));
                    ways *= embeddings(&row).into_iter().filter(|h| wps_consistent(h, msgs, j)).count() as u64;
                }
                count += ways;
            }
            (s.value(), count)
        })
        .collect()
}

fn open(p: &Params, shares: &[(PartyId, Fe)]) -> Fe {
    let pts: Vec<(Fe, Fe)> = shares.iter().map(|(i, v)| (p.field.alpha(*i), *v)).collect();
    interpolate(&pts, p.t_s).unwrap().constant_term()
}

/// Consistent completions per candidate output triple (a, b) of a single
/// preprocessing triple. The corrupt party knows its own provided triple
/// and sees the opened masks of the extraction; every honest provider's
/// triple (x, y, xy) and the randomness of each degree-1 sharing of it are
/// free.
pub fn preprocessing_counts(seed: u64) -> BTreeMap<(u64, u64), u64> {
    let p = params();
    let f = p.field;
    let w = record(&p, seed, |_| PreProcNode::new(&p, 1, TripleInputs::default()));
    let honest: Vec<PartyId> = w.core().honest().iter().collect();
    let pre = &w.party(honest[0]).inner.pre;
    let (d, _) = extract_params(p.n, p.t_s);
    let used: Vec<PartyId> = pre.cs().unwrap().iter().take(2 * d + 1).collect();
    let slot = used.iter().position(|&j| j == CORRUPT);
    // the corrupt provider's triple, opened from honest shares of its TripSh output
    let known: Option<Triple> = slot.map(|_| {
        let out = |i: PartyId| w.party(i).inner.pre.tripsh(CORRUPT).output().unwrap().triples[0];
        let col = |c: usize| open(&p, &honest.iter().map(|&i| (i, out(i)[c])).collect::<Vec<_>>());
        [col(0), col(1), col(2)]
    });
    let masks = w.party(CORRUPT).inner.pre.extraction().opened().unwrap().to_vec();
    let free: Vec<usize> = (0..2 * d + 1).filter(|k| Some(*k) != slot).collect();
    // the corrupt party's own shares of each provider's triple
    let mine: Vec<Triple> =
        used.iter().map(|&j| w.party(CORRUPT).inner.pre.tripsh(j).output().unwrap().triples[0]).collect();
    let me = f.alpha(CORRUPT);
    let sharing_ways = |v: Fe, share: Fe| f.elements().filter(|r| v + *r * me == share).count() as u64;
    let mut counts = BTreeMap::new();
    let combos = (f.modulus() as usize).pow(2 * free.len() as u32);
    for mut code in 0..combos {
        let mut xs = vec![f.zero(); 2 * d + 1];
        let mut ys = vec![f.zero(); 2 * d + 1];
        if let (Some(k), Some(t)) = (slot, known) {
            xs[k] = t[0];
            ys[k] = t[1];
        }
        for &k in &free {
            xs[k] = f.elem(code as u64 % f.modulus());
            code /= f.modulus() as usize;
            ys[k] = f.elem(code as u64 % f.modulus());
            code /= f.modulus() as usize;
        }
        let head = |v: &[Fe], at: Fe| bobmpc::triples::extend(&v[..=d], at);
        let predicted: Vec<Fe> =
            (d + 1..2 * d + 1).flat_map(|k| [head(&xs, position(f, k)) - xs[k], head(&ys, position(f, k)) - ys[k]]).collect();
        if predicted != masks {
            continue;
        }
        let b0 = beta(f, p.n, 0);
        let (a, b) = (head(&xs, b0), head(&ys, b0));
        let ways: u64 = free.iter().map(|&k| sharing_ways(xs[k], mine[k][0]) * sharing_ways(ys[k], mine[k][1])).product();
        *counts.entry((a.value(), b.value())).or_insert(0) += ways;
    }
    counts
}
