//! Verifiable sharing of L multiplication triples on behalf of a dealer,
//! checked under the supervision of an ACS-selected set of parties.
//!
//! Child segments: the dealer's VSS (0), the ACS of verification triples
//! (1), the transformation Beaver batch (2), the supervised Beaver batch
//! (3), the γ opening (4) and the opening of suspected triples (5).

use crate::acs::{Acs, AcsOutput};
use crate::algebra::{Fe, UniPoly};
use crate::party::PartyId;
use crate::simnet::{Body, Cx, Params, Time};
use crate::vss::Vss;

use super::open::{Beaver, BeaverItem, Opening};
use super::{beta, extend, is_multiplicative, position, random_triples, triple_polys, Triple};

const VSS: u16 = 0;
const ACS: u16 = 1;
const TRANSFORM: u16 = 2;
const VERIFY: u16 = 3;
const GAMMA: u16 = 4;
const SUSPECT: u16 = 5;

const T_DONE: u64 = 1;

/// This party's shares of the dealer's L output triples; all zero when the
/// dealer was caught.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripShOutput {
    pub discarded: bool,
    pub triples: Vec<Triple>,
}

/// Own shares of (X, Y, Z) at the 2t_s + 1 family positions.
#[derive(Clone, Debug)]
struct Family {
    xs: Vec<Fe>,
    ys: Vec<Fe>,
    zs: Vec<Fe>,
}

impl Family {
    fn at(&self, d: usize, p: Fe) -> Triple {
        [extend(&self.xs[..=d], p), extend(&self.ys[..=d], p), extend(&self.zs[..=2 * d], p)]
    }
}

#[derive(Clone, Debug)]
pub struct TripSh {
    n: usize,
    t_s: usize,
    l: usize,
    dealer: PartyId,
    vss: Vss,
    acs: Acs,
    transform: Beaver,
    verify: Beaver,
    gamma: Opening,
    suspect: Opening,
    start: Option<Time>,
    families: Option<Vec<Family>>,
    supervised: Option<AcsOutput>,
    checks: Vec<(usize, PartyId)>,
    discarded: Option<bool>,
    padded: bool,
    output: Option<TripShOutput>,
}

impl TripSh {
    pub fn new(p: &Params, dealer: PartyId, l: usize) -> TripSh {
        let m = 2 * p.t_s + 1;
        TripSh {
            n: p.n,
            t_s: p.t_s,
            l,
            dealer,
            vss: Vss::new(p.n, p.t_s, p.t_a, 3 * l * m, dealer, p.delta, p.timing().wps),
            acs: Acs::new(p, 3 * l),
            transform: Beaver::new(p.t_s),
            verify: Beaver::new(p.t_s),
            gamma: Opening::new(p.t_s),
            suspect: Opening::new(p.t_s),
            start: None,
            families: None,
            supervised: None,
            checks: Vec::new(),
            discarded: None,
            padded: false,
            output: None,
        }
    }

    pub fn dealer(&self) -> PartyId {
        self.dealer
    }

    pub fn output(&self) -> Option<&TripShOutput> {
        self.output.as_ref()
    }

    pub fn vss(&self) -> &Vss {
        &self.vss
    }

    pub fn acs(&self) -> &Acs {
        &self.acs
    }

    /// Supervisors whose check reconstructed a nonzero γ, as (batch, party).
    pub fn flagged(&self) -> Vec<(usize, PartyId)> {
        match self.gamma.output() {
            Some(g) => self.checks.iter().zip(g).filter(|(_, v)| !v.is_zero()).map(|(c, _)| *c).collect(),
            None => Vec::new(),
        }
    }

    /// Every party at the common start time. `dealt` (dealer only, L·(2t_s+1)
    /// triples) and `verification` (L triples) default to fresh random
    /// multiplication triples.
    pub fn start(&mut self, cx: &mut Cx, dealt: Option<Vec<Triple>>, verification: Option<Vec<Triple>>) {
        if self.start.is_some() {
            return;
        }
        let now = cx.now();
        self.start = Some(now);
        let (f, t) = (cx.field(), self.t_s);
        let m = 2 * t + 1;
        let verification = verification.unwrap_or_else(|| random_triples(f, self.l, cx.rng()));
        let vpolys: Vec<UniPoly> = triple_polys(&verification, t, cx.rng());
        let me = cx.me();
        let dpolys = (me == self.dealer).then(|| {
            let dealt = dealt.unwrap_or_else(|| random_triples(f, self.l * m, cx.rng()));
            triple_polys(&dealt, t, cx.rng())
        });
        let vss = &mut self.vss;
        cx.sub(VSS, |cx| {
            vss.start(cx);
            if let Some(polys) = &dpolys {
                vss.deal(cx, polys);
            }
        });
        let acs = &mut self.acs;
        cx.sub(ACS, |cx| acs.start(cx, &vpolys));
        cx.timer_at(now + cx.timing().tripsh, T_DONE);
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<TripShOutput> {
        let (&seg, rest) = path.split_first()?;
        match seg {
            VSS => {
                let out = cx.sub(VSS, |cx| self.vss.on_message(cx, from, rest, body));
                self.on_dealt(cx, out);
            }
            ACS => {
                let out = cx.sub(ACS, |cx| self.acs.on_message(cx, from, rest, body));
                self.on_supervisors(cx, out);
            }
            TRANSFORM => {
                let out = cx.sub(TRANSFORM, |cx| self.transform.on_message(cx, from, body));
                self.on_transformed(cx, out);
            }
            VERIFY => {
                let out = cx.sub(VERIFY, |cx| self.verify.on_message(cx, from, body));
                self.on_products(cx, out);
            }
            GAMMA => {
                let out = cx.sub(GAMMA, |cx| self.gamma.on_message(cx, from, body));
                self.on_gamma(cx, out);
            }
            SUSPECT => {
                let out = cx.sub(SUSPECT, |cx| self.suspect.on_message(cx, from, body));
                self.on_suspects(out);
            }
            _ => {}
        }
        self.progress(cx)
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) -> Option<TripShOutput> {
        match path.split_first() {
            None if tag == T_DONE => self.padded = true,
            Some((&VSS, rest)) => {
                let out = cx.sub(VSS, |cx| self.vss.on_timer(cx, rest, tag));
                self.on_dealt(cx, out);
            }
            Some((&ACS, rest)) => {
                let out = cx.sub(ACS, |cx| self.acs.on_timer(cx, rest, tag));
                self.on_supervisors(cx, out);
            }
            _ => {}
        }
        self.progress(cx)
    }

    /// Phase II: shares of the dealer's triples arrived; transform each batch.
    fn on_dealt(&mut self, cx: &mut Cx, out: Option<Vec<Fe>>) {
        let Some(s) = out else { return };
        let d = self.t_s;
        let m = 2 * d + 1;
        let f = cx.field();
        let mut items = Vec::new();
        let mut fams = Vec::new();
        for batch in s.chunks(3 * m).take(self.l) {
            let (x, y, z): (Vec<Fe>, Vec<Fe>, Vec<Fe>) = (
                batch.iter().step_by(3).copied().collect(),
                batch.iter().skip(1).step_by(3).copied().collect(),
                batch.iter().skip(2).step_by(3).copied().collect(),
            );
            let mut fam = Family { xs: x[..=d].to_vec(), ys: y[..=d].to_vec(), zs: z[..=d].to_vec() };
            for k in d + 1..m {
                let p = position(f, k);
                let (xk, yk) = (extend(&x[..=d], p), extend(&y[..=d], p));
                fam.xs.push(xk);
                fam.ys.push(yk);
                items.push(BeaverItem { x: xk, y: yk, a: x[k], b: y[k], c: z[k] });
            }
            fams.push(fam);
        }
        self.families = Some(fams);
        let out = cx.sub(TRANSFORM, |cx| self.transform.start(cx, items));
        self.on_transformed(cx, out);
    }

    fn on_transformed(&mut self, cx: &mut Cx, out: Option<Vec<Fe>>) {
        let Some(z) = out else { return };
        let d = self.t_s;
        if let Some(fams) = &mut self.families {
            for (fam, zs) in fams.iter_mut().zip(z.chunks(d.max(1))) {
                fam.zs.extend_from_slice(&zs[..d]);
            }
        }
        self.supervise(cx);
    }

    fn on_supervisors(&mut self, cx: &mut Cx, out: Option<AcsOutput>) {
        if let Some(o) = out {
            self.supervised = Some(o);
            self.supervise(cx);
        }
    }

    fn transformed(&self) -> Option<&Vec<Family>> {
        self.transform.output()?;
        self.families.as_ref()
    }

    /// Phase III(a): recompute X(α_j)·Y(α_j) with supervisor j's triple.
    fn supervise(&mut self, cx: &mut Cx) {
        if self.verify.started() {
            return;
        }
        let (Some(fams), Some(sup)) = (self.transformed(), &self.supervised) else { return };
        let f = cx.field();
        let d = self.t_s;
        let mut checks = Vec::new();
        let mut items = Vec::new();
        for (b, fam) in fams.iter().enumerate() {
            for j in sup.cs.iter() {
                let [x, y, _] = fam.at(d, f.alpha(j));
                let v = &sup.shares[&j][3 * b..3 * b + 3];
                checks.push((b, j));
                items.push(BeaverItem { x, y, a: v[0], b: v[1], c: v[2] });
            }
        }
        self.checks = checks;
        let out = cx.sub(VERIFY, |cx| self.verify.start(cx, items));
        self.on_products(cx, out);
    }

    /// Phase III(b): open γ = Z(α_j) - 𝔷.
    fn on_products(&mut self, cx: &mut Cx, out: Option<Vec<Fe>>) {
        let Some(zz) = out else { return };
        let f = cx.field();
        let fams = self.families.as_ref().expect("families before products");
        let gammas: Vec<Fe> =
            self.checks.iter().zip(&zz).map(|(&(b, j), z)| fams[b].at(self.t_s, f.alpha(j))[2] - *z).collect();
        let out = cx.sub(GAMMA, |cx| self.gamma.open(cx, gammas));
        self.on_gamma(cx, out);
    }

    /// Phase III(c): open the suspected triples.
    fn on_gamma(&mut self, cx: &mut Cx, out: Option<Vec<Fe>>) {
        if out.is_none() {
            return;
        }
        let flagged = self.flagged();
        if flagged.is_empty() {
            self.discarded = Some(false);
            return;
        }
        let f = cx.field();
        let fams = self.families.as_ref().expect("families before γ");
        let shares: Vec<Fe> = flagged.iter().flat_map(|&(b, j)| fams[b].at(self.t_s, f.alpha(j))).collect();
        let out = cx.sub(SUSPECT, |cx| self.suspect.open(cx, shares));
        self.on_suspects(out);
    }

    fn on_suspects(&mut self, out: Option<Vec<Fe>>) {
        if let Some(v) = out {
            let bad = v.chunks(3).any(|t| !is_multiplicative(&[t[0], t[1], t[2]]));
            self.discarded = Some(bad);
        }
    }

    fn progress(&mut self, cx: &mut Cx) -> Option<TripShOutput> {
        if self.output.is_some() || !self.padded {
            return None;
        }
        let discarded = self.discarded?;
        let f = cx.field();
        let triples = if discarded {
            vec![[f.zero(); 3]; self.l]
        } else {
            let b = beta(f, self.n, 0);
            self.families.as_ref().expect("families").iter().map(|fam| fam.at(self.t_s, b)).collect()
        };
        let out = TripShOutput { discarded, triples };
        self.output = Some(out.clone());
        if let Some(start) = self.start {
            cx.milestone("tripsh", start);
        }
        Some(out)
    }
}
