//! Weak polynomial sharing of a batch of L degree-t_s polynomials.

use std::collections::BTreeMap;

use super::gate::{Gate, Resolved};
use crate::algebra::{Fe, SymBivarPoly, UniPoly};
use crate::party::PartyId;
use crate::sharing::OecSession;
use crate::simnet::{Body, Cx, Time, Value};

const T_POINTS: u64 = 1;
const T_CHECK: u64 = 2;

/// Compares a row batch against the values another party claims for it:
/// OK, or NOK at the least failing index.
pub fn verdict(rows: &[UniPoly], at: Fe, claimed: &[Fe]) -> Value {
    match rows.iter().zip(claimed).position(|(q, c)| q.eval(at) != *c) {
        None => Value::Ok,
        Some(idx) => Value::Nok { idx: idx as u16, val: rows[idx].eval(at) },
    }
}

/// Accepts a row batch only if it has `l` rows of degree at most `t_s`.
pub fn valid_rows(rows: &[UniPoly], l: usize, t_s: usize) -> Option<Vec<UniPoly>> {
    if rows.len() != l {
        return None;
    }
    rows.iter().map(|r| r.with_degree(t_s).ok()).collect()
}

#[derive(Clone, Debug)]
pub struct Wps {
    t_s: usize,
    l: usize,
    dealer: PartyId,
    gate: Gate,
    start: Option<Time>,
    row: Option<Vec<UniPoly>>,
    points: BTreeMap<PartyId, Vec<Fe>>,
    oec: Option<Vec<OecSession>>,
    output: Option<Vec<Fe>>,
}

impl Wps {
    pub fn new(n: usize, t_s: usize, t_a: usize, l: usize, dealer: PartyId, delta: Time) -> Wps {
        Wps {
            t_s,
            l,
            dealer,
            gate: Gate::new(n, t_s, t_a, dealer, 2 * delta),
            start: None,
            row: None,
            points: BTreeMap::new(),
            oec: None,
            output: None,
        }
    }

    pub fn dealer(&self) -> PartyId {
        self.dealer
    }

    pub fn output(&self) -> Option<&[Fe]> {
        self.output.as_deref()
    }

    /// The row batch received from the dealer.
    pub fn row(&self) -> Option<&[UniPoly]> {
        self.row.as_deref()
    }

    pub fn gate(&self) -> &Gate {
        &self.gate
    }

    /// Every party, at the common start time.
    pub fn start(&mut self, cx: &mut Cx) {
        if self.start.is_none() {
            self.start = Some(cx.now());
            self.gate.start(cx);
        }
    }

    /// Dealer only: embeds each polynomial in a random symmetric bivariate
    /// polynomial and hands out the rows.
    pub fn deal(&mut self, cx: &mut Cx, polys: &[UniPoly]) {
        let t = self.t_s;
        let bivars: Vec<SymBivarPoly> = polys
            .iter()
            .map(|q| SymBivarPoly::embed(q, t, cx.rng()).expect("dealer polynomial of degree ≤ t_s"))
            .collect();
        self.deal_bivars(cx, bivars);
    }

    /// Dealer only: hands out rows of the given bivariate polynomials.
    pub fn deal_bivars(&mut self, cx: &mut Cx, bivars: Vec<SymBivarPoly>) {
        let f = cx.field();
        for j in 0..cx.n() {
            let rows = bivars.iter().map(|q| q.row_at(f.alpha(j))).collect();
            cx.send(j, Body::Rows(rows));
        }
        self.gate.set_bivars(bivars);
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<Vec<Fe>> {
        match (path, body) {
            ([], Body::Rows(rows)) if from == self.dealer && self.row.is_none() => {
                self.row = Some(valid_rows(rows, self.l, self.t_s)?);
                cx.timer_aligned(T_POINTS);
                cx.timer_aligned(T_CHECK);
            }
            ([], Body::Points(v)) if v.len() == self.l && !self.points.contains_key(&from) => {
                self.points.insert(from, v.clone());
                cx.timer_aligned(T_CHECK);
                self.feed(from);
            }
            ([], _) => {}
            _ => self.gate.on_message(cx, from, path, body),
        }
        self.progress(cx)
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) -> Option<Vec<Fe>> {
        match (path, tag) {
            ([], T_POINTS) => {
                let f = cx.field();
                let row = self.row.clone().expect("points follow the row");
                for j in 0..cx.n() {
                    cx.send(j, Body::Points(row.iter().map(|q| q.eval(f.alpha(j))).collect()));
                }
            }
            ([], T_CHECK) => {
                if let Some(row) = &self.row {
                    let f = cx.field();
                    let pending: Vec<(PartyId, Value)> = self
                        .points
                        .iter()
                        .filter(|(j, _)| !self.gate.declared().contains(**j))
                        .map(|(&j, v)| (j, verdict(row, f.alpha(j), v)))
                        .collect();
                    for (j, v) in pending {
                        self.gate.declare(cx, j, v);
                    }
                }
            }
            _ => self.gate.on_timer(cx, path, tag),
        }
        self.progress(cx)
    }

    fn feed(&mut self, j: PartyId) {
        if let (Some(sessions), Some(v)) = (&mut self.oec, self.points.get(&j)) {
            for (s, x) in sessions.iter_mut().zip(v) {
                s.admit(j, *x);
            }
        }
    }

    fn progress(&mut self, cx: &mut Cx) -> Option<Vec<Fe>> {
        if self.output.is_some() {
            return None;
        }
        let Resolved { own, support, .. } = self.gate.resolved()?;
        let me = cx.me();
        let out = match &self.row {
            Some(row) if own.contains(me) => row.iter().map(|q| q.constant_term()).collect(),
            _ => {
                if self.oec.is_none() {
                    let f = cx.field();
                    self.oec = Some((0..self.l).map(|_| OecSession::new(f, self.t_s, self.t_s, support)).collect());
                    let have: Vec<PartyId> = self.points.keys().copied().collect();
                    for j in have {
                        self.feed(j);
                    }
                }
                let sessions = self.oec.as_ref().expect("sessions set");
                sessions.iter().map(|s| s.output().map(|q| q.constant_term())).collect::<Option<Vec<Fe>>>()?
            }
        };
        self.output = Some(out.clone());
        if let Some(start) = self.start {
            cx.milestone("wps", start);
        }
        Some(out)
    }
}
