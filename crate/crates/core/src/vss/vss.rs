//! Verifiable secret sharing: every row is re-shared through its holder's
//! own WPS instance, so parties outside 𝒲 can rebuild their rows.

use std::collections::BTreeMap;

use super::gate::{Gate, Resolved};
use super::wps::{valid_rows, verdict, Wps};
use crate::algebra::{interpolate, Fe, SymBivarPoly, UniPoly};
use crate::party::PartyId;
use crate::simnet::{Body, Cx, Time};

const T_WPS_START: u64 = 1;
const T_RESHARE: u64 = 2;
const T_CHECK: u64 = 3;

#[derive(Clone, Debug)]
pub struct Vss {
    t_s: usize,
    l: usize,
    dealer: PartyId,
    gate: Gate,
    wps: Vec<Wps>,
    wps_base: u16,
    start: Option<Time>,
    row: Option<Vec<UniPoly>>,
    resharing: bool,
    wps_out: BTreeMap<PartyId, Vec<Fe>>,
    output: Option<Vec<Fe>>,
}

impl Vss {
    pub fn new(n: usize, t_s: usize, t_a: usize, l: usize, dealer: PartyId, delta: Time, t_wps: Time) -> Vss {
        Vss {
            t_s,
            l,
            dealer,
            gate: Gate::new(n, t_s, t_a, dealer, delta + t_wps),
            wps: (0..n).map(|j| Wps::new(n, t_s, t_a, l, j, delta)).collect(),
            wps_base: Gate::segments(n),
            start: None,
            row: None,
            resharing: false,
            wps_out: BTreeMap::new(),
            output: None,
        }
    }

    pub fn dealer(&self) -> PartyId {
        self.dealer
    }

    pub fn output(&self) -> Option<&[Fe]> {
        self.output.as_deref()
    }

    pub fn row(&self) -> Option<&[UniPoly]> {
        self.row.as_deref()
    }

    pub fn gate(&self) -> &Gate {
        &self.gate
    }

    pub fn wps(&self, j: PartyId) -> &Wps {
        &self.wps[j]
    }

    /// Every party, at the common start time.
    pub fn start(&mut self, cx: &mut Cx) {
        if self.start.is_none() {
            self.start = Some(cx.now());
            self.gate.start(cx);
            cx.timer_at(cx.now() + cx.delta(), T_WPS_START);
        }
    }

    /// Dealer only.
    pub fn deal(&mut self, cx: &mut Cx, polys: &[UniPoly]) {
        let t = self.t_s;
        let bivars: Vec<SymBivarPoly> = polys
            .iter()
            .map(|q| SymBivarPoly::embed(q, t, cx.rng()).expect("dealer polynomial of degree ≤ t_s"))
            .collect();
        self.deal_bivars(cx, bivars);
    }

    pub fn deal_bivars(&mut self, cx: &mut Cx, bivars: Vec<SymBivarPoly>) {
        let f = cx.field();
        for j in 0..cx.n() {
            cx.send(j, Body::Rows(bivars.iter().map(|q| q.row_at(f.alpha(j))).collect()));
        }
        self.gate.set_bivars(bivars);
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, path: &[u16], body: &Body) -> Option<Vec<Fe>> {
        match (path, body) {
            ([], Body::Rows(rows)) if from == self.dealer && self.row.is_none() => {
                self.row = Some(valid_rows(rows, self.l, self.t_s)?);
                cx.timer_aligned(T_RESHARE);
            }
            ([], _) => {}
            ([seg, rest @ ..], _) if *seg >= self.wps_base => {
                let j = (*seg - self.wps_base) as usize;
                let w = self.wps.get_mut(j)?;
                if let Some(s) = cx.sub(*seg, |cx| w.on_message(cx, from, rest, body)) {
                    self.on_wps(cx, j, s);
                }
            }
            _ => self.gate.on_message(cx, from, path, body),
        }
        self.progress(cx)
    }

    pub fn on_timer(&mut self, cx: &mut Cx, path: &[u16], tag: u64) -> Option<Vec<Fe>> {
        match (path, tag) {
            ([], T_WPS_START) => {
                for (j, w) in self.wps.iter_mut().enumerate() {
                    cx.sub(self.wps_base + j as u16, |cx| w.start(cx));
                }
            }
            ([], T_RESHARE) => {
                if self.resharing {
                    return None;
                }
                self.resharing = true;
                let me = cx.me();
                let row = self.row.clone().expect("reshare follows the row");
                let w = &mut self.wps[me];
                cx.sub(self.wps_base + me as u16, |cx| w.deal(cx, &row));
            }
            ([], T_CHECK) => {
                if let Some(row) = &self.row {
                    let f = cx.field();
                    let pending: Vec<_> = self
                        .wps_out
                        .iter()
                        .filter(|(j, _)| !self.gate.declared().contains(**j))
                        .map(|(&j, s)| (j, verdict(row, f.alpha(j), s)))
                        .collect();
                    for (j, v) in pending {
                        self.gate.declare(cx, j, v);
                    }
                }
            }
            ([seg, rest @ ..], _) if *seg >= self.wps_base => {
                let j = (*seg - self.wps_base) as usize;
                let w = self.wps.get_mut(j)?;
                if let Some(s) = cx.sub(*seg, |cx| w.on_timer(cx, rest, tag)) {
                    self.on_wps(cx, j, s);
                }
            }
            _ => self.gate.on_timer(cx, path, tag),
        }
        self.progress(cx)
    }

    fn on_wps(&mut self, cx: &mut Cx, j: PartyId, share: Vec<Fe>) {
        self.wps_out.insert(j, share);
        cx.timer_aligned(T_CHECK);
    }

    fn progress(&mut self, cx: &mut Cx) -> Option<Vec<Fe>> {
        if self.output.is_some() {
            return None;
        }
        let Resolved { own, support, .. } = self.gate.resolved()?;
        let me = cx.me();
        let out: Vec<Fe> = match &self.row {
            Some(row) if own.contains(me) => row.iter().map(|q| q.constant_term()).collect(),
            _ => {
                let ss: Vec<(PartyId, &Vec<Fe>)> =
                    self.wps_out.iter().filter(|(j, _)| support.contains(**j)).take(self.t_s + 1).map(|(j, s)| (*j, s)).collect();
                if ss.len() <= self.t_s {
                    return None;
                }
                let f = cx.field();
                (0..self.l)
                    .map(|k| {
                        let pts: Vec<(Fe, Fe)> = ss.iter().map(|(j, s)| (f.alpha(*j), s[k])).collect();
                        interpolate(&pts, self.t_s).expect("t_s + 1 distinct points").constant_term()
                    })
                    .collect()
            }
        };
        self.output = Some(out.clone());
        if let Some(start) = self.start {
            cx.milestone("vss", start);
        }
        Some(out)
    }
}
