//! Public reconstruction of a batch of t_s-shared values, and Beaver
//! multiplication on top of it.

use std::collections::BTreeMap;

use crate::algebra::Fe;
use crate::party::{PartyId, PartySet};
use crate::sharing::OecSession;
use crate::simnet::{Body, Cx, Time};

/// Every party sends its shares to all; each value is decoded by
/// OEC(t_s, t_s, 𝒫).
#[derive(Clone, Debug)]
pub struct Opening {
    t_s: usize,
    early: BTreeMap<PartyId, Vec<Fe>>,
    sessions: Option<Vec<OecSession>>,
    admitted: PartySet,
    start: Option<Time>,
    output: Option<Vec<Fe>>,
}

impl Opening {
    pub fn new(t_s: usize) -> Opening {
        Opening { t_s, early: BTreeMap::new(), sessions: None, admitted: PartySet::EMPTY, start: None, output: None }
    }

    pub fn output(&self) -> Option<&[Fe]> {
        self.output.as_deref()
    }

    pub fn started(&self) -> bool {
        self.start.is_some()
    }

    pub fn open(&mut self, cx: &mut Cx, shares: Vec<Fe>) -> Option<Vec<Fe>> {
        if self.start.is_some() {
            return None;
        }
        self.start = Some(cx.now());
        let f = cx.field();
        let all = PartySet::all(cx.n());
        if shares.is_empty() {
            self.output = Some(Vec::new());
            return self.output.clone();
        }
        self.sessions = Some((0..shares.len()).map(|_| OecSession::new(f, self.t_s, self.t_s, all)).collect());
        cx.send_all(Body::Share(shares));
        for (from, v) in std::mem::take(&mut self.early) {
            self.admit(from, &v);
        }
        self.finish(cx)
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, body: &Body) -> Option<Vec<Fe>> {
        let Body::Share(v) = body else { return None };
        if self.output.is_some() {
            return None;
        }
        if self.sessions.is_none() {
            self.early.entry(from).or_insert_with(|| v.clone());
            return None;
        }
        self.admit(from, v);
        self.finish(cx)
    }

    fn admit(&mut self, from: PartyId, v: &[Fe]) {
        let Some(sessions) = &mut self.sessions else { return };
        if v.len() != sessions.len() || !self.admitted.insert(from) {
            return;
        }
        for (s, x) in sessions.iter_mut().zip(v) {
            s.admit(from, *x);
        }
    }

    fn finish(&mut self, cx: &mut Cx) -> Option<Vec<Fe>> {
        let sessions = self.sessions.as_ref()?;
        let out: Vec<Fe> = sessions.iter().map(|s| s.output().map(|q| q.constant_term())).collect::<Option<_>>()?;
        self.output = Some(out.clone());
        if let Some(start) = self.start {
            cx.milestone("open", start);
        }
        Some(out)
    }
}

/// This party's shares of x, y and of a triple (a, b, c).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BeaverItem {
    pub x: Fe,
    pub y: Fe,
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
}

/// A batch of Beaver multiplications sharing one opening of (x - a, y - b).
#[derive(Clone, Debug)]
pub struct Beaver {
    items: Vec<BeaverItem>,
    opening: Opening,
    output: Option<Vec<Fe>>,
}

impl Beaver {
    pub fn new(t_s: usize) -> Beaver {
        Beaver { items: Vec::new(), opening: Opening::new(t_s), output: None }
    }

    pub fn output(&self) -> Option<&[Fe]> {
        self.output.as_deref()
    }

    pub fn started(&self) -> bool {
        self.opening.started()
    }

    /// The opened (x - a, y - b) pairs, flattened.
    pub fn opened(&self) -> Option<&[Fe]> {
        self.opening.output()
    }

    /// Returns this party's shares of the products x·y (when every triple is
    /// a multiplication triple).
    pub fn start(&mut self, cx: &mut Cx, items: Vec<BeaverItem>) -> Option<Vec<Fe>> {
        if self.opening.started() {
            return None;
        }
        let masked = items.iter().flat_map(|it| [it.x - it.a, it.y - it.b]).collect();
        self.items = items;
        let opened = self.opening.open(cx, masked)?;
        self.finish(&opened)
    }

    pub fn on_message(&mut self, cx: &mut Cx, from: PartyId, body: &Body) -> Option<Vec<Fe>> {
        let opened = self.opening.on_message(cx, from, body)?;
        self.finish(&opened)
    }

    fn finish(&mut self, opened: &[Fe]) -> Option<Vec<Fe>> {
        let z: Vec<Fe> = self
            .items
            .iter()
            .zip(opened.chunks(2))
            .map(|(it, ed)| {
                let (e, d) = (ed[0], ed[1]);
                d * e + e * it.b + d * it.a + it.c
            })
            .collect();
        self.output = Some(z.clone());
        Some(z)
    }
}
