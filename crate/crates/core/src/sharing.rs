//! d-sharings, local linear operations and online error correction (OEC).

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{interpolate, rs_decode, AlgebraError, Fe, Field, UniPoly};
use crate::party::{PartyId, PartySet};

pub use crate::algebra::lagrange_coeffs as lagrange_point_coeffs;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SharingError {
    #[error("sharings have different degrees")]
    MixedDegrees,
    #[error("sharings cover different party sets")]
    MixedParties,
    #[error("coefficient count does not match sharing count")]
    Arity,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Full view of a degree-`d` sharing. Only test harnesses and the simulator's
/// checkers hold this; protocol code handles single shares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sharing {
    pub degree: usize,
    pub shares: BTreeMap<PartyId, Fe>,
}

impl Sharing {
    /// Shares f(α_i) for parties 0..n of a random degree-d polynomial with f(0) = s.
    pub fn deal<R: Rng + ?Sized>(secret: Fe, d: usize, n: usize, rng: &mut R) -> Sharing {
        let f = UniPoly::random_with_constant(secret, d, rng);
        Sharing::from_poly(&f, n)
    }

    pub fn from_poly(f: &UniPoly, n: usize) -> Sharing {
        let field = f.field();
        let shares = (0..n).map(|i| (i, f.eval(field.alpha(i)))).collect();
        Sharing { degree: f.degree_bound(), shares }
    }

    /// Every party holds `c`: a valid sharing of `c` at any degree.
    pub fn constant(c: Fe, d: usize, n: usize) -> Sharing {
        Sharing { degree: d, shares: (0..n).map(|i| (i, c)).collect() }
    }

    pub fn parties(&self) -> PartySet {
        PartySet::from_iter(self.shares.keys().copied())
    }

    /// Interpolates the shares held by `parties`; errors if they do not lie on
    /// one polynomial of the declared degree.
    pub fn polynomial_over(&self, parties: &PartySet) -> Result<UniPoly, SharingError> {
        let pts: Vec<(Fe, Fe)> = self
            .shares
            .iter()
            .filter(|(p, _)| parties.contains(**p))
            .map(|(p, v)| (v.field().alpha(*p), *v))
            .collect();
        Ok(interpolate(&pts, self.degree)?)
    }

    pub fn reconstruct(&self) -> Result<Fe, SharingError> {
        Ok(self.polynomial_over(&self.parties())?.constant_term())
    }
}

/// constant + Σ c_k · [s_k], computed share-wise.
pub fn linear_combine(coeffs: &[Fe], sharings: &[&Sharing], constant: Fe) -> Result<Sharing, SharingError> {
    if coeffs.len() != sharings.len() {
        return Err(SharingError::Arity);
    }
    let Some(first) = sharings.first() else {
        return Err(SharingError::Arity);
    };
    let degree = first.degree;
    let parties = first.parties();
    for s in sharings {
        if s.degree != degree {
            return Err(SharingError::MixedDegrees);
        }
        if s.parties() != parties {
            return Err(SharingError::MixedParties);
        }
    }
    let mut shares = BTreeMap::new();
    for p in parties.iter() {
        let mut acc = constant;
        for (c, s) in coeffs.iter().zip(sharings) {
            acc += *c * s.shares[&p];
        }
        shares.insert(p, acc);
    }
    Ok(Sharing { degree, shares })
}

/// Online error correction: reconstructs a degree-`d` polynomial from points
/// trickling in from the parties of `expected`, of which at most `t` lie.
#[derive(Clone, Debug)]
pub struct OecSession {
    d: usize,
    t: usize,
    expected: PartySet,
    received: BTreeMap<PartyId, Fe>,
    r: usize,
    field: Field,
    output: Option<UniPoly>,
}

impl OecSession {
    pub fn new(field: Field, d: usize, t: usize, expected: PartySet) -> OecSession {
        OecSession { d, t, expected, received: BTreeMap::new(), r: 0, field, output: None }
    }

    pub fn iteration(&self) -> usize {
        self.r
    }

    pub fn received(&self) -> usize {
        self.received.len()
    }

    pub fn output(&self) -> Option<&UniPoly> {
        self.output.as_ref()
    }

    /// Admits the point claimed by `party`. Points from outside the expected set
    /// and repeated points are ignored. Returns the polynomial once decoded
    /// (and on every later call).
    pub fn admit(&mut self, party: PartyId, value: Fe) -> Option<UniPoly> {
        if self.output.is_some() {
            return self.output.clone();
        }
        if !self.expected.contains(party) || self.received.contains_key(&party) {
            return None;
        }
        self.received.insert(party, value);
        self.try_decode()
    }

    fn try_decode(&mut self) -> Option<UniPoly> {
        let w = self.received.len();
        let pts: Vec<(Fe, Fe)> = self.received.iter().map(|(p, v)| (self.field.alpha(*p), *v)).collect();
        while w >= self.d + self.t + 1 + self.r {
            let decoded = rs_decode(self.d, self.r, &pts).expect("party points are distinct");
            if let Some(q) = decoded {
                let agree = pts.iter().filter(|(x, y)| q.eval(*x) == *y).count();
                if agree > self.d + self.t {
                    self.output = Some(q.clone());
                    return Some(q);
                }
            }
            if self.r == self.t {
                break;
            }
            self.r += 1;
        }
        None
    }
}
