//! Multiplication triples: Beaver multiplication, triple transformation,
//! verifiable triple sharing, extraction and the preprocessing pipeline.
//!
//! The free functions here act on full [`Sharing`]s (every party's share)
//! and exist for harnesses and oracles. The protocol state machines
//! ([`Opening`], [`Beaver`], [`TripSh`], [`PreProcessing`]) apply the same
//! linear maps share by share.

pub mod open;
pub mod preprocessing;
pub mod tripsh;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{lagrange_coeffs, Fe, Field, UniPoly};
use crate::party::PartySet;
use crate::sharing::{linear_combine, OecSession, Sharing, SharingError};

pub use open::{Beaver, BeaverItem, Opening};
pub use preprocessing::{extract_params, PreProcessing};
pub use tripsh::{TripSh, TripShOutput};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TripleError {
    #[error("expected {expected} triples, got {got}")]
    Count { expected: usize, got: usize },
    #[error("public reconstruction failed")]
    Open,
    #[error(transparent)]
    Sharing(#[from] SharingError),
}

/// Plain values (a, b, c) of one triple.
pub type Triple = [Fe; 3];

pub fn is_multiplicative(t: &Triple) -> bool {
    t[0] * t[1] == t[2]
}

/// `count` random multiplication triples.
pub fn random_triples<R: Rng + ?Sized>(field: Field, count: usize, rng: &mut R) -> Vec<Triple> {
    (0..count)
        .map(|_| {
            let a = field.random(rng);
            let b = field.random(rng);
            [a, b, a * b]
        })
        .collect()
}

/// Random degree-`t` polynomials with the triple components as constant terms.
pub fn triple_polys<R: Rng + ?Sized>(triples: &[Triple], t: usize, rng: &mut R) -> Vec<UniPoly> {
    triples.iter().flat_map(|tr| tr.iter().map(|c| UniPoly::random_with_constant(*c, t, rng)).collect::<Vec<_>>()).collect()
}

/// Evaluation point of position k (0-based) of a transformed family.
pub fn position(field: Field, k: usize) -> Fe {
    field.alpha(k)
}

/// The j-th (0-based) extraction point, disjoint from every α.
pub fn beta(field: Field, n: usize, j: usize) -> Fe {
    field.elem((n + 1 + j) as u64)
}

/// Value at `target` of the polynomial of degree < values.len() through
/// (position(k), values[k]); linear in `values`, so it applies to shares.
pub fn extend(values: &[Fe], target: Fe) -> Fe {
    let field = target.field();
    let xs: Vec<Fe> = (0..values.len()).map(|k| position(field, k)).collect();
    let lam = lagrange_coeffs(&xs, target).expect("distinct positions");
    lam.iter().zip(values).fold(field.zero(), |acc, (l, v)| acc + *l * *v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedTriple {
    pub a: Sharing,
    pub b: Sharing,
    pub c: Sharing,
}

impl SharedTriple {
    pub fn deal<R: Rng + ?Sized>(t: Triple, d: usize, n: usize, rng: &mut R) -> SharedTriple {
        SharedTriple { a: Sharing::deal(t[0], d, n, rng), b: Sharing::deal(t[1], d, n, rng), c: Sharing::deal(t[2], d, n, rng) }
    }

    pub fn reconstruct(&self) -> Result<Triple, SharingError> {
        Ok([self.a.reconstruct()?, self.b.reconstruct()?, self.c.reconstruct()?])
    }

    pub fn is_multiplicative(&self) -> Result<bool, SharingError> {
        Ok(is_multiplicative(&self.reconstruct()?))
    }
}

/// Public reconstruction by all-to-all exchange: OEC(d, d, 𝒫) over the
/// shares in party order.
pub fn open_public(s: &Sharing) -> Option<Fe> {
    let (_, first) = s.shares.iter().next()?;
    let mut oec = OecSession::new(first.field(), s.degree, s.degree, s.parties());
    s.shares.iter().find_map(|(p, v)| oec.admit(*p, *v)).map(|q| q.constant_term())
}

/// [z] = d·e + e·[b] + d·[a] + [c] with e = x - a and d = y - b opened.
pub fn beaver(x: &Sharing, y: &Sharing, t: &SharedTriple) -> Result<Sharing, TripleError> {
    let field = x.shares.values().next().expect("nonempty sharing").field();
    let (one, minus) = (field.one(), field.from_i64(-1));
    let e = open_public(&linear_combine(&[one, minus], &[x, &t.a], field.zero())?).ok_or(TripleError::Open)?;
    let d = open_public(&linear_combine(&[one, minus], &[y, &t.b], field.zero())?).ok_or(TripleError::Open)?;
    Ok(linear_combine(&[e, d, one], &[&t.b, &t.a, &t.c], d * e)?)
}

/// Output of [`triple_transform`]: 2d + 1 triples on (X, Y, Z) with X, Y of
/// degree d and Z of degree 2d.
#[derive(Clone, Debug)]
pub struct TransformedFamily {
    pub d: usize,
    pub triples: Vec<SharedTriple>,
}

impl TransformedFamily {
    /// Reconstructs (X, Y, Z) from the family's 2d + 1 points.
    pub fn polynomials(&self) -> Result<(UniPoly, UniPoly, UniPoly), TripleError> {
        let pts = |k: usize| -> Result<Vec<(Fe, Fe)>, TripleError> {
            self.triples
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let v = t.reconstruct()?[k];
                    Ok((position(v.field(), i), v))
                })
                .collect()
        };
        let interp = |k: usize, deg: usize, m: usize| -> Result<UniPoly, TripleError> {
            let p = pts(k)?;
            crate::algebra::interpolate(&p[..m], deg).map_err(|e| TripleError::Sharing(e.into()))
        };
        Ok((interp(0, self.d, self.d + 1)?, interp(1, self.d, self.d + 1)?, interp(2, 2 * self.d, 2 * self.d + 1)?))
    }

    /// Sharing of (X(p), Y(p), Z(p)) by Lagrange combination.
    pub fn at(&self, p: Fe) -> Result<SharedTriple, TripleError> {
        let field = p.field();
        let comb = |k: usize, m: usize| -> Result<Sharing, TripleError> {
            let xs: Vec<Fe> = (0..m).map(|i| position(field, i)).collect();
            let lam = lagrange_coeffs(&xs, p).map_err(SharingError::from)?;
            let parts: Vec<&Sharing> = self.triples[..m]
                .iter()
                .map(|t| match k {
                    0 => &t.a,
                    1 => &t.b,
                    _ => &t.c,
                })
                .collect();
            Ok(linear_combine(&lam, &parts, field.zero())?)
        };
        Ok(SharedTriple { a: comb(0, self.d + 1)?, b: comb(1, self.d + 1)?, c: comb(2, 2 * self.d + 1)? })
    }
}

/// The first d + 1 triples define X and Y; the other d points of X, Y are
/// computed by Lagrange combination and multiplied with the remaining input
/// triples through Beaver.
pub fn triple_transform(d: usize, triples: &[SharedTriple]) -> Result<TransformedFamily, TripleError> {
    if triples.len() != 2 * d + 1 {
        return Err(TripleError::Count { expected: 2 * d + 1, got: triples.len() });
    }
    let mut out: Vec<SharedTriple> = triples[..=d].to_vec();
    let head = TransformedFamily { d, triples: triples[..=d].to_vec() };
    for (i, input) in triples.iter().enumerate().skip(d + 1) {
        let field = input.a.shares.values().next().expect("nonempty sharing").field();
        let p = position(field, i);
        let pt = head_point(&head, p)?;
        let z = beaver(&pt.0, &pt.1, input)?;
        out.push(SharedTriple { a: pt.0, b: pt.1, c: z });
    }
    Ok(TransformedFamily { d, triples: out })
}

fn head_point(head: &TransformedFamily, p: Fe) -> Result<(Sharing, Sharing), TripleError> {
    let field = p.field();
    let xs: Vec<Fe> = (0..=head.d).map(|i| position(field, i)).collect();
    let lam = lagrange_coeffs(&xs, p).map_err(SharingError::from)?;
    let a: Vec<&Sharing> = head.triples.iter().map(|t| &t.a).collect();
    let b: Vec<&Sharing> = head.triples.iter().map(|t| &t.b).collect();
    Ok((linear_combine(&lam, &a, field.zero())?, linear_combine(&lam, &b, field.zero())?))
}

/// d + 1 - t_s fresh triples at β_1, β_2, … from 2d + 1 multiplication triples.
pub fn triple_extract(d: usize, t_s: usize, n: usize, triples: &[SharedTriple]) -> Result<Vec<SharedTriple>, TripleError> {
    let fam = triple_transform(d, triples)?;
    let field = triples[0].a.shares.values().next().expect("nonempty sharing").field();
    (0..d + 1 - t_s).map(|j| fam.at(beta(field, n, j))).collect()
}

/// All-zero default sharing of (0, 0, 0) over `parties`.
pub fn default_triple(field: Field, d: usize, parties: PartySet) -> SharedTriple {
    let z = Sharing { degree: d, shares: parties.iter().map(|p| (p, field.zero())).collect() };
    SharedTriple { a: z.clone(), b: z.clone(), c: z }
}
