//! Message bodies exchanged between party runtimes.

use std::hash::{Hash, Hasher};

use crate::algebra::{Fe, UniPoly};
use crate::party::PartySet;

/// Payloads carried by broadcast-style instances (Acast, SBA, ΠBC).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Bit(bool),
    /// Opaque test payload.
    Msg(u64),
    /// OK(i, j) of a pairwise consistency test; the pair is implied by the instance.
    Ok,
    /// NOK(i, j, v): the least failing polynomial index and the accuser's value.
    Nok { idx: u16, val: Fe },
    Wef { w: PartySet, e: PartySet, f: PartySet },
    Star { e: PartySet, f: PartySet },
    /// A ΠVote vote: the cited parties, their bits (bit k for party k), and the majority.
    Vote { members: PartySet, bits: u64, bit: bool },
}

/// A value or ⊥.
pub type Opt = Option<Value>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Body {
    AcastInit(Value),
    AcastEcho(Value),
    AcastReady(Value),
    /// Phase-king rounds: (phase, payload). A round-2 `None` means "no proposal".
    Sba1(u8, Opt),
    Sba2(u8, Option<Opt>),
    Sba3(u8, Opt),
    AbaReady(bool),
    /// Dealer to party: row polynomials, one per batched polynomial.
    Rows(Vec<UniPoly>),
    /// Party to party: common values q_i(α_j), one per batched polynomial.
    Points(Vec<Fe>),
    /// Share exchange for public reconstruction.
    Share(Vec<Fe>),
    MpcReady(Fe),
}

impl Body {
    pub const LABELS: [&'static str; 11] =
        ["init", "echo", "ready", "sba1", "sba2", "sba3", "aba-ready", "rows", "points", "share", "mpc-ready"];

    pub fn kind(&self) -> usize {
        match self {
            Body::AcastInit(_) => 0,
            Body::AcastEcho(_) => 1,
            Body::AcastReady(_) => 2,
            Body::Sba1(..) => 3,
            Body::Sba2(..) => 4,
            Body::Sba3(..) => 5,
            Body::AbaReady(_) => 6,
            Body::Rows(_) => 7,
            Body::Points(_) => 8,
            Body::Share(_) => 9,
            Body::MpcReady(_) => 10,
        }
    }

    pub fn label(&self) -> &'static str {
        Body::LABELS[self.kind()]
    }

    /// Number of field elements carried (for communication metrics).
    pub fn field_elems(&self) -> usize {
        fn value(v: &Value) -> usize {
            matches!(v, Value::Nok { .. }) as usize
        }
        match self {
            Body::AcastInit(v) | Body::AcastEcho(v) | Body::AcastReady(v) => value(v),
            Body::Sba1(_, v) | Body::Sba3(_, v) => v.as_ref().map_or(0, value),
            Body::Sba2(_, v) => v.as_ref().and_then(|o| o.as_ref()).map_or(0, value),
            Body::AbaReady(_) => 0,
            Body::Rows(rows) => rows.iter().map(|r| r.coeffs().len()).sum(),
            Body::Points(v) | Body::Share(v) => v.len(),
            Body::MpcReady(_) => 1,
        }
    }

    pub fn digest(&self) -> u64 {
        let mut h = Fnv64::default();
        self.hash(&mut h);
        h.finish()
    }
}

/// 64-bit FNV-1a, used for transcript digests (stable across runs and builds).
#[derive(Clone, Copy)]
pub struct Fnv64(u64);

impl Default for Fnv64 {
    fn default() -> Fnv64 {
        Fnv64(0xcbf2_9ce4_8422_2325)
    }
}

impl Hasher for Fnv64 {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 ^= *b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn digest_is_content_based() {
        let f = Field::new(17).unwrap();
        let a = Body::Points(vec![f.elem(3), f.elem(4)]);
        let b = Body::Points(vec![f.elem(3), f.elem(4)]);
        let c = Body::Points(vec![f.elem(4), f.elem(3)]);
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), c.digest());
        assert_eq!(a.field_elems(), 2);
        assert_eq!(Body::AcastInit(Value::Nok { idx: 0, val: f.one() }).field_elems(), 1);
    }
}
