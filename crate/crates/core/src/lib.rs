//! Best-of-both-worlds perfectly-secure multiparty computation.
//!
//! The crate contains the arithmetic substrate ([`algebra`], [`sharing`],
//! [`stargraph`]), a deterministic discrete-event network simulator
//! ([`simnet`]) and the protocol stack built on it: broadcast, Byzantine
//! agreement, verifiable secret sharing, agreement on a common subset,
//! multiplication-triple generation and circuit evaluation.

pub mod acs;
pub mod agreement;
pub mod algebra;
pub mod broadcast;
pub mod cli;
pub mod harness;
pub mod mpc;
pub mod party;
pub mod sharing;
pub mod simnet;
pub mod stargraph;
pub mod strategies;
pub mod triples;
pub mod vss;

#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($($name:ident),*) => {
            $(
                #[doc = include_str!(concat!("../../../book/src/", stringify!($name), ".md"))]
                mod $name {}
            )*
        };
    }

    chapter!(
        introduction,
        fields_and_sharings,
        stars,
        simulator,
        broadcast_and_agreement,
        vss,
        acs_and_triples,
        circuits,
        adversaries,
        cli
    );
}
