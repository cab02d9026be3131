//! Graded voting, randomized ABA over an ideal coin, and the hybrid ΠBA.

mod aba;
mod ba;
mod vote;

pub use aba::{iteration_cap, Aba};
pub use ba::Ba;
pub use vote::{majority, Graded, Vote};
