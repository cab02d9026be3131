//! Reliable broadcast (Acast), synchronous agreement, and ΠBC.

mod acast;
mod bc;
mod sba;

pub use acast::Acast;
pub use bc::{Bc, BcOut};
pub use sba::Sba;
