//! Weak polynomial sharing and verifiable secret sharing.

pub mod gate;
#[allow(clippy::module_inception)]
pub mod vss;
pub mod wps;

pub use gate::{Gate, Resolved};
pub use vss::Vss;
pub use wps::{valid_rows, verdict, Wps};
