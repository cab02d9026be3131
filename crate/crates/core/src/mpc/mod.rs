//! Arithmetic circuits and their shared evaluation.

pub mod circuit;
pub mod cireval;

pub use circuit::{Circuit, CircuitError, Gate, Wire};
pub use cireval::CirEval;
