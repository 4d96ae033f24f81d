//! Exact ZX-diagram evaluation over power-of-two cyclotomic fields, the
//! formula gadgets of the #SAT to circuit-extraction reduction, and the
//! verification and decoding routines around them.

pub mod circuits;
pub mod cli;
pub mod diagram;
pub mod eval;
pub mod field;
pub mod gadgets;
pub mod generate;
pub mod phase;
pub mod reduction;
pub mod rewrite;
pub mod verify;

pub use diagram::{Diagram, Endpoint, NodeId, NodeKind, Port};
pub use eval::{ExactMatrix, FloatMatrix};
pub use field::FieldElement;
pub use phase::DyadicPhase;
