mod axioms;
mod frame;
mod structure;
pub mod tables;

pub use axioms::{c_differential_residual, matrix_identities, trace_symmetry, verify_axioms, Axiom};
pub use frame::{basis_element, change_frame, AlgebroidElement, BasisSymbol, Direction, Frame, FrameChange};
pub use structure::VertexAlgebroid;
