//! Free supercommutative algebra over the base ring, its superderivations,
//! covectors and superforms.

pub mod form;
pub mod scalar;
pub mod vector;

pub use form::{basis_tuples, d_lie, de_rham_d, lie_action, pair_contract, PolyForm};
pub use scalar::{koszul_negative, Ambient, SuperScalar};
pub use vector::{SuperCovector, SuperVector};
