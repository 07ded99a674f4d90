pub mod algebroid;
pub mod charts;
pub mod check;
pub mod cocycles;
pub mod envelope;
pub mod genus;
pub mod error;
pub mod kernel;
pub mod sample;
pub mod superalg;

pub use algebroid::{AlgebroidElement, Frame, FrameChange, VertexAlgebroid};
pub use check::{Outcome, Witness};
pub use error::{Error, Result};
pub use kernel::{RatFunc, RatMatrix, Rational, UQSeries};
pub use superalg::{Ambient, PolyForm, SuperCovector, SuperScalar, SuperVector};
