//! Generalized Pauli group for qudits realized in spin systems and harmonic
//! oscillators, in both the number and the phase encodings, plus a small
//! state-vector simulator with a SUM gate driven by a number–number coupling.

pub mod circuit;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod pauli;
pub mod representations;
pub mod simulator;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use pauli::PauliElement;
pub use representations::{Encoding, Operator, Realization, RealizationKind};
