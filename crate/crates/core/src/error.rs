use thiserror::Error;

use crate::representations::Encoding;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{op}: shape mismatch between {left:?} and {right:?}")]
    Shape { op: &'static str, left: (usize, usize), right: (usize, usize) },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("qudit index {index} out of range for a register of {count} qudits")]
    QuditOutOfRange { index: usize, count: usize },

    #[error("label {label} out of range for qudit {qudit} of dimension {dim}")]
    LabelOutOfRange { qudit: usize, label: usize, dim: usize },

    #[error("qudit {qudit} must be in the {expected} encoding for this gate but is in the {found} encoding; call swap_encoding first")]
    Encoding { qudit: usize, expected: Encoding, found: Encoding },

    #[error("control and target must be distinct qudits (got {0} twice)")]
    SameQudit(usize),

    #[error("qudit {qudit} is not in a known basis state; prep is only valid before it is entangled or rotated")]
    PrepUnknownState { qudit: usize },

    #[error("SUM calibration for d = {d} found {} working interaction phases (expected exactly one)", working.len())]
    Calibration { d: usize, working: Vec<usize> },

    #[error("window K = {window} must be between 1 and the smallest dimension {min_dim}")]
    Window { window: usize, min_dim: usize },

    #[error("invalid Pauli word {word:?}: {reason}")]
    PauliWord { word: String, reason: String },
}
