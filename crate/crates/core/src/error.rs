use thiserror::Error;

/// Errors raised across the library. Every variant carries a stable
/// machine-readable code (see [`QesError::code`]) for manifests and exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QesError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("gamma function pole: {0}")]
    GammaPole(String),
    #[error("resonant denominator at power {power}")]
    Resonance { power: String },
    #[error("resonance obstruction: logarithmic term unavoidable (obstruction value {value})")]
    Obstruction { value: String },
    #[error("non-resonant parameters: no logarithmic channel exists")]
    NonResonant,
    #[error("expected {expected} real roots, found {found} (complex roots present)")]
    MissingRoots { expected: usize, found: usize },
    #[error("precision ceiling of {max_bits} bits reached, roughly {needed_bits} bits required")]
    PrecisionCeiling { max_bits: u32, needed_bits: u32 },
    #[error("series did not converge within {0} terms")]
    Convergence(usize),
    #[error("integration failure: {0}")]
    Integration(String),
    #[error("ordering precondition violated: {0}")]
    Ordering(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

impl QesError {
    pub fn code(&self) -> &'static str {
        match self {
            QesError::InvalidParameter(_) => "invalid-parameter",
            QesError::Parse(_) => "parse",
            QesError::GammaPole(_) => "gamma-pole",
            QesError::Resonance { .. } => "resonance",
            QesError::Obstruction { .. } => "obstruction",
            QesError::NonResonant => "non-resonant",
            QesError::MissingRoots { .. } => "missing-roots",
            QesError::PrecisionCeiling { .. } => "precision-ceiling",
            QesError::Convergence(_) => "convergence",
            QesError::Integration(_) => "integration",
            QesError::Ordering(_) => "ordering",
            QesError::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, QesError>;
