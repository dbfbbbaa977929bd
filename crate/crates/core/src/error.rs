use thiserror::Error;

/// Errors raised by state algebra, element application, measurement and search.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EcsError {
    #[error("mode count mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("mode index {index} out of range for a {modes}-mode state")]
    ModeIndex { index: usize, modes: usize },

    #[error("state has (near) zero norm")]
    DegenerateState,

    #[error("beam splitter on modes {mode_a},{mode_b} needs both Coherent or both Fock factors")]
    UnsupportedPair { mode_a: usize, mode_b: usize },

    #[error("mode {mode} holds a {found} factor where {required} is required")]
    UnsupportedKind {
        mode: usize,
        required: &'static str,
        found: &'static str,
    },

    #[error("photon number {photons} exceeds cap {cap}")]
    FockCap { photons: u32, cap: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("normalization of the c1 = -c2 GHZ state is singular at |alpha| = {alpha:e}")]
    SingularNormalization { alpha: f64 },

    #[error("click branch on mode {mode} mixes photon numbers; remaining state is not pure")]
    MixedBranch { mode: usize },

    #[error("truncation dim {dim} on mode {mode} is below the {required} required for |amplitude| {amplitude}")]
    Truncation {
        mode: usize,
        dim: usize,
        required: usize,
        amplitude: f64,
    },

    #[error("oracle space of {0} amplitudes exceeds the cap")]
    OracleTooLarge(usize),

    #[error("f(lo) - 2 and f(hi) - 2 have the same sign ({f_lo}, {f_hi})")]
    NoBracket { f_lo: f64, f_hi: f64 },

    #[error("objective returned a non-finite value {value}")]
    NonFiniteObjective { value: f64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, EcsError>;
