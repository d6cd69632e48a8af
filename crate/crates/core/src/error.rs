use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precision of {bits} bits is below the supported minimum of {min}")]
    PrecisionTooLow { bits: u32, min: u32 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("cannot parse {input:?} as a real number")]
    Parse { input: String },

    #[error("renormalization scale must be strictly positive, got {0}")]
    NonPositiveScale(String),

    #[error("invalid ansatz exponent: {0}")]
    InvalidAnsatz(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid scan configuration: {0}")]
    InvalidConfig(String),

    #[error("parity channels require a symmetric problem")]
    NotSymmetric,

    #[error("depth {depth} outside the valid range {min}..={max}")]
    DepthOutOfRange { depth: usize, min: usize, max: usize },

    #[error("parity quantization needs an even depth, got {0}")]
    OddDepth(usize),

    #[error("recurrence produced a non-finite value at step {step}; raise the precision")]
    RecurrenceOverflow { step: usize },

    #[error("bracket [{lo}, {hi}] does not enclose a sign change")]
    NoSignChange { lo: String, hi: String },

    #[error(
        "root counts disagree between m = {m_prev} ({count_prev}) and m = {m_last} ({count_last}) \
         after {refinements} grid refinements"
    )]
    RootCountMismatch {
        m_prev: usize,
        count_prev: usize,
        m_last: usize,
        count_last: usize,
        refinements: u32,
    },

    #[error("quadrature did not converge after {halvings} halvings")]
    QuadratureDiverged { halvings: u32 },

    #[error("energy {energy} is not an eigenvalue at m = {m} (relative determinant {ratio})")]
    NotAnEigenvalue { energy: String, m: usize, ratio: String },

    #[error("wavefunction integral is zero; cannot normalize")]
    ZeroNorm,
}
