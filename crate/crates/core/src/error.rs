use thiserror::Error;

/// Errors raised by the surface toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible surfaces")]
    IncompatibleSurfaces,

    #[error("degenerate configuration")]
    DegenerateConfiguration,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error(
        "adjunction violation for {curve}: declared p_a = {declared}, class gives p_a = {computed}"
    )]
    AdjunctionViolation {
        curve: String,
        declared: String,
        computed: String,
    },

    #[error("unknown curve {0:?}")]
    UnknownCurve(String),

    #[error("duplicate identifier {0:?}")]
    DuplicateId(String),

    #[error("incidence violation: {0}")]
    Incidence(String),

    #[error("catalog insufficient or divisor not pseudo-effective: {0}")]
    CatalogInsufficient(String),

    #[error("not contractible: {0}")]
    NotContractible(String),

    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),

    #[error("snc failure: {0}")]
    SncFailure(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("unmodeled configuration: {0}")]
    Unmodeled(String),

    #[error("Picard rank {rank} exceeds cap {cap}")]
    RankCap { rank: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
