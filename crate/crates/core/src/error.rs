use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u32),
    #[error("quiver has an oriented cycle through vertex {0}")]
    CyclicQuiver(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("malformed relation: {0}")]
    BadRelation(String),
    #[error("representation violates the algebra: {0}")]
    BadRep(String),
    #[error("morphism does not commute with arrow {0}")]
    NonCommuting(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("({0}, {1}) is not one of the recollement adjunctions")]
    NotAdjoint(String, String),
    #[error("cap reached: {0}")]
    CapReached(String),
    #[error("unknown object name {0}")]
    UnknownName(String),
    #[error("refusing: {0}")]
    Refused(String),
    #[error("construction failed at stage {stage}: {reason}")]
    Construction { stage: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
