use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("dimension {0} exceeds the supported maximum of {1}")]
    DimensionTooLarge(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("imaginary residue {0:e} in a quantity that must be real (non-Hermitian input?)")]
    ImaginaryResidue(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("negative eigenvalue {0:e} below tolerance")]
    NegativeEigenvalue(f64),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state `{name}` expects {expected} parameter(s), got {got}")]
    BadParamCount {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("state is not bipartite (has {0} subsystem(s))")]
    NotBipartite(usize),
    #[error("beamsplitter matrix is singular mod {0}")]
    SingularG(usize),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("beamsplitter requires beta*delta != 0 mod d")]
    BetaDeltaZero,
    #[error("Renyi order alpha = 1 is not supported")]
    AlphaOne,
    #[error("bad oracle parameters: {0}")]
    BadParams(String),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("malformed state document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
