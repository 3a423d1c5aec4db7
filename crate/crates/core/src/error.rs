use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a fermion: {0}")]
    NotAFermion(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("irreversible sequence: {0}")]
    Irreversible(String),
    #[error("boundary theory mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("a boundary theory may be fixed at one end only")]
    BothBoundaries,
    #[error("no sequence found: {0}")]
    SynthesisFailed(String),
    #[error("invalid lattice size {0}: need L >= 3 and L divisible by 3")]
    InvalidLattice(usize),
    #[error("operator error: {0}")]
    Operator(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("postselection failed: {0}")]
    Postselection(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by malformed user input rather than by a
    /// failed computation.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::InvalidAutomorphism(_)
                | Error::InvalidSequence(_)
                | Error::InvalidLattice(_)
                | Error::Config(_)
                | Error::BothBoundaries
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
