use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular window: trailing {0}x{0} minor vanishes")]
    SingularWindow(usize),
    #[error("not in big cell: bottom-left {0}x{0} minor vanishes")]
    NotInBigCell(usize),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("boundary entry zero at block boundary {0}")]
    BoundaryEntryZero(usize),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("data inconsistent: {0}")]
    DataInconsistent(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("identity violated: {0}")]
    IdentityViolated(String),
    #[error("transversality violated at root {0}")]
    TransversalityViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
