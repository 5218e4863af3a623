use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CanonError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("length {0} is not a perfect square")]
    NotPerfectSquare(usize),
    #[error("matrix is not Hermitian (max |H - H†| = {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not in SU(2) (deviation {0:.3e})")]
    NotSu2(f64),
    #[error("seed columns are not orthonormal (max deviation {0:.3e})")]
    NonOrthonormalSeeds(f64),
    #[error("{seeds} seed columns do not fit in dimension {dim}")]
    TooManySeeds { seeds: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("time {t} outside [{lo}, {hi}]")]
    TimeOutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no meeting time: {0}")]
    NoMeetingTime(String),
    #[error("Hamiltonian is outside the retrograde-canon family (residual {0:.3e})")]
    NotInFamily(f64),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, CanonError>;
