use alloc::string::String;

/// Every failure the core can report.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite matrix")]
    NonFinite,
    #[error("no unitary representative")]
    NoUnitaryRepresentative,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("unknown gamma set `{0}`")]
    UnknownGammaSet(String),
    #[error("repeated spin-matrix index {0}")]
    RepeatedIndex(usize),
    #[error("singular point")]
    SingularPoint,
    #[error("non-unitary transformation (residual {0:e})")]
    NonUnitary(f64),
    #[error("unknown equation `{0}`")]
    UnknownEquation(String),
    #[error("unknown unitary `{0}`")]
    UnknownUnitary(String),
    #[error("unknown generator set `{0}`")]
    UnknownGeneratorSet(String),
    #[error("unknown position operator `{0}`")]
    UnknownPosition(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid element label `{0}`")]
    InvalidLabel(String),
    #[error("indeterminate, increase samples ({element}: smallest singular ratio {ratio:e})")]
    Indeterminate { element: String, ratio: f64 },
    #[error("not a scalar helicity (derivative residual {0:e})")]
    NotScalarHelicity(f64),
    #[error("structure constants not calibrated: {0}")]
    Calibration(String),
    #[error("content not invariant")]
    ContentNotInvariant,
    #[error("missing prerequisite intertwiner for {0}")]
    MissingIntertwiner(String),
}

pub type Result<T> = core::result::Result<T, Error>;
