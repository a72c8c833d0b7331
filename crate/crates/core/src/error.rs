use std::path::PathBuf;

/// Errors raised by the numerical routines and the file formats.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },

    #[error("weight exponent must be finite and strictly positive, got {0}")]
    InvalidExponent(f64),

    #[error("radius {0} is outside [0, 1]")]
    InvalidRadius(f64),

    #[error("grid of {points} points aliases a polynomial of degree {degree}")]
    Aliasing { points: usize, degree: usize },

    #[error("oversampling factor must be at least 1")]
    ZeroOversample,

    #[error("tail radius needs n > mu (n = {n}, mu = {mu})")]
    TailRadius { n: usize, mu: f64 },

    #[error("expected {lower} < {upper} ({what})")]
    ExponentOrder {
        what: &'static str,
        lower: f64,
        upper: f64,
    },

    #[error("exponent gap {0} must lie in (0, 1)")]
    ExponentGap(f64),

    #[error("co-echelon row k = {k} has nonpositive exponent; need k >= {min_k}")]
    CoechelonRow { k: u32, min_k: u32 },

    #[error("co-echelon rows need gamma > 0")]
    CoechelonGamma,

    #[error("operation undefined for the zero function")]
    ZeroFunction,

    #[error("sequence length {0} is not a power of two")]
    SequenceLength(usize),

    #[error("frequency {freq} aliases on 2^{level} nodes")]
    AliasedFrequency { freq: i64, level: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid corpus: {0}")]
    Corpus(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
