use thiserror::Error;

/// Unified error type for model construction, parsing, and analysis ops.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid amino-acid code '{ch}' at position {pos}")]
    BadAminoAcid { ch: char, pos: usize },

    #[error("invalid H/P letter '{ch}' at position {pos}")]
    BadHpLetter { ch: char, pos: usize },

    #[error("malformed decimal literal '{text}'")]
    BadDecimal { text: String },

    #[error("decimal literal '{text}' has more than {max} fractional digits")]
    PrecisionExceeded { text: String, max: usize },

    #[error("malformed rational literal '{text}'")]
    BadRational { text: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid coefficient: {0}")]
    Coefficient(String),

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("distance {0} is not positive")]
    BadDistance(f64),

    #[error("{file}:{line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },

    #[error("digraph edge ({from}, {to}) is invalid: {why}")]
    BadEdge {
        from: usize,
        to: usize,
        why: String,
    },

    #[error("ideal is not predecessor-closed: edge k{from} -> k{to} has k{to} inside without k{from}")]
    ClosureViolation { from: usize, to: usize },

    #[error("supernode id {0} is out of range")]
    BadSupernode(usize),

    #[error("sequence is not an optimum: {0}")]
    NotAnOptimum(String),

    #[error("negative weight at index {index}")]
    NegativeWeight { index: usize },

    #[error("probe range is invalid or does not bracket all corners: {0}")]
    Range(String),

    #[error("query distance {0} is outside the plot domain")]
    PlotDomain(String),

    #[error("instance size {n} exceeds the brute-force cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
