use std::fmt;

/// A spin or truncation level stored as twice its value, so half-integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub usize);

impl HalfInt {
    pub fn from_twice(t: usize) -> Self {
        HalfInt(t)
    }

    pub fn twice(self) -> usize {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed data in `{what}`: expected {expected}, found {found}")]
    Shape {
        what: String,
        expected: String,
        found: String,
    },
    #[error("not a valid finite quantum group: {0}")]
    NotQuantumGroup(String),
    #[error("truncation exceeded: level {required} required but only {available} available")]
    TruncationExceeded { required: HalfInt, available: HalfInt },
    #[error("modular element convention mismatch: {0}")]
    Convention(String),
    #[error("decomposition incomplete: recovered rank {achieved} of {expected}")]
    Decomposition { achieved: usize, expected: usize },
    #[error("non-semisimple or incomplete input: {0}")]
    NonSemisimple(String),
    #[error("axiom violated: {0}")]
    AxiomFailure(String),
    #[error("dimension mismatch in {what}: {left} vs {right}")]
    DimensionMismatch {
        what: String,
        left: usize,
        right: usize,
    },
    #[error("action is not ergodic: fixed-point algebra has dimension {0}")]
    NotErgodic(usize),
    #[error("Galois map is not bijective: rank {rank}, source dimension {source_dim}, target dimension {target_dim}")]
    NotGalois {
        rank: usize,
        source_dim: usize,
        target_dim: usize,
    },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("parse error in {path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn shape(what: impl Into<String>, expected: impl fmt::Display, found: impl fmt::Display) -> Self {
        Error::Shape {
            what: what.into(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub fn truncation(required_twice: usize, available_twice: usize) -> Self {
        Error::TruncationExceeded {
            required: HalfInt(required_twice),
            available: HalfInt(available_twice),
        }
    }

    pub fn mismatch(what: impl Into<String>, left: usize, right: usize) -> Self {
        Error::DimensionMismatch {
            what: what.into(),
            left,
            right,
        }
    }
}
