use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("stability lies on the wall with normal {normal:?}")]
    DegenerateStability { normal: Vec<i64> },

    #[error("infinite lift set: the cone contains the unbounded direction {direction:?} ({bound})")]
    InfiniteLifts { direction: Vec<i64>, bound: String },

    #[error("lattice enumeration exceeds the cap of {cap} points")]
    EnumerationCap { cap: u64 },

    #[error("form {form} has zero constant term and cannot be expanded as a unit")]
    NotAUnit { form: String },

    #[error("evaluation point is within tolerance of the pole {form}")]
    Pole { form: String },

    #[error("expected homogeneous denominator forms, found {form}")]
    NonHomogeneous { form: String },

    #[error("denominator forms span rank {rank}, need {expected}")]
    DegenerateArrangement { rank: usize, expected: usize },

    #[error("arrangement is not contained in an open half-space")]
    NonProjective,

    #[error("sum is not a polynomial in z: {value}")]
    NonPolynomial { value: String },

    #[error("operation requires a torus presentation")]
    NonTorus,

    #[error("a weight vanishes at the evaluation point ({weight:?})")]
    WeightVanishing { weight: Vec<i64> },

    #[error("fiber system is not decoupled: {coupling}")]
    UnsupportedSystem { coupling: String },

    #[error("degenerate q: {reason}")]
    DegenerateQ { reason: String },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid preset: {0}")]
    InvalidPreset(String),

    #[error("insertion is not Weyl-invariant")]
    NotWeylInvariant,

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::InvalidPresentation(_) => "invalid-presentation",
            Error::DegenerateStability { .. } => "degenerate-stability",
            Error::InfiniteLifts { .. } => "infinite-lifts",
            Error::EnumerationCap { .. } => "enumeration-cap",
            Error::NotAUnit { .. } => "not-a-unit",
            Error::Pole { .. } => "pole",
            Error::NonHomogeneous { .. } => "non-homogeneous",
            Error::DegenerateArrangement { .. } => "degenerate-arrangement",
            Error::NonProjective => "non-projective",
            Error::NonPolynomial { .. } => "non-polynomial",
            Error::NonTorus => "non-torus",
            Error::WeightVanishing { .. } => "weight-vanishing",
            Error::UnsupportedSystem { .. } => "unsupported-system",
            Error::DegenerateQ { .. } => "degenerate-q",
            Error::Parse { .. } => "parse",
            Error::InvalidPreset(_) => "invalid-preset",
            Error::NotWeylInvariant => "not-weyl-invariant",
            Error::Io(_) => "io",
        }
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}
