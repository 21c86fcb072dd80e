use thiserror::Error;

/// Errors raised by constructions, validation and searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed block #{index} {block:?}: {reason}")]
    MalformedBlock {
        index: usize,
        block: Vec<u32>,
        reason: String,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("design has no blocks; block-sum metrics are undefined")]
    EmptyDesign,

    #[error("order {v} is not admissible: {reason}")]
    Inadmissible { v: u32, reason: String },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("cycle of odd length {length} through {start}: the -2 order condition is violated, no two-factor split exists")]
    OddCycle { start: u32, length: usize },

    #[error("graph has no 1-factorization into {factors} perfect matchings")]
    NoOneFactorization { factors: usize },

    #[error("graph is not {degree}-regular: vertex {vertex} has degree {actual}")]
    NotRegular {
        degree: usize,
        vertex: u32,
        actual: usize,
    },

    #[error("{what} exceeds the exactness cap ({value} > {cap}); {hint}")]
    ExactnessCap {
        what: &'static str,
        value: u64,
        cap: u64,
        hint: &'static str,
    },

    #[error("unknown catalog entry {0:?}")]
    UnknownCatalog(String),

    #[error("independent sets overlap at point {0}")]
    OverlappingSets(u32),

    #[error("{0}")]
    Profile(String),
}

impl Error {
    /// Stable snake_case name of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedBlock { .. } => "malformed_block",
            Error::InvalidParameters(_) => "invalid_parameters",
            Error::InvalidLabeling(_) => "invalid_labeling",
            Error::Parse { .. } => "parse",
            Error::EmptyDesign => "empty_design",
            Error::Inadmissible { .. } => "inadmissible",
            Error::NotOddPrime(_) => "not_odd_prime",
            Error::OddCycle { .. } => "odd_cycle",
            Error::NoOneFactorization { .. } => "no_one_factorization",
            Error::NotRegular { .. } => "not_regular",
            Error::ExactnessCap { .. } => "exactness_cap",
            Error::UnknownCatalog(_) => "unknown_catalog",
            Error::OverlappingSets(_) => "overlapping_sets",
            Error::Profile(_) => "profile",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
