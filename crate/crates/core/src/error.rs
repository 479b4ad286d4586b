use thiserror::Error;

use crate::fock::FockSpace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("a Fock space needs at least one factor")]
    NoFactors,

    #[error("operation needs a {expected}-factor space, got {found} factor(s)")]
    FactorCount { expected: usize, found: usize },

    #[error("index {index:?} out of range for per-factor dimension {dim}")]
    IndexOutOfRange { index: Vec<usize>, dim: usize },

    #[error("operands live on different spaces: {left:?} vs {right:?}")]
    SpaceMismatch { left: FockSpace, right: FockSpace },

    #[error("matrix shape {rows}x{cols} does not match space side {side}")]
    Shape { rows: usize, cols: usize, side: usize },

    #[error("margin {margin} leaves no interior for per-factor dimension {dim}")]
    EmptyInterior { margin: usize, dim: usize },

    #[error("margin {margin} is below the operands' trust margin {required}")]
    MarginBelowTrust { margin: usize, required: usize },

    #[error("deformation parameter must be finite")]
    NonFiniteParameter,

    #[error(
        "|{name}| = {abs} is outside the convergence disk |{name}| < 1/2: \
         the norm series term ratio tends to {limiting_ratio} >= 1"
    )]
    OutsideDisk {
        name: &'static str,
        abs: f64,
        limiting_ratio: f64,
    },

    #[error("order {requested} exceeds the trusted limit {limit} at this truncation")]
    OrderTooLarge { requested: usize, limit: usize },

    #[error(
        "series truncated at k = {last_k} where the term ratio bound is {ratio} >= 1; \
         increase the dimension to reach the geometric regime"
    )]
    TailNotGeometric { last_k: usize, ratio: f64 },

    #[error("families do not match: {0}")]
    FamilyMismatch(String),

    #[error("power must be at least 2, got {0}")]
    PowerTooSmall(usize),

    #[error("need at least {needed} terms, got k_max = {k_max}")]
    TooFewTerms { k_max: usize, needed: usize },

    #[error(
        "inconclusive: term ratio stays below 1 up to k_max = {k_max}; \
         crossing expected near k = {estimate}"
    )]
    Inconclusive { k_max: usize, estimate: usize },

    #[error("mode index must be 1 or 2, got {0}")]
    ModeIndex(usize),

    #[error("probe support {support} exceeds the expansion order {order}")]
    ProbeSupport { support: usize, order: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
