use std::path::PathBuf;

use crate::rules::Diagnostics;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("value {value} is outside the domain [{lo}, {hi}] of variable `{variable}`")]
    DomainViolation {
        variable: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("value {value} is not a valid code of variable `{variable}` (codes: {codes:?})")]
    InvalidCode {
        variable: String,
        value: f64,
        codes: Vec<i64>,
    },

    #[error("invalid membership function: {0}")]
    InvalidMembership(String),

    #[error("invalid variable `{name}`: {reason}")]
    InvalidVariable { name: String, reason: String },

    #[error("missing input value for variable `{0}`")]
    MissingInput(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate input value for variable `{0}`")]
    DuplicateInput(String),

    #[error("no rule fired for output `{variable}`: the aggregated curve is identically zero")]
    NoRuleFired { variable: String },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("{0}")]
    Rules(#[from] Diagnostics),

    #[error("dataset too small: {len} value(s), at least {needed} required")]
    DatasetTooSmall { len: usize, needed: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fit failed: {0}")]
    FitFailed(String),

    #[error("fit residual {residual:.4} for term `{term}` exceeds the ceiling {ceiling}")]
    ResidualTooLarge {
        term: String,
        residual: f64,
        ceiling: f64,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("schema violation at `{pointer}`: {message}")]
    Schema { pointer: String, message: String },

    #[error("unknown membership function type `{found}` at `{pointer}`")]
    UnknownMembershipType { pointer: String, found: String },

    #[error("unsupported schema version {found} (expected {expected})")]
    VersionMismatch { found: u64, expected: u64 },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("row {row}: {message}")]
    Csv { row: u64, message: String },

    #[error("row {row}: value {value} is outside the domain [{lo}, {hi}]")]
    OutOfDomain {
        row: u64,
        value: f64,
        lo: f64,
        hi: f64,
    },
}
