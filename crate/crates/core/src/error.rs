use thiserror::Error;

use crate::scheme1::FeasibilityReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("binomial coefficient C({n}, {k}) overflows 128 bits")]
    BinomialOverflow { n: u64, k: i64 },

    #[error("rank {rank} out of range for {k}-subsets of [{n}] ({count} subsets)")]
    RankOutOfRange { n: usize, k: usize, rank: u128, count: u128 },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid network configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid association: user {user}: {reason}")]
    InvalidAssociation { user: usize, reason: String },

    #[error("invalid association: {0}")]
    AssociationShape(String),

    #[error("invalid demand at position {position}: {reason}")]
    InvalidDemand { position: usize, reason: String },

    #[error("{scheme}: {what} is not an admissible integer; use memory sharing (envelope) for this point")]
    NonIntegral { scheme: &'static str, what: String },

    #[error("scheme 1 is infeasible: {0}")]
    Infeasible(Box<FeasibilityReport>),

    #[error("no achievable memory-sharing combination reaches (Ms, Mp) = ({ms}, {mp})")]
    OutsideEnvelope { ms: String, mp: String },

    #[error("file length {needed} bytes exceeds the cap of {cap} bytes; choose a coarser memory point")]
    FileLengthCap { needed: u128, cap: u128 },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
