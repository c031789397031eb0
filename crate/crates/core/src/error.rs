use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },

    #[error("commutator length must be at least 1")]
    ZeroCommutatorLength,

    #[error("group of order {order} exceeds the enumeration threshold {threshold}")]
    NotEnumerable { order: u64, threshold: usize },

    #[error("element {0} does not lie in the group")]
    NotMember(String),

    #[error("subgroups belong to different parent groups")]
    ParentMismatch,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("horizon {horizon} is smaller than the group order {order}")]
    HorizonTooSmall { horizon: usize, order: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
