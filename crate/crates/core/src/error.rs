use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands belong to different groups")]
    MixedGroups,
    #[error("invalid group descriptor: {0}")]
    InvalidGroup(String),
    #[error("K(g) is undefined for the identity")]
    IdentityKSet,
    #[error("ball of radius {radius} exceeds the cap of {cap} elements")]
    BallCap { radius: u64, cap: usize },
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("sequence lengths must be nondecreasing (index {0})")]
    NotMonotone(usize),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("level {requested} is beyond the supported depth {supported}")]
    Depth { requested: usize, supported: usize },
    #[error("cannot coarsen a clopen set from level {from} to level {to}")]
    Coarsen { from: usize, to: usize },
    #[error("cell does not belong to this space: {0}")]
    ForeignCell(String),
    #[error("point does not belong to this space: {0}")]
    ForeignPoint(String),
    #[error("generator assignment violates relator {0}")]
    Relation(String),
    #[error("substitution is not primitive: {0}")]
    NotPrimitive(String),
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("quotient refused: {0}")]
    QuotientRefused(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("equivalence inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Process exit status used by the command-line runner: `3` for resource
    /// caps, `4` for inconsistency, `2` for everything rejected as input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BallCap { .. } | Error::Budget(_) | Error::Depth { .. } => 3,
            Error::Inconsistent(_) => 4,
            _ => 2,
        }
    }
}
