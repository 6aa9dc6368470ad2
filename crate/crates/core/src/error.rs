use std::fmt;

/// Why a candidate multiplication table was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NotAGroupReason {
    NoIdentity,
    NotLatin,
    NotAssociative,
    NoInverse,
}

impl fmt::Display for NotAGroupReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotAGroupReason::NoIdentity => "no-identity",
            NotAGroupReason::NotLatin => "not-latin",
            NotAGroupReason::NotAssociative => "not-associative",
            NotAGroupReason::NoInverse => "no-inverse",
        })
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a group ({reason}): {detail}")]
    NotAGroup {
        reason: NotAGroupReason,
        detail: String,
    },
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("subgroup lattice cap exceeded: {0}")]
    LatticeCapExceeded(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("variable x{var} out of range (system has {n_vars} variables)")]
    VariableOutOfRange { var: usize, n_vars: usize },
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("work budget of {limit} element operations exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("point set of width {width} exceeds the configured width cap {cap}")]
    WidthCapExceeded { width: usize, cap: usize },
    #[error("operation is undefined on the empty set")]
    EmptySet,
    #[error("point set is not algebraic")]
    NotAlgebraic,
    #[error("group is not a domain: {0}")]
    NotADomain(String),
    #[error("domain characterizations disagree: {0}")]
    CharacterizationDisagreement(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
