use alloc::string::String;

use crate::streams::UpStream;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("automaton is not a safety automaton")]
    NotSafety,
    #[error("automaton is not Büchi-shaped (priorities must lie in {{0, 1}})")]
    NotBuchi,
    #[error("control set `{name}` does not have the shape its rank tag declares")]
    RankMismatch { name: String },
    #[error("invalid game parameters: {0}")]
    InvalidParams(String),
    #[error("inner game is not delayable")]
    NotDelayable,
    #[error("rule violation at turn {turn}: {reason}")]
    RuleViolation { turn: u64, reason: String },
    #[error("input real is outside the game domain")]
    DomainViolation,
    #[error("no control row activated below row {0}")]
    NoActivationWithinBound(u64),
    #[error("limit of the row outputs is not determined")]
    LimitUndetermined,
    #[error("no witness m ≤ bound for output digit {0}")]
    NoWitnessWithinBound(u64),
    #[error("unsupported game: {0}")]
    UnsupportedGame(String),
    #[error("region {0} has no supported reduction shape for the available control sets")]
    UnsupportedRegionShape(usize),
    #[error("transducer delay {found:?} exceeds budget {budget} (None: unbounded)")]
    BudgetViolation { budget: u64, found: Option<u64> },
    #[error("reduction witness fails on {sample:?}")]
    WitnessFailure { sample: UpStream },
    #[error("anchor real is not in the first control set")]
    BadAnchor,
    #[error("incoherent specification at digit {n} for input {sample:?}")]
    IncoherentSpec { n: u64, sample: UpStream },
    #[error("run did not close a lasso within {0} turns")]
    NoLasso(u64),
    #[error("strategy is not finite-state")]
    NotFiniteState,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
