//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("case `{case}` is missing a row for group `{group}`")]
    IncompleteGrid { case: String, group: String },

    #[error("duplicate row for case `{case}`, group `{group}`")]
    DuplicateCell { case: String, group: String },

    #[error("probability {value} for case `{case}`, group `{group}` is outside [0, 1]")]
    ProbOutOfRange {
        case: String,
        group: String,
        value: f64,
    },

    #[error("unknown group `{group}` (known groups: {known})")]
    UnknownGroup { group: String, known: String },

    #[error("case `{case}` appears with conflicting true labels")]
    ConflictingLabel { case: String },

    #[error("panel must contain at least one case")]
    EmptyPanel,

    #[error("duplicate group identifier `{group}`")]
    DuplicateGroup { group: String },

    #[error("group identifiers must be non-empty")]
    EmptyGroupName,

    #[error("at least {needed} groups required, got {got}")]
    TooFewGroups { needed: usize, got: usize },

    #[error("operation is not defined for the BASE group `{group}`")]
    BaseGroupNotAllowed { group: String },

    #[error("input lengths differ: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },

    #[error("at least {needed} data points required, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("sample {index} has {len} observations; at least 2 required")]
    SampleTooSmall { index: usize, len: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("comparison family is empty")]
    EmptyFamily,

    #[error("invalid degrees of freedom: {df}")]
    InvalidDf { df: f64 },

    #[error("score {value} is outside [0, 1]")]
    ScoreOutOfRange { value: f64 },

    #[error("panel contains only one true-label class")]
    SingleClassPanel,

    #[error("invalid synthesis spec: {reason}")]
    SpecOutOfRange { reason: String },

    #[error("exact enumeration limited to {max} observations, got {got}")]
    InputTooLarge { max: usize, got: usize },

    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },
}
