use thiserror::Error;

use crate::io::ParseError;
use crate::model::{FbddViolation, MlpViolation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} features, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// `index` is 1-based, as in every user-facing message.
    #[error("feature index f{index} out of range [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("a perceptron needs at least one feature")]
    EmptyModel,

    #[error("invalid FBDD: {}", join(.0))]
    InvalidFbdd(Vec<FbddViolation>),

    #[error("invalid MLP: {}", join(.0))]
    InvalidMlp(Vec<MlpViolation>),

    #[error("this solver accepts only a single preference rule with an empty body")]
    NonLinearPreference,

    #[error("no counterfactual exists: the model is constant")]
    NoCounterfactual,

    #[error("exhaustive enumeration over {n} features exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("exhaustive search needs 2^{n} evaluations, budget is {budget}")]
    BudgetExceeded { n: usize, budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
