//! The three model classes and their exact evaluation.

mod fbdd;
mod mlp;
mod perceptron;

pub use fbdd::{
    validate_fbdd, Fbdd, FbddGraph, FbddViolation, Node, NodeId, RawEdge, RawKind, RawNode,
};
pub use mlp::{validate_mlp, Layer, Mlp, MlpViolation};
pub use perceptron::Perceptron;

use num_traits::Signed;

use crate::error::Result;
use crate::instance::Instance;

/// Exact rational number; always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Step activation: 1 iff the pre-activation is non-negative.
pub fn step(value: &Rational) -> bool {
    !value.is_negative()
}

pub(crate) fn relu(value: Rational) -> Rational {
    if value.is_negative() {
        Rational::default()
    } else {
        value
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Perceptron(Perceptron),
    Fbdd(Fbdd),
    Mlp(Mlp),
}

impl Model {
    pub fn feature_count(&self) -> usize {
        match self {
            Model::Perceptron(p) => p.feature_count(),
            Model::Fbdd(f) => f.feature_count(),
            Model::Mlp(m) => m.feature_count(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Model::Perceptron(_) => "perceptron",
            Model::Fbdd(_) => "fbdd",
            Model::Mlp(_) => "mlp",
        }
    }

    pub fn eval(&self, x: &Instance) -> Result<bool> {
        match self {
            Model::Perceptron(p) => p.eval(x),
            Model::Fbdd(f) => f.eval(x).map(|(class, _)| class),
            Model::Mlp(m) => m.eval(x),
        }
    }
}

impl From<Perceptron> for Model {
    fn from(p: Perceptron) -> Self {
        Model::Perceptron(p)
    }
}

impl From<Fbdd> for Model {
    fn from(f: Fbdd) -> Self {
        Model::Fbdd(f)
    }
}

impl From<Mlp> for Model {
    fn from(m: Mlp) -> Self {
        Model::Mlp(m)
    }
}
