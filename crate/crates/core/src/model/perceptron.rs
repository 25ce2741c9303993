use super::{step, Rational};
use crate::error::{Error, Result};
use crate::instance::Instance;

/// `step(x·w + b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perceptron {
    weights: Vec<Rational>,
    bias: Rational,
}

impl Perceptron {
    pub fn new(weights: Vec<Rational>, bias: Rational) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyModel);
        }
        Ok(Perceptron { weights, bias })
    }

    /// Convenience constructor for integer weights.
    pub fn from_integers(weights: &[i64], bias: i64) -> Result<Self> {
        Perceptron::new(
            weights.iter().map(|&w| Rational::from_integer(w.into())).collect(),
            Rational::from_integer(bias.into()),
        )
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn bias(&self) -> &Rational {
        &self.bias
    }

    pub fn feature_count(&self) -> usize {
        self.weights.len()
    }

    /// `x·w + b`.
    pub fn score(&self, x: &Instance) -> Result<Rational> {
        x.ensure_len(self.feature_count())?;
        let mut total = self.bias.clone();
        for (w, &bit) in self.weights.iter().zip(x.bits()) {
            if bit {
                total += w;
            }
        }
        Ok(total)
    }

    pub fn eval(&self, x: &Instance) -> Result<bool> {
        self.score(x).map(|s| step(&s))
    }

    /// Change of the score when feature `i` of `x` is complemented.
    pub(crate) fn flip_delta(&self, x: &Instance, i: usize) -> Rational {
        if x.get(i) {
            -self.weights[i].clone()
        } else {
            self.weights[i].clone()
        }
    }
}
