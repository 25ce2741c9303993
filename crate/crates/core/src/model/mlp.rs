use std::fmt;

use super::{relu, step, Perceptron, Rational};
use crate::error::{Error, Result};
use crate::instance::Instance;

/// One affine layer: `h ↦ h·W + b` with `W` of shape `in × out`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    /// Row-major, `in_dim` rows of `out_dim` entries.
    pub weights: Vec<Vec<Rational>>,
    pub bias: Vec<Rational>,
}

impl Layer {
    pub fn in_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn out_dim(&self) -> usize {
        self.bias.len()
    }

    pub fn from_integers(weights: &[&[i64]], bias: &[i64]) -> Layer {
        let r = |v: i64| Rational::from_integer(v.into());
        Layer {
            weights: weights
                .iter()
                .map(|row| row.iter().copied().map(r).collect())
                .collect(),
            bias: bias.iter().copied().map(r).collect(),
        }
    }

    /// `h·W + b` with no activation.
    pub(crate) fn affine(&self, h: &[Rational]) -> Vec<Rational> {
        let mut out = self.bias.clone();
        for (hi, row) in h.iter().zip(&self.weights) {
            if num_traits::Zero::is_zero(hi) {
                continue;
            }
            for (o, w) in out.iter_mut().zip(row) {
                *o += hi * w;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MlpViolation {
    NoLayers,
    /// `layer` is 1-based.
    FirstLayerInput { expected: usize, found: usize },
    Chaining { layer: usize, expected: usize, found: usize },
    RaggedRow { layer: usize, row: usize, expected: usize, found: usize },
    OutputWidth { found: usize },
}

impl fmt::Display for MlpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MlpViolation::NoLayers => write!(f, "network has no layers"),
            MlpViolation::FirstLayerInput { expected, found } => write!(
                f,
                "layer 1 takes {found} inputs but the model has {expected} features"
            ),
            MlpViolation::Chaining { layer, expected, found } => write!(
                f,
                "layer {layer} takes {found} inputs but the previous layer has {expected} outputs"
            ),
            MlpViolation::RaggedRow { layer, row, expected, found } => write!(
                f,
                "layer {layer} row {row} has {found} entries, expected {expected}"
            ),
            MlpViolation::OutputWidth { found } => {
                write!(f, "last layer has {found} outputs, expected 1")
            }
        }
    }
}

/// Checks dimension chaining, rectangular weight matrices and a single
/// output neuron.
pub fn validate_mlp(feature_count: usize, layers: &[Layer]) -> Vec<MlpViolation> {
    let mut out = Vec::new();
    let Some(last) = layers.last() else {
        out.push(MlpViolation::NoLayers);
        return out;
    };
    let mut width = feature_count;
    for (k, layer) in layers.iter().enumerate() {
        if layer.in_dim() != width {
            out.push(if k == 0 {
                MlpViolation::FirstLayerInput { expected: width, found: layer.in_dim() }
            } else {
                MlpViolation::Chaining { layer: k + 1, expected: width, found: layer.in_dim() }
            });
        }
        for (r, row) in layer.weights.iter().enumerate() {
            if row.len() != layer.out_dim() {
                out.push(MlpViolation::RaggedRow {
                    layer: k + 1,
                    row: r + 1,
                    expected: layer.out_dim(),
                    found: row.len(),
                });
            }
        }
        width = layer.out_dim();
    }
    if last.out_dim() != 1 {
        out.push(MlpViolation::OutputWidth { found: last.out_dim() });
    }
    out
}

/// ReLU network with a step output neuron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mlp {
    feature_count: usize,
    layers: Vec<Layer>,
}

impl Mlp {
    pub fn new(feature_count: usize, layers: Vec<Layer>) -> Result<Self> {
        let violations = validate_mlp(feature_count, &layers);
        if !violations.is_empty() {
            return Err(Error::InvalidMlp(violations));
        }
        Ok(Mlp { feature_count, layers })
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn neuron_count(&self) -> usize {
        self.layers.iter().map(Layer::out_dim).sum()
    }

    /// Output pre-activation.
    pub fn logit(&self, x: &Instance) -> Result<Rational> {
        x.ensure_len(self.feature_count)?;
        let h: Vec<Rational> = x
            .bits()
            .iter()
            .map(|&b| Rational::from_integer(u8::from(b).into()))
            .collect();
        Ok(self.logit_from_first_preactivation(self.layers[0].affine(&h)))
    }

    /// Finishes a forward pass given the first layer's pre-activation.
    pub(crate) fn logit_from_first_preactivation(&self, mut pre: Vec<Rational>) -> Rational {
        for layer in &self.layers[1..] {
            let h: Vec<Rational> = pre.into_iter().map(relu).collect();
            pre = layer.affine(&h);
        }
        pre.pop().expect("validated: output width 1")
    }

    pub fn eval(&self, x: &Instance) -> Result<bool> {
        self.logit(x).map(|v| step(&v))
    }
}

impl From<&Perceptron> for Mlp {
    /// A perceptron is the zero-hidden-layer network with one output column.
    fn from(p: &Perceptron) -> Self {
        Mlp {
            feature_count: p.feature_count(),
            layers: vec![Layer {
                weights: p.weights().iter().map(|w| vec![w.clone()]).collect(),
                bias: vec![p.bias().clone()],
            }],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(s: &str) -> Instance {
        Instance::new(s.bytes().map(|b| b == b'1').collect())
    }

    pub(crate) fn xor_net() -> Mlp {
        let half = Rational::new((-1).into(), 2.into());
        let mut out = Layer::from_integers(&[&[1], &[-2]], &[0]);
        out.bias[0] = half;
        Mlp::new(2, vec![Layer::from_integers(&[&[1, 1], &[1, 1]], &[0, -1]), out]).unwrap()
    }

    #[test]
    fn xor_truth_table() {
        let m = xor_net();
        assert!(!m.eval(&inst("00")).unwrap());
        assert!(m.eval(&inst("01")).unwrap());
        assert!(m.eval(&inst("10")).unwrap());
        assert!(!m.eval(&inst("11")).unwrap());
        assert_eq!(m.logit(&inst("01")).unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(m.logit(&inst("11")).unwrap(), Rational::new((-1).into(), 2.into()));
    }

    #[test]
    fn single_layer_matches_perceptron() {
        let m = Mlp::new(3, vec![Layer::from_integers(&[&[-2], &[2], &[0]], &[1])]).unwrap();
        assert!(m.eval(&inst("011")).unwrap());
        let p = Perceptron::from_integers(&[-2, 2, 0], 1).unwrap();
        assert_eq!(Mlp::from(&p), m);
    }

    #[test]
    fn validation() {
        assert!(validate_mlp(2, xor_net().layers()).is_empty());
        let bad_chain = [
            Layer::from_integers(&[&[1, 1], &[1, 1], &[1, 1]], &[0, 0]),
            Layer::from_integers(&[&[1], &[1], &[1]], &[0]),
        ];
        assert_eq!(
            validate_mlp(3, &bad_chain),
            vec![MlpViolation::Chaining { layer: 2, expected: 2, found: 3 }]
        );
        let wide = [Layer::from_integers(&[&[1, 1]], &[0, 0])];
        assert_eq!(validate_mlp(1, &wide), vec![MlpViolation::OutputWidth { found: 2 }]);
        assert_eq!(validate_mlp(1, &[]), vec![MlpViolation::NoLayers]);
        assert!(matches!(Mlp::new(1, wide.to_vec()), Err(Error::InvalidMlp(_))));
    }
}
