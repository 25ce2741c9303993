//! Models shared by unit tests.

use crate::instance::Instance;
use crate::model::{Fbdd, FbddGraph, Layer, Mlp, Perceptron};

pub fn bits(s: &str) -> Instance {
    Instance::new(s.bytes().map(|b| b == b'1').collect())
}

/// `step(x·[-2,2,0] + 1)`, i.e. `¬f1 ∨ f2`.
pub fn hire_perceptron() -> Perceptron {
    Perceptron::from_integers(&[-2, 2, 0], 1).unwrap()
}

/// `¬f1 ∨ f2`, testing f3 at the root, then f2, then f1.
pub fn hiring() -> Fbdd {
    FbddGraph::new(3, "t")
        .node("t", 3)
        .node("a", 2)
        .node("b", 2)
        .node("c", 1)
        .node("d", 1)
        .leaf("T", true)
        .leaf("F", false)
        .edge("t", true, "b")
        .edge("t", false, "a")
        .edge("a", true, "T")
        .edge("a", false, "d")
        .edge("b", true, "T")
        .edge("b", false, "c")
        .edge("c", false, "T")
        .edge("c", true, "F")
        .edge("d", false, "T")
        .edge("d", true, "F")
        .build()
        .unwrap()
}

/// `(f1 ∧ f2) ∨ (¬f1 ∧ f3)`.
pub fn f1() -> Fbdd {
    FbddGraph::new(3, "A")
        .node("A", 1)
        .node("B", 2)
        .node("C", 3)
        .leaf("T", true)
        .leaf("F", false)
        .edge("A", true, "B")
        .edge("A", false, "C")
        .edge("B", true, "T")
        .edge("B", false, "F")
        .edge("C", true, "T")
        .edge("C", false, "F")
        .build()
        .unwrap()
}

/// `relu(x1 - x2) + relu(x2 - x1) - 1/2 >= 0`, i.e. XOR.
pub fn xor() -> Mlp {
    let mut half = Layer::from_integers(&[&[1], &[1]], &[0]);
    half.bias[0] = crate::Rational::new((-1).into(), 2.into());
    Mlp::new(2, vec![Layer::from_integers(&[&[1, -1], &[-1, 1]], &[0, 0]), half]).unwrap()
}
