//! Exact "even-if" (semifactual) and "if-only" (counterfactual) explanations
//! for binary classifiers over boolean feature vectors.
//!
//! Three model classes are supported, all evaluated with exact rational
//! arithmetic: perceptrons, free binary decision diagrams (FBDDs) and ReLU
//! multilayer perceptrons. For perceptrons and FBDDs the [`solve`] module
//! provides polynomial-time solvers, optionally steered by a single linear
//! preference rule. MLPs and general preference sets are handled by exact
//! exhaustive search. The [`oracle`] module is the brute-force ground truth
//! every solver is tested against.
//!
//! ```
//! use evenif::io::{parse_instance, parse_model};
//! use evenif::solve::{explain, Mode};
//!
//! let model = parse_model("perceptron\nn 3\nw -2 2 0\nb 1\n").unwrap();
//! let x = parse_instance("011", 3).unwrap();
//! let y = explain(&model, &x, Mode::Semifactual, &[], &Default::default()).unwrap();
//! assert_eq!(y.distance, 2);
//! ```

pub mod bench;
pub mod error;
#[cfg(test)]
mod fixtures;
pub mod gen;
pub mod instance;
pub mod io;
pub mod model;
pub mod oracle;
pub mod preference;
pub mod solve;

pub use error::{Error, Result};
pub use instance::{flip, hamming, Instance};
pub use model::{Fbdd, FbddGraph, Mlp, Model, Perceptron, Rational};
pub use oracle::{Explanation, ExplanationQuery};
pub use preference::{DegreeValue, Literal, PreferenceRule};
pub use solve::Mode;
