//! Deterministic random models and instances.
//!
//! Every generator draws from a ChaCha8 stream seeded with the caller's
//! 64-bit seed, so identical arguments give identical output on every
//! platform.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::model::{FbddGraph, Layer, Mlp, Model, Perceptron, RawEdge, RawKind, RawNode, Rational};
use crate::preference::{Literal, PreferenceRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Perceptron,
    Fbdd,
    Mlp,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Perceptron => "perceptron",
            ModelKind::Fbdd => "fbdd",
            ModelKind::Mlp => "mlp",
        })
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "perceptron" => Ok(ModelKind::Perceptron),
            "fbdd" => Ok(ModelKind::Fbdd),
            "mlp" => Ok(ModelKind::Mlp),
            other => Err(format!("unknown model kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    /// Weights and biases are integers in `[-weight_range, weight_range]`;
    /// perceptron biases span `n/2` times that.
    pub weight_range: i64,
    /// Internal nodes of the FBDD's decision tree before reduction.
    /// Defaults to `4n`, capped by what `n` features allow.
    pub nodes: Option<usize>,
    /// MLP hidden layer widths. Defaults to one layer of width `n`.
    pub hidden: Option<Vec<usize>>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { weight_range: 10, nodes: None, hidden: None }
    }
}

/// Largest weight range accepted; keeps `range * n` far from overflow.
pub const MAX_WEIGHT_RANGE: i64 = 1 << 30;

pub fn gen_random_model(kind: ModelKind, n: usize, seed: u64, params: &GenParams) -> Result<Model> {
    if n == 0 {
        return Err(Error::InfeasibleParams("a model needs at least one feature".into()));
    }
    if !(1..=MAX_WEIGHT_RANGE).contains(&params.weight_range) {
        return Err(Error::InfeasibleParams(format!(
            "weight range must lie in 1..={MAX_WEIGHT_RANGE}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        ModelKind::Perceptron => Ok(random_perceptron(&mut rng, n, params.weight_range).into()),
        ModelKind::Fbdd => random_fbdd(&mut rng, n, params.nodes),
        ModelKind::Mlp => {
            let hidden = params.hidden.clone().unwrap_or_else(|| vec![n]);
            random_mlp(&mut rng, n, &hidden, params.weight_range).map(Into::into)
        }
    }
}

fn int(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    Rational::from_integer(rng.random_range(-range..=range).into())
}

fn random_perceptron(rng: &mut ChaCha8Rng, n: usize, range: i64) -> Perceptron {
    let weights = (0..n).map(|_| int(rng, range)).collect();
    let spread = (i128::from(range) * n as i128 / 2).max(1);
    let bias = Rational::from_integer(rng.random_range(-spread..=spread).into());
    Perceptron::new(weights, bias).expect("n >= 1")
}

fn random_mlp(rng: &mut ChaCha8Rng, n: usize, hidden: &[usize], range: i64) -> Result<Mlp> {
    if hidden.contains(&0) {
        return Err(Error::InfeasibleParams("hidden layer widths must be at least 1".into()));
    }
    let mut widths = vec![n];
    widths.extend_from_slice(hidden);
    widths.push(1);
    let layers = widths
        .windows(2)
        .map(|w| Layer {
            weights: (0..w[0]).map(|_| (0..w[1]).map(|_| int(rng, range)).collect()).collect(),
            bias: (0..w[1]).map(|_| int(rng, range)).collect(),
        })
        .collect();
    Mlp::new(n, layers)
}

/// Internal nodes of a full decision tree over `r` features.
fn tree_capacity(r: usize) -> usize {
    if r >= usize::BITS as usize {
        usize::MAX
    } else {
        (1usize << r) - 1
    }
}

/// Draws a random free decision tree with exactly `budget` internal nodes
/// (each subtree's share of the budget is split uniformly between its
/// children), then reduces it: nodes with equal children are bypassed and
/// structurally equal nodes shared. Reduction preserves the function and
/// freeness, since every diagram path is a tree path.
fn random_fbdd(rng: &mut ChaCha8Rng, n: usize, nodes: Option<usize>) -> Result<Model> {
    let capacity = tree_capacity(n);
    let budget = match nodes {
        Some(m) if m > capacity => {
            return Err(Error::InfeasibleParams(format!(
                "{m} decision nodes do not fit a free tree over {n} features"
            )))
        }
        Some(m) => m,
        None => n.saturating_mul(4).min(capacity),
    };

    enum Frame {
        Build { budget: usize, depth: usize },
        Combine { depth: usize, swap: usize },
    }
    const FALSE: usize = 0;
    const TRUE: usize = 1;
    // Diagram nodes: ids 0 and 1 are the leaves, then (feature, low, high).
    let mut internal: Vec<(usize, usize, usize)> = Vec::new();
    let mut unique: HashMap<(usize, usize, usize), usize> = HashMap::new();
    // Features unused on the current tree path are perm[depth..].
    let mut perm: Vec<usize> = (0..n).collect();
    let mut values: Vec<usize> = Vec::new();
    let mut stack = vec![Frame::Build { budget, depth: 0 }];
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Build { budget: 0, .. } => values.push(if rng.random() { TRUE } else { FALSE }),
            Frame::Build { budget, depth } => {
                let swap = rng.random_range(depth..n);
                perm.swap(depth, swap);
                let cap = tree_capacity(n - depth - 1);
                let rest = budget - 1;
                let low = rng.random_range(rest.saturating_sub(cap)..=rest.min(cap));
                stack.push(Frame::Combine { depth, swap });
                stack.push(Frame::Build { budget: rest - low, depth: depth + 1 });
                stack.push(Frame::Build { budget: low, depth: depth + 1 });
            }
            Frame::Combine { depth, swap } => {
                let mut high = values.pop().expect("two children built");
                let low = values.pop().expect("two children built");
                if low == high && low <= TRUE {
                    // Twin leaves would make this node redundant.
                    high = TRUE - low;
                }
                let feature = perm[depth];
                perm.swap(depth, swap);
                let id = if low == high {
                    low
                } else {
                    *unique.entry((feature, low, high)).or_insert_with(|| {
                        internal.push((feature, low, high));
                        internal.len() + 1
                    })
                };
                values.push(id);
            }
        }
    }
    let root = values.pop().expect("root built");

    let name = |id: usize| match id {
        FALSE => "F".to_string(),
        TRUE => "T".to_string(),
        k => format!("n{}", k - 2),
    };
    // Sharing can orphan nothing (every node was created by a parent that
    // kept it), but a leaf may never be referenced.
    let mut used = [root == FALSE, root == TRUE];
    for &(_, low, high) in &internal {
        for c in [low, high] {
            if c < 2 {
                used[c] = true;
            }
        }
    }
    let mut graph = FbddGraph::new(n, name(root));
    for (k, &(feature, low, high)) in internal.iter().enumerate() {
        let id = name(k + 2);
        graph.nodes.push(RawNode { id: id.clone(), kind: RawKind::Internal(feature + 1) });
        graph.edges.push(RawEdge { from: id.clone(), label: false, to: name(low) });
        graph.edges.push(RawEdge { from: id, label: true, to: name(high) });
    }
    for (leaf, class) in [(FALSE, false), (TRUE, true)] {
        if used[leaf] {
            graph.nodes.push(RawNode { id: name(leaf), kind: RawKind::Leaf(class) });
        }
    }
    Ok(graph.build()?.into())
}

pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Instance {
    Instance::new((0..n).map(|_| rng.random()).collect())
}

/// A rule with `1..=max_head` distinct head literals and, unless `linear`,
/// up to two body literals.
pub fn random_rule<R: Rng + ?Sized>(rng: &mut R, n: usize, max_head: usize, linear: bool) -> PreferenceRule {
    assert!(n >= 1 && max_head >= 1);
    let literal = |rng: &mut R| Literal { feature: rng.random_range(0..n), positive: rng.random() };
    let len = rng.random_range(1..=max_head.min(2 * n));
    let mut head: Vec<Literal> = Vec::new();
    while head.len() < len {
        let l = literal(rng);
        if !head.contains(&l) {
            head.push(l);
        }
    }
    let body = if linear { Vec::new() } else { (0..rng.random_range(0..=2)).map(|_| literal(rng)).collect() };
    PreferenceRule::new(head, body).expect("distinct non-empty head")
}
