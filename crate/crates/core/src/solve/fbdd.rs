//! Path-based solvers for FBDDs.
//!
//! Weight each edge 1 when it agrees with `x` on its node's feature. Every
//! root-to-leaf path `π` determines the instance `build(x, π)` that follows
//! `π` and complements every feature `π` does not fix to `x`'s value; its
//! distance from `x` is `n - weight(π)`. Semifactuals at maximal distance
//! are therefore exactly the builds of minimum-weight paths into leaves of
//! `x`'s class. Counterfactuals are the dual: weight disagreeing edges,
//! follow a minimum-weight path into the other class and leave untested
//! features alone.
//!
//! All minimum-weight paths are kept implicitly as a subgraph; preference
//! queries ("is there an optimal path whose instance satisfies literal φ?")
//! are reachability questions on that subgraph and never enumerate paths.

use super::{linear_rule, Enumeration, Mode};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::model::{Fbdd, Node, NodeId};
use crate::oracle::Explanation;
use crate::preference::{Literal, PreferenceRule};

const INF: u64 = u64::MAX;

/// The FBDD with each edge weighted 1 when its label equals `x` at the
/// tested feature, 0 otherwise.
#[derive(Debug, Clone)]
pub struct AgreementFbdd<'a> {
    fbdd: &'a Fbdd,
    weights: Vec<[u8; 2]>,
}

impl<'a> AgreementFbdd<'a> {
    pub fn fbdd(&self) -> &'a Fbdd {
        self.fbdd
    }

    /// Weight of the `branch`-edge leaving `u`; `None` for leaves.
    pub fn weight(&self, u: NodeId, branch: bool) -> Option<u8> {
        match self.fbdd.node(u) {
            Node::Internal { .. } => Some(self.weights[u][usize::from(branch)]),
            Node::Leaf(_) => None,
        }
    }
}

pub fn fbdd_agreement_weights<'a>(fbdd: &'a Fbdd, x: &Instance) -> Result<AgreementFbdd<'a>> {
    x.ensure_len(fbdd.feature_count())?;
    Ok(AgreementFbdd { fbdd, weights: edge_weights(fbdd, x, Mode::Semifactual) })
}

/// Agreement weights for semifactuals, disagreement weights for
/// counterfactuals.
fn edge_weights(fbdd: &Fbdd, x: &Instance, mode: Mode) -> Vec<[u8; 2]> {
    fbdd.nodes()
        .iter()
        .map(|node| match *node {
            Node::Internal { feature, .. } => {
                let agree = |branch: bool| x.get(feature) == branch;
                let w = |branch| u8::from(agree(branch) == (mode == Mode::Semifactual));
                [w(false), w(true)]
            }
            Node::Leaf(_) => [0, 0],
        })
        .collect()
}

/// Union of all minimum-weight paths from the root into `target` leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinWeightSubgraph {
    pub target: bool,
    /// Minimum path weight; `None` when no `target` leaf is reachable.
    pub optimum: Option<usize>,
    nodes: Vec<bool>,
    edges: Vec<[bool; 2]>,
}

impl MinWeightSubgraph {
    pub fn contains_node(&self, u: NodeId) -> bool {
        self.nodes[u]
    }

    pub fn contains_edge(&self, u: NodeId, branch: bool) -> bool {
        self.edges[u][usize::from(branch)]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.iter().filter(|&&b| b).count()
    }
}

pub fn min_weight_subgraph(agreement: &AgreementFbdd<'_>, target: bool) -> MinWeightSubgraph {
    subgraph_for(agreement.fbdd, &agreement.weights, target)
}

fn subgraph_for(fbdd: &Fbdd, weights: &[[u8; 2]], target: bool) -> MinWeightSubgraph {
    let len = fbdd.len();
    let topo = fbdd.topological_order();

    let mut to_target = vec![INF; len];
    for &u in topo.iter().rev() {
        to_target[u] = match fbdd.node(u) {
            Node::Leaf(class) if class == target => 0,
            Node::Leaf(_) => INF,
            Node::Internal { low, high, .. } => {
                let via = |v: NodeId, w: u8| to_target[v].saturating_add(u64::from(w));
                via(low, weights[u][0]).min(via(high, weights[u][1]))
            }
        };
    }

    let mut from_root = vec![INF; len];
    from_root[fbdd.root()] = 0;
    for &u in topo {
        if from_root[u] == INF {
            continue;
        }
        if let Node::Internal { low, high, .. } = fbdd.node(u) {
            for (v, w) in [(low, weights[u][0]), (high, weights[u][1])] {
                from_root[v] = from_root[v].min(from_root[u] + u64::from(w));
            }
        }
    }

    let best = to_target[fbdd.root()];
    let mut nodes = vec![false; len];
    let mut edges = vec![[false; 2]; len];
    if best != INF {
        for u in 0..len {
            if from_root[u] == INF || to_target[u] == INF {
                continue;
            }
            nodes[u] = from_root[u] + to_target[u] == best;
            if let (true, Node::Internal { low, high, .. }) = (nodes[u], fbdd.node(u)) {
                for (branch, v) in [(0, low), (1, high)] {
                    edges[u][branch] = to_target[v] != INF
                        && from_root[u] + u64::from(weights[u][branch]) + to_target[v] == best;
                }
            }
        }
    }
    MinWeightSubgraph {
        target,
        optimum: (best != INF).then_some(best as usize),
        nodes,
        edges,
    }
}

/// Maximal semifactual distance `n - w*`.
pub fn fbdd_mca_value(fbdd: &Fbdd, x: &Instance) -> Result<usize> {
    let class = fbdd.eval(x)?.0;
    let agreement = fbdd_agreement_weights(fbdd, x)?;
    let sub = min_weight_subgraph(&agreement, class);
    let w = sub.optimum.expect("x's own path reaches its class");
    Ok(fbdd.feature_count() - w)
}

/// Restriction on which optimal paths are admissible, as seen from one
/// feature: the path must (`Require`) or must not (`Forbid`) take the
/// `branch`-edge at a node testing `feature`. Freeness means a path meets
/// such a node at most once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PathConstraint {
    Free,
    Require { feature: usize, branch: bool },
    Forbid { feature: usize, branch: bool },
}

/// Untested features are complemented in semifactuals and kept in
/// counterfactuals; a literal asking for that default value only needs the
/// path to avoid fixing the opposite value, otherwise it must fix `target`.
fn constraint_for(literal: Literal, x: &Instance, mode: Mode) -> PathConstraint {
    let p = literal.feature;
    let default = match mode {
        Mode::Semifactual => !x.get(p),
        Mode::Counterfactual => x.get(p),
    };
    if literal.target() == default {
        PathConstraint::Forbid { feature: p, branch: !literal.target() }
    } else {
        PathConstraint::Require { feature: p, branch: literal.target() }
    }
}

/// Walks the optimal-path subgraph under a [`PathConstraint`] as a two-state
/// automaton (state 1 = required edge already taken).
struct Pathfinder<'a> {
    fbdd: &'a Fbdd,
    sub: &'a MinWeightSubgraph,
    constraint: PathConstraint,
    alive: [Vec<bool>; 2],
}

impl<'a> Pathfinder<'a> {
    fn new(fbdd: &'a Fbdd, sub: &'a MinWeightSubgraph, constraint: PathConstraint) -> Self {
        let mut finder = Pathfinder {
            fbdd,
            sub,
            constraint,
            alive: [vec![false; fbdd.len()], vec![false; fbdd.len()]],
        };
        let goal = usize::from(matches!(constraint, PathConstraint::Require { .. }));
        for &u in fbdd.topological_order().iter().rev() {
            for state in [1, 0] {
                let alive = match fbdd.node(u) {
                    Node::Leaf(_) => state == goal && sub.contains_node(u),
                    Node::Internal { .. } => [false, true]
                        .into_iter()
                        .any(|branch| finder.step(u, state, branch).is_some()),
                };
                finder.alive[state][u] = alive;
            }
        }
        finder
    }

    /// Successor `(node, state)` along the `branch`-edge of `u`, if that
    /// edge is in the subgraph, allowed, and leads somewhere alive.
    fn step(&self, u: NodeId, state: usize, branch: bool) -> Option<(NodeId, usize)> {
        let Node::Internal { feature, .. } = self.fbdd.node(u) else { return None };
        if !self.sub.contains_edge(u, branch) {
            return None;
        }
        let v = self.fbdd.node(u).child(branch)?;
        let next = match self.constraint {
            PathConstraint::Free => state,
            PathConstraint::Forbid { feature: f, branch: b } => {
                if f == feature && b == branch {
                    return None;
                }
                state
            }
            PathConstraint::Require { feature: f, branch: b } => {
                if f == feature && b == branch {
                    if state == 1 {
                        return None;
                    }
                    1
                } else {
                    state
                }
            }
        };
        self.alive[next][v].then_some((v, next))
    }

    /// The admissible path that takes the 0-edge whenever it can.
    fn canonical_path(&self) -> Option<Vec<(NodeId, bool)>> {
        let (mut u, mut state) = (self.fbdd.root(), 0);
        if !self.alive[0][u] {
            return None;
        }
        let mut path = Vec::new();
        while let Node::Internal { .. } = self.fbdd.node(u) {
            let (branch, (v, next)) = [false, true]
                .into_iter()
                .find_map(|b| self.step(u, state, b).map(|s| (b, s)))
                .expect("alive nodes have an alive successor");
            path.push((u, branch));
            u = v;
            state = next;
        }
        Some(path)
    }

    /// Depth-first listing of admissible paths, 0-edges first, stopping
    /// once `limit` is exceeded.
    fn paths(&self, limit: usize) -> Vec<Vec<(NodeId, bool)>> {
        let mut out = Vec::new();
        if !self.alive[0][self.fbdd.root()] {
            return out;
        }
        let mut path: Vec<(NodeId, bool)> = Vec::new();
        // (node, state, next branch to try: 0, 1, or 2 = exhausted)
        let mut stack: Vec<(NodeId, usize, u8)> = vec![(self.fbdd.root(), 0, 0)];
        while let Some(&(u, state, next)) = stack.last() {
            if out.len() > limit {
                break;
            }
            let leaf = matches!(self.fbdd.node(u), Node::Leaf(_));
            if leaf || next == 2 {
                if leaf {
                    out.push(path.clone());
                }
                stack.pop();
                path.pop();
                continue;
            }
            let top = stack.len() - 1;
            stack[top].2 += 1;
            let branch = next == 1;
            if let Some((v, s)) = self.step(u, state, branch) {
                path.push((u, branch));
                stack.push((v, s, 0));
            }
        }
        out
    }
}

/// The instance a path describes: path features take the path's labels,
/// the rest are complemented (semifactual) or kept (counterfactual).
fn build(fbdd: &Fbdd, x: &Instance, mode: Mode, path: &[(NodeId, bool)]) -> Instance {
    let mut y = match mode {
        Mode::Semifactual => x.complement(),
        Mode::Counterfactual => x.clone(),
    };
    for &(u, branch) in path {
        if let Node::Internal { feature, .. } = fbdd.node(u) {
            y.set(feature, branch);
        }
    }
    y
}

struct Prepared {
    sub: MinWeightSubgraph,
}

fn prepare(fbdd: &Fbdd, x: &Instance, mode: Mode) -> Result<Prepared> {
    let class = fbdd.eval(x)?.0;
    let weights = edge_weights(fbdd, x, mode);
    let target = match mode {
        Mode::Semifactual => class,
        Mode::Counterfactual => !class,
    };
    let sub = subgraph_for(fbdd, &weights, target);
    if sub.optimum.is_none() {
        return Err(Error::NoCounterfactual);
    }
    Ok(Prepared { sub })
}

fn solve(fbdd: &Fbdd, x: &Instance, mode: Mode, rule: Option<&PreferenceRule>) -> Result<Explanation> {
    x.ensure_len(fbdd.feature_count())?;
    let rules = match rule {
        Some(r) => {
            linear_rule(std::slice::from_ref(r))?;
            r.check_arity(fbdd.feature_count())?;
            std::slice::from_ref(r)
        }
        None => &[],
    };
    let Prepared { sub } = prepare(fbdd, x, mode)?;
    for literal in rules.iter().flat_map(|r| r.head()) {
        let finder = Pathfinder::new(fbdd, &sub, constraint_for(*literal, x, mode));
        if let Some(path) = finder.canonical_path() {
            return Explanation::new(x, build(fbdd, x, mode, &path), rules);
        }
    }
    let path = Pathfinder::new(fbdd, &sub, PathConstraint::Free)
        .canonical_path()
        .expect("the subgraph holds an optimal path");
    Explanation::new(x, build(fbdd, x, mode, &path), rules)
}

/// Semifactual of `x` at maximal distance; with a linear `rule`, a best one.
pub fn fbdd_semifactual(fbdd: &Fbdd, x: &Instance, rule: Option<&PreferenceRule>) -> Result<Explanation> {
    solve(fbdd, x, Mode::Semifactual, rule)
}

/// Counterfactual of `x` at minimal distance; with a linear `rule`, a best
/// one.
pub fn fbdd_counterfactual(
    fbdd: &Fbdd,
    x: &Instance,
    rule: Option<&PreferenceRule>,
) -> Result<Explanation> {
    solve(fbdd, x, Mode::Counterfactual, rule)
}

/// Up to `limit` optimal explanations (those satisfying `goal`, if given)
/// in lexicographic order. Distinct optimal paths yield distinct instances.
pub fn fbdd_enumerate(
    fbdd: &Fbdd,
    x: &Instance,
    mode: Mode,
    goal: Option<Literal>,
    limit: usize,
) -> Result<Enumeration> {
    x.ensure_len(fbdd.feature_count())?;
    if let Some(g) = goal {
        if g.feature >= fbdd.feature_count() {
            return Err(Error::IndexOutOfRange { index: g.feature + 1, n: fbdd.feature_count() });
        }
    }
    let Prepared { sub } = prepare(fbdd, x, mode)?;
    let constraint = goal.map_or(PathConstraint::Free, |g| constraint_for(g, x, mode));
    let mut found: Vec<Instance> = Pathfinder::new(fbdd, &sub, constraint)
        .paths(limit)
        .iter()
        .map(|path| build(fbdd, x, mode, path))
        .collect();
    found.sort();
    found.dedup();
    let explanations = found
        .into_iter()
        .map(|y| Explanation::new(x, y, &[]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Enumeration::from_sorted(explanations, limit))
}

/// All semifactuals of `x` (up to `cap`).
pub fn fbdd_enumerate_semifactuals(fbdd: &Fbdd, x: &Instance, cap: usize) -> Result<Enumeration> {
    fbdd_enumerate(fbdd, x, Mode::Semifactual, None, cap)
}
