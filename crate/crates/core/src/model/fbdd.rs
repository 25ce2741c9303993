use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Index of a node inside a validated [`Fbdd`].
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    /// Tests 0-based `feature`; `low` is the 0-edge, `high` the 1-edge.
    Internal { feature: usize, low: NodeId, high: NodeId },
    Leaf(bool),
}

impl Node {
    pub fn child(&self, branch: bool) -> Option<NodeId> {
        match *self {
            Node::Internal { low, high, .. } => Some(if branch { high } else { low }),
            Node::Leaf(_) => None,
        }
    }
}

/// Unvalidated FBDD as written in a model file: string ids, 1-based
/// feature labels, and a free-form edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FbddGraph {
    pub feature_count: usize,
    pub root: String,
    pub nodes: Vec<RawNode>,
    pub edges: Vec<RawEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawNode {
    pub id: String,
    pub kind: RawKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawKind {
    /// 1-based feature label.
    Internal(usize),
    Leaf(bool),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEdge {
    pub from: String,
    pub label: bool,
    pub to: String,
}

impl FbddGraph {
    pub fn new(feature_count: usize, root: impl Into<String>) -> Self {
        FbddGraph {
            feature_count,
            root: root.into(),
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Adds an internal node testing the 1-based `feature`.
    pub fn node(mut self, id: impl Into<String>, feature: usize) -> Self {
        self.nodes.push(RawNode { id: id.into(), kind: RawKind::Internal(feature) });
        self
    }

    pub fn leaf(mut self, id: impl Into<String>, class: bool) -> Self {
        self.nodes.push(RawNode { id: id.into(), kind: RawKind::Leaf(class) });
        self
    }

    pub fn edge(mut self, from: impl Into<String>, label: bool, to: impl Into<String>) -> Self {
        self.edges.push(RawEdge { from: from.into(), label, to: to.into() });
        self
    }

    pub fn build(&self) -> Result<Fbdd> {
        check(self).map_err(Error::InvalidFbdd)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FbddViolation {
    DuplicateId { node: String },
    UnknownRoot { root: String },
    UnknownNode { node: String },
    /// `feature` as written (1-based).
    FeatureOutOfRange { node: String, feature: usize },
    EdgeFromLeaf { node: String },
    MissingEdge { node: String, label: bool },
    DuplicateEdge { node: String, label: bool },
    Unreachable { node: String },
    Cycle { nodes: Vec<String> },
    /// `descendant` repeats the label of `ancestor` on some path.
    RepeatedFeature { ancestor: String, descendant: String, feature: usize },
}

impl fmt::Display for FbddViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bit = |b: &bool| u8::from(*b);
        match self {
            FbddViolation::DuplicateId { node } => write!(f, "node id {node} declared twice"),
            FbddViolation::UnknownRoot { root } => write!(f, "root {root} is not a declared node"),
            FbddViolation::UnknownNode { node } => write!(f, "edge refers to undeclared node {node}"),
            FbddViolation::FeatureOutOfRange { node, feature } => {
                write!(f, "node {node} tests f{feature}, outside the declared feature range")
            }
            FbddViolation::EdgeFromLeaf { node } => write!(f, "leaf {node} has an outgoing edge"),
            FbddViolation::MissingEdge { node, label } => {
                write!(f, "node {node} has no {}-edge", bit(label))
            }
            FbddViolation::DuplicateEdge { node, label } => {
                write!(f, "node {node} has more than one {}-edge", bit(label))
            }
            FbddViolation::Unreachable { node } => write!(f, "node {node} is unreachable from the root"),
            FbddViolation::Cycle { nodes } => write!(f, "cycle through nodes {}", nodes.join(",")),
            FbddViolation::RepeatedFeature { ancestor, descendant, feature } => write!(
                f,
                "f{feature} is tested twice on a path through {ancestor},{descendant}"
            ),
        }
    }
}

/// Reports every structural violation of `graph`; empty means valid.
pub fn validate_fbdd(graph: &FbddGraph) -> Vec<FbddViolation> {
    match check(graph) {
        Ok(_) => Vec::new(),
        Err(v) => v,
    }
}

fn check(graph: &FbddGraph) -> std::result::Result<Fbdd, Vec<FbddViolation>> {
    let mut violations = Vec::new();
    let n = graph.feature_count;

    let mut index: HashMap<&str, NodeId> = HashMap::with_capacity(graph.nodes.len());
    for (i, node) in graph.nodes.iter().enumerate() {
        if index.insert(node.id.as_str(), i).is_some() {
            violations.push(FbddViolation::DuplicateId { node: node.id.clone() });
        }
        if let RawKind::Internal(feature) = node.kind {
            if feature == 0 || feature > n {
                violations.push(FbddViolation::FeatureOutOfRange { node: node.id.clone(), feature });
            }
        }
    }
    let root = index.get(graph.root.as_str()).copied();
    if root.is_none() {
        violations.push(FbddViolation::UnknownRoot { root: graph.root.clone() });
    }

    let mut slots: Vec<[Option<NodeId>; 2]> = vec![[None, None]; graph.nodes.len()];
    for edge in &graph.edges {
        let from = index.get(edge.from.as_str()).copied();
        let to = index.get(edge.to.as_str()).copied();
        for (name, resolved) in [(&edge.from, from), (&edge.to, to)] {
            if resolved.is_none() {
                violations.push(FbddViolation::UnknownNode { node: name.clone() });
            }
        }
        let (Some(from), Some(to)) = (from, to) else { continue };
        if let RawKind::Leaf(_) = graph.nodes[from].kind {
            violations.push(FbddViolation::EdgeFromLeaf { node: edge.from.clone() });
            continue;
        }
        let slot = &mut slots[from][usize::from(edge.label)];
        if slot.is_some() {
            violations.push(FbddViolation::DuplicateEdge { node: edge.from.clone(), label: edge.label });
        } else {
            *slot = Some(to);
        }
    }
    for (i, node) in graph.nodes.iter().enumerate() {
        if let RawKind::Internal(_) = node.kind {
            for label in [false, true] {
                if slots[i][usize::from(label)].is_none() {
                    violations.push(FbddViolation::MissingEdge { node: node.id.clone(), label });
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    let root = root.expect("checked above");

    let nodes: Vec<Node> = graph
        .nodes
        .iter()
        .zip(&slots)
        .map(|(raw, slot)| match raw.kind {
            RawKind::Internal(feature) => Node::Internal {
                feature: feature - 1,
                low: slot[0].expect("checked above"),
                high: slot[1].expect("checked above"),
            },
            RawKind::Leaf(class) => Node::Leaf(class),
        })
        .collect();
    let id = |i: NodeId| graph.nodes[i].id.clone();

    let mut reachable = vec![false; nodes.len()];
    reachable[root] = true;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        if let Node::Internal { low, high, .. } = nodes[u] {
            for v in [low, high] {
                if !reachable[v] {
                    reachable[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    for (i, &r) in reachable.iter().enumerate() {
        if !r {
            violations.push(FbddViolation::Unreachable { node: id(i) });
        }
    }

    // Kahn's algorithm over the reachable part; leftovers sit on a cycle.
    let mut indegree = vec![0usize; nodes.len()];
    for (u, node) in nodes.iter().enumerate() {
        if let (true, Node::Internal { low, high, .. }) = (reachable[u], node) {
            indegree[*low] += 1;
            indegree[*high] += 1;
        }
    }
    let mut topo = Vec::with_capacity(nodes.len());
    let mut queue: VecDeque<NodeId> =
        (0..nodes.len()).filter(|&u| reachable[u] && indegree[u] == 0).collect();
    while let Some(u) = queue.pop_front() {
        topo.push(u);
        if let Node::Internal { low, high, .. } = nodes[u] {
            for v in [low, high] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
    }
    let reachable_count = reachable.iter().filter(|&&r| r).count();
    if topo.len() < reachable_count {
        // Kahn left the nodes that are on a cycle or below one; peel off
        // the latter by pruning sinks in reverse.
        let mut on_cycle = vec![true; nodes.len()];
        for &u in &topo {
            on_cycle[u] = false;
        }
        let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); nodes.len()];
        let mut outdegree = vec![0usize; nodes.len()];
        for u in (0..nodes.len()).filter(|&u| reachable[u] && on_cycle[u]) {
            if let Node::Internal { low, high, .. } = nodes[u] {
                for v in [low, high] {
                    if on_cycle[v] {
                        preds[v].push(u);
                        outdegree[u] += 1;
                    }
                }
            }
        }
        let mut sinks: Vec<NodeId> = (0..nodes.len())
            .filter(|&u| reachable[u] && on_cycle[u] && outdegree[u] == 0)
            .collect();
        while let Some(v) = sinks.pop() {
            on_cycle[v] = false;
            for &u in &preds[v] {
                outdegree[u] -= 1;
                if outdegree[u] == 0 {
                    sinks.push(u);
                }
            }
        }
        let cycle: Vec<String> = (0..nodes.len())
            .filter(|&u| reachable[u] && on_cycle[u])
            .map(id)
            .collect();
        violations.push(FbddViolation::Cycle { nodes: cycle });
        return Err(violations);
    }

    violations.extend(repeated_features(&nodes, &reachable, &id));
    if !violations.is_empty() {
        return Err(violations);
    }

    Ok(Fbdd {
        feature_count: n,
        nodes,
        ids: graph.nodes.iter().map(|node| node.id.clone()).collect(),
        root,
        topo,
    })
}

/// For every feature tested by two or more nodes, walks the descendants of
/// those nodes looking for another node with the same label.
fn repeated_features(
    nodes: &[Node],
    reachable: &[bool],
    id: &dyn Fn(NodeId) -> String,
) -> Vec<FbddViolation> {
    let mut by_feature: HashMap<usize, Vec<NodeId>> = HashMap::new();
    for (u, node) in nodes.iter().enumerate() {
        if let (true, Node::Internal { feature, .. }) = (reachable[u], node) {
            by_feature.entry(*feature).or_default().push(u);
        }
    }
    let mut features: Vec<_> = by_feature.into_iter().filter(|(_, us)| us.len() > 1).collect();
    features.sort_unstable();

    let mut out = Vec::new();
    // stamp[v] == round + 1 marks v as visited in the current round.
    let mut stamp = vec![0usize; nodes.len()];
    let mut reported = vec![false; nodes.len()];
    for (round, (feature, sources)) in features.iter().enumerate() {
        let mark = round + 1;
        let mut stack: Vec<(NodeId, NodeId)> = Vec::new();
        for &s in sources {
            if let Node::Internal { low, high, .. } = nodes[s] {
                stack.push((low, s));
                stack.push((high, s));
            }
        }
        while let Some((v, origin)) = stack.pop() {
            if stamp[v] == mark {
                continue;
            }
            stamp[v] = mark;
            if let Node::Internal { feature: fv, low, high } = nodes[v] {
                if fv == *feature && !reported[v] {
                    reported[v] = true;
                    out.push(FbddViolation::RepeatedFeature {
                        ancestor: id(origin),
                        descendant: id(v),
                        feature: feature + 1,
                    });
                }
                stack.push((low, origin));
                stack.push((high, origin));
            }
        }
    }
    out
}

/// A validated free binary decision diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fbdd {
    feature_count: usize,
    nodes: Vec<Node>,
    ids: Vec<String>,
    root: NodeId,
    /// Every node, parents before children.
    topo: Vec<NodeId>,
}

impl Fbdd {
    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, u: NodeId) -> Node {
        self.nodes[u]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn id(&self, u: NodeId) -> &str {
        &self.ids[u]
    }

    pub fn node_by_id(&self, id: &str) -> Option<NodeId> {
        self.ids.iter().position(|s| s == id)
    }

    /// Parents before children.
    pub fn topological_order(&self) -> &[NodeId] {
        &self.topo
    }

    /// Class of `x` and the nodes visited from root to leaf.
    pub fn eval(&self, x: &Instance) -> Result<(bool, Vec<NodeId>)> {
        x.ensure_len(self.feature_count)?;
        let mut path = vec![self.root];
        let mut u = self.root;
        loop {
            match self.nodes[u] {
                Node::Internal { feature, low, high } => {
                    u = if x.get(feature) { high } else { low };
                    path.push(u);
                }
                Node::Leaf(class) => return Ok((class, path)),
            }
        }
    }

    pub fn to_graph(&self) -> FbddGraph {
        let mut graph = FbddGraph::new(self.feature_count, self.ids[self.root].clone());
        for (u, node) in self.nodes.iter().enumerate() {
            let kind = match *node {
                Node::Internal { feature, .. } => RawKind::Internal(feature + 1),
                Node::Leaf(class) => RawKind::Leaf(class),
            };
            graph.nodes.push(RawNode { id: self.ids[u].clone(), kind });
        }
        for (u, node) in self.nodes.iter().enumerate() {
            if let Node::Internal { low, high, .. } = *node {
                for (label, v) in [(false, low), (true, high)] {
                    graph.edges.push(RawEdge {
                        from: self.ids[u].clone(),
                        label,
                        to: self.ids[v].clone(),
                    });
                }
            }
        }
        graph
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(s: &str) -> Instance {
        Instance::new(s.bytes().map(|b| b == b'1').collect())
    }

    /// (f1 ∧ f2) ∨ (¬f1 ∧ f3)
    fn f1_graph() -> FbddGraph {
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
    }

    #[test]
    fn evaluates_against_truth_table() {
        let f = f1_graph().build().unwrap();
        for code in 0..8 {
            let x = Instance::from_code(code, 3);
            let (a, b, c) = (x.get(0), x.get(1), x.get(2));
            let (class, path) = f.eval(&x).unwrap();
            assert_eq!(class, (a && b) || (!a && c), "{x}");
            assert_eq!(path.len(), 3);
        }
        assert!(f.eval(&inst("110")).unwrap().0);
        assert!(!f.eval(&inst("101")).unwrap().0);
        assert!(f.eval(&inst("001")).unwrap().0);
        let (_, path) = f.eval(&inst("110")).unwrap();
        let ids: Vec<_> = path.iter().map(|&u| f.id(u)).collect();
        assert_eq!(ids, ["A", "B", "T"]);
    }

    #[test]
    fn valid_graph_has_no_violations() {
        assert!(validate_fbdd(&f1_graph()).is_empty());
    }

    #[test]
    fn repeated_label_is_reported() {
        let mut g = f1_graph();
        g.nodes[1].kind = RawKind::Internal(1);
        assert_eq!(
            validate_fbdd(&g),
            vec![FbddViolation::RepeatedFeature {
                ancestor: "A".into(),
                descendant: "B".into(),
                feature: 1
            }]
        );
    }

    #[test]
    fn missing_and_duplicate_edges() {
        let g = FbddGraph::new(1, "A").node("A", 1).leaf("T", true).edge("A", false, "T");
        assert_eq!(
            validate_fbdd(&g),
            vec![FbddViolation::MissingEdge { node: "A".into(), label: true }]
        );
        let g = g.edge("A", true, "T").edge("A", true, "T");
        assert_eq!(
            validate_fbdd(&g),
            vec![FbddViolation::DuplicateEdge { node: "A".into(), label: true }]
        );
    }

    #[test]
    fn cycles_and_unreachable_nodes() {
        let g = FbddGraph::new(2, "A")
            .node("A", 1)
            .node("B", 2)
            .leaf("T", true)
            .leaf("X", false)
            .edge("A", false, "B")
            .edge("A", true, "T")
            .edge("B", false, "A")
            .edge("B", true, "T");
        let v = validate_fbdd(&g);
        assert!(v.contains(&FbddViolation::Unreachable { node: "X".into() }));
        assert!(v.contains(&FbddViolation::Cycle { nodes: vec!["A".into(), "B".into()] }));
    }

    #[test]
    fn bad_references() {
        let g = FbddGraph::new(1, "R")
            .node("A", 2)
            .node("A", 1)
            .leaf("T", true)
            .edge("T", true, "A")
            .edge("A", true, "Q");
        let v = validate_fbdd(&g);
        assert!(v.contains(&FbddViolation::DuplicateId { node: "A".into() }));
        assert!(v.contains(&FbddViolation::UnknownRoot { root: "R".into() }));
        assert!(v.contains(&FbddViolation::FeatureOutOfRange { node: "A".into(), feature: 2 }));
        assert!(v.contains(&FbddViolation::EdgeFromLeaf { node: "T".into() }));
        assert!(v.contains(&FbddViolation::UnknownNode { node: "Q".into() }));
    }

    #[test]
    fn graph_roundtrip() {
        let f = f1_graph().build().unwrap();
        assert_eq!(f.to_graph().build().unwrap(), f);
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let depth = 50_000;
        let mut g = FbddGraph::new(depth, "n0").leaf("T", true).leaf("F", false);
        for i in 0..depth {
            g = g.node(format!("n{i}"), i + 1);
            let next = if i + 1 == depth { "T".to_string() } else { format!("n{}", i + 1) };
            g = g.edge(format!("n{i}"), true, next).edge(format!("n{i}"), false, "F");
        }
        let f = g.build().unwrap();
        assert!(f.eval(&Instance::new(vec![true; depth])).unwrap().0);
    }
}
