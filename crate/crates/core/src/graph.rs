//! Node-colored, node-weighted graphs and the conquer semantics.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::nodeset::NodeSet;

pub type NodeId = usize;
pub type Color = u32;
pub type Weight = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("graph has no nodes")]
    Empty,
    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),
    #[error("node {node:?}: color {color} is not below k = {k}")]
    ColorOutOfRange { node: String, color: i64, k: u32 },
    #[error("node {node:?}: weight {weight} must be positive")]
    NonPositiveWeight { node: String, weight: i64 },
    #[error("edge #{index}: unknown endpoint {node:?}")]
    UnknownEndpoint { index: usize, node: String },
    #[error("edge #{index}: self-loop on {node:?}")]
    SelfLoop { index: usize, node: String },
    #[error("edge #{index}: duplicate edge {a:?}-{b:?}")]
    DuplicateEdge { index: usize, a: String, b: String },
    #[error("graph is disconnected: node {0:?} is unreachable from the first node")]
    Disconnected(String),
    #[error("{field}: unknown node {node:?}")]
    UnknownReference { field: &'static str, node: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// The playing field: a connected, simple, undirected graph whose nodes carry
/// a color in `0..k` and a positive weight.
///
/// Node ids are dense (`0..len()`); the original names are kept alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    k: u32,
    names: Vec<String>,
    colors: Vec<Color>,
    weights: Vec<Weight>,
    adj: Vec<Vec<NodeId>>,
    index: BTreeMap<String, NodeId>,
}

/// Builder input for one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    pub name: String,
    pub color: Color,
    pub weight: Weight,
}

impl NodeSpec {
    pub fn new(name: impl Into<String>, color: Color) -> Self {
        NodeSpec {
            name: name.into(),
            color,
            weight: 1,
        }
    }

    pub fn weighted(name: impl Into<String>, color: Color, weight: Weight) -> Self {
        NodeSpec {
            name: name.into(),
            color,
            weight,
        }
    }
}

impl ColoredGraph {
    /// Builds and validates a graph from named nodes and edges given by index.
    pub fn new(
        k: u32,
        nodes: Vec<NodeSpec>,
        edges: &[(NodeId, NodeId)],
    ) -> Result<Self, GraphError> {
        if nodes.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = BTreeMap::new();
        let mut names = Vec::with_capacity(nodes.len());
        let mut colors = Vec::with_capacity(nodes.len());
        let mut weights = Vec::with_capacity(nodes.len());
        for (i, n) in nodes.into_iter().enumerate() {
            if n.color >= k {
                return Err(GraphError::ColorOutOfRange {
                    node: n.name,
                    color: n.color as i64,
                    k,
                });
            }
            if n.weight == 0 {
                return Err(GraphError::NonPositiveWeight {
                    node: n.name,
                    weight: 0,
                });
            }
            if index.insert(n.name.clone(), i).is_some() {
                return Err(GraphError::DuplicateNode(n.name));
            }
            names.push(n.name);
            colors.push(n.color);
            weights.push(n.weight);
        }
        let n = names.len();
        let mut adj = vec![Vec::new(); n];
        for (ei, &(a, b)) in edges.iter().enumerate() {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::UnknownEndpoint {
                        index: ei,
                        node: format!("#{x}"),
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop {
                    index: ei,
                    node: names[a].clone(),
                });
            }
            if adj[a].contains(&b) {
                return Err(GraphError::DuplicateEdge {
                    index: ei,
                    a: names[a].clone(),
                    b: names[b].clone(),
                });
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = ColoredGraph {
            k,
            names,
            colors,
            weights,
            adj,
            index,
        };
        let reach = g.reachable_from(0);
        if let Some(missing) = (0..n).find(|&v| !reach.contains(v)) {
            return Err(GraphError::Disconnected(g.names[missing].clone()));
        }
        Ok(g)
    }

    /// Unit-weight graph with nodes named `v0, v1, ...`.
    pub fn from_colors(k: u32, colors: &[Color], edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let nodes = colors
            .iter()
            .enumerate()
            .map(|(i, &c)| NodeSpec::new(format!("v{i}"), c))
            .collect();
        Self::new(k, nodes, edges)
    }

    /// Path `v0 - v1 - ... ` with the given colors.
    pub fn path(k: u32, colors: &[Color]) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..colors.len()).map(|i| (i - 1, i)).collect();
        Self::from_colors(k, colors, &edges)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn color(&self, v: NodeId) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    #[inline]
    pub fn weight(&self, v: NodeId) -> Weight {
        self.weights[v]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for (a, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn total_weight(&self) -> Weight {
        self.weights.iter().sum()
    }

    pub fn set_weight(&self, set: &NodeSet) -> Weight {
        set.iter().map(|v| self.weights[v]).sum()
    }

    pub fn empty_set(&self) -> NodeSet {
        NodeSet::empty(self.len())
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.len())
    }

    pub fn singleton(&self, v: NodeId) -> NodeSet {
        NodeSet::singleton(self.len(), v)
    }

    /// Nodes of color `c`.
    pub fn color_class(&self, c: Color) -> NodeSet {
        NodeSet::from_ids(self.len(), (0..self.len()).filter(|&v| self.colors[v] == c))
    }

    /// Colors that occur on at least one node, ascending.
    pub fn used_colors(&self) -> Vec<Color> {
        let mut seen = vec![false; self.k as usize];
        for &c in &self.colors {
            seen[c as usize] = true;
        }
        (0..self.k).filter(|&c| seen[c as usize]).collect()
    }

    pub fn is_properly_colored(&self) -> bool {
        self.edges()
            .iter()
            .all(|&(a, b)| self.colors[a] != self.colors[b])
    }

    fn reachable_from(&self, start: NodeId) -> NodeSet {
        let mut seen = NodeSet::singleton(self.len(), start);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// The color-`c`-neighborhood of `territory`: every node of color `c`
    /// adjacent to the territory, or joined to it through a path whose nodes
    /// after the territory all have color `c`.
    pub fn color_neighborhood(&self, territory: &NodeSet, c: Color) -> NodeSet {
        self.color_neighborhood_avoiding(territory, c, None)
    }

    /// Like [`color_neighborhood`](Self::color_neighborhood), but the
    /// traversal never enters `blocked`.
    pub fn color_neighborhood_avoiding(
        &self,
        territory: &NodeSet,
        c: Color,
        blocked: Option<&NodeSet>,
    ) -> NodeSet {
        let mut out = NodeSet::empty(self.len());
        let mut queue = VecDeque::new();
        let allowed = |u: NodeId| self.colors[u] == c && blocked.is_none_or(|b| !b.contains(u));
        for w in territory.iter() {
            for &u in &self.adj[w] {
                if allowed(u) && out.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if allowed(u) && out.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        out
    }

    /// One conquering step: `territory ∪ Γ(territory, c)`.
    pub fn step(&self, territory: &NodeSet, c: Color) -> NodeSet {
        territory.union(&self.color_neighborhood(territory, c))
    }

    /// Applies a whole color sequence to `territory`.
    pub fn conquer(&self, territory: &NodeSet, calls: &[Color]) -> NodeSet {
        calls
            .iter()
            .fold(territory.clone(), |w, &c| self.step(&w, c))
    }

    /// Weight newly added to `territory` by calling `c`.
    pub fn gain(&self, territory: &NodeSet, c: Color) -> Weight {
        let nb = self.color_neighborhood(territory, c);
        self.set_weight(&nb.difference(territory))
    }

    /// Contracts every monochromatic connected component into one node whose
    /// weight is the component's total weight.
    ///
    /// Returns the contracted graph and the map from old to new node ids.
    /// New ids are assigned in order of each component's smallest old id, and
    /// each new node takes the name of that smallest member.
    pub fn contract(&self) -> (ColoredGraph, Vec<NodeId>) {
        const UNSET: usize = usize::MAX;
        let n = self.len();
        let mut map = vec![UNSET; n];
        let mut nodes = Vec::new();
        for root in 0..n {
            if map[root] != UNSET {
                continue;
            }
            let id = nodes.len();
            let c = self.colors[root];
            let mut weight = 0;
            map[root] = id;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                weight += self.weights[v];
                for &u in &self.adj[v] {
                    if self.colors[u] == c && map[u] == UNSET {
                        map[u] = id;
                        queue.push_back(u);
                    }
                }
            }
            nodes.push(NodeSpec::weighted(self.names[root].clone(), c, weight));
        }
        let mut edges = Vec::new();
        for (a, b) in self.edges() {
            let (x, y) = (map[a].min(map[b]), map[a].max(map[b]));
            if x != y {
                edges.push((x, y));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let g = ColoredGraph::new(self.k, nodes, &edges)
            .expect("contraction of a valid graph is valid");
        (g, map)
    }

    /// Image of a node set under a contraction map.
    pub fn map_set(set: &NodeSet, map: &[NodeId], new_len: usize) -> NodeSet {
        NodeSet::from_ids(new_len, set.iter().map(|v| map[v]))
    }
}
