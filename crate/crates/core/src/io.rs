//! JSON instance files.
//!
//! ```json
//! {"k": 3, "nodes": [{"id": "a", "color": 0, "weight": 2}], "edges": [["a", "b"]],
//!  "start": "a", "start_a": "a", "start_b": "b", "clique": ["a"]}
//! ```
//!
//! Unknown fields are rejected. The canonical writer sorts nodes by id and
//! edges lexicographically, so writing a loaded file again is byte-stable.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{ColoredGraph, GraphError, NodeId, NodeSpec};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct NodeRecord {
    id: String,
    color: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    k: i64,
    nodes: Vec<NodeRecord>,
    edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start_a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start_b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clique: Option<Vec<String>>,
}

/// A loaded instance: the graph plus optional start annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: ColoredGraph,
    pub start: Option<NodeId>,
    pub start_a: Option<NodeId>,
    pub start_b: Option<NodeId>,
    /// Clique side of a split partition, when the instance declares one.
    pub clique: Option<Vec<NodeId>>,
}

impl Instance {
    pub fn new(graph: ColoredGraph) -> Self {
        Instance {
            graph,
            start: None,
            start_a: None,
            start_b: None,
            clique: None,
        }
    }
}

fn parse_error(e: serde_json::Error) -> GraphError {
    GraphError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses and validates an instance file.
pub fn load_instance(text: &str) -> Result<Instance, GraphError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(parse_error)?;
    if file.k < 1 || file.k > u32::MAX as i64 {
        return Err(GraphError::Invalid(format!("k = {} must be positive", file.k)));
    }
    let k = file.k as u32;
    let mut nodes = Vec::with_capacity(file.nodes.len());
    for rec in &file.nodes {
        if rec.color < 0 || rec.color >= k as i64 {
            return Err(GraphError::ColorOutOfRange {
                node: rec.id.clone(),
                color: rec.color,
                k,
            });
        }
        let weight = rec.weight.unwrap_or(1);
        if weight <= 0 {
            return Err(GraphError::NonPositiveWeight {
                node: rec.id.clone(),
                weight,
            });
        }
        nodes.push(NodeSpec::weighted(rec.id.clone(), rec.color as u32, weight as u64));
    }
    let mut ids = BTreeMap::new();
    for (i, rec) in file.nodes.iter().enumerate() {
        if ids.insert(rec.id.as_str(), i).is_some() {
            return Err(GraphError::DuplicateNode(rec.id.clone()));
        }
    }
    let mut edges = Vec::with_capacity(file.edges.len());
    for (index, (a, b)) in file.edges.iter().enumerate() {
        let lookup = |name: &String| {
            ids.get(name.as_str())
                .copied()
                .ok_or_else(|| GraphError::UnknownEndpoint {
                    index,
                    node: name.clone(),
                })
        };
        edges.push((lookup(a)?, lookup(b)?));
    }
    let graph = ColoredGraph::new(k, nodes, &edges)?;
    let resolve = |field: &'static str, name: &Option<String>| -> Result<Option<NodeId>, GraphError> {
        match name {
            None => Ok(None),
            Some(n) => graph
                .id(n)
                .map(Some)
                .ok_or_else(|| GraphError::UnknownReference {
                    field,
                    node: n.clone(),
                }),
        }
    };
    let start = resolve("start", &file.start)?;
    let start_a = resolve("start_a", &file.start_a)?;
    let start_b = resolve("start_b", &file.start_b)?;
    let clique = match &file.clique {
        None => None,
        Some(names) => Some(
            names
                .iter()
                .map(|n| {
                    graph.id(n).ok_or_else(|| GraphError::UnknownReference {
                        field: "clique",
                        node: n.clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    Ok(Instance {
        graph,
        start,
        start_a,
        start_b,
        clique,
    })
}

/// Loads just the graph.
pub fn load_graph(text: &str) -> Result<ColoredGraph, GraphError> {
    load_instance(text).map(|i| i.graph)
}

/// Canonical serialization: nodes sorted by id, edges sorted by id pair.
pub fn write_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut nodes: Vec<NodeRecord> = (0..g.len())
        .map(|v| NodeRecord {
            id: g.name(v).to_string(),
            color: g.color(v) as i64,
            weight: (g.weight(v) != 1).then_some(g.weight(v) as i64),
        })
        .collect();
    nodes.sort_by(|a, b| a.id.cmp(&b.id));
    let edges: BTreeSet<(String, String)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (g.name(a).to_string(), g.name(b).to_string());
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    let name = |v: Option<NodeId>| v.map(|v| g.name(v).to_string());
    let clique = inst.clique.as_ref().map(|c| {
        let mut names: Vec<String> = c.iter().map(|&v| g.name(v).to_string()).collect();
        names.sort();
        names
    });
    let file = InstanceFile {
        k: g.k() as i64,
        nodes,
        edges: edges.into_iter().collect(),
        start: name(inst.start),
        start_a: name(inst.start_a),
        start_b: name(inst.start_b),
        clique,
    };
    let mut out = serde_json::to_string_pretty(&file).expect("instance serializes");
    out.push('\n');
    out
}

pub fn write_graph(g: &ColoredGraph) -> String {
    write_instance(&Instance::new(g.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_minimal_and_path() {
        let g = load_graph(r#"{"k":1,"nodes":[{"id":"a","color":0}],"edges":[]}"#).unwrap();
        assert_eq!(g.len(), 1);
        let inst = load_instance(
            r#"{"k":2,"nodes":[{"id":"v0","color":0},{"id":"v1","color":1},{"id":"v2","color":0}],
                "edges":[["v0","v1"],["v1","v2"]],"start":"v0"}"#,
        )
        .unwrap();
        assert_eq!(inst.graph.len(), 3);
        assert_eq!(inst.start, Some(0));
    }

    #[test]
    fn reports_errors_with_location() {
        let disconnected = r#"{"k":1,"nodes":[{"id":"a","color":0},{"id":"b","color":0},
            {"id":"c","color":0},{"id":"d","color":0}],"edges":[["a","b"],["c","d"]]}"#;
        assert_eq!(load_graph(disconnected), Err(GraphError::Disconnected("c".into())));

        let bad_color = r#"{"k":2,"nodes":[{"id":"a","color":2}],"edges":[]}"#;
        assert!(matches!(load_graph(bad_color), Err(GraphError::ColorOutOfRange { color: 2, .. })));

        let bad_weight = r#"{"k":2,"nodes":[{"id":"a","color":0,"weight":-3}],"edges":[]}"#;
        assert!(matches!(load_graph(bad_weight), Err(GraphError::NonPositiveWeight { weight: -3, .. })));

        let unknown_field = "{\"k\":1,\n\"nodes\":[],\"edges\":[],\"extra\":1}";
        match load_graph(unknown_field) {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }

        let unknown_edge = r#"{"k":1,"nodes":[{"id":"a","color":0}],"edges":[["a","z"]]}"#;
        assert!(matches!(load_graph(unknown_edge), Err(GraphError::UnknownEndpoint { index: 0, .. })));

        let unknown_start = r#"{"k":1,"nodes":[{"id":"a","color":0}],"edges":[],"start":"q"}"#;
        assert!(matches!(load_instance(unknown_start), Err(GraphError::UnknownReference { field: "start", .. })));
    }

    #[test]
    fn canonical_writer_is_stable() {
        let text = r#"{"k":3,"nodes":[{"id":"z","color":2},{"id":"a","color":0,"weight":4},{"id":"m","color":1}],
            "edges":[["z","m"],["a","m"]],"start_a":"a","start_b":"z"}"#;
        let inst = load_instance(text).unwrap();
        let once = write_instance(&inst);
        let again = write_instance(&load_instance(&once).unwrap());
        assert_eq!(once, again);
        assert!(once.find("\"a\"").unwrap() < once.find("\"z\"").unwrap());
        assert!(once.contains("\"weight\": 4"));
    }
}
