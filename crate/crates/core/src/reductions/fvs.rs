use serde::{Deserialize, Serialize};

use crate::graph::{Color, NodeId};
use crate::io::Instance;

use super::oracles::is_acyclic_without;
use super::{Builder, Provenance, ReductionArtifact, ReductionError};

/// Simple digraph with a feedback-vertex-set budget `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digraph {
    pub nodes: usize,
    pub arcs: Vec<(usize, usize)>,
    pub t: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DigraphFile {
    #[serde(default)]
    nodes: Option<usize>,
    arcs: Vec<(usize, usize)>,
    t: usize,
}

impl Digraph {
    pub fn new(nodes: usize, arcs: Vec<(usize, usize)>, t: usize) -> Result<Self, ReductionError> {
        if nodes == 0 {
            return Err(ReductionError::Invalid("digraph has no nodes".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &arcs {
            if a >= nodes || b >= nodes {
                return Err(ReductionError::Invalid(format!("arc ({a},{b}) out of range")));
            }
            if a == b {
                return Err(ReductionError::Invalid(format!("self-loop at {a}")));
            }
            if !seen.insert((a, b)) {
                return Err(ReductionError::Invalid(format!("duplicate arc ({a},{b})")));
            }
        }
        if t >= nodes {
            return Err(ReductionError::Invalid(format!("budget t={t} must be below |X|={nodes}")));
        }
        Ok(Digraph { nodes, arcs, t })
    }

    /// Parses `{"arcs":[[a,b],..],"t":t}`; `nodes` defaults to one past the
    /// largest endpoint.
    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let f: DigraphFile = serde_json::from_str(text).map_err(|e| ReductionError::Invalid(e.to_string()))?;
        let n = f
            .nodes
            .unwrap_or_else(|| f.arcs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(1));
        Digraph::new(n, f.arcs, f.t)
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.iter().filter(move |a| a.0 == v).map(|a| a.1)
    }
}

/// Split graph whose optimal conquest length is `|X| + t*`, `t*` the
/// minimum feedback vertex set size.
///
/// Clique: `v0` (color 0) and one node `x` of color `1 + x` per digraph node.
/// Independent side: for each arc `(x, y)` a pendant of color `c_y` on `x`.
pub fn gen_fvs_split(d: &Digraph) -> ReductionArtifact {
    let mut b = Builder::default();
    let v0 = b.node("v0", 0, 1, "start");
    let xs: Vec<NodeId> = (0..d.nodes)
        .map(|x| b.node(format!("x{x}"), (x + 1) as Color, 1, format!("vertex:{x}")))
        .collect();
    let mut clique = vec![v0];
    clique.extend(&xs);
    for (i, &a) in clique.iter().enumerate() {
        for &c in &clique[i + 1..] {
            b.edge(a, c);
        }
    }
    for &(x, y) in &d.arcs {
        let p = b.node(format!("a{x}_{y}"), (y + 1) as Color, 1, format!("arc:{x}->{y}"));
        b.edge(xs[x], p);
    }
    let (graph, roles) = b.finish((d.nodes + 1) as u32).expect("clique with pendants is a valid graph");
    let mut instance = Instance::new(graph);
    instance.start = Some(v0);
    instance.clique = Some(clique);
    let mut meta = std::collections::BTreeMap::new();
    meta.insert("vertices".into(), d.nodes.into());
    meta.insert("t".into(), d.t.into());
    ReductionArtifact {
        instance,
        bound: Some(d.nodes + d.t),
        provenance: Provenance {
            source: "fvs".into(),
            roles,
            relation: "optimal conquest length = |X| + minimum feedback vertex set size".into(),
            meta,
        },
    }
}

/// Digraph nodes whose color appears at least twice in `calls`. For any
/// conquering sequence this set is a feedback vertex set.
pub fn extract_feedback_set(d: &Digraph, calls: &[Color]) -> Vec<usize> {
    let set: Vec<usize> = (0..d.nodes)
        .filter(|&x| calls.iter().filter(|&&c| c == (x + 1) as Color).count() >= 2)
        .collect();
    debug_assert!(!calls.is_empty() || set.is_empty());
    set
}

/// True when removing `set` leaves the digraph acyclic.
pub fn is_feedback_set(d: &Digraph, set: &[usize]) -> bool {
    is_acyclic_without(d, set)
}
