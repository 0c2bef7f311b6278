//! Compilers from classic hard problems into Honey-Bee instances, plus the
//! brute-force oracles for the source problems.
//!
//! Each generator returns a [`ReductionArtifact`]: a ready-to-play instance,
//! a role label for every generated node, and the relation that links the
//! source instance's answer to the game's answer.

mod fvs;
mod oracles;
mod qbf;
mod sequences;
mod sp;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ColoredGraph, GraphError, NodeSpec};
use crate::io::Instance;

pub use fvs::{extract_feedback_set, gen_fvs_split, is_feedback_set, Digraph};
pub use oracles::{brute_fvs, brute_scs, is_acyclic_without, is_supersequence};
pub use qbf::{extract_assignment, gen_qbf, QbfAudit, QbfFormula};
pub use sequences::{
    expand_binary, gen_mscs_tree, scs_to_mscs, BinarySequences, TernarySequences,
};
pub use sp::{extract_supersequence, gen_scs_sp, SpAudit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("invalid source instance: {0}")]
    Invalid(String),
    #[error("oracle size guard exceeded: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Role labels for generated nodes plus free-form metadata.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    /// Node name to gadget role.
    pub roles: BTreeMap<String, String>,
    pub relation: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub instance: Instance,
    /// Solitaire bound `b`, for single-player reductions.
    pub bound: Option<usize>,
    pub provenance: Provenance,
}

impl ReductionArtifact {
    /// The `provenance.json` sidecar.
    pub fn provenance_json(&self) -> String {
        #[derive(Serialize)]
        struct Sidecar<'a> {
            #[serde(skip_serializing_if = "Option::is_none")]
            bound: Option<usize>,
            #[serde(flatten)]
            provenance: &'a Provenance,
        }
        let mut s = serde_json::to_string_pretty(&Sidecar {
            bound: self.bound,
            provenance: &self.provenance,
        })
        .expect("provenance serializes");
        s.push('\n');
        s
    }

    /// Number of nodes carrying each role prefix (text before the first `:`).
    pub fn role_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for role in self.provenance.roles.values() {
            let key = role.split(':').next().unwrap_or(role).to_string();
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }
}

/// Incremental builder that keeps names, roles and edges together.
#[derive(Debug, Default)]
pub(crate) struct Builder {
    nodes: Vec<NodeSpec>,
    roles: BTreeMap<String, String>,
    edges: Vec<(usize, usize)>,
    seen: BTreeSet<(usize, usize)>,
}

impl Builder {
    pub(crate) fn node(&mut self, name: impl Into<String>, color: u32, weight: u64, role: impl Into<String>) -> usize {
        let name = name.into();
        self.roles.insert(name.clone(), role.into());
        self.nodes.push(NodeSpec::weighted(name, color, weight));
        self.nodes.len() - 1
    }

    pub(crate) fn edge(&mut self, a: usize, b: usize) {
        let e = (a.min(b), a.max(b));
        if a != b && self.seen.insert(e) {
            self.edges.push(e);
        }
    }

    /// A honey pot of total weight `size`: one weighted node, or `size` unit
    /// nodes joined as a path or clique. Returns the node other gadgets attach to.
    pub(crate) fn pot(&mut self, name: &str, color: u32, size: u64, expand: Option<PotShape>, role: &str) -> usize {
        match expand {
            None => self.node(name, color, size, role),
            Some(shape) => {
                let first = self.nodes.len();
                for i in 0..size {
                    self.node(format!("{name}.{i}"), color, 1, role);
                }
                let ids: Vec<usize> = (first..first + size as usize).collect();
                match shape {
                    PotShape::Path => {
                        for w in ids.windows(2) {
                            self.edge(w[0], w[1]);
                        }
                    }
                    PotShape::Clique => {
                        for (i, &a) in ids.iter().enumerate() {
                            for &b in &ids[i + 1..] {
                                self.edge(a, b);
                            }
                        }
                    }
                }
                first
            }
        }
    }

    pub(crate) fn total_weight(&self) -> u64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    pub(crate) fn finish(self, k: u32) -> Result<(ColoredGraph, BTreeMap<String, String>), ReductionError> {
        let g = ColoredGraph::new(k, self.nodes, &self.edges)?;
        Ok((g, self.roles))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PotShape {
    Path,
    Clique,
}
