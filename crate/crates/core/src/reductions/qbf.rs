use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{Color, NodeId};
use crate::io::Instance;
use crate::nodeset::NodeSet;

use super::{Builder, PotShape, Provenance, ReductionArtifact, ReductionError};

const WHITE: Color = 0;
const LIGHT: Color = 1;
const DARK: Color = 2;
const BLACK: Color = 3;

/// Prenex formula `∃x1 ∀x2 ∃x3 ... ∀x2n . C1 ∧ ... ∧ Cm`; literals are
/// nonzero integers, `-v` negating variable `v` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QbfFormula {
    pub prefix_quantified_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl QbfFormula {
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, ReductionError> {
        let f = QbfFormula {
            prefix_quantified_vars: vars,
            clauses,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let f: QbfFormula = serde_json::from_str(text).map_err(|e| ReductionError::Invalid(e.to_string()))?;
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<(), ReductionError> {
        let v = self.prefix_quantified_vars;
        if v == 0 || v % 2 == 1 {
            return Err(ReductionError::Invalid(format!("variable count {v} must be even and positive")));
        }
        for c in &self.clauses {
            if c.is_empty() {
                return Err(ReductionError::Invalid("empty clause".into()));
            }
            for &lit in c {
                if lit == 0 || lit.unsigned_abs() as usize > v {
                    return Err(ReductionError::Invalid(format!("literal {lit} out of range")));
                }
                if c.contains(&-lit) {
                    return Err(ReductionError::Invalid(format!("clause {c:?} holds both polarities of {}", lit.abs())));
                }
            }
        }
        Ok(())
    }

    /// Number of ∃∀ variable pairs.
    pub fn pairs(&self) -> usize {
        self.prefix_quantified_vars / 2
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// Truth value by game-tree expansion over the quantifier prefix.
    pub fn evaluate(&self) -> bool {
        fn go(f: &QbfFormula, a: &mut Vec<bool>) -> bool {
            if a.len() == f.prefix_quantified_vars {
                return f.satisfied_by(a);
            }
            let exists = a.len().is_multiple_of(2);
            let branch = |v: bool, a: &mut Vec<bool>| {
                a.push(v);
                let r = go(f, a);
                a.pop();
                r
            };
            if exists {
                branch(false, a) || branch(true, a)
            } else {
                branch(false, a) && branch(true, a)
            }
        }
        go(self, &mut Vec::new())
    }
}

/// Structural sizes of a generated formula game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QbfAudit {
    pub n: usize,
    pub variables: usize,
    pub clauses: usize,
    pub path_a_nodes: usize,
    pub path_b_nodes: usize,
    /// `(variable, existential, copies, length)`; length counts edges along
    /// the copy, so a copy has `length + 1` nodes.
    pub waiting: Vec<(usize, bool, usize, usize)>,
    pub clause_pot_weight: u64,
    pub big_pot_weight: u64,
    pub padded: bool,
    pub node_count: usize,
    pub total_weight: u64,
}

type Layer = Vec<(String, Color)>;

/// The pseudo-path of A as layers of parallel nodes, `a0` through `a_n`.
fn a_layers(n: usize) -> Vec<Layer> {
    let mut out = vec![vec![("a0".to_string(), LIGHT)]];
    for i in 1..=n {
        let (e, u) = (2 * i - 1, 2 * i);
        out.push(vec![(format!("aF{e}"), WHITE), (format!("aT{e}"), BLACK)]);
        out.push(vec![(format!("as{e}"), DARK)]);
        out.push(vec![(format!("a{i}.3"), WHITE)]);
        out.push(vec![(format!("a{i}.4"), LIGHT)]);
        out.push(vec![(format!("aF{u}"), WHITE), (format!("aT{u}"), BLACK)]);
        out.push(vec![(format!("as{u}"), DARK)]);
        out.push(vec![(format!("a{i}"), LIGHT)]);
    }
    out
}

/// B's pseudo-path. Its universal choice pair has the colors swapped.
fn b_layers(n: usize) -> Vec<Layer> {
    let mut out = vec![vec![("b0".to_string(), DARK)]];
    for i in 1..=n {
        let (e, u) = (2 * i - 1, 2 * i);
        out.push(vec![(format!("bF{e}"), WHITE), (format!("bT{e}"), BLACK)]);
        out.push(vec![(format!("bs{e}"), LIGHT)]);
        out.push(vec![(format!("b{i}.3"), DARK)]);
        out.push(vec![(format!("bF{u}"), BLACK), (format!("bT{u}"), WHITE)]);
        out.push(vec![(format!("bs{u}"), LIGHT)]);
        out.push(vec![(format!("b{i}.6"), BLACK)]);
        out.push(vec![(format!("b{i}"), DARK)]);
    }
    out
}

fn chain(b: &mut Builder, layers: &[Layer], prefix: &str, role: &str, ids: &mut BTreeMap<String, NodeId>) -> Vec<Vec<NodeId>> {
    let mut placed: Vec<Vec<NodeId>> = Vec::new();
    for layer in layers {
        let now: Vec<NodeId> = layer
            .iter()
            .map(|(name, c)| {
                let full = format!("{prefix}{name}");
                let id = b.node(full.clone(), *c, 1, format!("{role}:{name}"));
                ids.insert(full, id);
                id
            })
            .collect();
        if let Some(prev) = placed.last() {
            for &u in prev {
                for &v in &now {
                    b.edge(u, v);
                }
            }
        }
        placed.push(now);
    }
    placed
}

/// Formula game: A wins iff the formula is true.
///
/// Each player walks a pseudo-path of `9n + 1` nodes carrying one choice
/// pair per variable. Every variable has two waiting copies of A's path
/// tail that deliver A to the clause pots (weight `2n²`) in step with `a_n`;
/// the big pots `H_A` and `H_B` (weight `2n³`) close the game.
pub fn gen_qbf(f: &QbfFormula, expand_pots: bool) -> ReductionArtifact {
    let n = f.pairs();
    let shape = expand_pots.then_some(PotShape::Clique);
    let clause_w = (2 * n * n) as u64;
    let big_w = (2 * n * n * n) as u64;

    let mut b = Builder::default();
    let mut ids = BTreeMap::new();
    let al = a_layers(n);
    let a_path = chain(&mut b, &al, "", "path_a", &mut ids);
    let b_path = chain(&mut b, &b_layers(n), "", "path_b", &mut ids);

    let mut waiting = Vec::new();
    let mut w_ends: BTreeMap<(usize, bool), NodeId> = BTreeMap::new();
    for k in 1..=2 * n {
        let from = al.iter().position(|l| l[0].0 == format!("as{k}")).expect("every variable has a star node");
        let tail = &al[from..];
        let nodes: usize = tail.iter().map(Vec::len).sum();
        waiting.push((k, k % 2 == 1, 2, nodes - 1));
        for value in [false, true] {
            let tag = if value { "T" } else { "F" };
            let copy = chain(&mut b, tail, &format!("w{tag}{k}:"), &format!("wait:{k}{tag}"), &mut ids);
            let head = copy[0][0];
            let entry_a = ids[&format!("a{tag}{k}")];
            let entry_b = if k % 2 == 1 {
                ids[&format!("b{tag}{k}")]
            } else if value {
                ids[&format!("bs{}", k - 1)]
            } else {
                ids[&format!("bs{k}")]
            };
            b.edge(entry_a, head);
            b.edge(entry_b, head);
            w_ends.insert((k, value), copy.last().expect("tail is nonempty")[0]);
        }
    }

    let af = b.node("af", WHITE, 1, "final_a");
    b.edge(a_path.last().expect("path")[0], af);
    let bf = b.node("bf", LIGHT, 1, "final_b");
    b.edge(b_path.last().expect("path")[0], bf);
    let ha = b.pot("hA", BLACK, big_w, shape, "pot_a");
    let hb = b.pot("hB", WHITE, big_w, shape, "pot_b");
    b.edge(af, ha);
    b.edge(bf, hb);
    b.edge(ha, hb);
    for (j, clause) in f.clauses.iter().enumerate() {
        let h = b.pot(&format!("c{j}"), WHITE, clause_w, shape, &format!("clause:{j}"));
        b.edge(bf, h);
        for &lit in clause {
            b.edge(w_ends[&(lit.unsigned_abs() as usize, lit > 0)], h);
        }
    }
    let padded = b.total_weight() % 2 == 0;
    if padded {
        let pad = b.node("pad", LIGHT, 1, "padding");
        b.edge(hb, pad);
    }
    let (graph, roles) = b.finish(4).expect("formula gadget is a valid graph");

    let audit = QbfAudit {
        n,
        variables: 2 * n,
        clauses: f.clauses.len(),
        path_a_nodes: a_path.iter().map(Vec::len).sum(),
        path_b_nodes: b_path.iter().map(Vec::len).sum(),
        waiting,
        clause_pot_weight: clause_w,
        big_pot_weight: big_w,
        padded,
        node_count: graph.len(),
        total_weight: graph.total_weight(),
    };
    let mut instance = Instance::new(graph);
    instance.start_a = Some(a_path[0][0]);
    instance.start_b = Some(b_path[0][0]);
    let mut meta = BTreeMap::new();
    meta.insert("audit".into(), serde_json::to_value(&audit).expect("audit serializes"));
    meta.insert("formula".into(), serde_json::to_value(f).expect("formula serializes"));
    ReductionArtifact {
        instance,
        bound: None,
        provenance: Provenance {
            source: "qbf".into(),
            roles,
            relation: "A wins iff the formula is true".into(),
            meta,
        },
    }
}

impl ReductionArtifact {
    /// Gadget sizes recorded by [`gen_qbf`].
    pub fn qbf_audit(&self) -> Option<QbfAudit> {
        serde_json::from_value(self.provenance.meta.get("audit")?.clone()).ok()
    }
}

/// Assignment read off A's territory: a variable is set when A owns exactly
/// one node of its choice pair.
pub fn extract_assignment(art: &ReductionArtifact, territory_a: &NodeSet) -> Vec<Option<bool>> {
    let g = &art.instance.graph;
    let vars = art.qbf_audit().map_or(0, |a| a.variables);
    (1..=vars)
        .map(|k| {
            let owns = |tag: &str| g.id(&format!("a{tag}{k}")).is_some_and(|v| territory_a.contains(v));
            match (owns("F"), owns("T")) {
                (true, false) => Some(false),
                (false, true) => Some(true),
                _ => None,
            }
        })
        .collect()
}
