//! Strict partial orders over node ids, and co-comparability validation.

use serde::{Deserialize, Serialize};

use crate::graph::{ColoredGraph, GraphError, NodeId};
use crate::nodeset::NodeSet;

use super::SolveError;

/// A strict partial order on `0..len`, stored as a transitively closed
/// successor table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrder {
    above: Vec<NodeSet>,
    below: Vec<NodeSet>,
}

impl PartialOrder {
    /// Builds the transitive closure of `pairs` (each `(a, b)` meaning `a < b`).
    /// Fails if the closure is not irreflexive.
    pub fn from_pairs(len: usize, pairs: &[(NodeId, NodeId)]) -> Result<Self, SolveError> {
        let mut above = vec![NodeSet::empty(len); len];
        for &(a, b) in pairs {
            if a >= len || b >= len {
                return Err(SolveError::Order(format!("pair ({a}, {b}) out of range")));
            }
            above[a].insert(b);
        }
        // Warshall
        for m in 0..len {
            let via = above[m].clone();
            for row in above.iter_mut() {
                if row.contains(m) {
                    row.union_with(&via);
                }
            }
        }
        if let Some(v) = (0..len).find(|&v| above[v].contains(v)) {
            return Err(SolveError::Order(format!("relation has a cycle through node {v}")));
        }
        let mut below = vec![NodeSet::empty(len); len];
        for (a, row) in above.iter().enumerate() {
            for b in row.iter() {
                below[b].insert(a);
            }
        }
        Ok(PartialOrder { above, below })
    }

    /// `less(a, b)` is `a < b`.
    pub fn from_fn(len: usize, less: impl Fn(NodeId, NodeId) -> bool) -> Result<Self, SolveError> {
        let mut pairs = Vec::new();
        for a in 0..len {
            for b in 0..len {
                if a != b && less(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        let po = Self::from_pairs(len, &pairs)?;
        for a in 0..len {
            for b in 0..len {
                if a != b && po.less(a, b) != less(a, b) {
                    return Err(SolveError::Order("relation is not transitive".into()));
                }
            }
        }
        Ok(po)
    }

    pub fn len(&self) -> usize {
        self.above.len()
    }

    pub fn is_empty(&self) -> bool {
        self.above.is_empty()
    }

    #[inline]
    pub fn less(&self, a: NodeId, b: NodeId) -> bool {
        self.above[a].contains(b)
    }

    #[inline]
    pub fn comparable(&self, a: NodeId, b: NodeId) -> bool {
        self.less(a, b) || self.less(b, a)
    }

    /// Strict upper set of `v`.
    pub fn above(&self, v: NodeId) -> &NodeSet {
        &self.above[v]
    }

    /// Strict lower set of `v`.
    pub fn below(&self, v: NodeId) -> &NodeSet {
        &self.below[v]
    }

    pub fn is_minimal(&self, v: NodeId) -> bool {
        self.below[v].is_empty()
    }

    pub fn is_maximal(&self, v: NodeId) -> bool {
        self.above[v].is_empty()
    }

    pub fn reversed(&self) -> PartialOrder {
        PartialOrder {
            above: self.below.clone(),
            below: self.above.clone(),
        }
    }

    /// Pairs `(a, b)` with `a < b`, sorted.
    pub fn pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for (a, row) in self.above.iter().enumerate() {
            out.extend(row.iter().map(|b| (a, b)));
        }
        out
    }

    /// Checks that `g` is exactly the incomparability graph of this order.
    pub fn validate_cocomparability(&self, g: &ColoredGraph) -> Result<(), SolveError> {
        if self.len() != g.len() {
            return Err(SolveError::Order(format!(
                "order has {} elements, graph has {} nodes",
                self.len(),
                g.len()
            )));
        }
        for a in 0..g.len() {
            for b in (a + 1)..g.len() {
                if g.has_edge(a, b) == self.comparable(a, b) {
                    return Err(SolveError::Order(format!(
                        "nodes {:?} and {:?} are {} but {}",
                        g.name(a),
                        g.name(b),
                        if g.has_edge(a, b) { "adjacent" } else { "non-adjacent" },
                        if self.comparable(a, b) { "comparable" } else { "incomparable" },
                    )));
                }
            }
        }
        Ok(())
    }

    /// Finds an order whose incomparability graph is `g` by exhaustive
    /// orientation of the complement. Only for small graphs.
    pub fn find_for(g: &ColoredGraph) -> Result<PartialOrder, SolveError> {
        const LIMIT: usize = 12;
        if g.len() > LIMIT {
            return Err(SolveError::Order(format!(
                "orientation search is limited to {LIMIT} nodes, graph has {}",
                g.len()
            )));
        }
        let n = g.len();
        let comp: Vec<(NodeId, NodeId)> = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !g.has_edge(a, b))
            .collect();
        let mut dir = vec![0i8; comp.len()];
        // less[a][b]: 1 = a<b, -1 = b<a, 0 = unassigned/incomparable
        let mut rel = vec![vec![0i8; n]; n];
        if orient(&comp, 0, &mut dir, &mut rel) {
            let pairs: Vec<_> = comp
                .iter()
                .zip(&dir)
                .map(|(&(a, b), &d)| if d > 0 { (a, b) } else { (b, a) })
                .collect();
            let po = PartialOrder::from_pairs(n, &pairs)?;
            po.validate_cocomparability(g)?;
            Ok(po)
        } else {
            Err(SolveError::Order("graph is not a co-comparability graph".into()))
        }
    }
}

fn consistent(rel: &[Vec<i8>]) -> bool {
    // transitivity among assigned pairs: a<b, b<c must not have c<a or c||a-assigned-opposite
    let n = rel.len();
    for a in 0..n {
        for b in 0..n {
            if rel[a][b] != 1 {
                continue;
            }
            if rel[b].iter().zip(&rel[a]).any(|(&bc, &ac)| bc == 1 && ac == -1) {
                return false;
            }
        }
    }
    true
}

fn orient(comp: &[(NodeId, NodeId)], i: usize, dir: &mut [i8], rel: &mut [Vec<i8>]) -> bool {
    if i == comp.len() {
        // every comparable pair is oriented; the closure must add no new pair
        let n = rel.len();
        for a in 0..n {
            for b in 0..n {
                if rel[a][b] != 1 {
                    continue;
                }
                if rel[b].iter().zip(&rel[a]).any(|(&bc, &ac)| bc == 1 && ac != 1) {
                    return false;
                }
            }
        }
        return true;
    }
    let (a, b) = comp[i];
    for d in [1i8, -1] {
        dir[i] = d;
        rel[a][b] = d;
        rel[b][a] = -d;
        if consistent(rel) && orient(comp, i + 1, dir, rel) {
            return true;
        }
    }
    rel[a][b] = 0;
    rel[b][a] = 0;
    false
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrderFile {
    less: Vec<(String, String)>,
}

/// Parses an order file `{"less": [["a", "b"], ...]}` against `g`'s node names.
pub fn load_order(text: &str, g: &ColoredGraph) -> Result<PartialOrder, SolveError> {
    let file: OrderFile = serde_json::from_str(text).map_err(|e| {
        SolveError::Graph(GraphError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    })?;
    let mut pairs = Vec::with_capacity(file.less.len());
    for (a, b) in &file.less {
        let look = |n: &String| {
            g.id(n).ok_or_else(|| {
                SolveError::Graph(GraphError::UnknownReference {
                    field: "less",
                    node: n.clone(),
                })
            })
        };
        pairs.push((look(a)?, look(b)?));
    }
    PartialOrder::from_pairs(g.len(), &pairs)
}

pub fn write_order(order: &PartialOrder, g: &ColoredGraph) -> String {
    let mut less: Vec<(String, String)> = order
        .pairs()
        .into_iter()
        .map(|(a, b)| (g.name(a).to_string(), g.name(b).to_string()))
        .collect();
    less.sort();
    let mut s = serde_json::to_string_pretty(&OrderFile { less }).expect("order serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_cycle_detection() {
        let po = PartialOrder::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(po.less(0, 2));
        assert!(po.is_minimal(0) && po.is_maximal(2));
        assert!(PartialOrder::from_pairs(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn path_is_cocomparability_of_its_order() {
        // P3 a-b-c: a and c comparable, b incomparable to both.
        let g = ColoredGraph::path(2, &[0, 1, 0]).unwrap();
        let po = PartialOrder::from_pairs(3, &[(0, 2)]).unwrap();
        po.validate_cocomparability(&g).unwrap();
        let wrong = PartialOrder::from_pairs(3, &[(0, 1)]).unwrap();
        assert!(wrong.validate_cocomparability(&g).is_err());
        let found = PartialOrder::find_for(&g).unwrap();
        found.validate_cocomparability(&g).unwrap();
    }

    #[test]
    fn c5_complement_has_no_order() {
        // The complement of C5 is C5, which is not a comparability graph.
        let c5 = ColoredGraph::from_colors(1, &[0; 5], &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert!(PartialOrder::find_for(&c5).is_err());
    }

    #[test]
    fn order_file_round_trip() {
        let g = ColoredGraph::path(2, &[0, 1, 0]).unwrap();
        let po = PartialOrder::from_pairs(3, &[(0, 2)]).unwrap();
        let text = write_order(&po, &g);
        assert_eq!(load_order(&text, &g).unwrap(), po);
    }
}
