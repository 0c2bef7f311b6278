use std::collections::HashMap;
use std::time::Instant;

use crate::graph::{Color, ColoredGraph, NodeId};
use crate::nodeset::NodeSet;

use super::{check_start, solve_greedy, Method, SolveError, SolveResult, Stats};

/// Breadth-first search over conquered territories.
///
/// Layers are expanded in the order their sequences were found and colors are
/// tried in ascending order, so the first sequence reaching the full node set
/// is the lexicographically smallest among the shortest ones.
pub(crate) fn territory_bfs(
    g: &ColoredGraph,
    start: NodeId,
    max_depth: Option<usize>,
    budget: usize,
) -> Result<Option<(Vec<Color>, usize)>, SolveError> {
    let full = g.len();
    let colors = g.used_colors();
    let root = g.singleton(start);
    if root.len() == full {
        return Ok(Some((Vec::new(), 1)));
    }
    // parent index and the call leading to each discovered state
    let mut parents: Vec<(usize, Color)> = vec![(usize::MAX, 0)];
    let mut states: Vec<NodeSet> = vec![root.clone()];
    let mut seen: HashMap<NodeSet, ()> = HashMap::from([(root, ())]);
    let mut layer = vec![0usize];
    let mut depth = 0;
    let mut expanded = 0;
    while !layer.is_empty() {
        if max_depth.is_some_and(|d| depth >= d) {
            return Ok(None);
        }
        let mut next = Vec::new();
        for &idx in &layer {
            expanded += 1;
            let w = states[idx].clone();
            for &c in &colors {
                let nw = g.step(&w, c);
                if nw.len() == w.len() || seen.contains_key(&nw) {
                    continue;
                }
                if seen.len() >= budget {
                    return Err(SolveError::BudgetExceeded {
                        budget,
                        frontier: layer.len() + next.len(),
                        incumbent_len: 0,
                        incumbent: Vec::new(),
                    });
                }
                let done = nw.len() == full;
                seen.insert(nw.clone(), ());
                states.push(nw);
                parents.push((idx, c));
                let id = states.len() - 1;
                if done {
                    let mut seq = Vec::new();
                    let mut cur = id;
                    while cur != 0 {
                        let (p, c) = parents[cur];
                        seq.push(c);
                        cur = p;
                    }
                    seq.reverse();
                    return Ok(Some((seq, expanded)));
                }
                next.push(id);
            }
        }
        layer = next;
        depth += 1;
    }
    Ok(None)
}

/// Minimum-length full conquest from `start` by exhaustive search.
///
/// `budget` bounds the number of distinct territories stored.
pub fn solve_exact(g: &ColoredGraph, start: NodeId, budget: usize) -> Result<SolveResult, SolveError> {
    check_start(g, start)?;
    let t0 = Instant::now();
    match territory_bfs(g, start, None, budget) {
        Ok(Some((seq, expanded))) => Ok(SolveResult::new(
            g,
            start,
            Method::Exact,
            seq,
            Stats {
                expanded,
                elapsed: t0.elapsed(),
                ..Stats::default()
            },
        )),
        Ok(None) => unreachable!("a connected graph is always fully conquerable"),
        Err(SolveError::BudgetExceeded { budget, frontier, .. }) => {
            let incumbent = solve_greedy(g, start)?.sequence;
            Err(SolveError::BudgetExceeded {
                budget,
                frontier,
                incumbent_len: incumbent.len(),
                incumbent,
            })
        }
        Err(e) => Err(e),
    }
}
