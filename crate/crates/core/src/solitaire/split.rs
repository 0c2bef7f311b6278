use std::time::Instant;

use crate::graph::{ColoredGraph, NodeId};

use super::exact::territory_bfs;
use super::{check_start, solve_greedy, Method, SolveError, SolveResult, Stats};

/// Checks that `clique` is a clique and its complement an independent set.
pub fn validate_split(g: &ColoredGraph, clique: &[NodeId]) -> Result<(), SolveError> {
    let mut in_clique = vec![false; g.len()];
    for &v in clique {
        if v >= g.len() {
            return Err(SolveError::NotSplit(format!("node {v} out of range")));
        }
        in_clique[v] = true;
    }
    for (i, &a) in clique.iter().enumerate() {
        for &b in &clique[i + 1..] {
            if !g.has_edge(a, b) {
                return Err(SolveError::NotSplit(format!(
                    "clique nodes {:?} and {:?} are not adjacent",
                    g.name(a),
                    g.name(b)
                )));
            }
        }
    }
    for (a, b) in g.edges() {
        if !in_clique[a] && !in_clique[b] {
            return Err(SolveError::NotSplit(format!(
                "independent nodes {:?} and {:?} are adjacent",
                g.name(a),
                g.name(b)
            )));
        }
    }
    Ok(())
}

/// Optimal conquest of a split graph by searching all sequences of length at
/// most twice the number of used colors (plus one entering call when the
/// start lies on the independent side).
///
/// From a clique start, one pass over the colors conquers the clique and a
/// second pass conquers every independent node, so the bound always admits
/// a solution.
pub fn solve_split_bounded(
    g: &ColoredGraph,
    start: NodeId,
    clique: &[NodeId],
    budget: usize,
) -> Result<SolveResult, SolveError> {
    check_start(g, start)?;
    validate_split(g, clique)?;
    let t0 = Instant::now();
    let entering = usize::from(!clique.contains(&start));
    let bound = 2 * g.used_colors().len() + entering;
    match territory_bfs(g, start, Some(bound), budget) {
        Ok(Some((seq, expanded))) => Ok(SolveResult::new(
            g,
            start,
            Method::Split,
            seq,
            Stats {
                expanded,
                elapsed: t0.elapsed(),
                ..Stats::default()
            },
        )),
        Ok(None) => unreachable!("two passes over the colors conquer a split graph"),
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{brute_fvs, gen_fvs_split, Digraph};
    use crate::solitaire::solve_exact;

    #[test]
    fn clique_of_three_colors() {
        let g = ColoredGraph::from_colors(3, &[0, 1, 2], &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let r = solve_split_bounded(&g, 0, &[0, 1, 2], 1 << 16).unwrap();
        assert_eq!(r.length, 2);
        assert_eq!(r.sequence, vec![1, 2]);
    }

    #[test]
    fn rejects_non_split_partition() {
        let g = ColoredGraph::path(2, &[0, 1, 0, 1]).unwrap();
        assert!(solve_split_bounded(&g, 0, &[0, 1], 100).is_err());
        assert!(validate_split(&g, &[1, 2]).is_ok());
    }

    #[test]
    fn fvs_instances() {
        // acyclic 3-node digraph: brute FVS gives 0, so the optimum is |X|
        let dag = Digraph::new(3, vec![(0, 1), (1, 2), (0, 2)], 0).unwrap();
        assert_eq!(brute_fvs(&dag).unwrap().0, 0);
        let art = gen_fvs_split(&dag);
        let clique = art.instance.clique.clone().unwrap();
        let g = &art.instance.graph;
        let v0 = art.instance.start.unwrap();
        let r = solve_split_bounded(g, v0, &clique, 1 << 20).unwrap();
        assert_eq!(r.length, 3);
        assert_eq!(r.length, solve_exact(g, v0, 1 << 20).unwrap().length);

        // directed 2-cycle: FVS 1, optimum |X| + 1 = 3
        let two = Digraph::new(2, vec![(0, 1), (1, 0)], 1).unwrap();
        assert_eq!(brute_fvs(&two).unwrap().0, 1);
        let art = gen_fvs_split(&two);
        let clique = art.instance.clique.clone().unwrap();
        let r = solve_split_bounded(&art.instance.graph, art.instance.start.unwrap(), &clique, 1 << 20).unwrap();
        assert_eq!(r.length, 3);
    }
}
