use std::time::Instant;

use crate::graph::{ColoredGraph, NodeId};

use super::{check_start, Method, SolveError, SolveResult, Stats};

/// Repeatedly calls the color with the largest immediate weight gain,
/// smallest color first on ties.
pub fn solve_greedy(g: &ColoredGraph, start: NodeId) -> Result<SolveResult, SolveError> {
    check_start(g, start)?;
    let t0 = Instant::now();
    let mut w = g.singleton(start);
    let mut seq = Vec::new();
    let mut expanded = 0;
    while w.len() < g.len() {
        expanded += 1;
        let (best, gain) = (0..g.k())
            .map(|c| (c, g.gain(&w, c)))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        // connected graph with free nodes: some neighbor color always gains
        assert!(gain > 0, "no gaining color on a connected graph");
        w = g.step(&w, best);
        seq.push(best);
    }
    Ok(SolveResult::new(
        g,
        start,
        Method::Greedy,
        seq,
        Stats {
            expanded,
            elapsed: t0.elapsed(),
            ..Stats::default()
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solitaire::solve_exact;

    #[test]
    fn greedy_examples() {
        let p = ColoredGraph::path(2, &[0, 1, 0]).unwrap();
        assert_eq!(solve_greedy(&p, 0).unwrap().sequence, vec![1, 0]);

        let star = ColoredGraph::from_colors(3, &[0, 1, 1, 1, 2], &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(solve_greedy(&star, 0).unwrap().sequence, vec![1, 2]);
    }

    #[test]
    fn greedy_can_be_beaten() {
        // v0(0) has a heavy color-1 lure on one side and a short route to
        // everything else on the other. Greedy takes the lure first.
        //
        //   lure: v0 - 1 - 1 - 1            (three nodes of color 1, dead end)
        //   route: v0 - 2 - 1 - 3 - 2 - 3   (alternating)
        let colors = [0, 1, 1, 1, 2, 1, 3, 2, 3];
        let edges = [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7), (7, 8)];
        let g = ColoredGraph::from_colors(4, &colors, &edges).unwrap();
        let greedy = solve_greedy(&g, 0).unwrap();
        let exact = solve_exact(&g, 0, 1 << 16).unwrap();
        assert!(greedy.length > exact.length, "greedy {:?} exact {:?}", greedy.sequence, exact.sequence);
    }
}
