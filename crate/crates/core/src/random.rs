//! Seeded random instance families used by sweeps, simulations and tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Color, ColoredGraph, NodeId};
use crate::solitaire::PartialOrder;

/// Connected graph: a random recursive tree plus each remaining pair with
/// probability `extra`; colors uniform in `0..k`.
pub fn connected_graph<R: Rng>(rng: &mut R, n: usize, k: u32, extra: f64) -> ColoredGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if !edges.contains(&(a, b)) && rng.gen_bool(extra) {
                edges.push((a, b));
            }
        }
    }
    let colors: Vec<Color> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    ColoredGraph::from_colors(k, &colors, &edges).expect("tree plus edges is connected")
}

/// Connected permutation graph with its two-dimensional order: element `i`
/// is below `j` when `i < j` and `perm[i] < perm[j]`. Resamples the
/// permutation until the incomparability graph is connected.
pub fn permutation_instance<R: Rng>(rng: &mut R, n: usize, k: u32) -> (ColoredGraph, PartialOrder) {
    loop {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let less = |a: NodeId, b: NodeId| a < b && perm[a] < perm[b];
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if !less(a, b) && !less(b, a) {
                    edges.push((a, b));
                }
            }
        }
        let colors: Vec<Color> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        if let Ok(g) = ColoredGraph::from_colors(k, &colors, &edges) {
            let po = PartialOrder::from_fn(n, less).expect("dominance order is a partial order");
            return (g, po);
        }
    }
}

/// A random outerplanar instance with its outer-face walk.
#[derive(Debug, Clone)]
pub struct OuterplanarInstance {
    pub graph: ColoredGraph,
    pub walk: Vec<NodeId>,
    pub a0: NodeId,
    pub b0: NodeId,
}

/// Either a polygon with random non-crossing chords (outer walk = the
/// polygon) or a random tree (outer walk = its Euler tour). Start nodes
/// appear exactly once on the walk.
pub fn outerplanar_instance<R: Rng>(rng: &mut R, n: usize, k: u32) -> OuterplanarInstance {
    assert!(n >= 3);
    loop {
        let colors: Vec<Color> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let (edges, walk) = if rng.gen_bool(0.7) {
            polygon_with_chords(rng, n)
        } else {
            tree_with_tour(rng, n)
        };
        let once: Vec<NodeId> = (0..n)
            .filter(|&v| walk.iter().filter(|&&x| x == v).count() == 1)
            .collect();
        if once.len() < 2 {
            continue;
        }
        let a0 = once[rng.gen_range(0..once.len())];
        let b0 = loop {
            let b = once[rng.gen_range(0..once.len())];
            if b != a0 {
                break b;
            }
        };
        let graph = ColoredGraph::from_colors(k, &colors, &edges).expect("outerplanar generator is connected");
        return OuterplanarInstance { graph, walk, a0, b0 };
    }
}

fn polygon_with_chords<R: Rng>(rng: &mut R, n: usize) -> (Vec<(NodeId, NodeId)>, Vec<NodeId>) {
    let mut edges: Vec<(NodeId, NodeId)> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
    let crosses = |(a, b): (usize, usize), (c, d): (usize, usize)| {
        // chords of a convex polygon cross iff endpoints strictly interleave
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    };
    let mut chords: Vec<(usize, usize)> = Vec::new();
    let attempts = rng.gen_range(0..=n);
    for _ in 0..attempts {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let (a, b) = (a.min(b), a.max(b));
        if b - a < 2 || (a == 0 && b == n - 1) || edges.contains(&(a, b)) {
            continue;
        }
        if chords.iter().any(|&ch| crosses(ch, (a, b))) {
            continue;
        }
        chords.push((a, b));
        edges.push((a, b));
    }
    (edges, (0..n).collect())
}

fn tree_with_tour<R: Rng>(rng: &mut R, n: usize) -> (Vec<(NodeId, NodeId)>, Vec<NodeId>) {
    let mut children = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for v in 1..n {
        let p = rng.gen_range(0..v);
        children[p].push(v);
        edges.push((p, v));
    }
    // closed walk around the tree, each node listed when the walk arrives
    fn tour(v: usize, children: &[Vec<usize>], out: &mut Vec<usize>) {
        out.push(v);
        for &c in &children[v] {
            tour(c, children, out);
            out.push(v);
        }
    }
    let mut walk = Vec::new();
    tour(0, &children, &mut walk);
    walk.pop(); // the closing return to the root
    (edges, walk)
}
