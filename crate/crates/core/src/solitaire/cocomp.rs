//! Solitaire on co-comparability graphs.
//!
//! Nodes are elements of a partial order and two nodes are adjacent exactly
//! when they are incomparable. After contracting monochromatic components
//! every color class is a chain. The solvers:
//!
//! * [`extremal_shortest_path`]: start at a minimal (or, by reversal,
//!   maximal) element. Every node gets weight 0 if it is the largest node of
//!   its color and 1 otherwise; the optimum is the cheapest node-weighted
//!   path from the start to a maximal element plus one call per color still
//!   to finish.
//! * [`extremal_dp`]: the same table, but `D(v)` only looks at the smallest
//!   neighbor of each color. It can overshoot the optimum, so it is kept for
//!   comparison only.
//! * [`pair_dp`]: the two-frontier table `D(v, w)` for interior starts, with
//!   the step cost rule charging 0 when the conquered node is the second
//!   extremal node of its color class. It can overshoot as well.
//! * [`band_search`]: a uniform-cost search over (nodes strictly above the
//!   territory, nodes strictly below it, colors with pending free nodes).
//!   A free node that is neither above nor below every territory node is
//!   adjacent to the territory, so these three sets determine the future
//!   exactly.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::time::Instant;

use crate::graph::{Color, ColoredGraph, NodeId, NodeSpec};
use crate::nodeset::NodeSet;

use super::order::PartialOrder;
use super::{check_start, Method, SolveError, SolveResult, Stats};

/// A co-comparability instance after contraction.
///
/// Every monochromatic component becomes one node, except that the start
/// node is kept on its own; the rest of its component may split into several
/// pieces, each adjacent to the start.
#[derive(Debug, Clone)]
pub struct CocompInstance {
    pub graph: ColoredGraph,
    pub order: PartialOrder,
    pub start: NodeId,
    /// Original node id to contracted node id.
    pub map: Vec<NodeId>,
}

impl CocompInstance {
    pub fn prepare(g: &ColoredGraph, order: &PartialOrder, start: NodeId) -> Result<Self, SolveError> {
        check_start(g, start)?;
        order.validate_cocomparability(g)?;
        const UNSET: usize = usize::MAX;
        let n = g.len();
        let mut map = vec![UNSET; n];
        let mut members: Vec<Vec<NodeId>> = Vec::new();
        map[start] = 0;
        members.push(vec![start]);
        for root in 0..n {
            if map[root] != UNSET {
                continue;
            }
            let id = members.len();
            let c = g.color(root);
            map[root] = id;
            let mut comp = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &u in g.neighbors(v) {
                    if g.color(u) == c && map[u] == UNSET {
                        map[u] = id;
                        comp.push(u);
                        queue.push_back(u);
                    }
                }
            }
            members.push(comp);
        }
        // relabel so that contracted ids follow the smallest original member
        let mut by_first: Vec<usize> = (0..members.len()).collect();
        by_first.sort_by_key(|&i| members[i].iter().min().copied());
        let mut relabel = vec![0; members.len()];
        for (new, &old) in by_first.iter().enumerate() {
            relabel[old] = new;
        }
        for m in map.iter_mut() {
            *m = relabel[*m];
        }
        let members: Vec<Vec<NodeId>> = by_first.iter().map(|&i| members[i].clone()).collect();
        let nodes = members
            .iter()
            .map(|comp| {
                let first = *comp.iter().min().unwrap();
                NodeSpec::weighted(
                    g.name(first).to_string(),
                    g.color(first),
                    comp.iter().map(|&v| g.weight(v)).sum(),
                )
            })
            .collect();
        let mut edges = BTreeSet::new();
        for (a, b) in g.edges() {
            let (x, y) = (map[a], map[b]);
            if x != y {
                edges.insert((x.min(y), x.max(y)));
            }
        }
        let edges: Vec<_> = edges.into_iter().collect();
        let graph = ColoredGraph::new(g.k(), nodes, &edges)?;
        let m = members.len();
        let mut pairs = Vec::new();
        for x in 0..m {
            for y in 0..m {
                if x == y || graph.has_edge(x, y) {
                    continue;
                }
                let below = members[x]
                    .iter()
                    .all(|&a| members[y].iter().all(|&b| order.less(a, b)));
                let above = members[x]
                    .iter()
                    .all(|&a| members[y].iter().all(|&b| order.less(b, a)));
                if below {
                    pairs.push((x, y));
                } else if !above {
                    return Err(SolveError::Order(format!(
                        "contracted components of {:?} and {:?} are not comparable",
                        graph.name(x),
                        graph.name(y)
                    )));
                }
            }
        }
        let corder = PartialOrder::from_pairs(m, &pairs)?;
        corder.validate_cocomparability(&graph)?;
        Ok(CocompInstance {
            start: map[start],
            graph,
            order: corder,
            map,
        })
    }

    /// Number of colors that still need a completing call: every used color
    /// except one whose whole class is the start node.
    pub fn colors_to_finish(&self) -> usize {
        let g = &self.graph;
        let own = g.color_class(g.color(self.start));
        g.used_colors().len() - usize::from(own.len() == 1)
    }

    pub fn is_proper(&self) -> bool {
        self.graph.is_properly_colored()
    }

    /// Largest node of each color class (classes are chains when proper).
    fn class_extreme(&self, order: &PartialOrder) -> Vec<Option<NodeId>> {
        let g = &self.graph;
        (0..g.k())
            .map(|c| {
                let cls = g.color_class(c);
                let top = cls.iter().find(|&v| cls.iter().all(|u| u == v || order.less(u, v)));
                top
            })
            .collect()
    }
}

/// Result of a DP route: optimal value and a witness sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpOutcome {
    pub value: usize,
    pub witness: Vec<Color>,
    pub expanded: usize,
}

fn finish_sequence(g: &ColoredGraph, start: NodeId, mut calls: Vec<Color>) -> Vec<Color> {
    let w = g.conquer(&g.singleton(start), &calls);
    for c in g.used_colors() {
        if !g.color_class(c).is_subset(&w) {
            calls.push(c);
        }
    }
    calls
}

/// Orients the instance so that the start is minimal, if it is extremal at all.
fn extremal_order(inst: &CocompInstance) -> Option<PartialOrder> {
    if inst.order.is_minimal(inst.start) {
        Some(inst.order.clone())
    } else if inst.order.is_maximal(inst.start) {
        Some(inst.order.reversed())
    } else {
        None
    }
}

fn max_weights(inst: &CocompInstance, order: &PartialOrder) -> Vec<usize> {
    let maxes = inst.class_extreme(order);
    (0..inst.graph.len())
        .map(|v| usize::from(maxes[inst.graph.color(v) as usize] != Some(v)))
        .collect()
}

/// Node-weighted shortest paths from the start; `restrict_to_smallest`
/// only relaxes `u -> v` when `u` is the smallest node of its color adjacent
/// to `v`, which is the table recurrence `D(v) = min_c D(min_v(c)) + δ_v`.
fn weighted_paths(
    inst: &CocompInstance,
    order: &PartialOrder,
    restrict_to_smallest: bool,
) -> (Vec<usize>, Vec<usize>, usize) {
    let g = &inst.graph;
    let weight = max_weights(inst, order);
    let n = g.len();
    let mut dist = vec![usize::MAX; n];
    let mut pred = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[inst.start] = 0;
    heap.push(Reverse((0usize, inst.start)));
    let mut expanded = 0;
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        expanded += 1;
        for &v in g.neighbors(u) {
            if restrict_to_smallest {
                let smallest = g
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&x| g.color(x) == g.color(u))
                    .find(|&x| g.neighbors(v).iter().all(|&y| g.color(y) != g.color(u) || y == x || order.less(x, y)));
                if smallest != Some(u) {
                    continue;
                }
            }
            let nd = d + weight[v];
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = u;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    (dist, pred, expanded)
}

fn extremal_route(inst: &CocompInstance, restrict: bool) -> Result<DpOutcome, SolveError> {
    if !inst.is_proper() {
        return Err(SolveError::Order("extremal table needs a proper coloring at the start".into()));
    }
    let order = extremal_order(inst).ok_or_else(|| SolveError::Order("start is not an extremal element".into()))?;
    let (dist, pred, expanded) = weighted_paths(inst, &order, restrict);
    let g = &inst.graph;
    let target = (0..g.len())
        .filter(|&w| order.is_maximal(w) && dist[w] != usize::MAX)
        .min_by_key(|&w| (dist[w], w))
        .expect("some maximal element is reachable in a connected graph");
    let mut path = vec![target];
    while *path.last().unwrap() != inst.start {
        path.push(pred[*path.last().unwrap()]);
    }
    path.reverse();
    let calls = path[1..].iter().map(|&v| g.color(v)).collect();
    Ok(DpOutcome {
        value: dist[target] + inst.colors_to_finish(),
        witness: finish_sequence(g, inst.start, calls),
        expanded,
    })
}

/// The extremal-start table `D(v)`.
pub fn extremal_dp(inst: &CocompInstance) -> Result<DpOutcome, SolveError> {
    extremal_route(inst, true)
}

/// The same optimum as a plain node-weighted shortest path over all edges.
pub fn extremal_shortest_path(inst: &CocompInstance) -> Result<DpOutcome, SolveError> {
    extremal_route(inst, false)
}

/// The two-frontier table for arbitrary starts.
///
/// `D(v, w)` is the cheapest essential cost of reaching down-node `v` (below
/// or incomparable to the start) and up-node `w` (above or incomparable).
/// A step conquering node `x` is free when `x` is an extremal node of its
/// class and the class's other extremal node lies between the two frontier
/// nodes or is incomparable to one of them. Cells are settled in order of
/// increasing cost. The answer is the cheapest cell with a minimal `v` and
/// a maximal `w`, plus the number of colors to finish.
pub fn pair_dp(inst: &CocompInstance) -> Result<DpOutcome, SolveError> {
    if !inst.is_proper() {
        return Err(SolveError::Order("two-frontier table needs a proper coloring at the start".into()));
    }
    let g = &inst.graph;
    let po = &inst.order;
    let s = inst.start;
    let n = g.len();
    let maxes = inst.class_extreme(po);
    let mins = inst.class_extreme(&po.reversed());
    let down_ok = |v: NodeId| v == s || !po.less(s, v);
    let up_ok = |w: NodeId| w == s || !po.less(w, s);
    let between = |a: NodeId, y: NodeId, b: NodeId| {
        y == a || y == b || (po.less(a, y) && po.less(y, b)) || (po.less(b, y) && po.less(y, a))
    };
    // cost of conquering x while `other` is the opposite frontier node
    let delta = |other: NodeId, x: NodeId| -> usize {
        let c = g.color(x) as usize;
        let (lo, hi) = (mins[c].unwrap(), maxes[c].unwrap());
        if x != lo && x != hi {
            return 1;
        }
        if lo == hi {
            return 0;
        }
        let y = if x == lo { hi } else { lo };
        let free = between(other, y, x) || !po.comparable(y, other) || !po.comparable(y, x);
        usize::from(!free)
    };
    let idx = |v: NodeId, w: NodeId| v * n + w;
    let mut dist = vec![usize::MAX; n * n];
    let mut pred: Vec<Option<(usize, Color)>> = vec![None; n * n];
    let mut heap = BinaryHeap::new();
    dist[idx(s, s)] = 0;
    heap.push(Reverse((0usize, s, s)));
    let mut expanded = 0;
    while let Some(Reverse((d, v, w))) = heap.pop() {
        if d > dist[idx(v, w)] {
            continue;
        }
        expanded += 1;
        let mut relax = |nv: NodeId, nw: NodeId, cost: usize, c: Color, heap: &mut BinaryHeap<_>| {
            let nd = d + cost;
            if nd < dist[idx(nv, nw)] {
                dist[idx(nv, nw)] = nd;
                pred[idx(nv, nw)] = Some((idx(v, w), c));
                heap.push(Reverse((nd, nv, nw)));
            }
        };
        for &nw in g.neighbors(w) {
            if up_ok(nw) {
                relax(v, nw, delta(v, nw), g.color(nw), &mut heap);
            }
        }
        for &nv in g.neighbors(v) {
            if down_ok(nv) {
                relax(nv, w, delta(w, nv), g.color(nv), &mut heap);
            }
        }
    }
    let best = (0..n)
        .flat_map(|v| (0..n).map(move |w| (v, w)))
        .filter(|&(v, w)| po.is_minimal(v) && po.is_maximal(w) && dist[idx(v, w)] != usize::MAX)
        .min_by_key(|&(v, w)| (dist[idx(v, w)], v, w))
        .expect("some (minimal, maximal) cell is reachable");
    let mut calls = Vec::new();
    let mut cur = idx(best.0, best.1);
    while let Some((p, c)) = pred[cur] {
        calls.push(c);
        cur = p;
    }
    calls.reverse();
    Ok(DpOutcome {
        value: dist[idx(best.0, best.1)] + inst.colors_to_finish(),
        witness: finish_sequence(g, s, calls),
        expanded,
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Band {
    up: NodeSet,
    down: NodeSet,
    pending: u64,
}

/// Exact uniform-cost search over bands (see module docs).
pub fn band_search(inst: &CocompInstance, budget: usize) -> Result<DpOutcome, SolveError> {
    let g = &inst.graph;
    let po = &inst.order;
    if g.k() > 64 {
        return Err(SolveError::Order("band search supports at most 64 colors".into()));
    }
    let s = inst.start;
    let colors_of = |set: &NodeSet| set.iter().fold(0u64, |m, v| m | (1 << g.color(v)));
    let up = po.above(s).clone();
    let down = po.below(s).clone();
    let mut middle_free = g.all_nodes();
    middle_free.difference_with(&up);
    middle_free.difference_with(&down);
    middle_free.difference_with(&g.singleton(s));
    let root = Band {
        pending: colors_of(&middle_free),
        up,
        down,
    };
    let classes: Vec<NodeSet> = (0..g.k()).map(|c| g.color_class(c)).collect();
    let mut states = vec![root.clone()];
    let mut parents: Vec<(usize, Color)> = vec![(usize::MAX, 0)];
    let mut seen = HashMap::from([(root, 0usize)]);
    let mut layer = vec![0usize];
    let mut expanded = 0;
    let mut goal = None;
    'search: while !layer.is_empty() {
        let mut next = Vec::new();
        for &id in &layer {
            let st = states[id].clone();
            if st.up.is_empty() && st.down.is_empty() && st.pending == 0 {
                goal = Some(id);
                break 'search;
            }
            expanded += 1;
            for c in 0..g.k() {
                if st.pending & (1 << c) == 0 {
                    continue;
                }
                let mut mid_c = classes[c as usize].clone();
                mid_c.difference_with(&st.up);
                mid_c.difference_with(&st.down);
                let mut up = st.up.clone();
                let mut down = st.down.clone();
                for x in mid_c.iter() {
                    up.intersect_with(po.above(x));
                    down.intersect_with(po.below(x));
                }
                let entered = st.up.difference(&up).union(&st.down.difference(&down));
                let pending = (st.pending & !(1 << c)) | colors_of(&entered);
                let band = Band { up, down, pending };
                if seen.contains_key(&band) {
                    continue;
                }
                if seen.len() >= budget {
                    return Err(SolveError::BudgetExceeded {
                        budget,
                        frontier: layer.len() + next.len(),
                        incumbent: Vec::new(),
                        incumbent_len: 0,
                    });
                }
                states.push(band.clone());
                parents.push((id, c));
                seen.insert(band, states.len() - 1);
                next.push(states.len() - 1);
            }
        }
        layer = next;
    }
    let goal = goal.expect("the full band is always reachable");
    let mut calls = Vec::new();
    let mut cur = goal;
    while cur != 0 {
        let (p, c) = parents[cur];
        calls.push(c);
        cur = p;
    }
    calls.reverse();
    Ok(DpOutcome {
        value: calls.len(),
        witness: calls,
        expanded,
    })
}

/// Optimal solitaire sequence on a co-comparability graph with its order.
///
/// Extremal starts with a proper coloring use the node-weighted shortest
/// path; everything else goes through [`band_search`].
pub fn solve_cocomp(g: &ColoredGraph, order: &PartialOrder, start: NodeId, budget: usize) -> Result<SolveResult, SolveError> {
    let t0 = Instant::now();
    let inst = CocompInstance::prepare(g, order, start)?;
    let (route, outcome) = if inst.is_proper() && extremal_order(&inst).is_some() {
        ("extremal", extremal_shortest_path(&inst)?)
    } else {
        ("band", band_search(&inst, budget)?)
    };
    // sequences on the contracted instance replay identically on the original
    debug_assert!(super::replays_to_full(g, start, &outcome.witness));
    Ok(SolveResult::new(
        g,
        start,
        Method::Cocomp,
        outcome.witness,
        Stats {
            expanded: outcome.expanded,
            dp_value: Some(outcome.value),
            route: Some(route.to_string()),
            elapsed: t0.elapsed(),
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EssentialMode {
    /// Free steps conquer the largest node of a class (start minimal), or the
    /// smallest one (start maximal).
    Extremal,
    /// Free steps conquer the second extremal node of a class.
    General,
}

/// Essential length of `calls` from `start`.
///
/// Needs a proper coloring so that color classes are chains.
pub fn essential_length(
    g: &ColoredGraph,
    order: &PartialOrder,
    start: NodeId,
    calls: &[Color],
    mode: EssentialMode,
) -> Result<usize, SolveError> {
    check_start(g, start)?;
    order.validate_cocomparability(g)?;
    if !g.is_properly_colored() {
        return Err(SolveError::Order("color classes are not chains: contract the graph first".into()));
    }
    let order = match mode {
        EssentialMode::Extremal if order.is_minimal(start) => order.clone(),
        EssentialMode::Extremal if order.is_maximal(start) => order.reversed(),
        EssentialMode::Extremal => {
            return Err(SolveError::Order("extremal mode needs a minimal or maximal start".into()))
        }
        EssentialMode::General => order.clone(),
    };
    let extreme = |o: &PartialOrder, c: Color| {
        let cls = g.color_class(c);
        let top = cls.iter().find(|&v| cls.iter().all(|u| u == v || o.less(u, v)));
        top
    };
    let maxes: Vec<_> = (0..g.k()).map(|c| extreme(&order, c)).collect();
    let rev = order.reversed();
    let mins: Vec<_> = (0..g.k()).map(|c| extreme(&rev, c)).collect();
    let mut w = g.singleton(start);
    let mut free = 0;
    for &c in calls {
        let next = g.step(&w, c);
        let hit = (0..g.k() as usize).any(|col| {
            let (Some(hi), Some(lo)) = (maxes[col], mins[col]) else {
                return false;
            };
            match mode {
                EssentialMode::Extremal => !w.contains(hi) && next.contains(hi),
                EssentialMode::General => {
                    let before = w.contains(hi) && w.contains(lo);
                    let after = next.contains(hi) && next.contains(lo);
                    !before && after
                }
            }
        });
        free += usize::from(hit);
        w = next;
    }
    Ok(calls.len() - free)
}
