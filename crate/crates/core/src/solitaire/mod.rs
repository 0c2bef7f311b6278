//! Single-player conquest: find a shortest color sequence that conquers the
//! whole graph from one start node.

mod cocomp;
mod exact;
mod greedy;
pub mod order;
mod split;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Color, ColoredGraph, GraphError, NodeId};

pub use cocomp::{
    band_search, essential_length, extremal_dp, extremal_shortest_path, pair_dp, solve_cocomp,
    CocompInstance, EssentialMode,
};
pub use exact::solve_exact;
pub use greedy::solve_greedy;
pub use order::PartialOrder;
pub use split::{solve_split_bounded, validate_split};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("start node {0} is not in the graph")]
    BadStart(NodeId),
    #[error("state budget of {budget} exceeded with a frontier of {frontier} states; best known sequence has length {incumbent_len}")]
    BudgetExceeded {
        budget: usize,
        frontier: usize,
        incumbent: Vec<Color>,
        incumbent_len: usize,
    },
    #[error("order: {0}")]
    Order(String),
    #[error("not a split graph: {0}")]
    NotSplit(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Greedy,
    Cocomp,
    Split,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
            Method::Cocomp => "cocomp",
            Method::Split => "split",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Method::Exact),
            "greedy" => Ok(Method::Greedy),
            "cocomp" => Ok(Method::Cocomp),
            "split" => Ok(Method::Split),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    /// Search states (or DP cells) expanded.
    pub expanded: usize,
    /// Optimal value predicted by a DP, when the method has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dp_value: Option<usize>,
    /// Which DP route produced the answer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    /// Wall time. Not serialized, so that results stay byte-identical across runs.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub method: Method,
    pub length: usize,
    pub essential_length: usize,
    pub sequence: Vec<Color>,
    pub stats: Stats,
}

impl SolveResult {
    pub(crate) fn new(g: &ColoredGraph, start: NodeId, method: Method, sequence: Vec<Color>, stats: Stats) -> Self {
        SolveResult {
            method,
            length: sequence.len(),
            essential_length: completing_steps_removed(g, start, &sequence),
            sequence,
            stats,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }
}

/// `|calls|` minus the number of steps that conquer the last free node of
/// some color class. For a full conquest this equals
/// `|calls| - (number of colors not already finished at the start)`.
pub fn completing_steps_removed(g: &ColoredGraph, start: NodeId, calls: &[Color]) -> usize {
    let classes: Vec<_> = (0..g.k()).map(|c| g.color_class(c)).collect();
    let mut w = g.singleton(start);
    let mut free_steps = 0;
    for &c in calls {
        let next = g.step(&w, c);
        free_steps += classes
            .iter()
            .filter(|cls| !cls.is_empty() && !cls.is_subset(&w) && cls.is_subset(&next))
            .count();
        w = next;
    }
    calls.len() - free_steps.min(calls.len())
}

/// Replays `calls` from `start` and reports whether the whole graph is conquered.
pub fn replays_to_full(g: &ColoredGraph, start: NodeId, calls: &[Color]) -> bool {
    g.conquer(&g.singleton(start), calls).len() == g.len()
}

pub(crate) fn check_start(g: &ColoredGraph, start: NodeId) -> Result<(), SolveError> {
    if start >= g.len() {
        Err(SolveError::BadStart(start))
    } else {
        Ok(())
    }
}

/// Runs `method` from `start`. Co-comparability solving uses `order` when
/// given and otherwise searches for one; split solving needs the clique side.
pub fn solve(
    g: &ColoredGraph,
    start: NodeId,
    method: Method,
    order: Option<&PartialOrder>,
    clique: Option<&[NodeId]>,
    budget: usize,
) -> Result<SolveResult, SolveError> {
    match method {
        Method::Exact => solve_exact(g, start, budget),
        Method::Greedy => solve_greedy(g, start),
        Method::Cocomp => match order {
            Some(o) => solve_cocomp(g, o, start, budget),
            None => solve_cocomp(g, &PartialOrder::find_for(g)?, start, budget),
        },
        Method::Split => {
            let clique = clique.ok_or_else(|| SolveError::NotSplit("the instance declares no clique side".into()))?;
            solve_split_bounded(g, start, clique, budget)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn essential_plus_k_is_length_for_full_conquest() {
        let g = ColoredGraph::path(2, &[0, 1, 0]).unwrap();
        // start v0: color 0 is not finished at the start, so both steps complete a class
        assert_eq!(completing_steps_removed(&g, 0, &[1, 0]), 0);
        assert_eq!(completing_steps_removed(&g, 0, &[]), 0);
        let g = ColoredGraph::path(3, &[0, 1, 2, 0, 1]).unwrap();
        let calls = [1, 2, 0, 1];
        assert!(replays_to_full(&g, 0, &calls));
        assert_eq!(completing_steps_removed(&g, 0, &calls) + 3, calls.len());
    }

    #[test]
    fn method_parse() {
        assert_eq!("cocomp".parse::<Method>(), Ok(Method::Cocomp));
        assert!("dp".parse::<Method>().is_err());
    }
}
