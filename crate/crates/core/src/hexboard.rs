//! Honeycomb boards in axial coordinates (pointy-top) and their graphs.
//!
//! Generated boards are parallelograms `0 <= q < cols`, `0 <= r < rows`,
//! optionally with holes. The starts sit at the corners `(0, 0)` and
//! `(cols - 1, rows - 1)`, which are each other's image under the half-turn
//! about the board center.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Color, ColoredGraph, NodeSpec};
use crate::io::Instance;

pub type Hex = (i32, i32);

pub const NEIGHBOR_OFFSETS: [Hex; 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// How many sub-seeds the generator tries before giving up.
const MAX_REROLLS: u64 = 256;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoardError {
    #[error("invalid board parameters: {0}")]
    Params(String),
    #[error("invalid board: {0}")]
    Invalid(String),
    #[error("no valid board after {0} attempts: {1}")]
    Exhausted(u64, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    pub q: i32,
    pub r: i32,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HexBoard {
    pub k: u32,
    /// Sorted by `(r, q)`.
    pub cells: Vec<Cell>,
    pub start_a: Hex,
    pub start_b: Hex,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub symmetric: bool,
}

fn connected(cells: &BTreeSet<Hex>) -> bool {
    let Some(&first) = cells.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some((q, r)) = queue.pop_front() {
        for (dq, dr) in NEIGHBOR_OFFSETS {
            let h = (q + dq, r + dr);
            if cells.contains(&h) && seen.insert(h) {
                queue.push_back(h);
            }
        }
    }
    seen.len() == cells.len()
}

impl HexBoard {
    /// Validates and normalizes a board. `symmetric` is recorded only if the
    /// colors really are invariant under the half-turn.
    pub fn new(k: u32, mut cells: Vec<Cell>, start_a: Hex, start_b: Hex, symmetric: bool) -> Result<Self, BoardError> {
        cells.sort_by_key(|c| (c.r, c.q));
        let b = HexBoard {
            k,
            cells,
            start_a,
            start_b,
            symmetric,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn from_json(text: &str) -> Result<Self, BoardError> {
        let b: HexBoard = serde_json::from_str(text).map_err(|e| BoardError::Invalid(e.to_string()))?;
        HexBoard::new(b.k, b.cells, b.start_a, b.start_b, b.symmetric)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("board serializes")
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn color_map(&self) -> BTreeMap<Hex, Color> {
        self.cells.iter().map(|c| ((c.q, c.r), c.color)).collect()
    }

    pub fn validate(&self) -> Result<(), BoardError> {
        if self.k == 0 {
            return Err(BoardError::Invalid("k must be positive".into()));
        }
        let map = self.color_map();
        if map.len() != self.cells.len() {
            return Err(BoardError::Invalid("duplicate cell".into()));
        }
        if let Some(c) = self.cells.iter().find(|c| c.color >= self.k) {
            return Err(BoardError::Invalid(format!("cell ({}, {}) has color {} >= k = {}", c.q, c.r, c.color, self.k)));
        }
        for s in [self.start_a, self.start_b] {
            if !map.contains_key(&s) {
                return Err(BoardError::Invalid(format!("start ({}, {}) is not a cell", s.0, s.1)));
            }
        }
        if self.start_a == self.start_b && self.cells.len() > 1 {
            return Err(BoardError::Invalid("starts coincide".into()));
        }
        if !connected(&map.keys().copied().collect()) {
            return Err(BoardError::Invalid("cells are not connected".into()));
        }
        if self.symmetric && !self.is_symmetric() {
            return Err(BoardError::Invalid("colors are not invariant under the half-turn".into()));
        }
        Ok(())
    }

    /// The half-turn that maps the bounding box onto itself.
    pub fn rotate(&self, (q, r): Hex) -> Hex {
        let (q0, q1) = bounds(self.cells.iter().map(|c| c.q));
        let (r0, r1) = bounds(self.cells.iter().map(|c| c.r));
        (q0 + q1 - q, r0 + r1 - r)
    }

    /// Every cell's half-turn image is a cell of the same color.
    pub fn is_symmetric(&self) -> bool {
        let map = self.color_map();
        map.iter().all(|(&h, &c)| map.get(&self.rotate(h)) == Some(&c))
    }
}

fn bounds(it: impl Iterator<Item = i32>) -> (i32, i32) {
    it.fold((i32::MAX, i32::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

fn attempt(rows: i32, cols: i32, k: u32, symmetric: bool, holes: f64, seed: u64) -> Option<HexBoard> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rot = |(q, r): Hex| (cols - 1 - q, rows - 1 - r);
    let start_a = (0, 0);
    let start_b = rot(start_a);
    let mut colors = BTreeMap::new();
    for r in 0..rows {
        for q in 0..cols {
            let h = (q, r);
            if symmetric && colors.contains_key(&h) {
                continue;
            }
            let keep = h == start_a || h == start_b || !rng.gen_bool(holes);
            let c = rng.gen_range(0..k);
            if keep {
                colors.insert(h, Some(c));
                if symmetric {
                    colors.insert(rot(h), Some(c));
                }
            } else {
                colors.insert(h, None);
                if symmetric {
                    colors.insert(rot(h), None);
                }
            }
        }
    }
    let cells: Vec<Cell> = colors
        .into_iter()
        .filter_map(|((q, r), c)| c.map(|color| Cell { q, r, color }))
        .collect();
    if !connected(&cells.iter().map(|c| (c.q, c.r)).collect()) {
        return None;
    }
    HexBoard::new(k, cells, start_a, start_b, symmetric).ok()
}

fn check_params(rows: usize, cols: usize, k: u32, holes: f64) -> Result<(), BoardError> {
    if rows == 0 || cols == 0 {
        return Err(BoardError::Params("rows and cols must be at least 1".into()));
    }
    if rows > 1000 || cols > 1000 {
        return Err(BoardError::Params("rows and cols are capped at 1000".into()));
    }
    if !(2..=32).contains(&k) {
        return Err(BoardError::Params(format!("k = {k} is outside 2..=32")));
    }
    if !(0.0..0.5).contains(&holes) {
        return Err(BoardError::Params(format!("holes = {holes} is outside [0, 0.5)")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn generate(
    rows: usize,
    cols: usize,
    k: u32,
    seed: u64,
    symmetric: bool,
    holes: f64,
    accept: impl Fn(&HexBoard) -> bool,
    what: &str,
) -> Result<HexBoard, BoardError> {
    check_params(rows, cols, k, holes)?;
    for sub in 0..MAX_REROLLS {
        let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(sub);
        if let Some(b) = attempt(rows as i32, cols as i32, k, symmetric, holes, s) {
            if accept(&b) {
                return Ok(b);
            }
        }
    }
    Err(BoardError::Exhausted(MAX_REROLLS, what.into()))
}

/// A connected random board. Deterministic in all arguments; disconnected
/// hole patterns are rerolled with the next sub-seed.
pub fn random_board(rows: usize, cols: usize, k: u32, seed: u64, symmetric: bool, holes: f64) -> Result<HexBoard, BoardError> {
    generate(rows, cols, k, seed, symmetric, holes, |_| true, "could not keep the cells connected")
}

/// Like [`random_board`], but also rerolls until the cell count is odd, as
/// the two-player game needs.
pub fn random_duel_board(rows: usize, cols: usize, k: u32, seed: u64, symmetric: bool, holes: f64) -> Result<HexBoard, BoardError> {
    if rows * cols == 1 {
        return Err(BoardError::Params("a duel needs two distinct start cells".into()));
    }
    generate(rows, cols, k, seed, symmetric, holes, |b| b.len() % 2 == 1, "no connected board with an odd cell count")
}

/// Node name of a cell.
pub fn cell_name((q, r): Hex) -> String {
    format!("{q},{r}")
}

/// One unit-weight node per cell, in the board's cell order, with an edge
/// for every pair of neighboring cells. The starts become `start_a` and
/// `start_b`.
pub fn hex_to_graph(b: &HexBoard) -> Instance {
    let index: BTreeMap<Hex, usize> = b.cells.iter().enumerate().map(|(i, c)| ((c.q, c.r), i)).collect();
    let nodes = b.cells.iter().map(|c| NodeSpec::new(cell_name((c.q, c.r)), c.color)).collect();
    let mut edges = Vec::new();
    for (i, c) in b.cells.iter().enumerate() {
        for (dq, dr) in NEIGHBOR_OFFSETS {
            if let Some(&j) = index.get(&(c.q + dq, c.r + dr)) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    let graph = ColoredGraph::new(b.k, nodes, &edges).expect("a valid board is a connected simple graph");
    let mut inst = Instance::new(graph);
    if b.start_a != b.start_b {
        inst.start_a = Some(index[&b.start_a]);
        inst.start_b = Some(index[&b.start_b]);
    }
    inst.start = Some(index[&b.start_a]);
    inst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{load_instance, write_instance};

    fn cell(q: i32, r: i32, color: Color) -> Cell {
        Cell { q, r, color }
    }

    #[test]
    fn strip_is_a_path() {
        let b = random_board(1, 3, 2, 0, false, 0.0).unwrap();
        assert_eq!(b.len(), 3);
        let g = hex_to_graph(&b).graph;
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(b.start_a, (0, 0));
        assert_eq!(b.start_b, (2, 0));
    }

    #[test]
    fn single_cell_is_k1() {
        let b = HexBoard::new(2, vec![cell(0, 0, 1)], (0, 0), (0, 0), false).unwrap();
        let inst = hex_to_graph(&b);
        assert_eq!(inst.graph.len(), 1);
        assert_eq!(inst.graph.edge_count(), 0);
    }

    #[test]
    fn hexagon_center_has_six_neighbors() {
        let mut cells = vec![cell(0, 0, 0)];
        cells.extend(NEIGHBOR_OFFSETS.iter().map(|&(q, r)| cell(q, r, 1)));
        let b = HexBoard::new(2, cells, (1, 0), (-1, 0), false).unwrap();
        let g = hex_to_graph(&b).graph;
        let center = g.id("0,0").unwrap();
        assert_eq!(g.neighbors(center).len(), 6);
        // ring of six plus six spokes
        assert_eq!(g.edge_count(), 12);
        assert!((0..g.len()).all(|v| g.neighbors(v).len() <= 6));
    }

    #[test]
    fn symmetric_board_is_invariant() {
        let b = random_board(5, 5, 4, 7, true, 0.0).unwrap();
        let map = b.color_map();
        for (&(q, r), &c) in &map {
            assert_eq!(map[&(4 - q, 4 - r)], c);
        }
        assert!(b.symmetric);
        let b = random_board(5, 6, 4, 3, true, 0.3).unwrap();
        assert!(b.is_symmetric());
    }

    #[test]
    fn holes_keep_the_board_connected() {
        let b = random_board(2, 2, 3, 1, false, 0.49).unwrap();
        assert!((3..=4).contains(&b.len()));
        for seed in 0..50 {
            let b = random_board(6, 7, 3, seed, seed % 2 == 0, 0.4).unwrap();
            assert!(connected(&b.color_map().keys().copied().collect()));
            hex_to_graph(&b);
        }
    }

    #[test]
    fn duel_boards_are_odd() {
        for seed in 0..30 {
            let b = random_duel_board(4, 5, 4, seed, false, 0.3).unwrap();
            assert_eq!(b.len() % 2, 1);
        }
        // a full 4x4 parallelogram with paired holes stays even
        assert!(matches!(random_duel_board(4, 4, 3, 0, true, 0.0), Err(BoardError::Exhausted(..))));
    }

    #[test]
    fn fixed_seed_is_byte_identical() {
        let a = random_board(5, 5, 4, 11, false, 0.2).unwrap().to_json();
        let b = random_board(5, 5, 4, 11, false, 0.2).unwrap().to_json();
        assert_eq!(a, b);
        assert_eq!(HexBoard::from_json(&a).unwrap().to_json(), a);
    }

    #[test]
    fn graph_round_trips_through_the_loader() {
        let b = random_duel_board(4, 4, 4, 5, false, 0.25).unwrap();
        let inst = hex_to_graph(&b);
        let back = load_instance(&write_instance(&inst)).unwrap();
        assert_eq!(back.graph.len(), b.len());
        assert_eq!(back.start_a.map(|v| back.graph.name(v).to_string()), Some(cell_name(b.start_a)));
    }

    #[test]
    fn rejects_bad_boards() {
        assert!(HexBoard::new(2, vec![cell(0, 0, 0), cell(2, 0, 0)], (0, 0), (2, 0), false).is_err());
        assert!(HexBoard::new(2, vec![cell(0, 0, 2)], (0, 0), (0, 0), false).is_err());
        assert!(HexBoard::new(2, vec![cell(0, 0, 0), cell(1, 0, 1)], (0, 0), (1, 0), true).is_err());
        assert!(HexBoard::from_json(r#"{"k":2,"cells":[],"start_a":[0,0],"start_b":[0,0],"x":1}"#).is_err());
        assert!(random_board(0, 3, 2, 0, false, 0.0).is_err());
        assert!(random_board(3, 3, 1, 0, false, 0.0).is_err());
        assert!(random_board(3, 3, 3, 0, false, 0.5).is_err());
    }
}
