//! The two-player game.
//!
//! A moves first; each player grows a territory from its start node by
//! calling colors under three rules:
//!
//! * R1: never call the color the opponent has just called;
//! * R2: never repeat one's own previous call;
//! * R3: call a gaining color whenever R1 and R2 leave one.
//!
//! A call conquers the color-`c` nodes reachable from the mover's territory
//! through color-`c` nodes, never passing through the opponent's territory.
//! The game ends when one side holds more than half the total weight. Runs
//! of non-gaining moves are capped; at the cap the heavier territory wins.

mod minimax;
mod outerplanar;
mod strategy;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Color, ColoredGraph, GraphError, NodeId, Weight};
use crate::nodeset::NodeSet;

pub use minimax::{minimax, naive_winner, MinimaxResult, StateKey};
pub use outerplanar::{chain_closure, outerplanar_solve, OuterplanarResult, OuterWalk};
pub use strategy::{strategy_move, Policy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::A => "A",
            Player::B => "B",
        })
    }
}

impl std::str::FromStr for Player {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(Player::A),
            "B" | "b" => Ok(Player::B),
            _ => Err(format!("unknown player {s:?} (expected A or B)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("R1: color {color} was just called by the opponent")]
    R1 { color: Color },
    #[error("R2: color {color} was your previous call")]
    R2 { color: Color },
    #[error("R3: color {color} gains nothing while {gaining:?} would gain")]
    R3 { color: Color, gaining: Vec<Color> },
    #[error("color {color} is out of range for k = {k}")]
    ColorOutOfRange { color: Color, k: u32 },
    #[error("the game is already over")]
    GameOver,
    #[error("R1 and R2 leave no color to call")]
    NoLegalColor,
}

impl RuleError {
    /// The violated rule, when the error is a rule violation.
    pub fn rule(&self) -> Option<&'static str> {
        match self {
            RuleError::R1 { .. } => Some("R1"),
            RuleError::R2 { .. } => Some("R2"),
            RuleError::R3 { .. } => Some("R3"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("start nodes must differ")]
    SameStart,
    #[error("start node {0} out of range")]
    BadStart(NodeId),
    #[error("two-player games need at least 3 colors, got {0}")]
    TooFewColors(u32),
    #[error("total weight {0} is even; two-player games need an odd total")]
    EvenTotal(Weight),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("search budget of {0} states exceeded")]
    BudgetExceeded(usize),
    #[error("invalid outer walk: {0}")]
    Walk(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameState {
    pub w_a: NodeSet,
    pub w_b: NodeSet,
    pub last_a: Option<Color>,
    pub last_b: Option<Color>,
    pub to_move: Player,
    /// Starts at 1; a round is a move of A followed by a move of B.
    pub round: usize,
    /// Consecutive non-gaining moves.
    pub stall: usize,
}

impl GameState {
    pub fn territory(&self, p: Player) -> &NodeSet {
        match p {
            Player::A => &self.w_a,
            Player::B => &self.w_b,
        }
    }

    pub fn last(&self, p: Player) -> Option<Color> {
        match p {
            Player::A => self.last_a,
            Player::B => self.last_b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictReason {
    Majority,
    /// Engine rule: the non-gaining cap was reached and the heavier
    /// territory wins, ties going to B.
    StallAdjudication,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub winner: Player,
    pub reason: VerdictReason,
    pub weight_a: Weight,
    pub weight_b: Weight,
    pub state: GameState,
}

/// One transcript line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub round: usize,
    pub player: Player,
    pub color: Color,
    pub gained: Weight,
}

/// A graph with two start nodes and the stall cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    pub graph: ColoredGraph,
    pub a0: NodeId,
    pub b0: NodeId,
    pub stall_cap: usize,
}

impl Game {
    /// Validates the starts, `k >= 3` and an odd total weight. The stall cap
    /// defaults to `2k`.
    pub fn new(graph: ColoredGraph, a0: NodeId, b0: NodeId) -> Result<Self, GameError> {
        for s in [a0, b0] {
            if s >= graph.len() {
                return Err(GameError::BadStart(s));
            }
        }
        if a0 == b0 {
            return Err(GameError::SameStart);
        }
        if graph.k() < 3 {
            return Err(GameError::TooFewColors(graph.k()));
        }
        if graph.total_weight().is_multiple_of(2) {
            return Err(GameError::EvenTotal(graph.total_weight()));
        }
        let stall_cap = 2 * graph.k() as usize;
        Ok(Game {
            graph,
            a0,
            b0,
            stall_cap,
        })
    }

    pub fn with_stall_cap(mut self, cap: usize) -> Self {
        self.stall_cap = cap.max(1);
        self
    }

    pub fn initial(&self) -> GameState {
        GameState {
            w_a: self.graph.singleton(self.a0),
            w_b: self.graph.singleton(self.b0),
            last_a: None,
            last_b: None,
            to_move: Player::A,
            round: 1,
            stall: 0,
        }
    }

    pub fn weight(&self, set: &NodeSet) -> Weight {
        set.iter().map(|v| self.graph.weight(v)).sum()
    }

    /// Nodes the mover would conquer by calling `c`.
    pub fn gain(&self, s: &GameState, c: Color) -> NodeSet {
        let me = s.territory(s.to_move);
        let opp = s.territory(s.to_move.other());
        let mut g = self.graph.color_neighborhood_avoiding(me, c, Some(opp));
        g.difference_with(me);
        g
    }

    /// Colors allowed by R1 and R2.
    pub fn allowed(&self, s: &GameState) -> Vec<Color> {
        let (own, theirs) = (s.last(s.to_move), s.last(s.to_move.other()));
        (0..self.graph.k())
            .filter(|&c| Some(c) != own && Some(c) != theirs)
            .collect()
    }

    /// The legal calls: the gaining colors among those R1 and R2 allow, or
    /// all of them when none gains.
    pub fn legal_colors(&self, s: &GameState) -> Result<Vec<Color>, RuleError> {
        if self.winner(s).is_some() {
            return Err(RuleError::GameOver);
        }
        let allowed = self.allowed(s);
        if allowed.is_empty() {
            return Err(RuleError::NoLegalColor);
        }
        let gaining: Vec<Color> = allowed
            .iter()
            .copied()
            .filter(|&c| !self.gain(s, c).is_empty())
            .collect();
        Ok(if gaining.is_empty() { allowed } else { gaining })
    }

    /// Checks `c` against the rules, naming the first one it breaks.
    pub fn check_move(&self, s: &GameState, c: Color) -> Result<(), RuleError> {
        if c >= self.graph.k() {
            return Err(RuleError::ColorOutOfRange { color: c, k: self.graph.k() });
        }
        if self.winner(s).is_some() {
            return Err(RuleError::GameOver);
        }
        if Some(c) == s.last(s.to_move.other()) {
            return Err(RuleError::R1 { color: c });
        }
        if Some(c) == s.last(s.to_move) {
            return Err(RuleError::R2 { color: c });
        }
        let legal = self.legal_colors(s)?;
        if !legal.contains(&c) {
            return Err(RuleError::R3 { color: c, gaining: legal });
        }
        Ok(())
    }

    /// Applies a legal move; returns the new state and the weight gained.
    pub fn apply_move(&self, s: &GameState, c: Color) -> Result<(GameState, Weight), RuleError> {
        self.check_move(s, c)?;
        Ok(self.apply_unchecked(s, c))
    }

    pub(crate) fn apply_unchecked(&self, s: &GameState, c: Color) -> (GameState, Weight) {
        let gained = self.gain(s, c);
        let w = self.weight(&gained);
        let mut next = s.clone();
        match s.to_move {
            Player::A => {
                next.w_a.union_with(&gained);
                next.last_a = Some(c);
            }
            Player::B => {
                next.w_b.union_with(&gained);
                next.last_b = Some(c);
                next.round += 1;
            }
        }
        next.to_move = s.to_move.other();
        next.stall = if w > 0 { 0 } else { s.stall + 1 };
        (next, w)
    }

    /// The verdict, if the game is over.
    pub fn winner(&self, s: &GameState) -> Option<Verdict> {
        let total = self.graph.total_weight();
        let (wa, wb) = (self.weight(&s.w_a), self.weight(&s.w_b));
        let verdict = |winner, reason| Verdict {
            winner,
            reason,
            weight_a: wa,
            weight_b: wb,
            state: s.clone(),
        };
        if 2 * wa > total {
            Some(verdict(Player::A, VerdictReason::Majority))
        } else if 2 * wb > total {
            Some(verdict(Player::B, VerdictReason::Majority))
        } else if s.stall >= self.stall_cap {
            let w = if wa > wb { Player::A } else { Player::B };
            Some(verdict(w, VerdictReason::StallAdjudication))
        } else {
            None
        }
    }

    /// Replays a transcript from the opening, checking every move and the
    /// recorded gains.
    pub fn replay(&self, moves: &[MoveRecord]) -> Result<GameState, GameError> {
        let mut s = self.initial();
        for (i, m) in moves.iter().enumerate() {
            if m.player != s.to_move || m.round != s.round {
                return Err(GameError::Walk(format!(
                    "transcript line {} is {} in round {}, expected {} in round {}",
                    i + 1,
                    m.player,
                    m.round,
                    s.to_move,
                    s.round
                )));
            }
            let (next, gained) = self.apply_move(&s, m.color)?;
            if gained != m.gained {
                return Err(GameError::Walk(format!(
                    "transcript line {} records gain {} but the move gains {gained}",
                    i + 1,
                    m.gained
                )));
            }
            s = next;
        }
        Ok(s)
    }

    /// Plays both sides with the given policies until the game ends.
    pub fn play_out(&self, policies: [&Policy; 2], seed: u64) -> (Vec<MoveRecord>, Verdict) {
        let mut s = self.initial();
        let mut moves = Vec::new();
        loop {
            if let Some(v) = self.winner(&s) {
                return (moves, v);
            }
            let p = match s.to_move {
                Player::A => policies[0],
                Player::B => policies[1],
            };
            let salt = moves.len() as u64;
            let (c, _) = strategy_move(self, &s, p, seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
                .expect("a running game has a legal color");
            let (next, gained) = self.apply_unchecked(&s, c);
            moves.push(MoveRecord {
                round: s.round,
                player: s.to_move,
                color: c,
                gained,
            });
            s = next;
        }
    }
}

/// Transcript as JSON lines.
pub fn transcript_jsonl(moves: &[MoveRecord]) -> String {
    moves
        .iter()
        .map(|m| serde_json::to_string(m).expect("move serializes") + "\n")
        .collect()
}

pub fn parse_transcript(text: &str) -> Result<Vec<MoveRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

#[cfg(test)]
mod tests;
