use std::collections::HashMap;

use crate::graph::Color;
use crate::nodeset::NodeSet;

use super::{Game, GameError, GameState, MoveRecord, Player, Verdict};

/// Everything that decides the rest of the game (the round number does not).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateKey {
    pub w_a: NodeSet,
    pub w_b: NodeSet,
    pub last_a: Option<Color>,
    pub last_b: Option<Color>,
    pub to_move: Player,
    pub stall: usize,
}

impl StateKey {
    pub fn of(s: &GameState) -> Self {
        StateKey {
            w_a: s.w_a.clone(),
            w_b: s.w_b.clone(),
            last_a: s.last_a,
            last_b: s.last_b,
            to_move: s.to_move,
            stall: s.stall,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimaxResult {
    pub winner: Player,
    /// Best call at the root, `None` when the root is already decided.
    pub first_move: Option<Color>,
    pub states: usize,
    /// A winning call for the mover where one exists, otherwise the smallest
    /// legal call.
    pub table: HashMap<StateKey, Color>,
}

impl MinimaxResult {
    /// Follows the table from `s` to the end of the game.
    pub fn line(&self, game: &Game, s: &GameState) -> (Vec<MoveRecord>, Verdict) {
        let mut s = s.clone();
        let mut moves = Vec::new();
        loop {
            if let Some(v) = game.winner(&s) {
                return (moves, v);
            }
            let c = self.table[&StateKey::of(&s)];
            let (next, gained) = game.apply_unchecked(&s, c);
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

pub(crate) struct Search<'a> {
    pub game: &'a Game,
    pub budget: usize,
    pub reverse: bool,
    pub memo: HashMap<StateKey, (Player, Color)>,
}

impl Search<'_> {
    pub fn solve(&mut self, s: &GameState) -> Result<Player, GameError> {
        if let Some(v) = self.game.winner(s) {
            return Ok(v.winner);
        }
        let key = StateKey::of(s);
        if let Some(&(w, _)) = self.memo.get(&key) {
            return Ok(w);
        }
        if self.memo.len() >= self.budget {
            return Err(GameError::BudgetExceeded(self.budget));
        }
        let mut legal = self.game.legal_colors(s)?;
        if self.reverse {
            legal.reverse();
        }
        let me = s.to_move;
        let mut result = (me.other(), legal[0]);
        for &c in &legal {
            let (child, _) = self.game.apply_unchecked(s, c);
            if self.solve(&child)? == me {
                result = (me, c);
                break;
            }
        }
        self.memo.insert(key, result);
        Ok(result.0)
    }
}

/// Game-theoretic winner from `s` by memoized exhaustive search.
pub fn minimax(game: &Game, s: &GameState, budget: usize) -> Result<MinimaxResult, GameError> {
    minimax_ordered(game, s, budget, false)
}

pub(crate) fn minimax_ordered(game: &Game, s: &GameState, budget: usize, reverse: bool) -> Result<MinimaxResult, GameError> {
    let mut search = Search {
        game,
        budget,
        reverse,
        memo: HashMap::new(),
    };
    let winner = search.solve(s)?;
    let first_move = search.memo.get(&StateKey::of(s)).map(|&(_, c)| c);
    Ok(MinimaxResult {
        winner,
        first_move,
        states: search.memo.len(),
        table: search.memo.into_iter().map(|(k, (_, c))| (k, c)).collect(),
    })
}

/// Plain recursion over the full game tree, no memo. Exponential; an
/// oracle for tiny instances.
pub fn naive_winner(game: &Game, s: &GameState) -> Player {
    if let Some(v) = game.winner(s) {
        return v.winner;
    }
    let me = s.to_move;
    let legal = game.legal_colors(s).expect("k >= 3 leaves a legal color");
    let wins = legal
        .iter()
        .map(|&c| naive_winner(game, &game.apply_unchecked(s, c).0))
        .any(|w| w == me);
    if wins {
        me
    } else {
        me.other()
    }
}
