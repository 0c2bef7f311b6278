use std::collections::HashMap;
use std::hash::Hash;

use crate::graph::{Color, NodeId};
use crate::nodeset::NodeSet;

use super::{Game, GameError, GameState, Player};

/// The outer face split at the two start nodes: `upper[0]` and `lower[0]`
/// are the walk neighbors of `a0`, the last entries those of `b0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterWalk {
    pub upper: Vec<NodeId>,
    pub lower: Vec<NodeId>,
}

impl OuterWalk {
    /// Splits a closed walk around the outer face. The walk must cover every
    /// node, follow edges, and pass through each start exactly once.
    pub fn new(game: &Game, walk: &[NodeId]) -> Result<Self, GameError> {
        let g = &game.graph;
        if walk.len() < 2 {
            return Err(GameError::Walk("walk needs at least two entries".into()));
        }
        let mut seen = vec![false; g.len()];
        for (i, &v) in walk.iter().enumerate() {
            if v >= g.len() {
                return Err(GameError::Walk(format!("node {v} out of range")));
            }
            seen[v] = true;
            let u = walk[(i + 1) % walk.len()];
            if u < g.len() && !g.has_edge(v, u) {
                return Err(GameError::Walk(format!("{} and {} are consecutive but not adjacent", g.name(v), g.name(u))));
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(GameError::Walk(format!("node {} is not on the walk", g.name(v))));
        }
        for s in [game.a0, game.b0] {
            if walk.iter().filter(|&&v| v == s).count() != 1 {
                return Err(GameError::Walk(format!("start {} must appear exactly once", g.name(s))));
            }
        }
        let at = walk.iter().position(|&v| v == game.a0).expect("a0 is on the walk");
        let rotated: Vec<NodeId> = walk[at..].iter().chain(&walk[..at]).copied().collect();
        let j = rotated.iter().position(|&v| v == game.b0).expect("b0 is on the walk");
        let upper = rotated[1..j].to_vec();
        let mut lower = rotated[j + 1..].to_vec();
        lower.reverse();
        Ok(OuterWalk { upper, lower })
    }

    /// `(U, L)` for a player: how far along each chain, counted from its own
    /// start, the player has conquered.
    pub fn indices(&self, territory: &NodeSet, p: Player) -> (usize, usize) {
        let reach = |chain: &[NodeId]| -> usize {
            let n = chain.len();
            (1..=n)
                .rev()
                .find(|&i| {
                    let v = match p {
                        Player::A => chain[i - 1],
                        Player::B => chain[n - i],
                    };
                    territory.contains(v)
                })
                .unwrap_or(0)
        };
        (reach(&self.upper), reach(&self.lower))
    }
}

/// The player's territory plus every chain node up to its indices that the
/// opponent does not hold. Free nodes in this range are enclosed: the
/// opponent can never reach them.
pub fn chain_closure(game: &Game, walk: &OuterWalk, s: &GameState, p: Player) -> NodeSet {
    let own = s.territory(p);
    let opp = s.territory(p.other());
    let (u, l) = walk.indices(own, p);
    let mut out = own.clone();
    let take = |chain: &[NodeId], k: usize, out: &mut NodeSet| {
        let n = chain.len();
        for i in 0..k {
            let v = match p {
                Player::A => chain[i],
                Player::B => chain[n - 1 - i],
            };
            if !opp.contains(v) {
                out.insert(v);
            }
        }
    };
    take(&walk.upper, u, &mut out);
    take(&walk.lower, l, &mut out);
    debug_assert!(out.is_subset(&game.graph.all_nodes()));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterplanarResult {
    pub winner: Player,
    /// Index states evaluated with last colors, mover and stall in the key.
    pub states: usize,
    /// Winner when the key holds only the four chain indices and the mover.
    pub coarse_winner: Player,
    pub coarse_states: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Indices {
    ua: usize,
    la: usize,
    ub: usize,
    lb: usize,
}

struct IndexSearch<'a, K, F> {
    game: &'a Game,
    walk: &'a OuterWalk,
    budget: usize,
    key: F,
    memo: HashMap<K, Player>,
}

impl<K: Eq + Hash, F: Fn(Indices, &GameState) -> K> IndexSearch<'_, K, F> {
    fn solve(&mut self, s: &GameState) -> Result<Player, GameError> {
        if let Some(v) = self.game.winner(s) {
            return Ok(v.winner);
        }
        let total = self.game.graph.total_weight();
        for p in [Player::A, Player::B] {
            // enclosed nodes count for the enclosing player
            if 2 * self.game.weight(&chain_closure(self.game, self.walk, s, p)) > total {
                return Ok(p);
            }
        }
        let (ua, la) = self.walk.indices(&s.w_a, Player::A);
        let (ub, lb) = self.walk.indices(&s.w_b, Player::B);
        let key = (self.key)(Indices { ua, la, ub, lb }, s);
        if let Some(&w) = self.memo.get(&key) {
            return Ok(w);
        }
        if self.memo.len() >= self.budget {
            return Err(GameError::BudgetExceeded(self.budget));
        }
        let me = s.to_move;
        let mut result = me.other();
        for c in self.game.legal_colors(s)? {
            let (child, _) = self.game.apply_unchecked(s, c);
            if self.solve(&child)? == me {
                result = me;
                break;
            }
        }
        self.memo.insert(key, result);
        Ok(result)
    }
}

type FullKey = (Indices, Option<Color>, Option<Color>, Player, usize);

/// Backward induction over chain-index game situations.
///
/// A situation is the four indices `(U_A, L_A, U_B, L_B)` together with the
/// last calls, the mover and the stall counter, since R1 and R2 depend on
/// them. A player whose territory plus enclosed nodes exceeds half the
/// weight is credited with the win. The coarse variant keys on the indices
/// and the mover only.
pub fn outerplanar_solve(game: &Game, walk: &[NodeId], budget: usize) -> Result<OuterplanarResult, GameError> {
    let walk = OuterWalk::new(game, walk)?;
    let s = game.initial();
    let mut full = IndexSearch {
        game,
        walk: &walk,
        budget,
        key: |i: Indices, s: &GameState| -> FullKey { (i, s.last_a, s.last_b, s.to_move, s.stall) },
        memo: HashMap::new(),
    };
    let winner = full.solve(&s)?;
    let mut coarse = IndexSearch {
        game,
        walk: &walk,
        budget,
        key: |i: Indices, s: &GameState| (i, s.to_move),
        memo: HashMap::new(),
    };
    let coarse_winner = coarse.solve(&s)?;
    Ok(OuterplanarResult {
        winner,
        states: full.memo.len(),
        coarse_winner,
        coarse_states: coarse.memo.len(),
    })
}
