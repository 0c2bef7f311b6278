use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Color;

use super::minimax::minimax;
use super::{Game, GameState, RuleError};

const DEFAULT_MINIMAX_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    /// Largest immediate weight gain, smallest color on ties.
    Greedy,
    /// Optimal play while the search fits in the budget, greedy otherwise.
    Minimax,
    /// Uniform over the legal colors, seeded.
    Random,
}

impl std::str::FromStr for Policy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "greedy" => Ok(Policy::Greedy),
            "minimax" => Ok(Policy::Minimax),
            "random" => Ok(Policy::Random),
            _ => Err(format!("unknown policy {s:?} (expected greedy, minimax or random)")),
        }
    }
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Greedy => "greedy",
            Policy::Minimax => "minimax",
            Policy::Random => "random",
        }
    }
}

/// A legal call for the mover, plus a notice when the minimax policy had to
/// fall back to greedy.
pub fn strategy_move(game: &Game, s: &GameState, policy: &Policy, seed: u64) -> Result<(Color, Option<String>), RuleError> {
    let legal = game.legal_colors(s)?;
    let greedy = || {
        legal
            .iter()
            .copied()
            .map(|c| (c, game.weight(&game.gain(s, c))))
            .fold((legal[0], 0), |best, cur| if cur.1 > best.1 { cur } else { best })
            .0
    };
    Ok(match policy {
        Policy::Greedy => (greedy(), None),
        Policy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (legal[rng.gen_range(0..legal.len())], None)
        }
        Policy::Minimax => match minimax(game, s, DEFAULT_MINIMAX_BUDGET) {
            Ok(r) => (r.first_move.unwrap_or(legal[0]), None),
            Err(e) => (greedy(), Some(format!("minimax unavailable ({e}); played greedy"))),
        },
    })
}
