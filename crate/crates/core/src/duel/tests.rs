use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::minimax::minimax_ordered;
use super::*;
use crate::random::{connected_graph, outerplanar_instance};

const BUDGET: usize = 1 << 20;

fn set(g: &ColoredGraph, ids: &[NodeId]) -> NodeSet {
    NodeSet::from_ids(g.len(), ids.iter().copied())
}

fn state(g: &ColoredGraph, a: &[NodeId], b: &[NodeId], last_a: Option<Color>, last_b: Option<Color>, to_move: Player) -> GameState {
    GameState {
        w_a: set(g, a),
        w_b: set(g, b),
        last_a,
        last_b,
        to_move,
        round: 2,
        stall: 0,
    }
}

#[test]
fn rejects_bad_games() {
    let g = ColoredGraph::path(3, &[0, 1, 2]).unwrap();
    assert_eq!(Game::new(g.clone(), 0, 0), Err(GameError::SameStart));
    let two = ColoredGraph::path(2, &[0, 1, 0]).unwrap();
    assert_eq!(Game::new(two, 0, 2), Err(GameError::TooFewColors(2)));
    let even = ColoredGraph::path(3, &[0, 1, 2, 0]).unwrap();
    assert_eq!(Game::new(even, 0, 3), Err(GameError::EvenTotal(4)));
    assert!(Game::new(g, 0, 2).is_ok());
}

#[test]
fn middle_of_p3_goes_to_the_first_caller() {
    let g = ColoredGraph::path(3, &[0, 1, 2]).unwrap();
    let game = Game::new(g, 0, 2).unwrap();
    let (s, gained) = game.apply_move(&game.initial(), 1).unwrap();
    assert_eq!(gained, 1);
    assert!(s.w_a.contains(1));
    let v = game.winner(&s).unwrap();
    assert_eq!((v.winner, v.reason), (Player::A, VerdictReason::Majority));
}

#[test]
fn shared_frontier_node_and_r1() {
    // a0(0) - m(1) - b0(2) - y(3) - z(3): m touches both players
    let g = ColoredGraph::path(4, &[0, 1, 2, 3, 3]).unwrap();
    let game = Game::new(g, 0, 2).unwrap();
    let (s, _) = game.apply_move(&game.initial(), 1).unwrap();
    assert!(s.w_a.contains(1));
    assert!(game.winner(&s).is_none());
    let err = game.apply_move(&s, 1).unwrap_err();
    assert_eq!(err.rule(), Some("R1"));
    assert!(err.to_string().starts_with("R1"));
}

#[test]
fn winner_examples() {
    let g = ColoredGraph::path(3, &[0, 1, 2]).unwrap();
    let game = Game::new(g.clone(), 0, 2).unwrap();
    assert!(game.winner(&game.initial()).is_none());
    let s = state(&g, &[0, 1], &[2], Some(1), None, Player::B);
    assert_eq!(game.winner(&s).unwrap().winner, Player::A);
}

/// a0 (light) with a black and a dark-gray neighbor; b0 (white) whose only
/// neighbor is black; two white nodes behind that black node.
fn blocking_graph() -> ColoredGraph {
    ColoredGraph::from_colors(4, &[1, 3, 2, 0, 3, 0, 0], &[(0, 1), (0, 2), (2, 6), (3, 4), (4, 5), (4, 6)]).unwrap()
}

#[test]
fn r2_prevents_permanent_blocking() {
    let g = blocking_graph();
    let game = Game::new(g.clone(), 0, 3).unwrap();
    // A just called black; black is B's only gaining color, so B must wait
    let s = state(&g, &[0, 1], &[3], Some(3), Some(1), Player::B);
    assert_eq!(game.legal_colors(&s).unwrap(), vec![0, 2]);
    assert_eq!(game.apply_move(&s, 3).unwrap_err().rule(), Some("R1"));
    let (s, gained) = game.apply_move(&s, 2).unwrap();
    assert_eq!((gained, s.stall), (0, 1));
    // A cannot block black a second time
    assert_eq!(game.apply_move(&s, 3).unwrap_err().rule(), Some("R2"));
    let c = game.legal_colors(&s).unwrap()[0];
    let (s, _) = game.apply_move(&s, c).unwrap();
    assert!(game.legal_colors(&s).unwrap().contains(&3));
    let (s, gained) = game.apply_move(&s, 3).unwrap();
    assert_eq!(gained, 1);
    // and the white nodes behind it follow
    assert!(game.gain(&game.apply_unchecked(&s, game.legal_colors(&s).unwrap()[0]).0, 0).len() >= 2);
}

#[test]
fn r3_forces_progress() {
    // black a0, then dark-gray, light, dark-gray, white b0
    let g = ColoredGraph::path(4, &[3, 2, 1, 2, 0]).unwrap();
    let game = Game::new(g.clone(), 0, 4).unwrap();
    let s = game.initial();
    assert_eq!(game.legal_colors(&s).unwrap(), vec![2]);
    let err = game.apply_move(&s, 1).unwrap_err();
    assert_eq!(err.rule(), Some("R3"));
    // once dark-gray is barred, waiting calls become legal
    let blocked = state(&g, &[0], &[4], None, Some(2), Player::A);
    assert_eq!(game.legal_colors(&blocked).unwrap(), vec![0, 1, 3]);
}

#[test]
fn opening_with_r1_only() {
    // k = 4, both neighbors of a0 have color 1, b0 just called 2
    let g = ColoredGraph::from_colors(4, &[0, 1, 1, 2, 3], &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
    let game = Game::new(g.clone(), 0, 3).unwrap();
    let s = state(&g, &[0], &[3], None, Some(2), Player::A);
    assert_eq!(game.legal_colors(&s).unwrap(), vec![1]);
}

#[test]
fn stall_cap_adjudicates() {
    let g = blocking_graph();
    let game = Game::new(g.clone(), 0, 3).unwrap().with_stall_cap(1);
    let s = state(&g, &[0, 1], &[3], Some(3), Some(1), Player::B);
    let (s, _) = game.apply_move(&s, 0).unwrap();
    let v = game.winner(&s).unwrap();
    assert_eq!(v.reason, VerdictReason::StallAdjudication);
    assert_eq!(v.winner, Player::A);
    assert_eq!(game.apply_move(&s, 2).unwrap_err(), RuleError::GameOver);
}

#[test]
fn three_colors_leave_exactly_one_call() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 40 {
        let g = connected_graph(&mut rng, 7, 3, 0.25);
        let Ok(game) = Game::new(g, 0, 6) else { continue };
        checked += 1;
        let s0 = game.initial();
        for a in game.legal_colors(&s0).unwrap() {
            let s1 = game.apply_unchecked(&s0, a).0;
            if game.winner(&s1).is_some() {
                continue;
            }
            for b in game.legal_colors(&s1).unwrap() {
                let mut s = game.apply_unchecked(&s1, b).0;
                let expected = minimax(&game, &s, BUDGET).unwrap().winner;
                while game.winner(&s).is_none() {
                    let legal = game.legal_colors(&s).unwrap();
                    assert_eq!(legal.len(), 1, "after the first round play is forced");
                    s = game.apply_unchecked(&s, legal[0]).0;
                }
                assert_eq!(game.winner(&s).unwrap().winner, expected);
            }
        }
    }
}

#[test]
fn five_node_path_agrees_with_naive_recursion() {
    let g = ColoredGraph::path(4, &[2, 0, 1, 0, 3]).unwrap();
    let game = Game::new(g, 0, 4).unwrap();
    let r = minimax(&game, &game.initial(), BUDGET).unwrap();
    assert_eq!(r.winner, naive_winner(&game, &game.initial()));
    let (_, v) = r.line(&game, &game.initial());
    assert_eq!(v.winner, r.winner);
}

#[test]
fn symmetric_path_first_mover_takes_center() {
    let g = ColoredGraph::path(4, &[0, 1, 2, 3, 2, 1, 0]).unwrap();
    let game = Game::new(g, 0, 6).unwrap();
    let r = minimax(&game, &game.initial(), BUDGET).unwrap();
    assert_eq!(r.winner, Player::A);
    assert_eq!(naive_winner(&game, &game.initial()), Player::A);
}

#[test]
fn minimax_matches_naive_on_small_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    while checked < 25 {
        let n = [5, 7][rng.gen_range(0..2)];
        let g = connected_graph(&mut rng, n, 4, 0.2);
        let Ok(game) = Game::new(g, 0, n - 1) else { continue };
        checked += 1;
        let s = game.initial();
        let fwd = minimax(&game, &s, BUDGET).unwrap();
        assert_eq!(fwd.winner, naive_winner(&game, &s));
        assert_eq!(fwd.winner, minimax_ordered(&game, &s, BUDGET, true).unwrap().winner);
    }
}

#[test]
fn minimax_budget_is_reported() {
    let g = ColoredGraph::path(4, &[0, 1, 2, 3, 0, 1, 2, 3, 0]).unwrap();
    let game = Game::new(g, 0, 8).unwrap();
    assert_eq!(minimax(&game, &game.initial(), 3).unwrap_err(), GameError::BudgetExceeded(3));
}

#[test]
fn transcripts_round_trip() {
    let g = ColoredGraph::path(4, &[0, 1, 2, 3, 2, 1, 0, 3, 1]).unwrap();
    let game = Game::new(g, 0, 8).unwrap();
    let (moves, v) = game.play_out([&Policy::Greedy, &Policy::Random], 11);
    let text = transcript_jsonl(&moves);
    assert!(text.lines().next().unwrap().starts_with("{\"round\":1,\"player\":\"A\""));
    let back = parse_transcript(&text).unwrap();
    assert_eq!(back, moves);
    assert_eq!(game.replay(&back).unwrap(), v.state);
    assert_eq!(game.play_out([&Policy::Greedy, &Policy::Random], 11).0, moves);
}

#[test]
fn policies_examples() {
    // gains 3 vs 1 for greedy
    let g = ColoredGraph::from_colors(4, &[0, 1, 1, 1, 2, 3, 3], &[(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 6)]).unwrap();
    let game = Game::new(g, 0, 6).unwrap();
    let s = game.initial();
    assert_eq!(strategy_move(&game, &s, &Policy::Greedy, 0).unwrap().0, 1);
    let r1 = strategy_move(&game, &s, &Policy::Random, 5).unwrap();
    assert_eq!(r1, strategy_move(&game, &s, &Policy::Random, 5).unwrap());
    // unique gaining color: every policy picks it
    let p = ColoredGraph::path(4, &[3, 2, 1, 2, 0]).unwrap();
    let game = Game::new(p, 0, 4).unwrap();
    for pol in [Policy::Greedy, Policy::Random, Policy::Minimax] {
        assert_eq!(strategy_move(&game, &game.initial(), &pol, 1).unwrap().0, 2);
    }
}

#[test]
fn outerplanar_p3() {
    let g = ColoredGraph::path(3, &[0, 1, 2]).unwrap();
    let game = Game::new(g, 0, 2).unwrap();
    let r = outerplanar_solve(&game, &[0, 1, 2, 1], BUDGET).unwrap();
    assert_eq!(r.winner, Player::A);
    assert!(outerplanar_solve(&game, &[0, 2, 1], BUDGET).is_err());
}

#[test]
fn enclosed_nodes_are_credited() {
    // cycle a0 u1 u2 u3 b0 l2 l1 with chord u1-l2; A holds u1, u2, l2
    let g = ColoredGraph::from_colors(
        4,
        &[0, 1, 2, 3, 0, 1, 3],
        &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (1, 5)],
    )
    .unwrap();
    let game = Game::new(g.clone(), 0, 4).unwrap();
    let walk = OuterWalk::new(&game, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
    assert_eq!(walk.upper, vec![1, 2, 3]);
    assert_eq!(walk.lower, vec![6, 5]);
    let s = state(&g, &[0, 1, 2, 5], &[4], Some(1), Some(2), Player::B);
    assert_eq!(walk.indices(&s.w_a, Player::A), (2, 2));
    assert_eq!(chain_closure(&game, &walk, &s, Player::A).to_vec(), vec![0, 1, 2, 5, 6]);
    // B never reaches l1
    for c in 0..4 {
        assert!(!game.gain(&s, c).contains(6));
    }
}

#[test]
fn outerplanar_agrees_with_minimax_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 15 {
        let n = [7, 9][rng.gen_range(0..2)];
        let inst = outerplanar_instance(&mut rng, n, 4);
        let Ok(game) = Game::new(inst.graph, inst.a0, inst.b0) else { continue };
        checked += 1;
        let m = minimax(&game, &game.initial(), BUDGET).unwrap();
        let o = outerplanar_solve(&game, &inst.walk, BUDGET).unwrap();
        assert_eq!(o.winner, m.winner);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_play_respects_rules(seed in 0u64..10_000, n in 3usize..12, k in 3u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = n | 1;
        let g = connected_graph(&mut rng, n, k, 0.2);
        let game = Game::new(g, 0, n - 1).unwrap();
        let (moves, v) = game.play_out([&Policy::Random, &Policy::Random], seed);
        let mut s = game.initial();
        for m in &moves {
            prop_assert_ne!(Some(m.color), s.last(s.to_move.other()));
            prop_assert_ne!(Some(m.color), s.last(s.to_move));
            if m.gained == 0 {
                prop_assert!(game.allowed(&s).iter().all(|&c| game.gain(&s, c).is_empty()));
            }
            let (next, _) = game.apply_move(&s, m.color).unwrap();
            prop_assert!(next.w_a.is_disjoint(&next.w_b));
            prop_assert!(s.w_a.is_subset(&next.w_a) && s.w_b.is_subset(&next.w_b));
            s = next;
        }
        prop_assert_eq!(s, v.state);
    }
}
