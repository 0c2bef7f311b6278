"""Exercises the honeybee extension module end to end.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""

import json
from pathlib import Path

import honeybee

DATA = Path(__file__).resolve().parent.parent / "data"


def check_solve():
    inst = honeybee.Instance.from_json((DATA / "p3.json").read_text())
    assert len(inst) == 3 and inst.k == 2
    r = honeybee.solve(inst, "v0")
    assert r["length"] == 2 and r["sequence"] == [1, 0], r
    assert inst.conquers(0, r["sequence"])
    assert honeybee.solve(inst, 0, method="greedy")["length"] == 2
    again = honeybee.Instance.from_json(inst.to_json())
    assert again.edges == inst.edges


def check_rules():
    # a 7-path where the first call is forced
    inst = honeybee.Instance.from_graph(
        4, [3, 2, 0, 1, 2, 1, 0], [(i, i + 1) for i in range(6)], start_a=0, start_b=6
    )
    game = honeybee.Game(inst)
    s = game.initial()
    assert game.legal_colors(s) == [2]
    try:
        game.apply_move(s, 1)
    except honeybee.RuleViolation as e:
        assert str(e).startswith("R3"), e
    else:
        raise AssertionError("waiting with a gain available must fail")
    s, gained = game.apply_move(s, 2)
    assert gained == 1 and s.to_move == "B"
    s, _ = game.apply_move(s, 1)
    for color, rule in [(2, "R2"), (1, "R1")]:
        try:
            game.apply_move(s, color)
            raise AssertionError(f"color {color} should break {rule}")
        except honeybee.RuleViolation as e:
            assert str(e).startswith(rule), e


def check_board_game():
    board = honeybee.HexBoard.random(5, 5, 4, seed=7, duel=True)
    assert len(board) % 2 == 1
    again = honeybee.HexBoard.from_json(board.to_json())
    assert again.cells == board.cells
    game = honeybee.Game(board.to_instance())
    moves, verdict = game.play_out("greedy", "random", seed=3)
    assert verdict["winner"] in ("A", "B")
    assert verdict["weight_a"] + verdict["weight_b"] <= len(board)
    replayed = game.replay("\n".join(json.dumps(m) for m in moves))
    assert game.winner(replayed)["winner"] == verdict["winner"]
    assert set(replayed.territory_a).isdisjoint(replayed.territory_b)

    strip = honeybee.HexBoard.from_json((DATA / "strip.json").read_text())
    small = honeybee.Game(strip.to_instance())
    assert small.minimax() == "A"


def check_generators():
    (opt, witness) = honeybee.brute_scs(["0110", "1010", "1001"])
    assert len(witness) == opt
    assert honeybee.brute_fvs((DATA / "fvs_triangle.json").read_text())[0] == 1

    art = honeybee.generate("fvs", (DATA / "fvs_triangle.json").read_text())
    assert honeybee.solve(art.instance)["length"] == 4
    assert json.loads(art.provenance_json())["source"] == "fvs"

    art = honeybee.generate("scs-sp", (DATA / "three_sequences.json").read_text())
    weights = dict(zip(art.instance.names, art.instance.weights))
    assert (weights["h0"], weights["hb"]) == (48, 117)

    art = honeybee.generate("qbf", (DATA / "qbf_example.json").read_text())
    assert sum(art.instance.weights) % 2 == 1


def main():
    for check in (check_solve, check_rules, check_board_game, check_generators):
        check()
        print(f"ok  {check.__name__}")


if __name__ == "__main__":
    main()
