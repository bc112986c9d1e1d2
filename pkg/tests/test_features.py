from fractions import Fraction

import pytest

from gameforge.features import compute_features
from gameforge.game import CHANCE, Game, InvalidGameError
from gameforge.reference_games import (
    kuhn_poker,
    market_entry,
    one_card_poker,
    trust_game,
)


def test_trust_game_features():
    f = compute_features(trust_game())
    assert (f.n_decision_nodes, f.n_leaves, f.max_depth) == (2, 3, 2)
    # payoff vectors (1,1), (-1,2), (0,0) do not all sum to zero
    assert f.zero_sum is False
    assert f.perfect_info is True
    assert f.complete is True


def test_kuhn_matches_expected_row():
    f = compute_features(kuhn_poker())
    assert f.perfect_info is False
    assert f.zero_sum is True
    assert f.max_depth == 4
    assert f.n_players == 2
    assert f.n_decision_nodes == 25
    assert f.n_leaves == 30


def test_market_entry_matches_expected_row():
    f = compute_features(market_entry())
    assert f.perfect_info is True
    assert (f.max_depth, f.n_decision_nodes, f.n_leaves) == (2, 2, 3)


def test_single_node_game():
    g = Game.new_tree(["A"], "solo")
    f = compute_features(g)
    assert (f.max_depth, f.n_decision_nodes, f.n_leaves) == (0, 0, 1)
    assert f.perfect_info is True
    assert f.complete is False and f.zero_sum is False


def test_perfect_info_equals_singleton_infosets():
    g = one_card_poker()
    max_members = max(len(s.members) for s in g.infosets)
    assert compute_features(g).perfect_info is (max_members == 1)


def test_missing_outcome_flags_incomplete_and_not_zero_sum():
    g = Game.new_tree(["A", "B"], "t")
    g.append_move("root", "A", ["x", "y"])
    zero = g.add_outcome([1, -1])
    g.set_outcome("root.0", zero)
    f = compute_features(g)
    assert f.complete is False
    assert f.zero_sum is False


def test_zero_sum_counts_attached_outcomes_only():
    g = Game.new_tree(["A", "B"], "t")
    g.append_move("root", "A", ["x", "y"])
    balanced = g.add_outcome([1, -1])
    g.add_outcome([5, 5], "registered but never attached")
    g.set_outcome("root.0", balanced)
    g.set_outcome("root.1", balanced)
    assert compute_features(g).zero_sum is True


def test_pure_function_repeat_calls_agree():
    g = kuhn_poker()
    assert compute_features(g) == compute_features(g)


def test_invalid_game_rejected():
    g = Game.new_tree(["A", "B"], "t")
    g.append_move("root", CHANCE, ["x", "y"])
    g._infosets[(CHANCE, 1)].probs = [Fraction(3, 4), Fraction(3, 4)]
    with pytest.raises(InvalidGameError):
        compute_features(g)


class TestPerfectRecall:
    def test_absent_minded_driver_is_imperfect(self):
        g = Game.new_tree(["D"], "amd")
        g.append_move("root", "D", ["e", "c"])
        g.append_move("root.1", "D", ["e", "c"])
        g.set_infoset("root.1", "root")
        outcome = g.add_outcome([0])
        for path in ("root.0", "root.1.0", "root.1.1"):
            g.set_outcome(path, outcome)
        assert compute_features(g).perfect_recall is False

    def test_forgetting_an_observed_chance_move_is_imperfect(self):
        # Player 1 sees the chance move, acts, then forgets what they saw
        # while remembering their own action: own-action histories agree,
        # but the earlier information sets differ.
        g = Game.new_tree(["P1"], "forgetful")
        g.append_move("root", CHANCE, ["L", "R"])
        g.append_move("root.0", "P1", ["l", "r"])
        g.append_move("root.1", "P1", ["l", "r"])
        g.append_move(["root.0.0", "root.1.0"], "P1", ["A", "B"])
        g.append_move(["root.0.1", "root.1.1"], "P1", ["A", "B"])
        outcome = g.add_outcome([0])
        for view in list(g.nodes()):
            if view.is_terminal:
                g.set_outcome(view, outcome)
        assert compute_features(g).perfect_recall is False

    def test_kuhn_has_perfect_recall(self):
        assert compute_features(kuhn_poker()).perfect_recall is True
