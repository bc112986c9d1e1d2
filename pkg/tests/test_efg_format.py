from fractions import Fraction

import pytest

from gameforge.efg_format import (
    DanglingReferenceError,
    EfgSyntaxError,
    InconsistentRedefinitionError,
    parse_efg,
    structurally_equal,
    write_dot,
    write_efg,
)
from gameforge.game import CHANCE, Game
from gameforge.reference_games import one_card_poker, trust_game

from conftest import random_game


class TestWriter:
    def test_trust_game_header(self):
        text = write_efg(trust_game())
        assert text.splitlines()[0] == 'EFG 2 R "One-shot trust game" { "Buyer" "Seller" }'

    def test_trust_game_full_canonical_text(self):
        assert write_efg(trust_game()) == (
            'EFG 2 R "One-shot trust game" { "Buyer" "Seller" }\n'
            'p "" 1 1 "" { "Trust" "Not trust" } 0\n'
            'p "" 2 1 "" { "Honor" "Abuse" } 0\n'
            't "" 1 "Trustworthy" { 1, 1 }\n'
            't "" 2 "Untrustworthy" { -1, 2 }\n'
            't "" 3 "Opt-out" { 0, 0 }\n'
        )

    def test_minimal_single_player_game(self):
        g = Game.new_tree(["A"], "")
        assert write_efg(g) == 'EFG 2 R "" { "A" }\nt "" 0\n'

    def test_deterministic(self):
        g = one_card_poker().freeze()
        assert write_efg(g) == write_efg(g)

    def test_rational_serialization(self):
        g = Game.new_tree(["A"], "r")
        g.append_move("root", CHANCE, ["x", "y", "z"])
        g.set_chance_probs("root", [Fraction(2, 3), Fraction(1, 6), Fraction(1, 6)])
        text = write_efg(g)
        assert '{ "x" 2/3 "y" 1/6 "z" 1/6 }' in text

    def test_label_escaping_roundtrips(self):
        g = Game.new_tree(["A"], 'has "quotes" and \\slashes\\')
        g.append_move("root", "A", ['sa"y', "do\\ne"])
        outcome = g.add_outcome([1], 'pay "off"')
        g.set_outcome("root.0", outcome)
        g.set_outcome("root.1", outcome)
        reparsed = parse_efg(write_efg(g))
        assert reparsed.title == g.title
        assert reparsed.root.actions == g.root.actions


class TestParser:
    def test_comma_and_space_separated_payoffs_agree(self):
        with_commas = (
            'EFG 2 R "t" { "A" "B" }\n'
            'p "" 1 1 "" { "x" "y" } 0\n'
            't "" 1 "" { 1, -1 }\n'
            't "" 2 "" { 1 -1 }\n'
        )
        without = with_commas.replace("1, -1", "1 -1")
        a, b = parse_efg(with_commas), parse_efg(without)
        assert structurally_equal(a, b)

    def test_crlf_accepted(self):
        text = write_efg(trust_game()).replace("\n", "\r\n")
        assert structurally_equal(parse_efg(text), trust_game())

    def test_comment_line_preserved(self):
        text = 'EFG 2 R "t" { "A" }\n"a comment"\nt "" 0\n'
        g = parse_efg(text)
        assert g.comment == "a comment"
        assert write_efg(g) == text

    def test_repeated_infoset_body_must_agree(self):
        text = (
            'EFG 2 R "t" { "A" }\n'
            'p "" 1 1 "" { "x" "y" } 0\n'
            'p "" 1 1 "" { "x" "z" } 0\n'
            't "" 0\nt "" 0\nt "" 0\nt "" 0\n'
        )
        with pytest.raises(InconsistentRedefinitionError):
            parse_efg(text)

    def test_bare_infoset_reference_reuses_earlier_body(self):
        text = (
            'EFG 2 R "t" { "A" }\n'
            'p "" 1 1 "" { "x" "y" } 0\n'
            'p "" 1 1 0\n'
            't "" 0\nt "" 0\nt "" 0\n'
        )
        g = parse_efg(text)
        assert len(g.node("root.0").infoset.members) == 2

    def test_dangling_outcome_reference(self):
        text = (
            'EFG 2 R "t" { "A" }\n'
            'p "" 1 1 "" { "x" "y" } 0\n'
            't "" 1 "" { 5 }\n'
            't "" 7\n'
        )
        with pytest.raises(DanglingReferenceError):
            parse_efg(text)

    def test_forward_outcome_reference_is_fine(self):
        text = (
            'EFG 2 R "t" { "A" }\n'
            'p "" 1 1 "" { "x" "y" } 0\n'
            't "" 1\n'
            't "" 1 "shared" { 5 }\n'
        )
        g = parse_efg(text)
        assert g.node("root.0").outcome.payoffs == (Fraction(5),)

    def test_inconsistent_outcome_redefinition(self):
        text = (
            'EFG 2 R "t" { "A" }\n'
            'p "" 1 1 "" { "x" "y" } 0\n'
            't "" 1 "win" { 5 }\n'
            't "" 1 "win" { 6 }\n'
        )
        with pytest.raises(InconsistentRedefinitionError):
            parse_efg(text)

    def test_unnormalized_chance_probs_rejected_with_line(self):
        text = (
            'EFG 2 R "t" { "A" }\n'
            'c "" 1 "" { "x" 1/2 "y" 1/4 } 0\n'
            't "" 0\nt "" 0\n'
        )
        with pytest.raises(EfgSyntaxError) as exc:
            parse_efg(text)
        assert exc.value.line == 2
        assert "sum to 1" in exc.value.message

    def test_wrong_payoff_count_rejected(self):
        text = 'EFG 2 R "t" { "A" "B" }\nt "" 1 "" { 1 }\n'
        with pytest.raises(EfgSyntaxError):
            parse_efg(text)

    def test_truncated_tree_rejected(self):
        text = 'EFG 2 R "t" { "A" }\np "" 1 1 "" { "x" "y" } 0\nt "" 0\n'
        with pytest.raises(EfgSyntaxError) as exc:
            parse_efg(text)
        assert "end of file" in exc.value.message

    def test_trailing_content_rejected(self):
        text = 'EFG 2 R "t" { "A" }\nt "" 0\nt "" 0\n'
        with pytest.raises(EfgSyntaxError):
            parse_efg(text)

    def test_only_rational_files_supported(self):
        with pytest.raises(EfgSyntaxError):
            parse_efg('EFG 2 D "t" { "A" }\nt "" 0\n')
        with pytest.raises(EfgSyntaxError):
            parse_efg('EFG 1 R "t" { "A" }\nt "" 0\n')

    def test_decimal_literals_parse_exactly(self):
        text = (
            'EFG 2 R "t" { "A" }\n'
            'c "" 1 "" { "x" 0.5 "y" 0.5 } 0\n'
            't "" 0\nt "" 0\n'
        )
        assert parse_efg(text).root.infoset.probs == (Fraction(1, 2), Fraction(1, 2))


class TestRoundtrip:
    def test_reference_games_roundtrip(self):
        for builder in (trust_game, one_card_poker):
            g = builder()
            text = write_efg(g)
            again = parse_efg(text)
            assert structurally_equal(g, again)
            assert write_efg(again) == text

    @pytest.mark.parametrize("seed", range(25))
    def test_random_games_roundtrip(self, seed):
        g = random_game(seed)
        text = write_efg(g)
        again = parse_efg(text)
        assert structurally_equal(g, again)
        assert write_efg(again) == text


class TestDot:
    @staticmethod
    def counts(dot: str):
        vertices = sum(1 for line in dot.splitlines() if "[shape=" in line)
        tree_edges = sum(
            1 for line in dot.splitlines() if "->" in line and "dashed" not in line
        )
        links = sum(1 for line in dot.splitlines() if "dashed" in line)
        return vertices, tree_edges, links

    def test_trust_game_counts(self):
        assert self.counts(write_dot(trust_game())) == (5, 4, 0)

    def test_one_card_poker_has_one_infoset_link(self):
        vertices, edges, links = self.counts(write_dot(one_card_poker()))
        assert (vertices, edges, links) == (11, 10, 1)

    def test_single_node_game(self):
        g = Game.new_tree(["A"], "tiny")
        assert self.counts(write_dot(g)) == (1, 0, 0)

    def test_labels_present(self):
        dot = write_dot(trust_game())
        assert 'label="Buyer"' in dot
        assert 'label="Honor"' in dot
        assert 'label="(1, 1)"' in dot
