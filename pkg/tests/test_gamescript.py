from fractions import Fraction

import pytest

from gameforge.efg_format import structurally_equal, write_efg
from gameforge.game import CHANCE, NodePath
from gameforge.gamescript import (
    ExecError,
    ScriptSyntaxError,
    Symbol,
    execute_script,
    format_script,
    parse_script,
    script_for_game,
)
from gameforge.reference_games import CORPUS_BUILDERS, one_card_poker, trust_game

from conftest import random_game

TRUST_SCRIPT = """\
new_tree players=["Buyer","Seller"] title="One-shot trust game"
append_move node=root player="Buyer" actions=["Trust","Not trust"]
append_move node=root.0 player="Seller" actions=["Honor","Abuse"]
add_outcome id=trustworthy payoffs=[1,1] label="Trustworthy"
add_outcome id=untrustworthy payoffs=[-1,2] label="Untrustworthy"
add_outcome id=opt_out payoffs=[0,0] label="Opt-out"
set_outcome node=root.0.0 outcome=trustworthy
set_outcome node=root.0.1 outcome=untrustworthy
set_outcome node=root.1 outcome=opt_out
"""


class TestParse:
    def test_minimal_two_command_script(self):
        script = parse_script(
            'new_tree players=["A","B"] title="t"\n'
            'append_move node=root player="A" actions=["x","y"]\n'
        )
        assert [c.verb for c in script.commands] == ["new_tree", "append_move"]
        assert script.commands[0].line == 1
        assert script.commands[1].args["node"] == NodePath(())

    def test_first_command_must_be_new_tree(self):
        with pytest.raises(ScriptSyntaxError) as exc:
            parse_script('append_move node=root player="A" actions=["x"]')
        assert exc.value.line == 1
        assert exc.value.message == "first command must be new_tree"

    def test_new_tree_only_once(self):
        text = 'new_tree players=["A"] title="t"\nnew_tree players=["B"] title="u"'
        with pytest.raises(ScriptSyntaxError) as exc:
            parse_script(text)
        assert exc.value.line == 2

    def test_comments_and_blank_lines_ignored(self):
        script = parse_script(
            "# a comment\n\n"
            'new_tree players=["A"] title="t"  # trailing\n'
            "\n# done\n"
        )
        assert len(script.commands) == 1
        assert script.commands[0].line == 3

    def test_hash_inside_string_is_not_a_comment(self):
        script = parse_script('new_tree players=["A"] title="issue #7"')
        assert script.commands[0].args["title"] == "issue #7"

    def test_rationals_parse_exactly(self):
        script = parse_script(
            'new_tree players=["A"] title="t"\n'
            "set_chance_probs node=root probs=[1/2,1/2]\n"
        )
        assert script.commands[1].args["probs"] == [Fraction(1, 2), Fraction(1, 2)]

    def test_decimals_rejected(self):
        with pytest.raises(ScriptSyntaxError) as exc:
            parse_script('new_tree players=["A"] title="t"\n'
                         "set_chance_probs node=root probs=[0.5,0.5]\n")
        assert "rationals like 1/2" in exc.value.message

    def test_chance_keyword_and_symbols(self):
        script = parse_script(
            'new_tree players=["A"] title="t"\n'
            'append_move node=root player=chance actions=["x"]\n'
            "set_outcome node=root.0 outcome=none\n"
        )
        assert script.commands[1].args["player"] is CHANCE
        assert script.commands[2].args["outcome"] is None

    def test_unknown_verb_and_arguments(self):
        with pytest.raises(ScriptSyntaxError):
            parse_script("build_tree players=[]")
        with pytest.raises(ScriptSyntaxError) as exc:
            parse_script('new_tree players=["A"] flavor="x"')
        assert "unknown argument" in exc.value.message

    def test_missing_required_argument(self):
        with pytest.raises(ScriptSyntaxError) as exc:
            parse_script('new_tree players=["A"]\nappend_move node=root player="A"')
        assert "missing required argument 'actions'" in exc.value.message

    def test_node_xor_nodes(self):
        with pytest.raises(ScriptSyntaxError):
            parse_script(
                'new_tree players=["A"]\n'
                'append_move node=root nodes=[root] player="A" actions=["x"]'
            )

    def test_empty_script(self):
        with pytest.raises(ScriptSyntaxError):
            parse_script("# nothing here\n")

    def test_escaped_quotes_in_strings(self):
        script = parse_script('new_tree players=["A"] title="say \\"hi\\""')
        assert script.commands[0].args["title"] == 'say "hi"'


class TestFormat:
    def test_parse_format_fixed_point(self):
        script = parse_script(TRUST_SCRIPT)
        once = format_script(script)
        assert format_script(parse_script(once)) == once

    def test_canonical_output_shape(self):
        script = parse_script('new_tree   players=["A","B"]   title="t"')
        assert format_script(script) == 'new_tree players=["A","B"] title="t"\n'


class TestExecute:
    def test_trust_script_builds_expected_game(self):
        game = execute_script(parse_script(TRUST_SCRIPT))
        assert write_efg(game) == write_efg(trust_game())

    def test_multi_node_append(self):
        game = execute_script(parse_script(
            'new_tree players=["A","B"] title="t"\n'
            'append_move node=root player="A" actions=["x","y"]\n'
            'append_move nodes=[root.0,root.1] player="B" actions=["l","r"]\n'
        ))
        assert game.node("root.0").infoset == game.node("root.1").infoset

    def test_exec_error_carries_line_verb_and_core_message(self):
        text = (
            'new_tree players=["A","B"] title="t"\n'
            'append_move node=root player="A" actions=["x","y"]\n'
            'append_move node=root.0 player="B" actions=["l","r"]\n'
            'append_move node=root.1 player="B" actions=["l","r","m"]\n'
            "set_infoset node=root.0 like=root.1\n"
        )
        with pytest.raises(ExecError) as exc:
            execute_script(parse_script(text))
        err = exc.value
        assert err.line == 5
        assert err.verb == "set_infoset"
        assert err.message == (
            "set_infoset: node must have the same number of descendants "
            "as infoset has actions"
        )
        assert 1 <= err.line <= len(text.splitlines())

    def test_unresolved_path_message(self):
        text = (
            'new_tree players=["A"] title="t"\n'
            'append_move node=root player="A" actions=["x","y"]\n'
            'append_move node=root.5 player="A" actions=["z"]\n'
        )
        with pytest.raises(ExecError) as exc:
            execute_script(parse_script(text))
        assert exc.value.message == "unresolved path root.5 at segment 1"
        assert exc.value.line == 3

    def test_unknown_outcome_id(self):
        text = 'new_tree players=["A"] title="t"\nset_outcome node=root outcome=w\n'
        with pytest.raises(ExecError) as exc:
            execute_script(parse_script(text))
        assert exc.value.message == "set_outcome: unknown outcome id: w"

    def test_duplicate_outcome_id(self):
        text = (
            'new_tree players=["A"] title="t"\n'
            "add_outcome id=o payoffs=[1]\n"
            "add_outcome id=o payoffs=[2]\n"
        )
        with pytest.raises(ExecError) as exc:
            execute_script(parse_script(text))
        assert "already defined" in exc.value.message

    def test_never_partial_success(self):
        text = (
            'new_tree players=["A"] title="t"\n'
            'append_move node=root player="A" actions=["x"]\n'
            'append_move node=root player="A" actions=["y"]\n'
        )
        with pytest.raises(ExecError):
            execute_script(parse_script(text))


class TestTranscription:
    def test_poker_script_matches_hand_build_byte_for_byte(self):
        hand = one_card_poker()
        rebuilt = execute_script(parse_script(script_for_game(hand)))
        assert write_efg(rebuilt) == write_efg(hand)

    @pytest.mark.parametrize("game_id", sorted(CORPUS_BUILDERS))
    def test_corpus_games_transcribe_faithfully(self, game_id):
        g = CORPUS_BUILDERS[game_id]()
        rebuilt = execute_script(parse_script(script_for_game(g)))
        assert structurally_equal(g, rebuilt)
        assert write_efg(rebuilt) == write_efg(g)

    @pytest.mark.parametrize("seed", range(10))
    def test_random_games_transcribe_faithfully(self, seed):
        g = random_game(seed, max_nodes=20)
        rebuilt = execute_script(parse_script(script_for_game(g)))
        assert structurally_equal(g, rebuilt)

    def test_symbol_formatting(self):
        assert str(Symbol("alice_wins")) == "alice_wins"
