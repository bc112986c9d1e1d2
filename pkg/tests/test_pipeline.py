import json

import pytest

from gameforge.efg_format import write_efg
from gameforge.fixtures import (
    fixture_responses,
    scripted_generation_response,
    scripted_stage_one_response,
)
from gameforge.gamescript import script_for_game
from gameforge.llm_client import SamplingParams, open_session, write_session_file
from gameforge.pipeline import (
    ExtractionError,
    Setting,
    extract_code_block,
    generation_messages,
    run_stage_one,
    stage_one_messages,
    translate,
    write_run_artifacts,
)
from gameforge.prompts import load_templates
from gameforge.reference_games import market_entry, one_card_poker, trust_game

PARAMS = SamplingParams(model="fixture-model", temperature=0.0, top_p=1.0)

BAGWELL_STAGE_ONE = """Reasoning first.

```
# Step-by-step: the follower cannot tell what was actually chosen.
# Group the follower's decision nodes by the perceived signal.
set_infoset node=root.0.0 like=root.1.0
set_infoset node=root.0.1 like=root.1.1
```"""

PERFECT_INFO_STAGE_ONE = """```
# Firm 1 observes whether Firm 2 entered.
# Therefore, there is no need to set any information sets in this game.
```"""

BAD_SCRIPT_RESPONSE = """```
new_tree players=["A","B"] title="broken"
append_move node=root player="A" actions=["x","y"]
append_move node=root.0 player="B" actions=["l","r"]
append_move node=root.1 player="B" actions=["l","r","m"]
set_infoset node=root.0 like=root.1
```"""


@pytest.fixture(scope="module")
def templates():
    return load_templates()


def replay(tmp_path, responses, name="session.json"):
    path = tmp_path / name
    write_session_file(path, responses)
    return open_session("replay", path)


def good_script_response(game=None):
    return scripted_generation_response(game or trust_game(), Setting.A)


class TestSettingFlags:
    @pytest.mark.parametrize(
        "setting,dsl,debug,stage1",
        [
            (Setting.BASIC, False, False, False),
            (Setting.A, True, False, False),
            (Setting.B, True, True, False),
            (Setting.C, True, False, True),
            (Setting.D, True, True, True),
        ],
    )
    def test_flag_table(self, setting, dsl, debug, stage1):
        assert setting.uses_dsl is dsl
        assert setting.self_debug is debug
        assert setting.stage_one is stage1

    def test_parse(self):
        assert Setting.parse("basic") is Setting.BASIC
        assert Setting.parse("d") is Setting.D
        with pytest.raises(ValueError):
            Setting.parse("E")


class TestExtraction:
    def test_last_fence_wins(self):
        response = "```\nfirst\n```\nprose\n```gamescript\nsecond\n```"
        assert extract_code_block(response) == "second"

    def test_language_tag_tolerated(self):
        assert extract_code_block("```python\ncode\n```") == "code"

    def test_no_fence(self):
        with pytest.raises(ExtractionError):
            extract_code_block("no code here")


class TestStageOne:
    def test_grouping_fixture_yields_commands(self, tmp_path, templates):
        with replay(tmp_path, [BAGWELL_STAGE_ONE]) as session:
            out = run_stage_one("desc", templates, session, PARAMS)
        assert out.infoset_commands == (
            "set_infoset node=root.0.0 like=root.1.0",
            "set_infoset node=root.0.1 like=root.1.1",
        )
        assert out.concluded_perfect_info is False
        assert "Group the follower's decision nodes" in out.reasoning

    def test_perfect_info_conclusion(self, tmp_path, templates):
        with replay(tmp_path, [PERFECT_INFO_STAGE_ONE]) as session:
            out = run_stage_one("desc", templates, session, PARAMS)
        assert out.infoset_commands == ()
        assert out.concluded_perfect_info is True
        assert "there is no need to set" in out.code_block

    def test_no_code_fence_raises(self, tmp_path, templates):
        with replay(tmp_path, ["no block at all"]) as session:
            with pytest.raises(ExtractionError):
                run_stage_one("desc", templates, session, PARAMS)

    def test_prompt_composition(self, templates):
        messages = stage_one_messages(templates, "THE GAME")
        assert [m.role for m in messages] == ["system", "user"]
        assert "THE GAME" in messages[1].content
        assert "MUST ONLY include the necessary set_infoset" in messages[1].content
        # the three demonstrations are bound in
        assert "root.2" in messages[1].content


class TestGenerationPrompts:
    def test_stage_one_block_embedded_verbatim(self, tmp_path, templates):
        with replay(tmp_path, [BAGWELL_STAGE_ONE]) as session:
            stage_one = run_stage_one("desc", templates, session, PARAMS)
        for setting in (Setting.C, Setting.D):
            messages = generation_messages(templates, setting, "desc", stage_one)
            assert stage_one.code_block in messages[1].content

    def test_minimal_prompt_for_a_and_b(self, templates):
        for setting in (Setting.A, Setting.B):
            messages = generation_messages(templates, setting, "desc", None)
            assert "imperfect information of the game is as follows" not in messages[1].content
            assert [m.role for m in messages] == ["system", "user"]

    def test_basic_prompt_is_single_user_message(self, templates):
        messages = generation_messages(templates, Setting.BASIC, "desc", None)
        assert [m.role for m in messages] == ["user"]
        assert ".efg" in messages[1 - 1].content

    def test_stage_one_required_for_c_and_d(self, templates):
        with pytest.raises(ValueError):
            generation_messages(templates, Setting.D, "desc", None)


class TestTranslate:
    def test_first_attempt_success(self, tmp_path, templates):
        with replay(tmp_path, [good_script_response()]) as session:
            run = translate("desc", Setting.A, templates, session, PARAMS)
        assert run.succeeded
        assert len(run.attempts) == 1
        assert run.efg_text == write_efg(trust_game())
        assert run.game.frozen

    def test_error_then_success_two_attempts(self, tmp_path, templates):
        with replay(tmp_path, [BAD_SCRIPT_RESPONSE, good_script_response()]) as session:
            run = translate("desc", Setting.B, templates, session, PARAMS)
        assert run.succeeded
        assert len(run.attempts) == 2
        assert run.attempts[0].error is not None

    def test_debug_retry_carries_verbatim_error(self, tmp_path, templates):
        with replay(tmp_path, [BAD_SCRIPT_RESPONSE, good_script_response()]) as session:
            run = translate("desc", Setting.B, templates, session, PARAMS)
        retry_prompt = run.attempts[1].messages[-1]
        assert retry_prompt.role == "user"
        assert run.attempts[0].error in retry_prompt.content
        assert (
            "set_infoset: node must have the same number of descendants "
            "as infoset has actions"
        ) in retry_prompt.content
        assert retry_prompt.content.startswith("Your code contains an error.")

    def test_bland_retry_without_self_debug(self, tmp_path, templates):
        with replay(tmp_path, [BAD_SCRIPT_RESPONSE, good_script_response()]) as session:
            run = translate("desc", Setting.A, templates, session, PARAMS)
        retry_prompt = run.attempts[1].messages[-1]
        assert retry_prompt.content == templates.bland_retry
        assert run.attempts[0].error not in retry_prompt.content

    def test_attempt_cap_is_one_plus_max_debug(self, tmp_path, templates):
        responses = [BAD_SCRIPT_RESPONSE] * 6
        with replay(tmp_path, responses) as session:
            run = translate("desc", Setting.B, templates, session, PARAMS, max_debug_attempts=3)
        assert not run.succeeded
        assert len(run.attempts) == 4
        assert len(session.transcript) == 4
        assert run.failure.startswith("all 4 attempts failed")

    def test_stop_at_first_success_consumes_no_more_responses(self, tmp_path, templates):
        with replay(tmp_path, [good_script_response(), BAD_SCRIPT_RESPONSE]) as session:
            run = translate("desc", Setting.A, templates, session, PARAMS)
        assert len(session.transcript) == 1
        assert run.succeeded

    def test_basic_setting_parses_raw_efg(self, tmp_path, templates):
        raw = "```\n" + write_efg(market_entry()) + "```"
        with replay(tmp_path, [raw]) as session:
            run = translate("desc", Setting.BASIC, templates, session, PARAMS)
        assert run.succeeded
        assert run.stage_one is None
        assert run.efg_text == write_efg(market_entry())

    def test_basic_setting_reports_parse_errors(self, tmp_path, templates):
        with replay(tmp_path, ["```\nEFG 2 R nonsense\n```"] * 4) as session:
            run = translate("desc", Setting.BASIC, templates, session, PARAMS)
        assert not run.succeeded
        assert "line 1" in run.attempts[0].error

    def test_setting_d_end_to_end_with_stage_one(self, tmp_path, templates):
        game = one_card_poker()
        responses = fixture_responses(game, Setting.D)
        with replay(tmp_path, responses) as session:
            run = translate("poker desc", Setting.D, templates, session, PARAMS)
        assert run.succeeded
        assert run.stage_one is not None
        assert not run.stage_one.concluded_perfect_info
        assert run.efg_text == write_efg(game)
        # stage-one consumed one exchange, generation the second
        assert len(session.transcript) == 2

    def test_stage_one_extraction_failure_is_recorded_not_raised(self, tmp_path, templates):
        with replay(tmp_path, ["no fence"]) as session:
            run = translate("desc", Setting.D, templates, session, PARAMS)
        assert not run.succeeded
        assert run.attempts == []
        assert run.failure.startswith("stage one:")

    def test_replay_determinism(self, tmp_path, templates):
        responses = fixture_responses(trust_game(), Setting.D)
        runs = []
        for i in range(2):
            with replay(tmp_path, responses, name=f"s{i}.json") as session:
                runs.append(translate("d", Setting.D, templates, session, PARAMS))
        a, b = runs
        assert a.efg_text == b.efg_text
        assert [x.response for x in a.attempts] == [x.response for x in b.attempts]
        assert [x.messages for x in a.attempts] == [x.messages for x in b.attempts]


class TestArtifacts:
    def test_artifacts_written_and_deterministic(self, tmp_path, templates):
        responses = fixture_responses(trust_game(), Setting.D)
        outs = []
        for i in range(2):
            with replay(tmp_path, responses, name=f"r{i}.json") as session:
                run = translate("desc", Setting.D, templates, session, PARAMS)
            out = tmp_path / f"artifacts{i}"
            write_run_artifacts(run, out, label="demo")
            outs.append(out)
        names = sorted(p.name for p in outs[0].iterdir())
        assert names == [
            "final.efg",
            "payload_1.gs",
            "response_1.txt",
            "run.json",
            "stage_one.txt",
            "transcript.json",
        ]
        for name in names:
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
        meta = json.loads((outs[0] / "run.json").read_text())
        assert meta["succeeded"] is True
        assert meta["label"] == "demo"
        assert meta["setting"] == "D"

    def test_scripted_stage_one_for_perfect_info_game(self):
        text = scripted_stage_one_response(market_entry())
        assert "there is no need to set" in text
        text = scripted_stage_one_response(one_card_poker())
        assert "set_infoset node=root.0.0 like=root.1.0" in text

    def test_fixture_generation_matches_script_for_game(self):
        game = trust_game()
        payload = extract_code_block(scripted_generation_response(game, Setting.A))
        assert payload + "\n" == script_for_game(game)
