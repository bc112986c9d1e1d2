"""Synthetic replay fixtures: canned model responses derived from the
reference builds, so the whole pipeline can run offline.

A fixture session for settings C/D contains a stage-one exchange followed
by a generation exchange; A/B and basic contain just the generation
exchange.  Responses are valid by construction, which makes saturated
sweeps (every sample passes) reproducible without a network.
"""

from __future__ import annotations

from pathlib import Path

from . import efg_format, gamescript
from .game import Game
from .llm_client import write_session_file
from .pipeline import Setting
from .reference_games import CORPUS_BUILDERS


def scripted_stage_one_response(game: Game) -> str:
    """A stage-one style response: grouping commands, or the perfect-info
    conclusion when every information set is a singleton."""
    lines = []
    for infoset in game.infosets:
        members = infoset.members
        if len(members) < 2:
            continue
        anchor = members[0]
        for other in members[1:]:
            lines.append(f"set_infoset node={other.path} like={anchor.path}")
    if not lines:
        lines = [
            "# Every decision node is distinguishable to its player.",
            "# Therefore, there is no need to set any information sets in this game.",
        ]
    else:
        lines.insert(0, "# Group the decision nodes a player cannot tell apart.")
    return "```\n" + "\n".join(lines) + "\n```"


def scripted_generation_response(game: Game, setting: Setting) -> str:
    """A generation-style response carrying the full program (or raw .efg)."""
    if setting.uses_dsl:
        payload = gamescript.script_for_game(game)
    else:
        payload = efg_format.write_efg(game)
    return "Here is the construction.\n\n```\n" + payload + "```"


def fixture_responses(game: Game, setting: Setting) -> list[str]:
    responses = []
    if setting.stage_one:
        responses.append(scripted_stage_one_response(game))
    responses.append(scripted_generation_response(game, setting))
    return responses


def write_replay_fixtures(
    out_dir: str | Path,
    setting: Setting,
    k: int = 5,
    builders: dict | None = None,
) -> None:
    """Write ``<out>/<game_id>/sample_<i>.json`` replay sessions for a sweep."""
    builders = builders if builders is not None else CORPUS_BUILDERS
    out = Path(out_dir)
    for game_id, builder in builders.items():
        responses = fixture_responses(builder(), setting)
        for index in range(1, k + 1):
            write_session_file(out / game_id / f"sample_{index}.json", responses)
