"""Corpus management and the automated consistency check.

A corpus directory holds one subfolder per game:

    corpus/<game-id>/description.txt   natural-language description
    corpus/<game-id>/expected.json     expected structural features
    corpus/<game-id>/reference.efg     golden reference build (optional)

expected.json carries exactly six feature fields plus an optional
``perfect_recall``; unknown keys are rejected so metadata drift fails fast.

The automated check compares computed features field by field.  It is a
*necessary* condition only: feature equality cannot decide whether move
labels, information sets and payoffs actually mean what the description
says, so every check also emits a human-review worksheet, and the semantic
verdict stays with the reviewer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .features import compute_features
from .game import CHANCE, Game


class CorpusError(Exception):
    pass


class MissingDescriptionError(CorpusError):
    pass


class MalformedMetadataError(CorpusError):
    pass


_REQUIRED_FIELDS = (
    "perfect_info",
    "zero_sum",
    "max_depth",
    "n_players",
    "n_decision_nodes",
    "n_leaves",
)
_BOOL_FIELDS = {"perfect_info", "zero_sum", "perfect_recall"}


@dataclass(frozen=True)
class ExpectedFeatures:
    perfect_info: bool
    zero_sum: bool
    max_depth: int
    n_players: int
    n_decision_nodes: int
    n_leaves: int
    perfect_recall: bool | None = None

    @classmethod
    def from_dict(cls, data: dict, where: str = "expected.json") -> "ExpectedFeatures":
        if not isinstance(data, dict):
            raise MalformedMetadataError(f"{where}: expected a JSON object")
        unknown = set(data) - set(_REQUIRED_FIELDS) - {"perfect_recall"}
        if unknown:
            raise MalformedMetadataError(
                f"{where}: unknown fields {sorted(unknown)}"
            )
        missing = [f for f in _REQUIRED_FIELDS if f not in data]
        if missing:
            raise MalformedMetadataError(f"{where}: missing fields {missing}")
        values = {}
        for key, value in data.items():
            if key in _BOOL_FIELDS:
                if not isinstance(value, bool):
                    raise MalformedMetadataError(f"{where}: {key} must be a boolean")
            elif not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise MalformedMetadataError(f"{where}: {key} must be a nonnegative integer")
            values[key] = value
        return cls(**values)

    def compared_fields(self) -> tuple[str, ...]:
        if self.perfect_recall is not None:
            return _REQUIRED_FIELDS + ("perfect_recall",)
        return _REQUIRED_FIELDS


@dataclass(frozen=True)
class CorpusEntry:
    game_id: str
    description: str
    expected: ExpectedFeatures
    reference_efg: Path | None = None


def load_corpus(directory: str | Path) -> list[CorpusEntry]:
    """Load and validate every game folder under ``directory``."""
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"corpus directory not found: {directory}")
    entries = []
    for folder in sorted(p for p in directory.iterdir() if p.is_dir()):
        game_id = folder.name
        description_path = folder / "description.txt"
        expected_path = folder / "expected.json"
        if not description_path.is_file():
            raise MissingDescriptionError(f"{game_id}: missing description.txt")
        if not expected_path.is_file():
            raise MalformedMetadataError(f"{game_id}: missing expected.json")
        description = description_path.read_text(encoding="utf-8").strip()
        if not description:
            raise MissingDescriptionError(f"{game_id}: description.txt is empty")
        try:
            raw = json.loads(expected_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise MalformedMetadataError(f"{game_id}: expected.json: {exc}") from exc
        expected = ExpectedFeatures.from_dict(raw, where=f"{game_id}/expected.json")
        reference = folder / "reference.efg"
        entries.append(
            CorpusEntry(
                game_id=game_id,
                description=description,
                expected=expected,
                reference_efg=reference if reference.is_file() else None,
            )
        )
    return entries


@dataclass(frozen=True)
class FeatureDiff:
    field: str
    expected: object
    actual: object

    def __str__(self):
        return f"{self.field}: expected {self.expected}, got {self.actual}"


@dataclass(frozen=True)
class ConsistencyResult:
    structural_pass: bool
    feature_diff: tuple[FeatureDiff, ...]
    worksheet: str


def consistency_check(game: Game, expected: ExpectedFeatures) -> ConsistencyResult:
    """Compare computed features against the expected row, field by field.

    Only order-insensitive fields are compared (counts, depth, flags), so a
    simultaneous-move game modeled with either player moving first passes.
    A passing check is necessary, not sufficient; semantic confirmation is
    the reviewer's, via the returned worksheet.
    """
    actual = compute_features(game)
    diff = []
    for field_name in expected.compared_fields():
        want = getattr(expected, field_name)
        got = getattr(actual, field_name)
        if want != got:
            diff.append(FeatureDiff(field_name, want, got))
    return ConsistencyResult(
        structural_pass=not diff,
        feature_diff=tuple(diff),
        worksheet=review_worksheet(game),
    )


def review_worksheet(game: Game) -> str:
    """Render the tree walk, infoset partition and payoff table for human review."""
    lines = [f"# Review worksheet: {game.title or '(untitled)'}", ""]
    lines.append("Players: " + ", ".join(
        f"{i + 1}. {name}" for i, name in enumerate(game.players)
    ))
    lines.append("")
    lines.append("## Tree walk")
    lines.append("")
    _walk(game, game.root, None, 0, lines)
    lines.append("")
    lines.append("## Information sets")
    lines.append("")
    for infoset in game.infosets:
        owner = "chance" if infoset.player is CHANCE else infoset.player
        members = ", ".join(str(m.path) for m in infoset.members)
        actions = ", ".join(infoset.actions)
        suffix = ""
        if infoset.is_chance:
            suffix = " with probabilities " + ", ".join(str(p) for p in infoset.probs)
        lines.append(
            f"- {owner} #{infoset.number}: members [{members}]; actions [{actions}]{suffix}"
        )
    lines.append("")
    lines.append("## Payoffs at leaves")
    lines.append("")
    lines.append("| leaf | outcome | payoffs |")
    lines.append("| --- | --- | --- |")
    for view in game.nodes():
        if not view.is_terminal:
            continue
        outcome = view.outcome
        if outcome is None:
            lines.append(f"| {view.path} | (none) | |")
        else:
            payoffs = ", ".join(str(v) for v in outcome.payoffs)
            lines.append(f"| {view.path} | {outcome.label or '(unlabeled)'} | ({payoffs}) |")
    lines.append("")
    lines.append(
        "Confirm that movers, move labels, information grouping and payoffs "
        "match the game description; feature equality alone is only a "
        "necessary condition."
    )
    return "\n".join(lines) + "\n"


def _walk(game, view, action, depth, lines):
    indent = "  " * depth
    arrow = f"--{action}--> " if action is not None else ""
    if view.is_terminal:
        outcome = view.outcome
        payoffs = (
            "(" + ", ".join(str(v) for v in outcome.payoffs) + ")"
            if outcome
            else "(no outcome)"
        )
        lines.append(f"{indent}- {arrow}leaf {view.path}: {payoffs}")
        return
    owner = "chance" if view.player is CHANCE else view.player
    lines.append(f"{indent}- {arrow}{owner} moves at {view.path}")
    for act, child in zip(view.actions, view.children):
        _walk(game, child, act, depth + 1, lines)
