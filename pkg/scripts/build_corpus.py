#!/usr/bin/env python3
"""Regenerate corpus metadata: expected.json and reference.efg per game.

The EXPECTED table below is hand-maintained ground truth; reference builds
are checked against it before anything is written, so drift between the
two fails loudly instead of silently overwriting either side.

Depth values follow the edge-counting convention (longest root-to-leaf
path) throughout; see notes in the repository README about the three
author-created games whose published depth used a node count instead.
"""

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from gameforge.efg_format import write_efg  # noqa: E402
from gameforge.features import compute_features  # noqa: E402
from gameforge.reference_games import CORPUS_BUILDERS  # noqa: E402

# (perfect_info, zero_sum, max_depth, n_players, n_decision_nodes, n_leaves, perfect_recall)
EXPECTED = {
    "three_player_game": (False, True, 4, 3, 7, 8, True),
    "imperfect_recall_game": (False, True, 3, 2, 7, 8, False),
    "absent_minded_driver": (False, False, 2, 1, 2, 3, False),
    "bach_or_stravinsky": (False, False, 2, 2, 3, 4, True),
    "bagwell": (False, False, 3, 2, 7, 8, True),
    "kuhn_poker": (False, True, 4, 2, 25, 30, True),
    "extra_game_one": (False, False, 4, 2, 16, 21, True),
    "extra_game_two": (False, False, 4, 3, 22, 24, True),
    "market_signalling": (False, False, 3, 2, 7, 8, True),
    "nuclear_crisis": (False, False, 4, 2, 5, 6, True),
    "rock_paper_scissors": (False, True, 2, 2, 4, 9, True),
    "centipede": (True, False, 4, 2, 4, 5, True),
    "colonial_control": (True, False, 3, 2, 4, 5, True),
    "extra_game_three": (True, True, 3, 2, 17, 24, True),
    "market_entry": (True, False, 2, 2, 2, 3, True),
    "nim": (True, True, 5, 2, 12, 8, True),
    "simple_bargaining": (True, False, 5, 2, 5, 3, True),
    "tic_tac_toe": (True, True, 3, 2, 5, 5, True),
}

FIELDS = (
    "perfect_info",
    "zero_sum",
    "max_depth",
    "n_players",
    "n_decision_nodes",
    "n_leaves",
    "perfect_recall",
)


def main() -> int:
    corpus = REPO / "corpus"
    failures = 0
    for game_id, row in EXPECTED.items():
        expected = dict(zip(FIELDS, row))
        game = CORPUS_BUILDERS[game_id]()
        features = compute_features(game)
        mismatches = [
            (name, expected[name], getattr(features, name))
            for name in FIELDS
            if getattr(features, name) != expected[name]
        ]
        if mismatches:
            failures += 1
            print(f"MISMATCH {game_id}: {mismatches}")
            continue
        folder = corpus / game_id
        folder.mkdir(parents=True, exist_ok=True)
        (folder / "expected.json").write_text(
            json.dumps(expected, indent=2) + "\n", encoding="utf-8"
        )
        (folder / "reference.efg").write_text(write_efg(game), encoding="utf-8")
        print(f"wrote {game_id}")
    if failures:
        print(f"{failures} game(s) out of sync; nothing written for them")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
