import random
from fractions import Fraction
from pathlib import Path

import pytest

from gameforge.game import CHANCE, Game

REPO_ROOT = Path(__file__).resolve().parent.parent

TRICKY_LABELS = ['plain', 'with space', 'quote " inside', 'back\\slash', 'a,b']


@pytest.fixture
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture
def corpus_dir() -> Path:
    return REPO_ROOT / "corpus"


def random_game(seed: int, max_nodes: int = 30) -> Game:
    """Build a deterministic pseudo-random game through the public ops."""
    rng = random.Random(seed)
    players = [f"P{i + 1}" for i in range(rng.randint(1, 3))]
    g = Game.new_tree(players, title=f"random game {seed}")

    leaves = ["root"]
    nodes = 1
    target = rng.randint(1, max_nodes)
    while leaves and nodes < target:
        path = leaves.pop(rng.randrange(len(leaves)))
        n_actions = rng.randint(1, 3)
        if nodes + n_actions > max_nodes:
            break
        actions = [
            rng.choice(TRICKY_LABELS) if rng.random() < 0.2 else f"m{i}"
            for i in range(n_actions)
        ]
        owner = CHANCE if rng.random() < 0.3 else rng.choice(players)
        g.append_move(path, owner, actions)
        prefix = path if path != "root" else "root"
        children = [f"{prefix}.{i}" for i in range(n_actions)]
        leaves.extend(children)
        nodes += n_actions
        if owner is CHANCE and rng.random() < 0.5 and n_actions > 1:
            weights = [rng.randint(1, 5) for _ in range(n_actions)]
            total = sum(weights)
            g.set_chance_probs(path, [Fraction(w, total) for w in weights])

    # Merge a few compatible infosets.
    buckets: dict[tuple, list] = {}
    for view in g.nodes():
        if view.is_terminal:
            continue
        key = (str(view.player), view.num_children, tuple(view.actions))
        buckets.setdefault(key, []).append(view)
    for group in buckets.values():
        anchor = group[0]
        for other in group[1:]:
            if rng.random() < 0.5:
                g.set_infoset(other, anchor)

    # Attach outcomes to most leaves; leave some bare on purpose.
    outcomes = [
        g.add_outcome(
            [Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2, 3])) for _ in players],
            label=rng.choice(["", "win", 'odd "label"']),
        )
        for _ in range(rng.randint(1, 4))
    ]
    for view in g.nodes():
        if view.is_terminal and rng.random() < 0.85:
            g.set_outcome(view, rng.choice(outcomes))
    return g.freeze()
