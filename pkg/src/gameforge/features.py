"""Structural feature extraction for extensive-form games."""

from __future__ import annotations

from dataclasses import dataclass

from .game import CHANCE, Game, InvalidGameError, fatal_violations


@dataclass(frozen=True)
class GameFeatures:
    """Structural fingerprint of a game.

    ``max_depth`` counts edges on the longest root-to-leaf path and
    ``n_decision_nodes`` counts every non-terminal node, chance nodes
    included.  ``complete`` records whether every leaf carries an outcome;
    incomplete games always report ``zero_sum=False``.
    """

    perfect_info: bool
    zero_sum: bool
    max_depth: int
    n_players: int
    n_decision_nodes: int
    n_leaves: int
    perfect_recall: bool
    complete: bool = True


def compute_features(game: Game) -> GameFeatures:
    """Compute all structural features; pure, repeat calls agree.

    Raises :class:`InvalidGameError` when the game has fatal structural
    violations (missing leaf outcomes are tolerated and reflected in
    ``complete`` / ``zero_sum``).
    """
    bad = fatal_violations(game)
    if bad:
        raise InvalidGameError("; ".join(str(v) for v in bad))

    n_decision = 0
    n_leaves = 0
    max_depth = 0
    complete = True
    attached: set[int] = set()

    stack = [(game._root, 0)]
    while stack:
        uid, depth = stack.pop()
        node = game._nodes[uid]
        if node.outcome is not None:
            attached.add(node.outcome)
        if node.children:
            n_decision += 1
            stack.extend((c, depth + 1) for c in node.children)
        else:
            n_leaves += 1
            max_depth = max(max_depth, depth)
            if node.outcome is None:
                complete = False

    perfect_info = all(len(s.members) == 1 for s in game._infosets.values())
    zero_sum = complete and all(
        sum(game._outcomes[oid].payoffs) == 0 for oid in attached
    )

    return GameFeatures(
        perfect_info=perfect_info,
        zero_sum=zero_sum,
        max_depth=max_depth,
        n_players=len(game.players),
        n_decision_nodes=n_decision,
        n_leaves=n_leaves,
        perfect_recall=_perfect_recall(game),
        complete=complete,
    )


def _perfect_recall(game: Game) -> bool:
    """True when every player remembers their own past experience.

    Two nodes may share an infoset only if the owning player reached them
    through the same sequence of (own infoset, own action) pairs; differing
    sequences mean the player has forgotten a move they made or something
    they once knew (e.g. a chance outcome observed earlier).
    """
    experience: dict[int, dict[object, tuple]] = {game._root: {}}
    order = []
    stack = [game._root]
    while stack:
        uid = stack.pop()
        order.append(uid)
        node = game._nodes[uid]
        exp = experience[uid]
        for index, child in enumerate(node.children):
            child_exp = dict(exp)
            if node.infoset is not None and node.infoset[0] is not CHANCE:
                owner = node.infoset[0]
                child_exp[owner] = child_exp.get(owner, ()) + ((node.infoset, index),)
            experience[child] = child_exp
            stack.append(child)

    for key, infoset in game._infosets.items():
        if infoset.owner is CHANCE:
            continue
        views = {
            experience[uid].get(infoset.owner, ()) for uid in infoset.members
        }
        if len(views) > 1:
            return False
    return True
