"""In-memory extensive-form games and the six tree-building operations.

A ``Game`` is a rooted tree of decision and terminal nodes, plus information
sets grouping decision nodes and outcomes carrying payoff vectors.  All
probabilities and payoffs are exact rationals (``fractions.Fraction``), so
chance distributions can be checked for sum-to-one exactly.

Nodes are addressed by their path of child indices from the root
(``"root"``, ``"root.0"``, ``"root.0.1"``, ...).  Stable integer ids exist
internally but are never part of the public surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Rational = Fraction


class _ChancePlayer:
    """Singleton sentinel for the chance (nature) player."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "CHANCE"


CHANCE = _ChancePlayer()


# ---------------------------------------------------------------------------
# Errors


class GameError(Exception):
    """Base class for all game-construction errors."""


class EmptyPlayerListError(GameError):
    pass


class DuplicatePlayerNameError(GameError):
    pass


class UnknownPlayerError(GameError):
    pass


class NodeNotTerminalError(GameError):
    pass


class EmptyActionListError(GameError):
    pass


class DuplicateNodeError(GameError):
    pass


class PayoffArityMismatchError(GameError):
    pass


class UnknownOutcomeError(GameError):
    pass


class NotChanceInfosetError(GameError):
    pass


class ProbArityMismatchError(GameError):
    pass


class ProbsNotNormalizedError(GameError):
    pass


class NodeNotInternalError(GameError):
    pass


class OwnerMismatchError(GameError):
    pass


class ChildCountMismatchError(GameError):
    pass


class UnresolvedPathError(GameError):
    """A node path did not resolve; carries the first failing segment."""

    def __init__(self, path: "NodePath", segment: int):
        self.path = path
        self.segment = segment
        super().__init__(f"unresolved path {path} at segment {segment}")


class FrozenGameError(GameError):
    pass


class InvalidGameError(GameError):
    pass


# ---------------------------------------------------------------------------
# Node paths


@dataclass(frozen=True, order=True)
class NodePath:
    """Path of child indices from the root; the canonical node reference."""

    segments: tuple[int, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "NodePath":
        parts = text.strip().split(".")
        if not parts or parts[0] != "root":
            raise ValueError(f"node path must start with 'root': {text!r}")
        segs = []
        for part in parts[1:]:
            if not part.isdigit():
                raise ValueError(f"malformed node path segment {part!r} in {text!r}")
            segs.append(int(part))
        return cls(tuple(segs))

    def child(self, index: int) -> "NodePath":
        return NodePath(self.segments + (index,))

    @property
    def parent(self) -> "NodePath":
        if not self.segments:
            raise ValueError("root has no parent")
        return NodePath(self.segments[:-1])

    def __str__(self):
        return "root" + "".join(f".{i}" for i in self.segments)


NodeRef = Union["NodePath", str, Sequence[int], "NodeView"]


def as_path(ref: NodeRef) -> NodePath:
    if isinstance(ref, NodeView):
        return ref.path
    if isinstance(ref, NodePath):
        return ref
    if isinstance(ref, str):
        return NodePath.parse(ref)
    return NodePath(tuple(int(i) for i in ref))


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and 'a/b' strings to Fraction; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not valid rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(
        f"expected an exact rational (int, Fraction or 'a/b'), got {type(value).__name__}"
    )


# ---------------------------------------------------------------------------
# Internal storage


@dataclass
class _Node:
    uid: int
    label: str = ""
    parent: int | None = None
    children: list[int] = field(default_factory=list)
    infoset: tuple | None = None  # (owner, num); None iff terminal
    outcome: int | None = None


@dataclass
class _Infoset:
    owner: object  # 0-based player index or CHANCE
    num: int  # 1-based, scoped per owner
    actions: list[str]
    members: list[int] = field(default_factory=list)
    probs: list[Fraction] | None = None  # chance infosets only


@dataclass(frozen=True)
class Outcome:
    """An outcome: a payoff vector (one entry per player) with a label."""

    id: int
    label: str
    payoffs: tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# Views


class NodeView:
    """Read-only accessor for one node of a game."""

    __slots__ = ("_game", "_uid")

    def __init__(self, game: "Game", uid: int):
        self._game = game
        self._uid = uid

    @property
    def path(self) -> NodePath:
        return self._game._path_of(self._uid)

    @property
    def label(self) -> str:
        return self._game._nodes[self._uid].label

    @property
    def is_terminal(self) -> bool:
        return not self._game._nodes[self._uid].children

    @property
    def children(self) -> list["NodeView"]:
        return [NodeView(self._game, c) for c in self._game._nodes[self._uid].children]

    @property
    def num_children(self) -> int:
        return len(self._game._nodes[self._uid].children)

    @property
    def infoset(self) -> Union["InfosetView", None]:
        key = self._game._nodes[self._uid].infoset
        return None if key is None else InfosetView(self._game, key)

    @property
    def player(self):
        """Owning player name, CHANCE, or None for terminal nodes."""
        infoset = self.infoset
        if infoset is None:
            return None
        return infoset.player

    @property
    def actions(self) -> tuple[str, ...]:
        infoset = self.infoset
        return () if infoset is None else infoset.actions

    @property
    def outcome(self) -> Outcome | None:
        oid = self._game._nodes[self._uid].outcome
        return None if oid is None else self._game.outcome(oid)

    def __eq__(self, other):
        return (
            isinstance(other, NodeView)
            and other._game is self._game
            and other._uid == self._uid
        )

    def __hash__(self):
        return hash((id(self._game), self._uid))

    def __repr__(self):
        return f"<node {self.path}>"


class InfosetView:
    """Read-only accessor for one information set."""

    __slots__ = ("_game", "_key")

    def __init__(self, game: "Game", key: tuple):
        self._game = game
        self._key = key

    @property
    def _infoset(self) -> _Infoset:
        return self._game._infosets[self._key]

    @property
    def player(self):
        owner = self._infoset.owner
        return CHANCE if owner is CHANCE else self._game.players[owner]

    @property
    def is_chance(self) -> bool:
        return self._infoset.owner is CHANCE

    @property
    def number(self) -> int:
        return self._infoset.num

    @property
    def actions(self) -> tuple[str, ...]:
        return tuple(self._infoset.actions)

    @property
    def members(self) -> list[NodeView]:
        return [NodeView(self._game, uid) for uid in self._infoset.members]

    @property
    def probs(self) -> tuple[Fraction, ...] | None:
        p = self._infoset.probs
        return None if p is None else tuple(p)

    def __eq__(self, other):
        return (
            isinstance(other, InfosetView)
            and other._game is self._game
            and other._key == self._key
        )

    def __hash__(self):
        return hash((id(self._game), self._key))

    def __repr__(self):
        return f"<infoset {self.player}:{self.number} x{len(self._infoset.members)}>"


# ---------------------------------------------------------------------------
# Game


class Game:
    """A mutable extensive-form game under construction.

    Build games through :meth:`new_tree` and the five mutating operations.
    A finished game can be frozen; frozen games refuse further mutation and
    are safe to share across threads.
    """

    def __init__(self, players: Sequence[str], title: str = "", comment: str = ""):
        players = list(players)
        if not players:
            raise EmptyPlayerListError("new_tree: player list must not be empty")
        seen = set()
        for name in players:
            if name in seen:
                raise DuplicatePlayerNameError(f"new_tree: duplicate player name: {name!r}")
            seen.add(name)
        self.title = title
        self.comment = comment
        self.players: list[str] = players
        self._nodes: dict[int, _Node] = {}
        self._infosets: dict[tuple, _Infoset] = {}
        self._outcomes: dict[int, Outcome] = {}
        self._next_uid = 0
        self._next_infoset_num: dict[object, int] = {}
        self._next_outcome_id = 1
        self._frozen = False
        self._root = self._new_node(parent=None)

    # -- construction entry point

    @classmethod
    def new_tree(cls, players: Sequence[str], title: str = "") -> "Game":
        """Create a game whose tree is a single terminal root node."""
        return cls(players, title=title)

    # -- internal helpers

    def _new_node(self, parent: int | None, label: str = "") -> int:
        uid = self._next_uid
        self._next_uid += 1
        self._nodes[uid] = _Node(uid=uid, label=label, parent=parent)
        return uid

    def _check_mutable(self):
        if self._frozen:
            raise FrozenGameError("game is frozen and can no longer be mutated")

    def _player_index(self, player):
        if player is CHANCE:
            return CHANCE
        if isinstance(player, int):
            if not 1 <= player <= len(self.players):
                raise UnknownPlayerError(f"append_move: unknown player index {player}")
            return player - 1
        if isinstance(player, str):
            try:
                return self.players.index(player)
            except ValueError:
                raise UnknownPlayerError(f"append_move: unknown player: {player!r}") from None
        raise UnknownPlayerError(f"append_move: unknown player: {player!r}")

    def _resolve(self, ref: NodeRef) -> int:
        if isinstance(ref, NodeView):
            if ref._game is not self:
                raise UnresolvedPathError(ref.path, 0)
            return ref._uid
        path = as_path(ref)
        uid = self._root
        for i, index in enumerate(path.segments):
            children = self._nodes[uid].children
            if index < 0 or index >= len(children):
                raise UnresolvedPathError(path, i + 1)
            uid = children[index]
        return uid

    def _path_of(self, uid: int) -> NodePath:
        segs = []
        node = self._nodes[uid]
        while node.parent is not None:
            parent = self._nodes[node.parent]
            segs.append(parent.children.index(node.uid))
            node = parent
        return NodePath(tuple(reversed(segs)))

    def _infoset_of_ref(self, ref) -> tuple:
        """Infoset key for a node reference or InfosetView."""
        if isinstance(ref, InfosetView):
            if ref._game is not self:
                raise GameError("infoset belongs to a different game")
            return ref._key
        uid = self._resolve(ref)
        key = self._nodes[uid].infoset
        if key is None:
            raise NodeNotInternalError(
                "set_infoset: node must be internal (append_move first)"
            )
        return key

    # -- the six operations

    def append_move(self, nodes, player, actions: Sequence[str]) -> None:
        """Add a move at one or more terminal nodes.

        Every listed node becomes a decision node of ``player`` with one
        fresh terminal child per action, and all listed nodes join a single
        new information set.  Chance infosets start out with the uniform
        distribution.
        """
        self._check_mutable()
        actions = [str(a) for a in actions]
        if not actions:
            raise EmptyActionListError("append_move: action list must not be empty")
        owner = self._player_index(player)
        if isinstance(nodes, (str, NodePath, NodeView)) or (
            isinstance(nodes, Sequence) and nodes and isinstance(nodes[0], int)
        ):
            refs = [nodes]
        else:
            refs = list(nodes)
        if not refs:
            raise GameError("append_move: no nodes given")
        uids = [self._resolve(r) for r in refs]
        if len(set(uids)) != len(uids):
            raise DuplicateNodeError("append_move: nodes must be distinct")
        for uid in uids:
            if self._nodes[uid].children:
                raise NodeNotTerminalError("append_move: node is not terminal")
        num = self._next_infoset_num.get(owner, 0) + 1
        self._next_infoset_num[owner] = num
        probs = None
        if owner is CHANCE:
            probs = [Fraction(1, len(actions))] * len(actions)
        infoset = _Infoset(owner=owner, num=num, actions=actions, probs=probs)
        self._infosets[(owner, num)] = infoset
        for uid in uids:
            node = self._nodes[uid]
            node.infoset = (owner, num)
            infoset.members.append(uid)
            for _ in actions:
                node.children.append(self._new_node(parent=uid))

    def add_outcome(self, payoffs: Sequence, label: str = "") -> Outcome:
        """Register a new outcome; it is not attached to any node yet."""
        self._check_mutable()
        values = tuple(as_rational(v) for v in payoffs)
        if len(values) != len(self.players):
            raise PayoffArityMismatchError(
                f"add_outcome: expected {len(self.players)} payoffs, got {len(values)}"
            )
        outcome = Outcome(id=self._next_outcome_id, label=str(label), payoffs=values)
        self._next_outcome_id += 1
        self._outcomes[outcome.id] = outcome
        return outcome

    def set_outcome(self, node: NodeRef, outcome: Outcome | int | None) -> None:
        """Attach an outcome to a node, or detach with ``None``."""
        self._check_mutable()
        uid = self._resolve(node)
        if outcome is None:
            self._nodes[uid].outcome = None
            return
        oid = outcome.id if isinstance(outcome, Outcome) else int(outcome)
        if oid not in self._outcomes:
            raise UnknownOutcomeError(f"set_outcome: unknown outcome {oid}")
        self._nodes[uid].outcome = oid

    def set_chance_probs(self, target, probs: Sequence) -> None:
        """Replace the move distribution of a chance infoset.

        ``target`` may be an :class:`InfosetView` or any node reference, in
        which case the node's infoset is used.
        """
        self._check_mutable()
        if isinstance(target, InfosetView):
            key = target._key
        else:
            uid = self._resolve(target)
            key = self._nodes[uid].infoset
            if key is None:
                raise NotChanceInfosetError("set_chance_probs: node is not a chance node")
        infoset = self._infosets[key]
        if infoset.owner is not CHANCE:
            raise NotChanceInfosetError("set_chance_probs: infoset is not owned by chance")
        values = [as_rational(p) for p in probs]
        if len(values) != len(infoset.actions):
            raise ProbArityMismatchError(
                f"set_chance_probs: expected {len(infoset.actions)} probabilities, "
                f"got {len(values)}"
            )
        if any(p < 0 for p in values) or sum(values) != 1:
            raise ProbsNotNormalizedError(
                "set_chance_probs: probabilities must be nonnegative and sum to 1"
            )
        infoset.probs = values

    def set_infoset(self, node: NodeRef, target) -> None:
        """Move a decision node into the information set of another node.

        ``target`` may be an :class:`InfosetView` or a node reference whose
        infoset is taken.  The node's action labels become the target's;
        its old infoset is deleted if this empties it.
        """
        self._check_mutable()
        uid = self._resolve(node)
        node_rec = self._nodes[uid]
        if node_rec.infoset is None:
            raise NodeNotInternalError(
                "set_infoset: node must be internal (append_move first)"
            )
        target_key = self._infoset_of_ref(target)
        target_set = self._infosets[target_key]
        current_key = node_rec.infoset
        if self._infosets[current_key].owner is not target_set.owner:
            raise OwnerMismatchError(
                "set_infoset: node owner does not match infoset owner"
            )
        if len(node_rec.children) != len(target_set.actions):
            raise ChildCountMismatchError(
                "set_infoset: node must have the same number of descendants "
                "as infoset has actions"
            )
        if current_key == target_key:
            return
        current = self._infosets[current_key]
        current.members.remove(uid)
        if not current.members:
            del self._infosets[current_key]
        target_set.members.append(uid)
        node_rec.infoset = target_key

    # -- freezing

    def freeze(self) -> "Game":
        """Mark the game immutable; mutating operations then raise."""
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # -- read access

    @property
    def root(self) -> NodeView:
        return NodeView(self, self._root)

    def node(self, ref: NodeRef) -> NodeView:
        return NodeView(self, self._resolve(ref))

    def outcome(self, oid: int) -> Outcome:
        if oid not in self._outcomes:
            raise UnknownOutcomeError(f"unknown outcome {oid}")
        return self._outcomes[oid]

    @property
    def outcomes(self) -> list[Outcome]:
        return [self._outcomes[oid] for oid in sorted(self._outcomes)]

    @property
    def infosets(self) -> list[InfosetView]:
        keys = sorted(
            self._infosets,
            key=lambda k: (len(self.players) if k[0] is CHANCE else k[0], k[1]),
        )
        return [InfosetView(self, k) for k in keys]

    def nodes(self) -> Iterator[NodeView]:
        """All nodes in depth-first pre-order, children in action order."""
        stack = [self._root]
        while stack:
            uid = stack.pop()
            yield NodeView(self, uid)
            stack.extend(reversed(self._nodes[uid].children))

    def __repr__(self):
        return f"<Game {self.title!r} players={self.players}>"


# ---------------------------------------------------------------------------
# Structural validation


@dataclass(frozen=True)
class Violation:
    """One structural problem; ``fatal`` violations make a game unusable."""

    code: str
    where: str
    message: str
    fatal: bool

    def __str__(self):
        kind = "error" if self.fatal else "warning"
        return f"{kind} {self.code} at {self.where}: {self.message}"


def validate_structure(game: Game) -> list[Violation]:
    """Check every structural invariant; returns an empty list only when the
    game is fully consistent and every leaf carries an outcome.

    Missing leaf outcomes and outcomes on internal nodes are reported as
    non-fatal warnings.
    """
    found: list[Violation] = []

    def err(code, where, message):
        found.append(Violation(code, where, message, fatal=True))

    def warn(code, where, message):
        found.append(Violation(code, where, message, fatal=False))

    # Tree shape: reachability, single parentage, no cycles.
    seen: set[int] = set()
    stack = [game._root]
    while stack:
        uid = stack.pop()
        if uid in seen:
            err("NotATree", str(game._path_of(uid)), "node reachable twice (cycle or shared child)")
            continue
        seen.add(uid)
        node = game._nodes[uid]
        for child in node.children:
            if game._nodes[child].parent != uid:
                err("NotATree", str(game._path_of(uid)), "child parent pointer mismatch")
            stack.append(child)
    unreachable = set(game._nodes) - seen
    for uid in sorted(unreachable):
        err("Unreachable", f"node#{uid}", "node not reachable from root")

    for uid in sorted(seen):
        node = game._nodes[uid]
        where = str(game._path_of(uid))
        if node.children:
            if node.infoset is None:
                err("MissingInfoset", where, "internal node belongs to no information set")
            else:
                infoset = game._infosets.get(node.infoset)
                if infoset is None:
                    err("DanglingInfoset", where, "node references a deleted information set")
                elif len(node.children) != len(infoset.actions):
                    err(
                        "ChildCountMismatch",
                        where,
                        f"{len(node.children)} children but infoset has "
                        f"{len(infoset.actions)} actions",
                    )
            if node.outcome is not None:
                warn("OutcomeOnInternalNode", where, "outcome attached to an internal node")
        else:
            if node.infoset is not None:
                err("TerminalWithInfoset", where, "terminal node belongs to an information set")
            if node.outcome is None:
                warn("MissingLeafOutcome", where, "terminal node carries no outcome")
        if node.outcome is not None and node.outcome not in game._outcomes:
            err("DanglingOutcome", where, f"outcome {node.outcome} does not exist")

    for key, infoset in game._infosets.items():
        owner_name = "chance" if infoset.owner is CHANCE else game.players[infoset.owner]
        where = f"infoset {owner_name}:{infoset.num}"
        if not infoset.members:
            err("EmptyInfoset", where, "information set has no members")
        for uid in infoset.members:
            if game._nodes[uid].infoset != key:
                err("OwnerMismatch", where, "member does not point back at this infoset")
        if infoset.owner is CHANCE:
            if infoset.probs is None:
                err("ProbsMissing", where, "chance infoset has no distribution")
            elif len(infoset.probs) != len(infoset.actions):
                err("ProbArityMismatch", where, "one probability per action required")
            elif any(p < 0 for p in infoset.probs) or sum(infoset.probs) != 1:
                err("ProbsNotNormalized", where, "probabilities must be nonnegative and sum to 1")
        elif infoset.probs is not None:
            err("ProbsOnPersonal", where, "personal infoset carries probabilities")

    for oid, outcome in game._outcomes.items():
        if len(outcome.payoffs) != len(game.players):
            err("PayoffArityMismatch", f"outcome {oid}", "one payoff per player required")

    return found


def fatal_violations(game: Game) -> list[Violation]:
    return [v for v in validate_structure(game) if v.fatal]
