"""Reader and writer for the Gambit .efg text format, plus DOT export.

The writer emits a canonical form: node records in depth-first pre-order
(children in action order), the full infoset body at every member node,
rationals as ``a/b`` (or ``a`` for integers), payoffs comma-separated,
LF line endings.  Writing a frozen game twice yields identical bytes.

The parser is tolerant: it accepts comma- or space-separated payoffs,
CRLF line endings, decimal literals (converted exactly), and repeated
infoset/outcome bodies, which are checked for consistency.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .game import (
    CHANCE,
    Game,
    InvalidGameError,
    _Infoset,
    Outcome,
    fatal_violations,
)


class EfgSyntaxError(Exception):
    """Malformed .efg input; carries 1-based line and column."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message


class InconsistentRedefinitionError(EfgSyntaxError):
    """A repeated infoset or outcome body disagrees with an earlier one."""


class DanglingReferenceError(Exception):
    """An infoset or outcome number is referenced but never defined."""


# ---------------------------------------------------------------------------
# Writing


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _format_rational(value: Fraction) -> str:
    return str(value)  # Fraction prints "a/b", or "a" when the denominator is 1


def write_efg(game: Game) -> str:
    """Serialize a game to canonical .efg text (format version 2, rational)."""
    bad = fatal_violations(game)
    if bad:
        raise InvalidGameError("; ".join(str(v) for v in bad))

    lines = [
        f"EFG 2 R {_quote(game.title)} "
        f"{{ {' '.join(_quote(p) for p in game.players)} }}"
    ]
    if game.comment:
        lines.append(_quote(game.comment))

    # Canonical infoset numbers: 1-based per owner, in order of first
    # appearance during the pre-order walk.
    numbers: dict[tuple, int] = {}
    counters: dict[object, int] = {}

    stack = [game._root]
    while stack:
        uid = stack.pop()
        node = game._nodes[uid]
        outcome_part = _outcome_part(game, node.outcome)
        if not node.children:
            lines.append(f"t {_quote(node.label)} {outcome_part}")
            continue
        infoset = game._infosets[node.infoset]
        if node.infoset not in numbers:
            counters[infoset.owner] = counters.get(infoset.owner, 0) + 1
            numbers[node.infoset] = counters[infoset.owner]
        number = numbers[node.infoset]
        if infoset.owner is CHANCE:
            body = " ".join(
                f"{_quote(a)} {_format_rational(p)}"
                for a, p in zip(infoset.actions, infoset.probs)
            )
            lines.append(f'c {_quote(node.label)} {number} "" {{ {body} }} {outcome_part}')
        else:
            body = " ".join(_quote(a) for a in infoset.actions)
            lines.append(
                f'p {_quote(node.label)} {infoset.owner + 1} {number} "" '
                f"{{ {body} }} {outcome_part}"
            )
        stack.extend(reversed(node.children))

    return "\n".join(lines) + "\n"


def _outcome_part(game: Game, oid: int | None) -> str:
    if oid is None:
        return "0"
    outcome = game._outcomes[oid]
    payoffs = ", ".join(_format_rational(v) for v in outcome.payoffs)
    return f"{oid} {_quote(outcome.label)} {{ {payoffs} }}"


# ---------------------------------------------------------------------------
# Tokenizing


_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?(?:/\d+)?")


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind  # word | number | string | { | } | ,
        self.value = value
        self.line = line
        self.column = column

    def __repr__(self):
        return f"Token({self.kind}, {self.value!r}, {self.line}:{self.column})"


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\r":
            i += 1
            continue
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t":
            i += 1
            col += 1
            continue
        start_col = col
        if ch in "{},":
            tokens.append(_Token(ch if ch != "," else ",", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch == '"':
            value = []
            i += 1
            col += 1
            while True:
                if i >= n:
                    raise EfgSyntaxError(line, col, "unterminated string literal")
                c = text[i]
                if c == "\\" and i + 1 < n and text[i + 1] in ('"', "\\"):
                    value.append(text[i + 1])
                    i += 2
                    col += 2
                    continue
                if c == '"':
                    i += 1
                    col += 1
                    break
                if c == "\n":
                    raise EfgSyntaxError(line, col, "newline inside string literal")
                value.append(c)
                i += 1
                col += 1
            tokens.append(_Token("string", "".join(value), line, start_col))
            continue
        m = _NUMBER_RE.match(text, i)
        if m and (ch.isdigit() or ch == "-"):
            try:
                value = Fraction(m.group())
            except ZeroDivisionError:
                raise EfgSyntaxError(line, start_col, f"zero denominator in {m.group()!r}")
            tokens.append(_Token("number", value, line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        m = re.match(r"[A-Za-z_][A-Za-z0-9_]*", text[i:])
        if m:
            tokens.append(_Token("word", m.group(), line, start_col))
            i += m.end()
            col += m.end()
            continue
        raise EfgSyntaxError(line, col, f"unexpected character {ch!r}")
    return tokens


class _TokenStream:
    def __init__(self, tokens):
        self._tokens = tokens
        self._pos = 0

    def peek(self) -> _Token | None:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self._tokens[-1] if self._tokens else None
            line = last.line if last else 1
            col = last.column if last else 1
            raise EfgSyntaxError(line, col, "unexpected end of file")
        self._pos += 1
        return tok

    def expect(self, kind, what=None) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise EfgSyntaxError(
                tok.line, tok.column, f"expected {what or kind}, found {tok.value!r}"
            )
        return tok

    def expect_int(self, what) -> tuple[int, _Token]:
        tok = self.expect("number", what)
        if tok.value.denominator != 1:
            raise EfgSyntaxError(tok.line, tok.column, f"expected {what}, found {tok.value}")
        return int(tok.value), tok

    @property
    def exhausted(self) -> bool:
        return self._pos >= len(self._tokens)


# ---------------------------------------------------------------------------
# Parsing


def parse_efg(text: str) -> Game:
    """Parse .efg text into a game.

    Accepts the canonical writer form and common variations (separator and
    line-ending tolerance, repeated bodies).  Chance distributions must sum
    to 1 exactly; violations are reported with the offending line number.
    """
    stream = _TokenStream(_tokenize(text))

    tok = stream.expect("word", "EFG header")
    if tok.value != "EFG":
        raise EfgSyntaxError(tok.line, tok.column, "file must start with 'EFG'")
    version, vtok = stream.expect_int("format version")
    if version != 2:
        raise EfgSyntaxError(vtok.line, vtok.column, f"unsupported EFG version {version}")
    kind = stream.expect("word", "payoff kind")
    if kind.value != "R":
        raise EfgSyntaxError(
            kind.line, kind.column, f"only rational (R) files are supported, found {kind.value!r}"
        )
    title = stream.expect("string", "game title").value
    stream.expect("{", "player list")
    players = []
    while True:
        tok = stream.next()
        if tok.kind == "}":
            break
        if tok.kind != "string":
            raise EfgSyntaxError(tok.line, tok.column, "expected quoted player name")
        players.append(tok.value)
    if not players:
        raise EfgSyntaxError(tok.line, tok.column, "player list must not be empty")
    if len(set(players)) != len(players):
        raise EfgSyntaxError(tok.line, tok.column, "duplicate player name")

    comment = ""
    nxt = stream.peek()
    if nxt is not None and nxt.kind == "string":
        comment = stream.next().value

    game = Game(players, title=title, comment=comment)
    parser = _BodyParser(stream, game)
    parser.run()
    return game


class _BodyParser:
    def __init__(self, stream: _TokenStream, game: Game):
        self.stream = stream
        self.game = game
        # outcome id -> first line that referenced it without a body
        self.pending_outcomes: dict[int, _Token] = {}

    def run(self):
        pending = [self.game._root]
        while pending:
            uid = pending.pop()
            children = self.parse_record(uid)
            pending.extend(reversed(children))
        if not self.stream.exhausted:
            tok = self.stream.peek()
            raise EfgSyntaxError(
                tok.line, tok.column, "content found after the game tree was complete"
            )
        if self.pending_outcomes:
            oid, tok = next(iter(self.pending_outcomes.items()))
            raise DanglingReferenceError(
                f"line {tok.line}: outcome {oid} is referenced but never defined"
            )
        self._finalize_counters()

    def parse_record(self, uid: int) -> list[int]:
        tok = self.stream.next()
        if tok.kind != "word" or tok.value not in ("c", "p", "t"):
            raise EfgSyntaxError(tok.line, tok.column, "expected a node record (c, p or t)")
        node = self.game._nodes[uid]
        node.label = self.stream.expect("string", "node label").value

        if tok.value == "t":
            self.parse_outcome_part(uid)
            return []

        if tok.value == "p":
            player_num, ptok = self.stream.expect_int("player number")
            if not 1 <= player_num <= len(self.game.players):
                raise EfgSyntaxError(ptok.line, ptok.column, f"no player {player_num}")
            owner = player_num - 1
        else:
            owner = CHANCE

        iset_num, itok = self.stream.expect_int("infoset number")
        if self.stream.peek() is not None and self.stream.peek().kind == "string":
            self.stream.next()  # infoset label; not retained

        actions = probs = None
        if self.stream.peek() is not None and self.stream.peek().kind == "{":
            actions, probs = self.parse_infoset_body(owner is CHANCE)

        key = (owner, iset_num)
        existing = self.game._infosets.get(key)
        if existing is None:
            if actions is None:
                raise DanglingReferenceError(
                    f"line {itok.line}: infoset {iset_num} is referenced "
                    "before its actions were defined"
                )
            infoset = _Infoset(owner=owner, num=iset_num, actions=actions, probs=probs)
            self.game._infosets[key] = infoset
        else:
            infoset = existing
            if actions is not None and (
                actions != existing.actions or probs != existing.probs
            ):
                raise InconsistentRedefinitionError(
                    itok.line,
                    itok.column,
                    f"infoset {iset_num} body disagrees with an earlier definition",
                )

        node.infoset = key
        infoset.members.append(uid)
        children = [self.game._new_node(parent=uid) for _ in infoset.actions]
        node.children.extend(children)

        self.parse_outcome_part(uid)
        return children

    def parse_infoset_body(self, chance: bool):
        open_tok = self.stream.expect("{")
        actions: list[str] = []
        probs: list[Fraction] = []
        while True:
            tok = self.stream.next()
            if tok.kind == "}":
                break
            if tok.kind != "string":
                raise EfgSyntaxError(tok.line, tok.column, "expected quoted action label")
            actions.append(tok.value)
            if chance:
                num = self.stream.expect("number", "action probability")
                probs.append(num.value)
        if not actions:
            raise EfgSyntaxError(open_tok.line, open_tok.column, "empty action list")
        if chance:
            if any(p < 0 for p in probs) or sum(probs) != 1:
                raise EfgSyntaxError(
                    open_tok.line, open_tok.column, "chance probabilities must sum to 1"
                )
            return actions, probs
        return actions, None

    def parse_outcome_part(self, uid: int):
        oid, otok = self.stream.expect_int("outcome number")
        if oid < 0:
            raise EfgSyntaxError(otok.line, otok.column, "outcome number must be >= 0")
        if oid == 0:
            return
        label = None
        payoffs = None
        nxt = self.stream.peek()
        if nxt is not None and nxt.kind == "string":
            label = self.stream.next().value
            payoffs = self.parse_payoffs()
        existing = self.game._outcomes.get(oid)
        if payoffs is not None:
            outcome = Outcome(id=oid, label=label, payoffs=tuple(payoffs))
            if existing is None:
                self.game._outcomes[oid] = outcome
                self.pending_outcomes.pop(oid, None)
            elif existing != outcome:
                raise InconsistentRedefinitionError(
                    otok.line,
                    otok.column,
                    f"outcome {oid} body disagrees with an earlier definition",
                )
        elif existing is None:
            self.pending_outcomes.setdefault(oid, otok)
        self.game._nodes[uid].outcome = oid

    def parse_payoffs(self) -> list[Fraction]:
        open_tok = self.stream.expect("{", "payoff list")
        values: list[Fraction] = []
        while True:
            tok = self.stream.next()
            if tok.kind == "}":
                break
            if tok.kind == ",":
                continue
            if tok.kind != "number":
                raise EfgSyntaxError(tok.line, tok.column, "expected a payoff value")
            values.append(tok.value)
        if len(values) != len(self.game.players):
            raise EfgSyntaxError(
                open_tok.line,
                open_tok.column,
                f"expected {len(self.game.players)} payoffs, found {len(values)}",
            )
        return values

    def _finalize_counters(self):
        for (owner, num) in self.game._infosets:
            current = self.game._next_infoset_num.get(owner, 0)
            self.game._next_infoset_num[owner] = max(current, num)
        if self.game._outcomes:
            self.game._next_outcome_id = max(self.game._outcomes) + 1


# ---------------------------------------------------------------------------
# Structural identity (the roundtrip relation)


def structurally_equal(a: Game, b: Game) -> bool:
    """True when two games have the same players, tree shape, labels,
    information-set partition, chance probabilities and payoffs."""
    if a.players != b.players or a.title != b.title:
        return False

    partition_a: dict = {}
    partition_b: dict = {}
    stack = [(a._root, b._root)]
    while stack:
        ua, ub = stack.pop()
        na, nb = a._nodes[ua], b._nodes[ub]
        if na.label != nb.label or len(na.children) != len(nb.children):
            return False
        oa = a._outcomes[na.outcome] if na.outcome is not None else None
        ob = b._outcomes[nb.outcome] if nb.outcome is not None else None
        if (oa is None) != (ob is None):
            return False
        if oa is not None and (oa.payoffs != ob.payoffs or oa.label != ob.label):
            return False
        if na.children:
            ia, ib = a._infosets[na.infoset], b._infosets[nb.infoset]
            owner_a = "chance" if ia.owner is CHANCE else a.players[ia.owner]
            owner_b = "chance" if ib.owner is CHANCE else b.players[ib.owner]
            if owner_a != owner_b or ia.actions != ib.actions or ia.probs != ib.probs:
                return False
            partition_a.setdefault(na.infoset, set()).add(str(a._path_of(ua)))
            partition_b.setdefault(nb.infoset, set()).add(str(b._path_of(ub)))
        stack.extend(zip(na.children, nb.children))

    groups_a = {frozenset(v) for v in partition_a.values()}
    groups_b = {frozenset(v) for v in partition_b.values()}
    return groups_a == groups_b


# ---------------------------------------------------------------------------
# DOT export


def write_dot(game: Game) -> str:
    """Render the game as a DOT digraph.

    Decision nodes are ellipses labeled with their owner, leaves are boxes
    labeled with the payoff vector, edges carry action labels, and members
    of a non-singleton infoset are linked pairwise by dashed lines.
    """
    bad = fatal_violations(game)
    if bad:
        raise InvalidGameError("; ".join(str(v) for v in bad))

    names: dict[int, str] = {}
    lines = ["digraph game {", '  graph [ordering=out];']
    order = []
    stack = [game._root]
    while stack:
        uid = stack.pop()
        order.append(uid)
        names[uid] = f"n{len(names)}"
        stack.extend(reversed(game._nodes[uid].children))

    for uid in order:
        node = game._nodes[uid]
        name = names[uid]
        if node.children:
            infoset = game._infosets[node.infoset]
            owner = "Chance" if infoset.owner is CHANCE else game.players[infoset.owner]
            lines.append(f'  {name} [shape=ellipse, label={_quote(owner)}];')
        else:
            if node.outcome is not None:
                payoffs = game._outcomes[node.outcome].payoffs
                label = "(" + ", ".join(str(v) for v in payoffs) + ")"
            else:
                label = ""
            lines.append(f'  {name} [shape=box, label={_quote(label)}];')

    for uid in order:
        node = game._nodes[uid]
        if not node.children:
            continue
        actions = game._infosets[node.infoset].actions
        for action, child in zip(actions, node.children):
            lines.append(f'  {names[uid]} -> {names[child]} [label={_quote(action)}];')

    for key in sorted(
        game._infosets,
        key=lambda k: (len(game.players) if k[0] is CHANCE else k[0], k[1]),
    ):
        members = game._infosets[key].members
        if len(members) < 2:
            continue
        ordered = sorted(members, key=order.index)
        for left, right in zip(ordered, ordered[1:]):
            lines.append(
                f"  {names[left]} -> {names[right]} "
                "[style=dashed, dir=none, constraint=false];"
            )

    lines.append("}")
    return "\n".join(lines) + "\n"
