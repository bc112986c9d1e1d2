"""GameScript: the line-oriented builder DSL emitted by the translation LLM.

One command per line, ``verb key=value ...``; ``#`` starts a comment.
Values are quoted strings, ``[v1,v2,...]`` lists, integers, rationals
``a/b``, dotted node paths (``root``, ``root.0.1``), the bare keywords
``chance`` and ``none``, and bare identifiers naming outcomes.  There is
deliberately no control flow, no arithmetic and no variables beyond
outcome ids.

Error messages are stable, documented strings: the self-debugging loop
forwards them verbatim to the model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .game import CHANCE, Game, GameError, NodePath, Outcome

VERBS = (
    "new_tree",
    "append_move",
    "add_outcome",
    "set_outcome",
    "set_chance_probs",
    "set_infoset",
)


class ScriptSyntaxError(Exception):
    """Malformed script text; carries the 1-based source line."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class ExecError(Exception):
    """A command failed during execution; nothing after it was applied."""

    def __init__(self, line: int, verb: str, message: str):
        self.line = line
        self.verb = verb
        self.message = message
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class Symbol:
    """A bare identifier value (outcome id)."""

    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Command:
    verb: str
    args: dict
    line: int


@dataclass(frozen=True)
class Script:
    commands: tuple[Command, ...]
    source: str


# Argument schemas: (key, kind, required).  Kinds checked after lexing.
_SCHEMAS = {
    "new_tree": (("players", "str_list", True), ("title", "str", False)),
    "append_move": (
        ("node", "path", False),
        ("nodes", "path_list", False),
        ("player", "player", True),
        ("actions", "str_list", True),
    ),
    "add_outcome": (
        ("id", "symbol", True),
        ("payoffs", "rational_list", True),
        ("label", "str", False),
    ),
    "set_outcome": (("node", "path", True), ("outcome", "symbol_or_none", True)),
    "set_chance_probs": (("node", "path", True), ("probs", "rational_list", True)),
    "set_infoset": (("node", "path", True), ("like", "path", True)),
}

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PATH_RE = re.compile(r"root(?:\.\d+)*")
_NUMBER_RE = re.compile(r"-?\d+(?:/\d+)?")


# ---------------------------------------------------------------------------
# Parsing


def parse_script(text: str) -> Script:
    """Parse GameScript source; comments and blank lines are ignored."""
    commands = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = _strip_comment(raw, lineno).strip()
        if not stripped:
            continue
        commands.append(_parse_command(stripped, lineno))
    if not commands:
        raise ScriptSyntaxError(1, "script contains no commands")
    if commands[0].verb != "new_tree":
        raise ScriptSyntaxError(commands[0].line, "first command must be new_tree")
    for cmd in commands[1:]:
        if cmd.verb == "new_tree":
            raise ScriptSyntaxError(
                cmd.line, "new_tree may only appear once, as the first command"
            )
    return Script(commands=tuple(commands), source=text)


def _strip_comment(line: str, lineno: int) -> str:
    out = []
    in_string = False
    i = 0
    while i < len(line):
        ch = line[i]
        if in_string:
            if ch == "\\" and i + 1 < len(line):
                out.append(line[i : i + 2])
                i += 2
                continue
            if ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
        elif ch == "#":
            break
        out.append(ch)
        i += 1
    if in_string:
        raise ScriptSyntaxError(lineno, "unterminated string")
    return "".join(out)


class _LineScanner:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.pos = 0
        self.lineno = lineno

    def error(self, message: str):
        raise ScriptSyntaxError(self.lineno, message)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    @property
    def done(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if not self.done else ""

    def ident(self, what: str) -> str:
        m = _IDENT_RE.match(self.text, self.pos)
        if not m:
            self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def value(self):
        ch = self.peek()
        if ch == '"':
            return self.quoted()
        if ch == "[":
            return self.list_value()
        if ch == "-" or ch.isdigit():
            return self.number()
        m = _PATH_RE.match(self.text, self.pos)
        if m and not _ident_continues(self.text, m.end()):
            self.pos = m.end()
            return NodePath.parse(m.group())
        name = self.ident("a value")
        if name == "chance":
            return CHANCE
        if name == "none":
            return None
        return Symbol(name)

    def quoted(self) -> str:
        assert self.peek() == '"'
        self.pos += 1
        out = []
        while True:
            if self.done:
                self.error("unterminated string")
            ch = self.text[self.pos]
            if ch == "\\" and self.pos + 1 < len(self.text) and self.text[self.pos + 1] in ('"', "\\"):
                out.append(self.text[self.pos + 1])
                self.pos += 2
                continue
            if ch == '"':
                self.pos += 1
                return "".join(out)
            out.append(ch)
            self.pos += 1

    def list_value(self) -> list:
        assert self.peek() == "["
        self.pos += 1
        items = []
        self.skip_ws()
        if self.peek() == "]":
            self.pos += 1
            return items
        while True:
            self.skip_ws()
            items.append(self.value())
            self.skip_ws()
            ch = self.peek()
            if ch == ",":
                self.pos += 1
                continue
            if ch == "]":
                self.pos += 1
                return items
            self.error("expected ',' or ']' in list")

    def number(self) -> Fraction:
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            self.error("malformed number")
        end = m.end()
        if end < len(self.text) and self.text[end] == ".":
            self.error("decimal numbers are not allowed; use rationals like 1/2")
        self.pos = end
        try:
            return Fraction(m.group())
        except ZeroDivisionError:
            self.error(f"zero denominator in {m.group()!r}")


def _ident_continues(text: str, pos: int) -> bool:
    return pos < len(text) and (text[pos].isalnum() or text[pos] == "_")


def _parse_command(text: str, lineno: int) -> Command:
    scanner = _LineScanner(text, lineno)
    verb = scanner.ident("a command verb")
    if verb not in VERBS:
        scanner.error(f"unknown command {verb!r}")
    args: dict = {}
    while True:
        scanner.skip_ws()
        if scanner.done:
            break
        key = scanner.ident("an argument name")
        if key in args:
            scanner.error(f"{verb}: duplicate argument {key!r}")
        if scanner.peek() != "=":
            scanner.error(f"{verb}: expected '=' after argument {key!r}")
        scanner.pos += 1
        args[key] = scanner.value()
    return _check_args(verb, args, lineno)


def _check_args(verb: str, args: dict, lineno: int) -> Command:
    schema = _SCHEMAS[verb]
    known = {key for key, _, _ in schema}
    for key in args:
        if key not in known:
            raise ScriptSyntaxError(lineno, f"{verb}: unknown argument {key!r}")
    for key, kind, required in schema:
        if key not in args:
            if required:
                raise ScriptSyntaxError(lineno, f"{verb}: missing required argument {key!r}")
            continue
        args[key] = _coerce(verb, key, kind, args[key], lineno)
    if verb == "append_move":
        if ("node" in args) == ("nodes" in args):
            raise ScriptSyntaxError(
                lineno, "append_move: exactly one of 'node' or 'nodes' is required"
            )
    return Command(verb=verb, args=args, line=lineno)


def _coerce(verb, key, kind, value, lineno):
    def fail(expected):
        raise ScriptSyntaxError(lineno, f"{verb}: argument {key!r} must be {expected}")

    if kind == "str":
        if not isinstance(value, str):
            fail("a quoted string")
        return value
    if kind == "path":
        if not isinstance(value, NodePath):
            fail("a node path like root.0")
        return value
    if kind == "symbol":
        if not isinstance(value, Symbol):
            fail("an identifier")
        return value
    if kind == "symbol_or_none":
        if value is not None and not isinstance(value, Symbol):
            fail("an identifier or none")
        return value
    if kind == "player":
        if value is CHANCE or isinstance(value, str):
            return value
        fail("a quoted player name or the keyword chance")
    if kind == "str_list":
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            fail("a list of quoted strings")
        return value
    if kind == "path_list":
        if not isinstance(value, list) or not all(isinstance(v, NodePath) for v in value):
            fail("a list of node paths")
        return value
    if kind == "rational_list":
        if not isinstance(value, list) or not all(isinstance(v, Fraction) for v in value):
            fail("a list of integers or rationals like 1/2")
        return value
    raise AssertionError(kind)


# ---------------------------------------------------------------------------
# Formatting (canonical re-emission)


def format_script(script: Script) -> str:
    """Pretty-print a script in canonical form; parse -> format is idempotent."""
    return "\n".join(_format_command(c) for c in script.commands) + "\n"


def _format_command(cmd: Command) -> str:
    parts = [cmd.verb]
    for key, _, _ in _SCHEMAS[cmd.verb]:
        if key in cmd.args:
            parts.append(f"{key}={_format_value(cmd.args[key])}")
    return " ".join(parts)


def _format_value(value) -> str:
    if value is None:
        return "none"
    if value is CHANCE:
        return "chance"
    if isinstance(value, Symbol):
        return value.name
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, NodePath):
        return str(value)
    if isinstance(value, list):
        return "[" + ",".join(_format_value(v) for v in value) + "]"
    raise TypeError(f"cannot format {value!r}")


# ---------------------------------------------------------------------------
# Execution


def execute_script(script: Script) -> Game:
    """Run a script against a fresh game.

    Commands apply in order; the first failure raises :class:`ExecError`
    carrying the source line, the verb and the builder's error message.
    Nothing is ever returned from a partially failed run.
    """
    game: Game | None = None
    outcomes: dict[str, Outcome] = {}
    for cmd in script.commands:
        try:
            game = _apply(cmd, game, outcomes)
        except GameError as exc:
            raise ExecError(cmd.line, cmd.verb, str(exc)) from exc
    assert game is not None  # scripts are non-empty and start with new_tree
    return game


def _apply(cmd: Command, game: Game | None, outcomes: dict[str, Outcome]) -> Game:
    args = cmd.args
    if cmd.verb == "new_tree":
        return Game.new_tree(args["players"], title=args.get("title", ""))
    assert game is not None
    if cmd.verb == "append_move":
        nodes = args["nodes"] if "nodes" in args else args["node"]
        game.append_move(nodes, args["player"], args["actions"])
    elif cmd.verb == "add_outcome":
        name = args["id"].name
        if name in outcomes:
            raise ExecError(
                cmd.line, cmd.verb, f"add_outcome: outcome id {name!r} already defined"
            )
        outcomes[name] = game.add_outcome(args["payoffs"], label=args.get("label", ""))
    elif cmd.verb == "set_outcome":
        ref = args["outcome"]
        if ref is None:
            game.set_outcome(args["node"], None)
        else:
            if ref.name not in outcomes:
                raise ExecError(
                    cmd.line, cmd.verb, f"set_outcome: unknown outcome id: {ref.name}"
                )
            game.set_outcome(args["node"], outcomes[ref.name])
    elif cmd.verb == "set_chance_probs":
        game.set_chance_probs(args["node"], args["probs"])
    elif cmd.verb == "set_infoset":
        game.set_infoset(args["node"], args["like"])
    else:
        raise AssertionError(cmd.verb)
    return game


# ---------------------------------------------------------------------------
# Transcribing a game back into a script


def script_for_game(game: Game) -> str:
    """Emit a GameScript program that rebuilds ``game``.

    Used to turn reference constructions into replay fixtures and prompt
    demonstrations; ``execute_script(parse_script(script_for_game(g)))``
    is structurally identical to ``g``.
    """
    lines = [
        _format_command(
            Command(
                "new_tree",
                {"players": list(game.players), "title": game.title},
                0,
            )
        )
    ]

    internals = [v for v in game.nodes() if not v.is_terminal]
    for view in internals:
        player = view.player
        lines.append(
            _format_command(
                Command(
                    "append_move",
                    {
                        "node": view.path,
                        "player": CHANCE if player is CHANCE else player,
                        "actions": list(view.actions),
                    },
                    0,
                )
            )
        )

    # Group infosets: anchor at the first member in pre-order.
    seen = set()
    for view in internals:
        infoset = view.infoset
        key = infoset._key
        if key in seen:
            continue
        seen.add(key)
        members = infoset.members
        if len(members) < 2:
            continue
        anchor = members[0]
        for other in members[1:]:
            lines.append(
                _format_command(
                    Command(
                        "set_infoset", {"node": other.path, "like": anchor.path}, 0
                    )
                )
            )

    # Non-uniform chance distributions.
    for view in internals:
        infoset = view.infoset
        if not infoset.is_chance or infoset.members[0] != view:
            continue
        probs = list(infoset.probs)
        uniform = [Fraction(1, len(probs))] * len(probs)
        if probs != uniform:
            lines.append(
                _format_command(
                    Command(
                        "set_chance_probs", {"node": view.path, "probs": probs}, 0
                    )
                )
            )

    names = {}
    for outcome in game.outcomes:
        names[outcome.id] = f"o{outcome.id}"
        lines.append(
            _format_command(
                Command(
                    "add_outcome",
                    {
                        "id": Symbol(names[outcome.id]),
                        "payoffs": list(outcome.payoffs),
                        "label": outcome.label,
                    },
                    0,
                )
            )
        )

    for view in game.nodes():
        outcome = view.outcome
        if outcome is not None:
            lines.append(
                _format_command(
                    Command(
                        "set_outcome",
                        {"node": view.path, "outcome": Symbol(names[outcome.id])},
                        0,
                    )
                )
            )

    return "\n".join(lines) + "\n"
