"""Command-line entry point.

Thin adapters only: every subcommand parses arguments, calls the library
and maps errors to exit codes (0 success, 1 domain failure, 2 usage or
configuration error).  Diagnostics go to stderr, artifacts to the paths
given.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import efg_format, gamescript
from .corpus import (
    CorpusError,
    ExpectedFeatures,
    MalformedMetadataError,
    consistency_check,
    load_corpus,
    review_worksheet,
)
from .evaluation import report_csv, report_markdown, run_eval
from .features import compute_features
from .game import Game, GameError
from .llm_client import (
    ClientConfig,
    ConfigError,
    LlmError,
    open_session,
    parse_session_spec,
)
from .pipeline import Setting, translate, write_run_artifacts
from .prompts import TemplateError, load_templates


class CliDomainError(Exception):
    """Failures of the task itself (exit code 1)."""


def _client_config(args) -> ClientConfig:
    return ClientConfig(
        base_url=args.base_url,
        model=args.model,
        temperature=args.temperature,
        top_p=args.top_p,
        transport_retries=args.transport_retries,
        timeout_s=args.timeout,
    )


def _add_session_args(parser):
    parser.add_argument(
        "--session",
        default="live",
        help="live, record:<path> or replay:<path> (a directory for eval)",
    )
    parser.add_argument("--base-url", default="https://api.openai.com/v1")
    parser.add_argument("--model", default="gpt-4o")
    parser.add_argument("--temperature", type=float, default=0.0)
    parser.add_argument("--top-p", type=float, default=1.0)
    parser.add_argument("--timeout", type=float, default=60.0)
    parser.add_argument("--transport-retries", type=int, default=3)
    parser.add_argument("--strict-replay", action="store_true",
                        help="verify request hashes when replaying")
    parser.add_argument("--templates", default=None, help="prompt template directory")


def _read_text(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"file not found: {path}")
    return p.read_text(encoding="utf-8")


def _load_game(path: str, mode: str | None) -> Game:
    """Load a game from a .efg file or a GameScript program."""
    text = _read_text(path)
    if mode is None:
        mode = "script" if path.endswith(".gs") else "direct-efg"
    try:
        if mode == "script":
            return gamescript.execute_script(gamescript.parse_script(text))
        return efg_format.parse_efg(text)
    except (
        gamescript.ScriptSyntaxError,
        gamescript.ExecError,
        efg_format.EfgSyntaxError,
        efg_format.DanglingReferenceError,
        GameError,
    ) as exc:
        raise CliDomainError(f"{path}: {exc}") from exc


def _write_output(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def cmd_translate(args) -> int:
    description = _read_text(args.description)
    setting = Setting.parse(args.setting)
    templates = load_templates(args.templates)
    config = _client_config(args)
    mode, source = parse_session_spec(args.session)
    with open_session(mode, source, config, strict=args.strict_replay) as session:
        run = translate(
            description,
            setting,
            templates,
            session,
            config.params(),
            max_debug_attempts=args.max_debug_attempts,
        )
    if args.artifacts:
        write_run_artifacts(run, args.artifacts)
    if not run.succeeded:
        raise CliDomainError(f"translation failed: {run.failure}")
    _write_output(run.efg_text, args.out)
    print(
        f"translated in {len(run.attempts)} attempt(s); "
        f"{run.game.root.num_children}-way root",
        file=sys.stderr,
    )
    return 0


def cmd_exec(args) -> int:
    text = _read_text(args.script)
    try:
        game = gamescript.execute_script(gamescript.parse_script(text))
    except (gamescript.ScriptSyntaxError, gamescript.ExecError) as exc:
        raise CliDomainError(str(exc)) from exc
    _write_output(efg_format.write_efg(game), args.out)
    return 0


def cmd_validate(args) -> int:
    from .game import validate_structure

    game = _load_game(args.file, args.mode)
    violations = validate_structure(game)
    for violation in violations:
        print(str(violation), file=sys.stderr)
    if any(v.fatal for v in violations):
        raise CliDomainError("fatal structural violations found")
    if violations:
        print(f"{len(violations)} warning(s)", file=sys.stderr)
    else:
        print("ok", file=sys.stderr)
    return 0


def cmd_features(args) -> int:
    game = _load_game(args.file, args.mode)
    features = compute_features(game)
    print(json.dumps(asdict(features), indent=2))
    if args.expect:
        try:
            raw = json.loads(_read_text(args.expect))
            expected = ExpectedFeatures.from_dict(raw, where=args.expect)
        except (json.JSONDecodeError, MalformedMetadataError) as exc:
            raise ConfigError(str(exc)) from exc
        result = consistency_check(game, expected)
        if not result.structural_pass:
            for diff in result.feature_diff:
                print(str(diff), file=sys.stderr)
            raise CliDomainError("features do not match the expected row")
        print("features match", file=sys.stderr)
    return 0


def cmd_render(args) -> int:
    game = _load_game(args.file, args.mode)
    _write_output(efg_format.write_dot(game), args.out)
    return 0


def cmd_worksheet(args) -> int:
    game = _load_game(args.file, args.mode)
    _write_output(review_worksheet(game), args.out)
    return 0


def cmd_roundtrip(args) -> int:
    game = _load_game(args.file, None)
    text = efg_format.write_efg(game)
    reparsed = efg_format.parse_efg(text)
    if efg_format.write_efg(reparsed) != text:
        raise CliDomainError("writer is not a fixed point for this file")
    if not efg_format.structurally_equal(game, reparsed):
        raise CliDomainError("reparsed game differs structurally")
    print("roundtrip ok", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    corpus = load_corpus(args.corpus)
    setting = Setting.parse(args.setting)
    templates = load_templates(args.templates)
    config = _client_config(args)
    mode, source = parse_session_spec(args.session)

    def session_factory(game_id: str, sample_index: int):
        if mode == "live":
            return open_session("live", config=config)
        if source is None:
            raise ConfigError(f"{mode} eval sessions need a directory")
        path = Path(source) / game_id / f"sample_{sample_index}.json"
        return open_session(mode, path, config, strict=args.strict_replay)

    report = run_eval(
        corpus,
        setting,
        session_factory,
        templates,
        config.params(),
        k=args.k,
        stop_on_success=args.stop_on_success,
        strict=args.strict_review,
        max_debug_attempts=args.max_debug_attempts,
        workers=args.workers,
        artifacts_dir=args.out,
    )
    if args.report:
        path = Path(args.report)
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.suffix == ".md":
            path.write_text(report_markdown(report), encoding="utf-8")
        else:
            path.write_text(report_csv(report), encoding="utf-8")
    sys.stdout.write(report_markdown(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gameforge",
        description="Translate game descriptions into Gambit .efg files and evaluate the results",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="translate one description via the LLM pipeline")
    p.add_argument("description", help="path to the description text file")
    p.add_argument("--setting", default="D", help="basic, A, B, C or D (default D)")
    p.add_argument("--max-debug-attempts", type=int, default=3)
    p.add_argument("-o", "--out", default="-")
    p.add_argument("--artifacts", default=None, help="directory for full run artifacts")
    _add_session_args(p)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("exec", help="run a GameScript program and emit .efg")
    p.add_argument("script")
    p.add_argument("-o", "--out", default="-")
    p.set_defaults(func=cmd_exec)

    for name, handler, needs_out in (
        ("validate", cmd_validate, False),
        ("features", cmd_features, False),
        ("render", cmd_render, True),
        ("worksheet", cmd_worksheet, True),
    ):
        p = sub.add_parser(name)
        p.add_argument("file", help=".efg file or GameScript program")
        p.add_argument("--mode", choices=["script", "direct-efg"], default=None,
                       help="input kind; inferred from the extension by default")
        if needs_out:
            p.add_argument("-o", "--out", default="-")
        if name == "features":
            p.add_argument("--expect", default=None, help="expected.json to compare against")
        p.set_defaults(func=handler)

    p = sub.add_parser("roundtrip", help="check parse/write stability of an .efg file")
    p.add_argument("file")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("eval", help="run the pass@k evaluation over a corpus")
    p.add_argument("--corpus", default="corpus")
    p.add_argument("--setting", default="D")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--stop-on-success", action="store_true")
    p.add_argument("--strict-review", action="store_true",
                   help="count unreviewed samples as failures")
    p.add_argument("--max-debug-attempts", type=int, default=3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report", default=None, help="write a CSV (or .md) report here")
    p.add_argument("--out", default=None, help="directory for per-sample artifacts")
    _add_session_args(p)
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, CorpusError, TemplateError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except LlmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
