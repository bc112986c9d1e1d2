"""pass@k evaluation over a corpus: sample outcomes, metrics and reports.

For each game the runner executes k independent translations (or, with
``stop_on_success``, up to k, stopping at the first passing sample — the
protocol used for cross-method comparisons).  A sample passes structurally
when its game builds cleanly and matches the expected features exactly;
semantic verdicts stay human and default to Unreviewed, which counts as a
pass in necessary-condition mode and as a failure in strict mode.

Report cells mirror the marker convention of the headline results table:
``cross`` for no passing samples, ``grey[s]`` for 1 <= s <= k-1, ``green``
for all k.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .corpus import CorpusEntry, ConsistencyResult, consistency_check
from .llm_client import LlmError, SamplingParams, Session
from .pipeline import Setting, TranslationRun, translate, write_run_artifacts
from .prompts import PromptTemplates


class ArityMismatchError(ValueError):
    pass


class SemanticVerdict(enum.Enum):
    UNREVIEWED = "unreviewed"
    PASS = "pass"
    FAIL = "fail"


@dataclass
class SampleOutcome:
    sample_index: int  # 1-based
    run: TranslationRun | None  # None when the backend errored outright
    structural_pass: bool
    feature_diff: tuple
    semantic_verdict: SemanticVerdict = SemanticVerdict.UNREVIEWED
    error: str | None = None

    def passes(self, strict: bool = False) -> bool:
        if not self.structural_pass:
            return False
        if strict:
            return self.semantic_verdict is SemanticVerdict.PASS
        return self.semantic_verdict is not SemanticVerdict.FAIL


def render_cell(successes: int, k: int) -> str:
    """Marker for a report cell; ``parse_cell`` inverts it losslessly."""
    if not 0 <= successes <= k:
        raise ValueError(f"successes must be in [0, {k}]")
    if successes == 0:
        return "cross"
    if successes == k:
        return "green"
    return f"grey[{successes}]"


def parse_cell(cell: str, k: int) -> int:
    if cell == "cross":
        return 0
    if cell == "green":
        return k
    if cell.startswith("grey[") and cell.endswith("]"):
        return int(cell[5:-1])
    raise ValueError(f"unrecognized cell {cell!r}")


def cell_symbol(cell: str, k: int) -> str:
    """Markdown rendering of a cell: cross / grey tick with [s] / green tick."""
    successes = parse_cell(cell, k)
    if successes == 0:
        return "✗"
    if successes == k:
        return "✓"
    return f"✓[{successes}]"


@dataclass(frozen=True)
class GameReport:
    game_id: str
    setting: str
    k: int
    executed: int  # samples actually run (< k only with stop_on_success)
    successes: int
    pass_at_k: bool
    pass_all_k: bool
    cell: str


def compute_pass_metrics(
    outcomes: Sequence[SampleOutcome],
    k: int,
    game_id: str = "",
    setting: str = "",
    strict: bool = False,
) -> GameReport:
    """Reduce exactly k resolved samples to one report row."""
    if len(outcomes) != k:
        raise ArityMismatchError(f"expected {k} sample outcomes, got {len(outcomes)}")
    successes = sum(1 for o in outcomes if o.passes(strict=strict))
    return GameReport(
        game_id=game_id,
        setting=setting,
        k=k,
        executed=k,
        successes=successes,
        pass_at_k=successes >= 1,
        pass_all_k=successes == k,
        cell=render_cell(successes, k),
    )


@dataclass(frozen=True)
class EvalReport:
    setting: str
    k: int
    rows: tuple[GameReport, ...]
    stop_on_success: bool = False

    @property
    def pass_at_k_count(self) -> int:
        return sum(1 for r in self.rows if r.pass_at_k)

    @property
    def pass_all_k_count(self) -> int:
        return sum(1 for r in self.rows if r.pass_all_k)


SessionFactory = Callable[[str, int], Session]


def run_eval(
    corpus: Sequence[CorpusEntry],
    setting: Setting,
    session_factory: SessionFactory,
    templates: PromptTemplates,
    params: SamplingParams,
    k: int = 5,
    stop_on_success: bool = False,
    strict: bool = False,
    max_debug_attempts: int = 3,
    workers: int = 1,
    artifacts_dir: str | Path | None = None,
) -> EvalReport:
    """Evaluate one setting over a corpus.

    Sample-level errors (including backend failures) count as failed
    samples and never abort the sweep.  Without ``stop_on_success`` the
    (game, sample) grid is evaluated concurrently up to ``workers``.
    """
    artifacts = Path(artifacts_dir) if artifacts_dir is not None else None

    def one_sample(entry: CorpusEntry, index: int) -> SampleOutcome:
        try:
            with session_factory(entry.game_id, index) as session:
                run = translate(
                    entry.description,
                    setting,
                    templates,
                    session,
                    params,
                    max_debug_attempts=max_debug_attempts,
                )
        except (LlmError, FileNotFoundError) as exc:
            return SampleOutcome(
                sample_index=index,
                run=None,
                structural_pass=False,
                feature_diff=(),
                error=f"{type(exc).__name__}: {exc}",
            )
        if run.succeeded:
            result: ConsistencyResult = consistency_check(run.game, entry.expected)
            outcome = SampleOutcome(
                sample_index=index,
                run=run,
                structural_pass=result.structural_pass,
                feature_diff=result.feature_diff,
            )
            worksheet = result.worksheet
        else:
            outcome = SampleOutcome(
                sample_index=index,
                run=run,
                structural_pass=False,
                feature_diff=(),
                error=run.failure,
            )
            worksheet = None
        if artifacts is not None and run is not None:
            sample_dir = artifacts / entry.game_id / f"sample_{index}"
            write_run_artifacts(run, sample_dir, label=f"{entry.game_id}/{index}")
            if worksheet is not None:
                (sample_dir / "worksheet.md").write_text(worksheet, encoding="utf-8")
            (sample_dir / "consistency.json").write_text(
                json.dumps(
                    {
                        "structural_pass": outcome.structural_pass,
                        "feature_diff": [
                            {"field": d.field, "expected": d.expected, "actual": d.actual}
                            for d in outcome.feature_diff
                        ],
                        "error": outcome.error,
                    },
                    indent=2,
                )
                + "\n",
                encoding="utf-8",
            )
        return outcome

    rows = []
    if stop_on_success:
        def eval_game(entry: CorpusEntry) -> GameReport:
            outcomes = []
            for index in range(1, k + 1):
                outcome = one_sample(entry, index)
                outcomes.append(outcome)
                if outcome.passes(strict=strict):
                    break
            successes = sum(1 for o in outcomes if o.passes(strict=strict))
            return GameReport(
                game_id=entry.game_id,
                setting=setting.value,
                k=k,
                executed=len(outcomes),
                successes=successes,
                pass_at_k=successes >= 1,
                pass_all_k=successes == k,
                cell=render_cell(successes, k),
            )

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(eval_game, corpus))
        else:
            rows = [eval_game(entry) for entry in corpus]
    else:
        grid = [(entry, index) for entry in corpus for index in range(1, k + 1)]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda ei: one_sample(*ei), grid))
        else:
            results = [one_sample(entry, index) for entry, index in grid]
        by_game: dict[str, list[SampleOutcome]] = {}
        for (entry, _), outcome in zip(grid, results):
            by_game.setdefault(entry.game_id, []).append(outcome)
        for entry in corpus:
            outcomes = sorted(by_game[entry.game_id], key=lambda o: o.sample_index)
            rows.append(
                compute_pass_metrics(
                    outcomes, k, game_id=entry.game_id, setting=setting.value, strict=strict
                )
            )

    report = EvalReport(
        setting=setting.value, k=k, rows=tuple(rows), stop_on_success=stop_on_success
    )
    if artifacts is not None:
        (artifacts / "report.csv").write_text(report_csv(report), encoding="utf-8")
        (artifacts / "report.md").write_text(report_markdown(report), encoding="utf-8")
    return report


def report_csv(report: EvalReport) -> str:
    """One row per game x setting."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["game_id", "setting", "k", "executed", "successes", "pass_at_k", "pass_all_k", "cell"]
    )
    for row in report.rows:
        writer.writerow(
            [
                row.game_id,
                row.setting,
                row.k,
                row.executed,
                row.successes,
                row.pass_at_k,
                row.pass_all_k,
                row.cell,
            ]
        )
    return buffer.getvalue()


def report_markdown(report: EvalReport) -> str:
    """Tick/cross/bracket table for humans."""
    lines = [
        f"# Evaluation report (setting {report.setting}, k={report.k})",
        "",
        f"| Game | Setting {report.setting} |",
        "| --- | --- |",
    ]
    for row in report.rows:
        lines.append(f"| {row.game_id} | {cell_symbol(row.cell, row.k)} |")
    lines.append("")
    lines.append(
        f"pass@{report.k}: {report.pass_at_k_count}/{len(report.rows)} games; "
        f"pass-all-{report.k}: {report.pass_all_k_count}/{len(report.rows)} games"
    )
    return "\n".join(lines) + "\n"
