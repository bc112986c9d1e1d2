"""Two-stage translation pipeline with optional self-debugging.

Five settings control which modules run:

========  =============  ==========  ===========
Setting   builder DSL    stage one   self-debug
========  =============  ==========  ===========
basic     no (raw .efg)  no          no
A         yes            no          no
B         yes            no          yes
C         yes            yes         no
D         yes            yes         yes
========  =============  ==========  ===========

Stage one asks the model to identify non-singleton information sets for the
described game; its output is embedded verbatim into the stage-two
generation prompt (settings C/D).  Every failed attempt is retried, up to
``1 + max_debug_attempts`` attempts in total: with self-debugging the retry
prompt carries the interpreter's error message, without it a bland retry
prompt asks for a new response and nothing else.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from pathlib import Path

from . import efg_format, gamescript
from .game import Game
from .llm_client import ChatMessage, SamplingParams, Session
from .prompts import PromptTemplates, bind


class ExtractionError(Exception):
    """The model response contained no fenced code block."""


class Setting(enum.Enum):
    BASIC = "basic"
    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def uses_dsl(self) -> bool:
        return self is not Setting.BASIC

    @property
    def self_debug(self) -> bool:
        return self in (Setting.B, Setting.D)

    @property
    def stage_one(self) -> bool:
        return self in (Setting.C, Setting.D)

    @classmethod
    def parse(cls, text: str) -> "Setting":
        lowered = text.strip().lower()
        if lowered == "basic":
            return cls.BASIC
        upper = text.strip().upper()
        for member in cls:
            if member.value == upper:
                return member
        raise ValueError(f"unknown setting {text!r}; expected basic, A, B, C or D")


@dataclass(frozen=True)
class StageOneOutput:
    raw_response: str
    code_block: str
    infoset_commands: tuple[str, ...]
    reasoning: str
    concluded_perfect_info: bool


@dataclass(frozen=True)
class TranslationAttempt:
    index: int  # 1-based
    messages: tuple[ChatMessage, ...]
    response: str
    payload: str | None
    game: Game | None
    error: str | None  # text fed forward into the next retry prompt

    @property
    def succeeded(self) -> bool:
        return self.game is not None


@dataclass
class TranslationRun:
    setting: Setting
    description: str
    stage_one: StageOneOutput | None
    attempts: list[TranslationAttempt]
    game: Game | None
    efg_text: str | None
    failure: str | None

    @property
    def succeeded(self) -> bool:
        return self.game is not None


_FENCE_RE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)


def extract_code_block(response: str) -> str:
    """Return the last fenced code block of a response.

    Models often restate examples before the final answer, so the last
    fence wins.
    """
    blocks = _FENCE_RE.findall(response)
    if not blocks:
        raise ExtractionError("no fenced code block found in the response")
    return blocks[-1].strip("\n")


def _system_message(templates: PromptTemplates) -> ChatMessage:
    return ChatMessage(
        "system",
        bind(
            templates.code_gen_init,
            {
                "{CODE EXAMPLE ONE}": templates.code_example_one,
                "{CODE EXAMPLE TWO}": templates.code_example_two,
                "{API DOCUMENTATION}": templates.api_documentation,
            },
        ),
    )


def stage_one_messages(templates: PromptTemplates, description: str) -> list[ChatMessage]:
    init = bind(
        templates.iir_init,
        {
            "{IMPERFECT INFO EXAMPLE ONE}": templates.imperfect_info_example_one,
            "{IMPERFECT INFO EXAMPLE TWO}": templates.imperfect_info_example_two,
            "{IMPERFECT INFO EXAMPLE THREE}": templates.imperfect_info_example_three,
        },
    )
    request = bind(templates.iir_request, {"{GAME DESCRIPTION}": description})
    return [_system_message(templates), ChatMessage("user", init + "\n\n" + request)]


def run_stage_one(
    description: str,
    templates: PromptTemplates,
    session: Session,
    params: SamplingParams,
) -> StageOneOutput:
    """Ask for the game's non-singleton information sets.

    The response's code block is kept verbatim for the stage-two prompt;
    when it contains no set_infoset command the game was judged to have
    perfect information.
    """
    response = session.complete(stage_one_messages(templates, description), params)
    block = extract_code_block(response)
    commands = tuple(
        line.strip()
        for line in block.splitlines()
        if line.strip().startswith("set_infoset")
    )
    reasoning = "\n".join(
        line for line in block.splitlines() if line.lstrip().startswith("#")
    )
    return StageOneOutput(
        raw_response=response,
        code_block=block,
        infoset_commands=commands,
        reasoning=reasoning,
        concluded_perfect_info=not commands,
    )


def generation_messages(
    templates: PromptTemplates,
    setting: Setting,
    description: str,
    stage_one: StageOneOutput | None,
) -> list[ChatMessage]:
    """Initial messages of a generation conversation, per the setting flags."""
    if setting is Setting.BASIC:
        return [
            ChatMessage(
                "user", bind(templates.basic_generation, {"{GAME DESCRIPTION}": description})
            )
        ]
    if setting.stage_one:
        if stage_one is None:
            raise ValueError(f"setting {setting.value} requires stage-one output")
        user = bind(
            templates.efg_generation,
            {
                "{GAME DESCRIPTION}": description,
                "{CODE FOR IMPERFECT INFORMATION}": stage_one.code_block,
                "{GUIDANCE ON CODE}": templates.guidance_on_code,
            },
        )
    else:
        user = bind(
            templates.efg_generation_minimal,
            {
                "{GAME DESCRIPTION}": description,
                "{GUIDANCE ON CODE}": templates.guidance_on_code,
            },
        )
    return [_system_message(templates), ChatMessage("user", user)]


def retry_message(templates: PromptTemplates, setting: Setting, error: str) -> ChatMessage:
    """The follow-up prompt after a failed attempt.

    Self-debugging settings receive the error text plus general guidance;
    all others receive the bland retry prompt with no bug information, so
    the comparison isolates the effect of self-debugging.
    """
    if setting.self_debug:
        return ChatMessage(
            "user",
            bind(
                templates.error_message,
                {
                    "{ERROR MESSAGE}": error,
                    "{GENERAL GUIDANCE ON ERRORS}": templates.general_guidance_on_errors,
                },
            ),
        )
    return ChatMessage("user", templates.bland_retry)


def _execute_payload(payload: str, setting: Setting) -> tuple[Game | None, str | None]:
    if setting.uses_dsl:
        try:
            script = gamescript.parse_script(payload)
            return gamescript.execute_script(script), None
        except gamescript.ScriptSyntaxError as exc:
            return None, f"line {exc.line}: {exc.message}"
        except gamescript.ExecError as exc:
            return None, f"line {exc.line}: {exc.message}"
    try:
        return efg_format.parse_efg(payload), None
    except efg_format.EfgSyntaxError as exc:
        return None, f"line {exc.line}, column {exc.column}: {exc.message}"
    except (efg_format.DanglingReferenceError, efg_format.InvalidGameError) as exc:
        return None, str(exc)


def run_generation_attempt(
    index: int,
    messages: tuple[ChatMessage, ...],
    setting: Setting,
    session: Session,
    params: SamplingParams,
) -> TranslationAttempt:
    """One generation round: prompt, extract the payload, execute it."""
    response = session.complete(messages, params)
    payload = None
    game = None
    error = None
    try:
        payload = extract_code_block(response)
    except ExtractionError as exc:
        error = str(exc)
    if payload is not None:
        game, error = _execute_payload(payload, setting)
    return TranslationAttempt(
        index=index,
        messages=messages,
        response=response,
        payload=payload,
        game=game,
        error=error,
    )


def translate(
    description: str,
    setting: Setting,
    templates: PromptTemplates,
    session: Session,
    params: SamplingParams,
    max_debug_attempts: int = 3,
) -> TranslationRun:
    """Translate one description, stopping at the first attempt whose payload
    executes cleanly.  At most ``1 + max_debug_attempts`` attempts run."""
    if max_debug_attempts < 0:
        raise ValueError("max_debug_attempts must be >= 0")

    stage_one = None
    if setting.stage_one:
        try:
            stage_one = run_stage_one(description, templates, session, params)
        except ExtractionError as exc:
            return TranslationRun(
                setting=setting,
                description=description,
                stage_one=None,
                attempts=[],
                game=None,
                efg_text=None,
                failure=f"stage one: {exc}",
            )

    conversation = generation_messages(templates, setting, description, stage_one)
    attempts: list[TranslationAttempt] = []
    total = 1 + max_debug_attempts
    for index in range(1, total + 1):
        attempt = run_generation_attempt(
            index, tuple(conversation), setting, session, params
        )
        attempts.append(attempt)
        if attempt.succeeded:
            frozen = attempt.game.freeze()
            return TranslationRun(
                setting=setting,
                description=description,
                stage_one=stage_one,
                attempts=attempts,
                game=frozen,
                efg_text=efg_format.write_efg(frozen),
                failure=None,
            )
        if index < total:
            conversation.append(ChatMessage("assistant", attempt.response))
            conversation.append(retry_message(templates, setting, attempt.error))
    return TranslationRun(
        setting=setting,
        description=description,
        stage_one=stage_one,
        attempts=attempts,
        game=None,
        efg_text=None,
        failure=f"all {total} attempts failed; last error: {attempts[-1].error}",
    )


def write_run_artifacts(run: TranslationRun, out_dir: str | Path, label: str | None = None):
    """Persist one run: prompt transcript, raw responses, extracted payloads,
    the final .efg, and JSON metadata.  Contains no timestamps so identical
    replayed runs produce byte-identical artifacts."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload_ext = "gs" if run.setting.uses_dsl else "efg"

    if run.stage_one is not None:
        (out / "stage_one.txt").write_text(run.stage_one.raw_response, encoding="utf-8")
    for attempt in run.attempts:
        (out / f"response_{attempt.index}.txt").write_text(attempt.response, encoding="utf-8")
        if attempt.payload is not None:
            (out / f"payload_{attempt.index}.{payload_ext}").write_text(
                attempt.payload + "\n", encoding="utf-8"
            )
    if run.efg_text is not None:
        (out / "final.efg").write_text(run.efg_text, encoding="utf-8")

    transcript = {
        "setting": run.setting.value,
        "attempts": [
            {
                "index": attempt.index,
                "messages": [
                    {"role": m.role, "content": m.content} for m in attempt.messages
                ],
                "response": attempt.response,
            }
            for attempt in run.attempts
        ],
    }
    (out / "transcript.json").write_text(
        json.dumps(transcript, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )

    meta = {
        "label": label,
        "setting": run.setting.value,
        "succeeded": run.succeeded,
        "attempt_count": len(run.attempts),
        "errors": [a.error for a in run.attempts],
        "stage_one_perfect_info": (
            None if run.stage_one is None else run.stage_one.concluded_perfect_info
        ),
        "failure": run.failure,
    }
    (out / "run.json").write_text(
        json.dumps(meta, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
