"""gameforge: natural-language game descriptions -> validated Gambit .efg files.

Core pieces: an extensive-form game builder (`game`), the Gambit .efg
writer/parser and DOT export (`efg_format`), the GameScript DSL
(`gamescript`), an LLM client with record/replay (`llm_client`), the
two-stage translation pipeline (`pipeline`), and the corpus + pass@k
evaluation harness (`corpus`, `evaluation`).
"""

from .game import (
    CHANCE,
    Game,
    GameError,
    NodePath,
    Outcome,
    Rational,
    validate_structure,
)
from .features import GameFeatures, compute_features
from .efg_format import parse_efg, structurally_equal, write_dot, write_efg
from .gamescript import (
    ExecError,
    Script,
    ScriptSyntaxError,
    execute_script,
    format_script,
    parse_script,
    script_for_game,
)
from .pipeline import Setting, TranslationRun, translate

__version__ = "0.1.0"

__all__ = [
    "CHANCE",
    "ExecError",
    "Game",
    "GameError",
    "GameFeatures",
    "NodePath",
    "Outcome",
    "Rational",
    "Script",
    "ScriptSyntaxError",
    "Setting",
    "TranslationRun",
    "compute_features",
    "execute_script",
    "format_script",
    "parse_efg",
    "parse_script",
    "script_for_game",
    "structurally_equal",
    "translate",
    "validate_structure",
    "write_dot",
    "write_efg",
]
