"""Prompt template loading and placeholder binding.

Templates are plain text files with ``{UPPER CASE}`` placeholders; they live
in a directory (the packaged defaults under ``gameforge/templates`` or any
user-supplied ``--templates`` directory) so deployments can edit them, e.g.
to restore pygambit-targeting prompts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path

_PLACEHOLDER_RE = re.compile(r"\{[A-Z][A-Z ]*[A-Z]\}")


class TemplateError(Exception):
    pass


TEMPLATE_FILES = {
    "code_gen_init": "code_gen_init.txt",
    "iir_init": "iir_init.txt",
    "iir_request": "iir_request.txt",
    "efg_generation": "efg_generation.txt",
    "efg_generation_minimal": "efg_generation_minimal.txt",
    "basic_generation": "basic_generation.txt",
    "error_message": "error_message.txt",
    "bland_retry": "bland_retry.txt",
    "code_example_one": "code_example_one.txt",
    "code_example_two": "code_example_two.txt",
    "api_documentation": "api_documentation.txt",
    "imperfect_info_example_one": "imperfect_info_example_one.txt",
    "imperfect_info_example_two": "imperfect_info_example_two.txt",
    "imperfect_info_example_three": "imperfect_info_example_three.txt",
    "guidance_on_code": "guidance_on_code.txt",
    "general_guidance_on_errors": "general_guidance_on_errors.txt",
}


@dataclass(frozen=True)
class PromptTemplates:
    code_gen_init: str
    iir_init: str
    iir_request: str
    efg_generation: str
    efg_generation_minimal: str
    basic_generation: str
    error_message: str
    bland_retry: str
    code_example_one: str
    code_example_two: str
    api_documentation: str
    imperfect_info_example_one: str
    imperfect_info_example_two: str
    imperfect_info_example_three: str
    guidance_on_code: str
    general_guidance_on_errors: str


def default_template_dir() -> Path:
    return Path(resources.files("gameforge") / "templates")


def load_templates(directory: str | Path | None = None) -> PromptTemplates:
    """Load all template files from a directory (defaults to the packaged set)."""
    directory = Path(directory) if directory is not None else default_template_dir()
    values = {}
    for field_name in (f.name for f in fields(PromptTemplates)):
        path = directory / TEMPLATE_FILES[field_name]
        if not path.is_file():
            raise TemplateError(f"missing template file: {path}")
        values[field_name] = path.read_text(encoding="utf-8").rstrip("\n")
    return PromptTemplates(**values)


def bind(template: str, bindings: dict[str, str]) -> str:
    """Substitute literal ``{PLACEHOLDER}`` keys; all must end up bound.

    Raises :class:`TemplateError` when a placeholder referenced by the
    template has no binding, so an unbound prompt can never be dispatched.
    """
    text = template
    for placeholder, value in bindings.items():
        text = text.replace(placeholder, value)
    leftover = _PLACEHOLDER_RE.findall(text)
    if leftover:
        raise TemplateError(f"unbound placeholders: {', '.join(sorted(set(leftover)))}")
    return text
