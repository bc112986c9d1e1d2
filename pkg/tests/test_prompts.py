import pytest

from gameforge.prompts import (
    TEMPLATE_FILES,
    TemplateError,
    bind,
    default_template_dir,
    load_templates,
)


def test_packaged_templates_load():
    templates = load_templates()
    assert "{CODE EXAMPLE ONE}" in templates.code_gen_init
    assert "{GAME DESCRIPTION}" in templates.iir_request
    assert "{CODE FOR IMPERFECT INFORMATION}" in templates.efg_generation
    assert "{CODE FOR IMPERFECT INFORMATION}" not in templates.efg_generation_minimal
    assert "MUST ONLY include the necessary set_infoset" in templates.iir_request
    assert templates.error_message.startswith("Your code contains an error.")


def test_every_template_file_exists():
    directory = default_template_dir()
    for filename in TEMPLATE_FILES.values():
        assert (directory / filename).is_file(), filename


def test_bind_replaces_all_placeholders():
    out = bind("a {X ONE} b {Y TWO}", {"{X ONE}": "1", "{Y TWO}": "2"})
    assert out == "a 1 b 2"


def test_unbound_placeholder_rejected():
    with pytest.raises(TemplateError) as exc:
        bind("a {GAME DESCRIPTION} b", {})
    assert "{GAME DESCRIPTION}" in str(exc.value)


def test_braces_in_demonstrations_are_not_placeholders():
    # .efg payload braces like { "Buyer" "Seller" } must not trip the check
    bind('EFG 2 R "t" { "Buyer" "Seller" }', {})


def test_missing_template_dir(tmp_path):
    with pytest.raises(TemplateError):
        load_templates(tmp_path)


def test_custom_template_dir_wins(tmp_path):
    source = default_template_dir()
    for filename in TEMPLATE_FILES.values():
        (tmp_path / filename).write_text(
            (source / filename).read_text(encoding="utf-8"), encoding="utf-8"
        )
    (tmp_path / "bland_retry.txt").write_text("Try once more.\n", encoding="utf-8")
    templates = load_templates(tmp_path)
    assert templates.bland_retry == "Try once more."
