"""File formats and the command-line surface: round trips, diagnostics,
exit codes, and byte-level determinism."""

import json

import pytest
from hypothesis import given, settings

from scasup import (
    export_dot,
    is_isomorphic,
    load_generator,
    load_scenario,
    save_generator,
    synthesize_scalable,
)
from scasup.cli import main
from scasup.errors import ParseError
from scasup.scenario import parse_scenario, resolve_scenario_path

from strategies import generators

BUNDLED = ["small-factory", "transfer-line", "mutual-exclusion", "fig4"]


def _scenario_obj(name):
    return json.loads(resolve_scenario_path(name).read_text())


# ---------------------------------------------------------------- scenarios

def test_bundled_small_factory_shape():
    plant, spec = load_scenario("small-factory")
    assert [g.count for g in plant.groups] == [3, 2]
    assert [g.parallelism for g in plant.groups] == [2, 1]
    assert spec.num_states == 3
    # instantiated agents have pairwise-disjoint alphabets
    alphabets = [a.alphabet for g in plant.groups for a in g.agents]
    for i in range(len(alphabets)):
        for j in range(i + 1, len(alphabets)):
            assert alphabets[i].isdisjoint(alphabets[j])


@pytest.mark.parametrize("name", BUNDLED)
def test_all_bundled_scenarios_load(name):
    plant, spec = load_scenario(name)
    assert len(plant.groups) >= 2
    assert not spec.is_empty


def test_agents_are_language_equal_to_template():
    from scasup import language_equal, relabel

    plant, _spec = load_scenario("small-factory")
    for i, group in enumerate(plant.groups):
        template = plant.template(i)
        for agent in group.agents:
            assert language_equal(relabel(agent, plant.relabeling), template)


def test_missing_parallelism_is_diagnosed():
    obj = _scenario_obj("small-factory")
    del obj["groups"][0]["parallelism"]
    with pytest.raises(ParseError) as err:
        parse_scenario(obj)
    assert "parallelism" in str(err.value)
    assert "groups[0]" in err.value.location


def test_malformed_transition_is_diagnosed_with_location():
    obj = _scenario_obj("small-factory")
    obj["specs"][0]["transitions"][1] = [0, "1{j}2"]
    with pytest.raises(ParseError) as err:
        parse_scenario(obj)
    assert "transitions[1]" in err.value.location


def test_template_without_placeholder_is_rejected():
    obj = _scenario_obj("small-factory")
    tpl = obj["groups"][0]["template"]
    tpl["events"][0]["label"] = "fixed"
    tpl["transitions"][0][1] = "fixed"
    with pytest.raises(ParseError) as err:
        parse_scenario(obj)
    assert "fixed" in str(err.value)


def test_unknown_format_version_is_rejected():
    obj = _scenario_obj("small-factory")
    obj["format"] = 99
    with pytest.raises(ParseError):
        parse_scenario(obj)


def test_sizes_override():
    plant, _spec = load_scenario("small-factory", sizes=[5, 4])
    assert [g.count for g in plant.groups] == [5, 4]


# ------------------------------------------------------------- generators IO

@settings(max_examples=50)
@given(g=generators())
def test_generator_round_trip(g):
    import os
    import tempfile

    fd, path = tempfile.mkstemp(suffix=".json")
    os.close(fd)
    try:
        save_generator(path, g)
        assert is_isomorphic(load_generator(path), g)
    finally:
        os.unlink(path)


def test_save_is_byte_deterministic(tmp_path):
    plant, spec = load_scenario("mutual-exclusion")
    ssup = synthesize_scalable(plant, spec).scalable_supervisor
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_generator(p1, ssup)
    save_generator(p2, ssup)
    assert p1.read_bytes() == p2.read_bytes()


def test_export_dot_conventions(tmp_path):
    plant, spec = load_scenario("mutual-exclusion")
    out = tmp_path / "spec.dot"
    export_dot(out, spec)
    text = out.read_text()
    assert "__init ->" in text  # entering arrow on the initial state
    assert "doublecircle" in text  # marked states drawn distinctly
    assert "circle" in text


# ----------------------------------------------------------------------- CLI

def test_cli_synth_small_factory(tmp_path, capsys):
    out = tmp_path / "ssup.json"
    assert main(["synth", "small-factory", "-o", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "SSUP states: 12" in stdout
    assert load_generator(out).num_states == 12


def test_cli_check_fig4_fails_with_witness(capsys):
    assert main(["check", "fig4"]) == 1
    stdout = capsys.readouterr().out
    assert "t=0 tau=0" in stdout


def test_cli_verify_transfer_line(capsys):
    assert main(["verify", "transfer-line", "--sizes", "2,2,1"]) == 0
    stdout = capsys.readouterr().out
    assert "equal to monolithic SUP: yes" in stdout


def test_cli_localize_mutual_exclusion(capsys):
    assert main(["localize", "mutual-exclusion"]) == 0
    stdout = capsys.readouterr().out
    assert "4 states" in stdout
    assert "control equivalence: ok" in stdout


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["check", "does-not-exist"]) == 3
    assert main(["oracle", "small-factory", "--budget", "5"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 3
    capsys.readouterr()


def test_cli_output_is_deterministic(capsys):
    assert main(["synth", "transfer-line"]) == 0
    first = capsys.readouterr().out
    assert main(["synth", "transfer-line"]) == 0
    assert capsys.readouterr().out == first


def test_cli_export_dot(tmp_path, capsys):
    gen = tmp_path / "g.json"
    plant, spec = load_scenario("small-factory")
    save_generator(gen, spec)
    out = tmp_path / "g.dot"
    assert main(["export-dot", str(gen), str(out)]) == 0
    assert out.read_text().startswith("digraph")
    capsys.readouterr()
