"""The scalable pipeline: assumptions, the modular sufficient condition and
its consistency with the direct check, the synthesis variants, and the
desk-scale guarantee on randomized plants."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from scasup import (
    Group,
    MultiAgentPlant,
    check_assumptions,
    check_condition_direct,
    check_condition_modular,
    controlled_behavior,
    inverse_relabel,
    is_nonblocking,
    language_equal,
    language_subset,
    load_scenario,
    monolithic_oracle,
    sup1,
    synthesize_corollary2,
    synthesize_refined,
    synthesize_scalable,
    verify_sscsp,
)
from scasup.errors import EmptySupervisor

from strategies import generators, multi_agent_plants


@given(multi_agent_plants())
def test_modular_condition_implies_direct_condition(plant):
    if check_condition_modular(plant):
        assert check_condition_direct(plant).controllable


@st.composite
def plant_with_normal_spec(draw):
    plant = draw(multi_agent_plants(max_agents=2, max_states=3))
    spec_t = draw(generators(alphabet=plant.relabeling.target, max_states=3))
    return plant, inverse_relabel(spec_t, plant.relabeling)


@given(plant_with_normal_spec())
def test_scalable_supervisor_is_sandwiched(ps):
    """On desk-scale random instances that pass the checks, the controlled
    behavior lies between the one-agent and the monolithic supervisor."""
    plant, spec = ps
    if not check_condition_modular(plant):
        return
    if not check_assumptions(plant, spec).all_pass():
        return
    try:
        artifacts = synthesize_scalable(plant, spec)
    except EmptySupervisor:
        return
    report = verify_sscsp(artifacts, plant, spec)
    assert report.sandwich_holds()
    assert is_nonblocking(artifacts.scalable_supervisor)


def test_small_factory_golden_numbers():
    plant, spec = load_scenario("small-factory")
    assert [g.count for g in plant.groups] == [3, 2]
    report = check_assumptions(plant, spec)
    assert report.all_pass(), report.details
    assert check_condition_modular(plant)
    artifacts = synthesize_scalable(plant, spec)
    assert artifacts.relabeled_supervisor.num_states == 12
    assert artifacts.scalable_supervisor.num_states == 12
    assert is_nonblocking(artifacts.scalable_supervisor)
    report = verify_sscsp(artifacts, plant, spec)
    assert report.sandwich_holds()
    # the plain pipeline is strictly more restrictive here
    assert not report.least_restrictive


def test_refined_map_recovers_permissiveness_on_small_factory():
    plant, spec = load_scenario("small-factory", sizes=[2, 2])
    refined = synthesize_refined(plant, spec)
    behavior = controlled_behavior(refined, plant)
    assert language_equal(behavior, monolithic_oracle(plant, spec))


def test_corollary2_variant_on_mutual_exclusion():
    plant, spec = load_scenario("mutual-exclusion")
    artifacts = synthesize_corollary2(plant, spec)
    behavior = controlled_behavior(artifacts, plant)
    assert language_equal(behavior, monolithic_oracle(plant, spec))


def test_parallelism_clamps_to_group_size(caplog):
    plant, spec = load_scenario("transfer-line")
    assert plant.groups[1].parallelism == 3 and plant.groups[1].count == 2
    with caplog.at_level("WARNING"):
        artifacts = synthesize_scalable(plant, spec)
    assert artifacts.parallelism == [2, 2, 1]
    assert any("clamping" in rec.message for rec in caplog.records)


def test_assumption_report_flags_shared_events():
    plant, spec = load_scenario("small-factory")
    groups = [
        Group("input", plant.groups[0].agents, 2),
        # reusing an input agent in the output group breaks independence
        Group("output", [plant.groups[0].agents[0]], 1),
    ]
    broken = MultiAgentPlant(groups, plant.relabeling)
    report = check_assumptions(broken, spec)
    assert not report.independent_nonblocking
    assert report.details


def test_sup1_lower_bound_on_transfer_line():
    plant, spec = load_scenario("transfer-line")
    artifacts = synthesize_scalable(plant, spec)
    lower = sup1(plant, spec)
    assert not lower.is_empty
    assert language_subset(lower, controlled_behavior(artifacts, plant))


def test_single_group_plant_is_rejected():
    plant, _spec = load_scenario("small-factory")
    with pytest.raises(ValueError):
        MultiAgentPlant(plant.groups[:1], plant.relabeling)
