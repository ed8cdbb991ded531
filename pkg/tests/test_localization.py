"""Supervisor localization: the decomposition identity, per-agent
controllers, control equivalence, and detection of tampered controllers."""

from hypothesis import given
from hypothesis import strategies as st

from scasup import (
    Generator,
    inverse_relabel,
    load_scenario,
    localize,
    localize_rsup,
    synthesize_scalable,
    verify_control_equivalence,
    verify_relabeled_identity,
)
from scasup.errors import EmptySupervisor

from strategies import generators, multi_agent_plants


def _localized(name, **kwargs):
    plant, spec = load_scenario(name)
    artifacts = synthesize_scalable(plant, spec)
    return plant, artifacts, localize(artifacts, **kwargs)


def test_transfer_line_controller_sizes():
    plant, artifacts, local = _localized("transfer-line")
    assert [s.num_states for s in local.slocs] == [6, 4, 6]
    assert local.certificate
    holds, witness = verify_control_equivalence(local, artifacts, plant)
    assert holds, witness


def test_mutual_exclusion_controller_sizes():
    plant, artifacts, local = _localized("mutual-exclusion")
    assert [s.num_states for s in local.slocs] == [4, 4]
    assert local.certificate
    holds, witness = verify_control_equivalence(local, artifacts, plant)
    assert holds, witness


def test_sloc_state_counts_invariant_in_group_size():
    """The per-agent controllers are computed from the supervisor and the
    templates only, so growing a group must not change them."""
    small = _localized("transfer-line")[2]
    plant, spec = load_scenario("transfer-line", sizes=[3, 3, 2])
    artifacts = synthesize_scalable(plant, spec)
    large = localize(artifacts)
    assert [s.num_states for s in small.slocs] == [
        s.num_states for s in large.slocs
    ]
    assert large.certificate


def test_agents_of_a_group_share_one_controller():
    """Every agent of a group deploys the same controller automaton; the
    controller is a single object per group by construction."""
    _plant, _artifacts, local = _localized("mutual-exclusion")
    assert len(local.slocs) == 2


@given(multi_agent_plants(max_agents=2, max_states=3).flatmap(
    lambda plant: st.tuples(
        st.just(plant),
        generators(alphabet=plant.relabeling.target, max_states=3),
    )))
def test_decomposition_identity_on_random_plants(data):
    plant, spec_t = data
    spec = inverse_relabel(spec_t, plant.relabeling)
    try:
        artifacts = synthesize_scalable(plant, spec)
    except EmptySupervisor:
        return
    local = localize(artifacts, trials=8)
    assert local.certificate


def test_identity_rejects_weakened_controllers():
    plant, spec = load_scenario("transfer-line")
    artifacts = synthesize_scalable(plant, spec)
    rsup = artifacts.relabeled_supervisor
    rlocs = localize_rsup(rsup, artifacts.templates)
    assert verify_relabeled_identity(rsup, rlocs, artifacts.templates)
    # an all-enabling controller cannot reproduce the supervisor
    from scasup.automata import selfloop

    loose = [selfloop(r.alphabet) for r in rlocs]
    assert not verify_relabeled_identity(rsup, loose, artifacts.templates)


def test_single_controller_edits_are_masked_by_peers():
    """The controller set is redundant: re-enabling one disablement in one
    controller never changes the meet, because the peer controllers still
    exclude the extra strings.  (Tampering must therefore be coherent to go
    unnoticed; see the next test.)"""
    plant, artifacts, local = _localized("mutual-exclusion")
    base_ok, _ = verify_control_equivalence(local, artifacts, plant)
    assert base_ok
    for gi, sloc in enumerate(local.slocs):
        own = set()
        for agent in plant.groups[gi].agents:
            own |= set(agent.alphabet.controllable_labels)
        for x in range(sloc.num_states):
            for lbl in sorted(own):
                if (x, lbl) in sloc.trans:
                    continue
                trans = dict(sloc.trans)
                trans[(x, lbl)] = x
                mutated = Generator(
                    sloc.num_states, sloc.initial, sloc.marked,
                    trans, sloc.alphabet,
                )
                slocs = list(local.slocs)
                slocs[gi] = mutated
                tampered = type(local)(
                    rlocs=local.rlocs, slocs=slocs, certificate=True
                )
                holds, _ = verify_control_equivalence(
                    tampered, artifacts, plant
                )
                assert holds


def test_equivalence_detects_coherent_relaxation():
    """Relaxing every controller at once (enable everything) must break
    control equivalence with a concrete witness string."""
    from scasup.automata import selfloop

    plant, artifacts, local = _localized("mutual-exclusion")
    loose = type(local)(
        rlocs=local.rlocs,
        slocs=[selfloop(s.alphabet) for s in local.slocs],
        certificate=True,
    )
    holds, witness = verify_control_equivalence(loose, artifacts, plant)
    assert not holds
    assert witness is not None and len(witness) >= 1
