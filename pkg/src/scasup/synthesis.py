"""The scalable-synthesis pipeline: modular multi-agent plants, assumption
checking, relabeled synthesis, the refined (subgroup) variant, the
controllable-spec variant, and the desk-scale monolithic oracle used to
verify the scalability claims on small instances.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .automata import (
    Alphabet,
    Generator,
    is_nonblocking,
    language_equal,
    language_subset,
    restrict_alphabet,
    sync_product,
    trim,
)
from .errors import EmptySupervisor, ScaleLimit, SpecNotControllable
from .relabeling import RelabelingMap, check_normality, check_similar_set, refine_map, relabel, inverse_relabel
from .supcon import ControllabilityReport, is_controllable, supcon

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**6


@dataclass
class Group:
    """A similar set of agents with its parallelism budget k."""

    name: str
    agents: list
    parallelism: int = 1

    @property
    def count(self) -> int:
        return len(self.agents)

    def effective_parallelism(self) -> int:
        k = self.parallelism
        if k < 1:
            raise ValueError(f"group {self.name!r}: parallelism must be >= 1")
        if k > self.count:
            log.warning(
                "group %r: parallelism %d exceeds agent count %d, clamping",
                self.name,
                k,
                self.count,
            )
            return self.count
        return k


@dataclass
class MultiAgentPlant:
    """l > 1 groups of similar agents plus the relabeling map."""

    groups: list
    relabeling: RelabelingMap
    similarity_mode: str = "language"

    def __post_init__(self):
        if len(self.groups) <= 1:
            raise ValueError("a multi-agent plant needs more than one group")

    def template(self, i: int) -> Generator:
        """The group template H_i = R(G_i1), validated against all agents."""
        g = self.groups[i]
        return check_similar_set(
            g.agents, self.relabeling, mode=self.similarity_mode, group_name=g.name
        )

    def templates(self) -> list:
        return [self.template(i) for i in range(len(self.groups))]

    def full_plant(self, *, budget: Optional[int] = DEFAULT_BUDGET) -> Generator:
        """Synchronous product of every agent (desk scale only)."""
        agents = [a for g in self.groups for a in g.agents]
        return sync_product(agents, max_states=budget)


@dataclass
class AssumptionReport:
    """Per-assumption pass/fail with human-readable failure details."""

    independent_nonblocking: bool  # disjoint agent alphabets, agents nonblocking
    disjoint_templates: bool  # template alphabets pairwise disjoint
    spec_normal: bool  # R^-1(R(E)) = E
    sup1_nonempty: bool  # one-agent-per-group supervisor nonempty
    details: list = field(default_factory=list)

    def all_pass(self) -> bool:
        return (
            self.independent_nonblocking
            and self.disjoint_templates
            and self.spec_normal
            and self.sup1_nonempty
        )


@dataclass
class SynthesisArtifacts:
    """Everything produced by one run of the relabeled pipeline."""

    relabeled_plant: Generator  # M
    relabeled_spec: Generator  # F
    relabeled_supervisor: Generator  # RSUP
    scalable_supervisor: Generator  # SSUP
    plant_parts: list  # the per-group relabeled plants M_i
    templates: list  # the per-group templates H_i
    relabeling: RelabelingMap
    parallelism: list  # effective k_i actually used


def check_assumptions(
    plant: MultiAgentPlant, spec: Generator
) -> AssumptionReport:
    """Check the four standing assumptions of the pipeline."""
    details: list[str] = []

    a1 = True
    seen: dict[str, str] = {}
    for g in plant.groups:
        for j, agent in enumerate(g.agents):
            for lbl in agent.alphabet.labels:
                if lbl in seen:
                    a1 = False
                    details.append(
                        f"event {lbl!r} shared by {seen[lbl]} and "
                        f"{g.name}[{j}]"
                    )
                else:
                    seen[lbl] = f"{g.name}[{j}]"
            if not is_nonblocking(agent):
                a1 = False
                details.append(f"agent {g.name}[{j}] is blocking")

    a2 = True
    try:
        templates = plant.templates()
    except Exception as exc:  # similarity failure surfaces here
        a2 = False
        templates = []
        details.append(str(exc))
    for i in range(len(templates)):
        for j in range(i + 1, len(templates)):
            shared = set(templates[i].alphabet.labels) & set(
                templates[j].alphabet.labels
            )
            if shared:
                a2 = False
                details.append(
                    f"template alphabets of {plant.groups[i].name} and "
                    f"{plant.groups[j].name} share {sorted(shared)}"
                )

    a3 = check_normality(spec, plant.relabeling)
    if not a3:
        details.append("specification is not fixed by inverse relabeling")

    try:
        a4 = not sup1(plant, spec).is_empty
    except Exception as exc:
        a4 = False
        details.append(f"one-agent supervisor could not be computed: {exc}")
    if not a4 and "one-agent" not in " ".join(details):
        details.append("one-agent-per-group supervisor is empty")

    return AssumptionReport(a1, a2, a3, a4, details)


def build_relabeled_plant(plant: MultiAgentPlant) -> tuple:
    """Compute the per-group relabeled plants M_i = R(G_i1 || ... || G_ik_i)
    and their product M.  Never reads agents beyond index k_i."""
    parts = []
    ks = []
    for g in plant.groups:
        k = g.effective_parallelism()
        ks.append(k)
        parts.append(relabel(sync_product(list(g.agents[:k])), plant.relabeling))
    return sync_product(parts), parts, ks


def synthesize_scalable(
    plant: MultiAgentPlant, spec: Generator
) -> SynthesisArtifacts:
    """Run the four-step relabeled pipeline.

    Relabel the spec, synthesize against the relabeled plant, and
    inverse-relabel the supervisor; the result has exactly as many states as
    the relabeled supervisor and its computation touches at most k_i agents
    per group.
    """
    m, parts, ks = build_relabeled_plant(plant)
    f = relabel(spec, plant.relabeling)
    rsup = supcon(m, f)
    if rsup.is_empty:
        raise EmptySupervisor("relabeled synthesis yields the empty supervisor")
    ssup = inverse_relabel(rsup, plant.relabeling)
    return SynthesisArtifacts(
        relabeled_plant=m,
        relabeled_spec=f,
        relabeled_supervisor=rsup,
        scalable_supervisor=ssup,
        plant_parts=parts,
        templates=plant.templates(),
        relabeling=plant.relabeling,
        parallelism=ks,
    )


def _clone_agent(agent: Generator, r: RelabelingMap) -> tuple:
    """A fresh copy of ``agent`` over new labels, plus the map extension
    sending each new label to the same target as the original.

    Used for the two-agent modular check when a group has a single agent:
    the clone is exactly the next member a similar set would contain.
    """
    rename = {}
    taken = set(r.source.labels) | set(r.target.labels)
    for lbl in agent.alphabet.labels:
        fresh = lbl + "+"
        while fresh in taken:
            fresh += "+"
        taken.add(fresh)
        rename[lbl] = fresh
    alphabet = Alphabet(
        (rename[e.label], e.controllable) for e in agent.alphabet
    )
    trans = {(s, rename[lbl]): t for (s, lbl), t in agent.trans.items()}
    clone = Generator(agent.num_states, agent.initial, agent.marked, trans, alphabet)
    extended = r.extended(alphabet, {rename[l]: r(l) for l in rename})
    return clone, extended


@dataclass
class ModularConditionReport:
    """Per-group outcome of the two-agent sufficient-condition check."""

    passed: bool
    group_reports: list  # (group name, ControllabilityReport, cloned?)

    def __bool__(self) -> bool:
        return self.passed

    def first_witness(self):
        for _name, rep, _cloned in self.group_reports:
            if not rep.controllable:
                return rep.witness
        return None


def check_condition_modular(plant: MultiAgentPlant) -> ModularConditionReport:
    """Sufficient condition for the pipeline, checked two agents at a time:
    for each group, Lm(H_i) controllable w.r.t. R(L(G_i1 || G_i2)).

    Groups with a single agent are checked against a fresh-labeled clone of
    that agent.
    """
    reports = []
    passed = True
    for i, g in enumerate(plant.groups):
        template = plant.template(i)
        if g.count >= 2:
            r = plant.relabeling
            pair = sync_product([g.agents[0], g.agents[1]])
            cloned = False
        else:
            clone, r = _clone_agent(g.agents[0], plant.relabeling)
            pair = sync_product([g.agents[0], clone])
            cloned = True
        rep = is_controllable(template, relabel(pair, r))
        passed = passed and rep.controllable
        reports.append((g.name, rep, cloned))
    return ModularConditionReport(passed, reports)


def check_condition_direct(
    plant: MultiAgentPlant, *, budget: Optional[int] = DEFAULT_BUDGET
) -> ControllabilityReport:
    """Oracle-grade check of the sufficient condition on the full plant:
    Lm(M) controllable w.r.t. R(L(G)).  Desk scale only."""
    m, _parts, _ks = build_relabeled_plant(plant)
    g = plant.full_plant(budget=budget)
    return is_controllable(m, relabel(g, plant.relabeling))


def _reduced_spec(spec: Generator, plant_alphabet: Alphabet) -> Generator:
    """The spec restricted to a sub-plant's universe: transitions on events
    of absent agents are dropped, so Lm becomes Lm(spec) intersect the
    sub-plant's event monoid."""
    return restrict_alphabet(spec, plant_alphabet.labels)


def sup1(plant: MultiAgentPlant, spec: Generator) -> Generator:
    """Monolithic supervisor for the one-agent-per-group instance."""
    g1 = sync_product([g.agents[0] for g in plant.groups])
    return supcon(g1, _reduced_spec(spec, g1.alphabet))


def monolithic_oracle(
    plant: MultiAgentPlant,
    spec: Generator,
    *,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> Generator:
    """Monolithic supervisor over every agent.  Desk-scale verification
    only; raises ScaleLimit beyond the state budget."""
    g = plant.full_plant(budget=budget)
    return supcon(g, _reduced_spec(spec, g.alphabet))


@dataclass
class SscspReport:
    """Desk-scale verification of the scalable-synthesis guarantee."""

    lower_inclusion: bool  # Lm(SUP1) inside the controlled behavior
    upper_inclusion: bool  # controlled behavior inside Lm(SUP)
    least_restrictive: bool  # controlled behavior equals Lm(SUP)
    controlled_behavior: Generator  # trim(SSUP || G)

    def sandwich_holds(self) -> bool:
        return self.lower_inclusion and self.upper_inclusion


def controlled_behavior(
    artifacts: SynthesisArtifacts,
    plant: MultiAgentPlant,
    *,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> Generator:
    """trim(SSUP || G): the supervisor's controlled behavior on the full
    plant (desk scale).

    The supervisor may be defined over a larger event universe than this
    plant instance (the same SSUP serves any number of agents); Lm(SSUP)
    intersect Lm(G) is computed by first restricting SSUP to G's alphabet.
    """
    g = plant.full_plant(budget=budget)
    ssup = restrict_alphabet(artifacts.scalable_supervisor, g.alphabet.labels)
    return trim(sync_product([ssup, g], max_states=budget))


def verify_sscsp(
    artifacts: SynthesisArtifacts,
    plant: MultiAgentPlant,
    spec: Generator,
    *,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> SscspReport:
    """Check Lm(SUP1) <= Lm(SSUP) /\\ Lm(G) <= Lm(SUP) via the monolithic
    oracle, and report whether equality with SUP holds."""
    behavior = controlled_behavior(artifacts, plant, budget=budget)
    lower = sup1(plant, spec)
    upper = monolithic_oracle(plant, spec, budget=budget)
    return SscspReport(
        lower_inclusion=language_subset(lower, behavior),
        upper_inclusion=language_subset(behavior, upper),
        least_restrictive=language_equal(behavior, upper),
        controlled_behavior=behavior,
    )


def synthesize_refined(
    plant: MultiAgentPlant,
    spec: Generator,
    parts: Optional[Sequence[Sequence[Sequence[int]]]] = None,
) -> SynthesisArtifacts:
    """Pipeline over the refined relabeling map: each group is split into
    subgroups (default: halves) with primed target alphabets, and the
    relabeled plant is the product of one template per subgroup, so up to
    one agent per subgroup works in parallel."""
    group_sources = [[a.alphabet for a in g.agents] for g in plant.groups]
    if parts is None:
        parts = []
        for g in plant.groups:
            n = g.count
            half = max(n // 2, 1)
            split = [list(range(half))]
            if half < n:
                split.append(list(range(half, n)))
            parts.append(split)
    refined = refine_map(plant.relabeling, group_sources, parts)
    subgroups = [
        Group(
            name=f"{g.name}/{p}",
            agents=[g.agents[j] for j in part],
            parallelism=1,
        )
        for g, split in zip(plant.groups, parts)
        for p, part in enumerate(split)
    ]
    refined_plant = MultiAgentPlant(
        subgroups, refined, similarity_mode=plant.similarity_mode
    )
    return synthesize_scalable(refined_plant, spec)


def synthesize_corollary2(
    plant: MultiAgentPlant,
    spec: Generator,
    *,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> SynthesisArtifacts:
    """Variant for specs controllable w.r.t. the full plant: the relabeled
    plant is R(G) itself (desk scale), which admits agents whose first event
    is uncontrollable."""
    g = plant.full_plant(budget=budget)
    rep = is_controllable(sync_product([spec, g]), g)
    if not rep.controllable:
        raise SpecNotControllable(rep.witness)
    m = relabel(g, plant.relabeling)
    f = relabel(spec, plant.relabeling)
    rsup = supcon(m, f)
    if rsup.is_empty:
        raise EmptySupervisor("relabeled synthesis yields the empty supervisor")
    ssup = inverse_relabel(rsup, plant.relabeling)
    return SynthesisArtifacts(
        relabeled_plant=m,
        relabeled_spec=f,
        relabeled_supervisor=rsup,
        scalable_supervisor=ssup,
        plant_parts=[m],
        templates=plant.templates(),
        relabeling=plant.relabeling,
        parallelism=[g_.count for g_ in plant.groups],
    )
