"""Supervisor localization: decompose the relabeled supervisor into
per-group local controllers and derive per-agent scalable local controllers
with a verified control-equivalence certificate.

Each per-group controller is induced by a control cover of the relabeled
supervisor's states: states are merged when their enablement, disablement,
and marking information do not conflict for the group's controllable
events, and merges are propagated to successor states so the quotient stays
deterministic.  The resulting merge is order-sensitive (finding a smallest
cover is NP-hard), so a fixed deterministic schedule of merge orders is
explored and one candidate per group is selected by structural criteria:

1. keep as many distinct control configurations as possible (maximize the
   number of controller states at which the group's controllable events are
   enabled, so over-merging does not hide control decisions);
2. prefer covers whose product with the group component is nonblocking, so
   the trim step discards nothing;
3. among those, take the fewest states.

Correctness is gated solely on the decomposition identity: the intersection
of the local controllers with the product of the group components must
reproduce the relabeled supervisor exactly.  Minimal controller size is a
non-goal; if no cover satisfies the identity the controllers fall back to
the supervisor itself.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .automata import (
    Generator,
    language_equal,
    language_subset_witness,
    restrict_alphabet,
    sync_product,
    trim,
)
from .errors import LocalizationFailed
from .relabeling import RelabelingMap, inverse_relabel
from .synthesis import DEFAULT_BUDGET, MultiAgentPlant, SynthesisArtifacts

#: Number of merge orders explored per localization run.  The first order is
#: the canonical ascending order; the rest are deterministic shuffles.
DEFAULT_COVER_TRIALS = 64

#: Fixed seed for the deterministic shuffle schedule.
_COVER_SEED = 0


@dataclass
class LocalControllerSet:
    """Per-group relabeled controllers and the per-agent controllers derived
    from them.

    Every agent in group i runs the same controller ``slocs[i]``; at
    deployment each copy enables/disables only the controllable events of
    its own agent.
    """

    rlocs: list  # RLOC_i over the target alphabet
    slocs: list  # SLOC_i over the source alphabet, one per group
    certificate: bool  # decomposition identity verified
    witness: Optional[tuple] = None


def _state_map(sup: Generator, plant: Generator) -> list:
    """For each supervisor state, the unique plant state reached by the same
    strings (L(sup) is contained in L(plant))."""
    sout, pout = sup._out_edges(), plant._out_edges()
    mapping: list[Optional[int]] = [None] * sup.num_states
    mapping[sup.initial] = plant.initial
    queue = deque([sup.initial])
    while queue:
        x = queue.popleft()
        p = mapping[x]
        for lbl, xt in sout[x].items():
            pt = pout[p].get(lbl)
            if pt is None:
                raise LocalizationFailed(
                    "supervisor enables an event the plant does not"
                )
            if mapping[xt] is None:
                mapping[xt] = pt
                queue.append(xt)
            elif mapping[xt] != pt:
                raise LocalizationFailed("supervisor is not plant-consistent")
    return mapping


def _cover_quotient(
    rsup: Generator, plant: Generator, to_plant: list, authority: set, order: list
) -> tuple:
    """One greedy control cover, merging in the given state order.

    States are merged when their enablement sets do not meet the partner's
    disablement set (restricted to ``authority``) and their marking does not
    conflict at plant-marked states.  A merge propagates to successor states
    (with rollback) so the quotient automaton stays deterministic.  Returns
    (quotient generator, canonical partition key).
    """
    n = rsup.num_states
    sout, pout = rsup._out_edges(), plant._out_edges()
    enabled = [set(sout[x]) for x in range(n)]
    disabled = [
        {
            tau
            for tau in authority
            if tau in pout[to_plant[x]] and tau not in sout[x]
        }
        for x in range(n)
    ]
    sup_marked = [x in rsup.marked for x in range(n)]
    plant_marked = [to_plant[x] in plant.marked for x in range(n)]

    def consistent(x: int, y: int) -> bool:
        if enabled[x] & disabled[y] or enabled[y] & disabled[x]:
            return False
        if plant_marked[x] and plant_marked[y] and sup_marked[x] != sup_marked[y]:
            return False
        return True

    parent = list(range(n))

    def find(x: int, par: list) -> int:
        while par[x] != x:
            par[x] = par[par[x]]
            x = par[x]
        return x

    def try_merge(a: int, b: int, par: list) -> bool:
        stack = [(a, b)]
        while stack:
            u, v = stack.pop()
            ru, rv = find(u, par), find(v, par)
            if ru == rv:
                continue
            mu = [x for x in range(n) if find(x, par) == ru]
            mv = [x for x in range(n) if find(x, par) == rv]
            if not all(consistent(x, y) for x in mu for y in mv):
                return False
            par[rv] = ru
            succs: dict[str, list] = {}
            for x in mu + mv:
                for lbl, xt in sout[x].items():
                    succs.setdefault(lbl, []).append(xt)
            for lbl, ts in succs.items():
                first = ts[0]
                for other in ts[1:]:
                    if find(first, par) != find(other, par):
                        stack.append((first, other))
        return True

    # first-fit greedy: each state joins the earliest compatible cell
    placed: list = []
    for x in order:
        if find(x, parent) != x:
            continue
        for c in placed:
            if find(c, parent) != c:
                continue
            attempt = list(parent)
            if try_merge(c, x, attempt):
                parent = attempt
                break
        else:
            placed.append(x)

    cell_of = [find(x, parent) for x in range(n)]
    cell_ids = sorted(set(cell_of))
    index = {c: i for i, c in enumerate(cell_ids)}
    trans = {}
    for (x, lbl), xt in rsup.trans.items():
        trans[(index[cell_of[x]], lbl)] = index[cell_of[xt]]
    marked = {index[cell_of[x]] for x in range(n) if sup_marked[x]}
    quotient = Generator(
        len(cell_ids), index[cell_of[rsup.initial]], marked, trans, rsup.alphabet
    )
    key = tuple(
        sorted(
            tuple(sorted(x for x in range(n) if cell_of[x] == c))
            for c in cell_ids
        )
    )
    return quotient, key


def _merge_orders(n: int, trials: int, seed: int) -> list:
    """Deterministic schedule of state-processing orders: canonical first,
    then fixed-seed shuffles."""
    rng = random.Random(seed)
    orders = [list(range(n))]
    for _ in range(max(0, trials - 1)):
        order = list(range(n))
        rng.shuffle(order)
        orders.append(order)
    return orders


def localize_rsup(
    rsup: Generator,
    m_parts: Sequence[Generator],
    *,
    trials: int = DEFAULT_COVER_TRIALS,
    seed: int = _COVER_SEED,
) -> list:
    """Decompose the relabeled supervisor into one controller per group.

    ``m_parts`` are the per-group relabeled plant components whose product
    the supervisor's behavior is confined to.  Each returned controller only
    disables controllable events of its own group's target alphabet, and
    collectively they satisfy the decomposition identity (checked by
    ``verify_relabeled_identity``).  On failure the controllers fall back to
    the supervisor itself; if even that violates the identity a
    ``LocalizationFailed`` is raised.
    """
    m_parts = list(m_parts)
    if rsup.is_empty:
        return [rsup for _ in m_parts]
    plant = sync_product(m_parts)
    to_plant = _state_map(rsup, plant)
    orders = _merge_orders(rsup.num_states, trials, seed)
    rlocs = []
    for part in m_parts:
        authority = set(part.alphabet.controllable_labels)
        best = None
        seen = set()
        for order in orders:
            quotient, key = _cover_quotient(rsup, plant, to_plant, authority, order)
            if key in seen:
                continue
            seen.add(key)
            raw = sync_product([quotient, part])
            product = trim(raw)
            out = product._out_edges()
            control_states = sum(
                1
                for s in range(product.num_states)
                if set(out[s]) & authority
            )
            score = (
                -control_states,
                product.num_states != raw.num_states,
                product.num_states,
            )
            if best is None or score < best[0]:
                best = (score, quotient)
        rlocs.append(best[1])
    if not verify_relabeled_identity(rsup, rlocs, m_parts):
        rlocs = [rsup for _ in m_parts]
        if not verify_relabeled_identity(rsup, rlocs, m_parts):
            raise LocalizationFailed(
                "fallback controllers do not reproduce the supervisor"
            )
    return rlocs


def verify_relabeled_identity(
    rsup: Generator, rlocs: Sequence[Generator], m_parts: Sequence[Generator]
) -> bool:
    """Check the decomposition identity at the relabeled level: the meet of
    trim(RLOC_i || part_i) over all groups equals the supervisor's language."""
    factors = [
        trim(sync_product([rloc, part])) for rloc, part in zip(rlocs, m_parts)
    ]
    if any(f.is_empty for f in factors):
        return rsup.is_empty
    meet = trim(sync_product(list(factors)))
    return language_equal(meet, trim(rsup))


def build_sloc(
    rloc: Generator, m_part: Generator, r: RelabelingMap
) -> Generator:
    """Per-agent controller: inverse-relabel trim(RLOC_i || part_i).

    The product may be blocking, hence the trim; inverse relabeling keeps
    the state count of the trimmed product.
    """
    return inverse_relabel(trim(sync_product([rloc, m_part])), r)


def localize(
    artifacts: SynthesisArtifacts,
    *,
    trials: int = DEFAULT_COVER_TRIALS,
    seed: int = _COVER_SEED,
) -> LocalControllerSet:
    """Full localization of a synthesis run, with the relabeled-level
    certificate attached.

    The per-agent controller of group i is derived against that group's
    single-agent template, which keeps the controller as small as one
    agent's behavior warrants.  That route is sound only when the
    supervisor's behavior stays within the product of the templates; when it
    does not (the supervisor exercises the parallelism of the relabeled
    plant), localization is done against the per-group relabeled plants
    instead.
    """
    rsup = artifacts.relabeled_supervisor
    routes = [list(artifacts.templates)]
    plant_parts = list(artifacts.plant_parts)
    if [id(p) for p in plant_parts] != [id(t) for t in routes[0]]:
        routes.append(plant_parts)
    last_error = None
    for parts in routes:
        try:
            rlocs = localize_rsup(rsup, parts, trials=trials, seed=seed)
        except LocalizationFailed as exc:
            last_error = exc
            continue
        slocs = [
            build_sloc(rloc, part, artifacts.relabeling)
            for rloc, part in zip(rlocs, parts)
        ]
        cert = verify_relabeled_identity(rsup, rlocs, parts)
        return LocalControllerSet(rlocs=rlocs, slocs=slocs, certificate=cert)
    raise last_error if last_error is not None else LocalizationFailed(
        "localization failed"
    )


def verify_control_equivalence(
    local: LocalControllerSet,
    artifacts: SynthesisArtifacts,
    plant: MultiAgentPlant,
    *,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> tuple:
    """Desk-scale check of control equivalence on the full plant: the meet
    of every per-agent controller with L(G) must equal the scalable
    supervisor's controlled behavior.

    Returns (holds, witness); the witness is the shortest string in the
    symmetric difference when the check fails.
    """
    g = plant.full_plant(budget=budget)
    slocs = [restrict_alphabet(s, g.alphabet.labels) for s in local.slocs]
    ssup = restrict_alphabet(artifacts.scalable_supervisor, g.alphabet.labels)
    lhs = trim(sync_product(slocs + [g], max_states=budget))
    rhs = trim(sync_product([ssup, g], max_states=budget))
    witness = language_subset_witness(lhs, rhs)
    if witness is None:
        witness = language_subset_witness(rhs, lhs)
    return (witness is None, witness)
