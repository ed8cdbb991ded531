"""Classical Ramadge-Wonham synthesis: controllability checking and the
supremal controllable sublanguage fixpoint."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .automata import (
    Alphabet,
    Generator,
    canonicalize,
    empty_generator,
    language_equal,
    sync_product,
    trim,
)


@dataclass(frozen=True)
class ControllabilityReport:
    """Outcome of a controllability check.

    ``witness`` is present iff ``controllable`` is False: the shortest pair
    (t, tau) with t in the prefix closure of K, tau uncontrollable,
    t.tau in L(plant) but t.tau not in the closure of K.
    """

    controllable: bool
    witness: Optional[tuple[tuple[str, ...], str]] = None

    def __bool__(self) -> bool:
        return self.controllable


def is_controllable(k: Generator, l: Generator) -> ControllabilityReport:
    """Check that Lm(k) is controllable with respect to L(l).

    Traverses the synchronized product of the closure of Lm(k) (i.e. trim(k))
    and l; the first uncontrollable event enabled by l but not by k, in BFS
    order, yields the shortest witness.
    """
    kt = trim(k)
    if kt.is_empty or l.is_empty:
        return ControllabilityReport(True)
    unc = l.alphabet.uncontrollable_labels
    kout, lout = kt._out_edges(), l._out_edges()
    start = (kt.initial, l.initial)
    seen = {start: ()}
    queue = deque([start])
    while queue:
        p, q = pair = queue.popleft()
        path = seen[pair]
        for tau in unc:
            if tau in lout[q] and tau not in kout[p]:
                return ControllabilityReport(False, (path, tau))
        for lbl, pt in sorted(kout[p].items()):
            qt = lout[q].get(lbl)
            if qt is None:
                continue  # string leaves L(l); irrelevant to the check
            npair = (pt, qt)
            if npair not in seen:
                seen[npair] = path + (lbl,)
                queue.append(npair)
    return ControllabilityReport(True)


def selfloop_completion(spec: Generator, plant_alphabet: Alphabet) -> Generator:
    """Complete a spec over a sub-alphabet by selflooping, at every state,
    each plant event absent from the spec's alphabet.

    Events in the spec's alphabet stay as genuine constraints.
    """
    extra = set(plant_alphabet.labels) - set(spec.alphabet.labels)
    if not extra:
        return spec
    alphabet = spec.alphabet.union(plant_alphabet.restrict(extra))
    if spec.is_empty:
        return empty_generator(alphabet)
    trans = dict(spec.trans)
    for s in range(spec.num_states):
        for lbl in extra:
            trans[(s, lbl)] = s
    return Generator(spec.num_states, spec.initial, spec.marked, trans, alphabet)


def supcon(plant: Generator, spec: Generator) -> Generator:
    """Supremal controllable sublanguage of Lm(spec) intersect Lm(plant).

    The spec may be given over a sub-alphabet of the plant; it is completed
    by selflooping absent plant events first.  The fixpoint alternates
    deletion of states where an uncontrollable plant-enabled event is not
    enabled in the product with re-trimming, until stable.  Returns the
    empty generator when the supremal sublanguage is empty.
    """
    if not set(spec.alphabet.labels) <= set(plant.alphabet.labels):
        raise ValueError("spec alphabet must be a subset of the plant's")
    alphabet = plant.alphabet
    if plant.is_empty or spec.is_empty:
        return empty_generator(alphabet)
    spec_c = selfloop_completion(spec, alphabet)
    pout, sout = plant._out_edges(), spec_c._out_edges()
    unc = alphabet.uncontrollable_labels

    # reachable product states
    init = (plant.initial, spec_c.initial)
    states = {init}
    queue = deque([init])
    edges: dict[tuple, dict[str, tuple]] = {init: {}}
    while queue:
        p, q = pair = queue.popleft()
        for lbl, pt in pout[p].items():
            qt = sout[q].get(lbl)
            if qt is None:
                continue
            npair = (pt, qt)
            edges[pair][lbl] = npair
            if npair not in states:
                states.add(npair)
                edges[npair] = {}
                queue.append(npair)

    good = set(states)
    while True:
        # delete uncontrollable-bad states
        bad = set()
        for pair in good:
            p, _q = pair
            for tau in unc:
                if tau in pout[p]:
                    nxt = edges[pair].get(tau)
                    if nxt is None or nxt not in good:
                        bad.add(pair)
                        break
        good -= bad
        # re-trim within good
        if init not in good:
            return empty_generator(alphabet)
        reach = {init}
        queue = deque([init])
        while queue:
            pair = queue.popleft()
            for nxt in edges[pair].values():
                if nxt in good and nxt not in reach:
                    reach.add(nxt)
                    queue.append(nxt)
        back: dict[tuple, list[tuple]] = {pair: [] for pair in reach}
        for pair in reach:
            for nxt in edges[pair].values():
                if nxt in reach:
                    back[nxt].append(pair)
        markedset = {
            (p, q) for (p, q) in reach if p in plant.marked and q in spec_c.marked
        }
        coreach = set(markedset)
        queue = deque(markedset)
        while queue:
            pair = queue.popleft()
            for prev in back[pair]:
                if prev not in coreach:
                    coreach.add(prev)
                    queue.append(prev)
        trimmed = reach & coreach
        if init not in trimmed:
            return empty_generator(alphabet)
        if trimmed == good and not bad:
            break
        good = trimmed

    index = {init: 0}
    order = deque([init])
    while order:
        pair = order.popleft()
        for lbl in sorted(edges[pair]):
            nxt = edges[pair][lbl]
            if nxt in good and nxt not in index:
                index[nxt] = len(index)
                order.append(nxt)
    trans = {
        (index[pair], lbl): index[nxt]
        for pair in index
        for lbl, nxt in edges[pair].items()
        if nxt in good
    }
    marked = {
        index[(p, q)]
        for (p, q) in index
        if p in plant.marked and q in spec_c.marked
    }
    return Generator(len(index), 0, marked, trans, alphabet)


def is_nonconflicting(a: Generator, b: Generator) -> bool:
    """True iff the closure of Lm(a) intersect Lm(b) equals the intersection
    of the closures.

    On the product of the trim forms, the closed language is the
    intersection of the closures and the marked language is the intersection
    of the marked languages, so the two sides coincide exactly when that
    product is nonblocking (trimming it removes no reachable state).
    """
    ta, tb = trim(a), trim(b)
    if ta.is_empty or tb.is_empty:
        return True
    meet = sync_product([ta, tb])
    trimmed = trim(meet)
    if trimmed.is_empty:
        return meet.is_empty
    closed = lambda g: Generator(
        g.num_states, g.initial, range(g.num_states), g.trans, g.alphabet
    )
    return language_equal(closed(meet), closed(trimmed))
