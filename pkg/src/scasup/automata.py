"""Deterministic generators (finite automata with marked states) and the
language-theoretic primitives the synthesis pipeline is built on.

A generator has states 0..num_states-1, a single initial state, a set of
marked states, a partial transition function keyed by (state, event label),
and an alphabet that partitions events into controllable and uncontrollable.
The empty generator (zero states, no initial state) is a legal value and all
operations are total on it.

All functions here are pure: they never mutate their inputs and return fresh
generators whose state numbering is canonical (breadth-first from the initial
state, transitions explored in sorted label order) unless documented
otherwise.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence


@dataclass(frozen=True, order=True)
class Event:
    """An event label together with its controllability status."""

    label: str
    controllable: bool


class Alphabet:
    """Immutable set of events indexed by label.

    Within one alphabet each label occurs once; merging alphabets that
    disagree on a label's controllability is an error, since the flag is
    fixed per label within a scenario.
    """

    __slots__ = ("_events",)

    def __init__(self, events: Iterable[Event | tuple[str, bool]] = ()):
        by_label: dict[str, Event] = {}
        for ev in events:
            if not isinstance(ev, Event):
                ev = Event(*ev)
            prev = by_label.get(ev.label)
            if prev is not None and prev.controllable != ev.controllable:
                raise ValueError(
                    f"conflicting controllability for event {ev.label!r}"
                )
            by_label[ev.label] = ev
        object.__setattr__(self, "_events", dict(sorted(by_label.items())))

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Alphabet is immutable")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self._events)

    def __contains__(self, label: str) -> bool:
        return label in self._events

    def __iter__(self) -> Iterator[Event]:
        return iter(self._events.values())

    def __len__(self) -> int:
        return len(self._events)

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self._events == other._events

    def __hash__(self) -> int:
        return hash(tuple(self._events.values()))

    def __repr__(self) -> str:
        return f"Alphabet({list(self._events.values())!r})"

    def event(self, label: str) -> Event:
        return self._events[label]

    def controllable(self, label: str) -> bool:
        return self._events[label].controllable

    @property
    def controllable_labels(self) -> tuple[str, ...]:
        return tuple(l for l, e in self._events.items() if e.controllable)

    @property
    def uncontrollable_labels(self) -> tuple[str, ...]:
        return tuple(l for l, e in self._events.items() if not e.controllable)

    def union(self, *others: "Alphabet") -> "Alphabet":
        events: list[Event] = list(self)
        for other in others:
            events.extend(other)
        return Alphabet(events)

    def restrict(self, labels: Iterable[str]) -> "Alphabet":
        keep = set(labels)
        return Alphabet(e for e in self if e.label in keep)

    def isdisjoint(self, other: "Alphabet") -> bool:
        return not set(self.labels) & set(other.labels)


@dataclass(frozen=True)
class Generator:
    """Deterministic generator: (Q, Sigma, delta, q0, Qm).

    ``trans`` maps (state, label) -> state and is partial.  ``initial`` is
    None exactly when ``num_states`` is 0 (the empty generator).
    """

    num_states: int
    initial: Optional[int]
    marked: frozenset
    trans: Mapping
    alphabet: Alphabet

    def __init__(
        self,
        num_states: int,
        initial: Optional[int],
        marked: Iterable[int],
        trans: Mapping | Iterable,
        alphabet: Alphabet,
    ):
        if not isinstance(trans, Mapping):
            trans = {(s, lbl): t for (s, lbl, t) in trans}
        marked = frozenset(marked)
        if num_states == 0:
            if initial is not None or marked or trans:
                raise ValueError("empty generator must have no states at all")
        else:
            if initial is None or not 0 <= initial < num_states:
                raise ValueError(f"initial state {initial} out of range")
            if not all(0 <= q < num_states for q in marked):
                raise ValueError("marked states out of range")
        for (s, lbl), t in trans.items():
            if lbl not in alphabet:
                raise ValueError(f"transition event {lbl!r} not in alphabet")
            if not (0 <= s < num_states and 0 <= t < num_states):
                raise ValueError(f"transition ({s},{lbl},{t}) out of range")
        object.__setattr__(self, "num_states", num_states)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "marked", marked)
        object.__setattr__(self, "trans", dict(trans))
        object.__setattr__(self, "alphabet", alphabet)

    @property
    def is_empty(self) -> bool:
        return self.num_states == 0

    def enabled(self, state: int) -> tuple[str, ...]:
        """Labels defined at ``state``, in sorted order."""
        return tuple(
            sorted(lbl for (s, lbl) in self.trans if s == state)
        ) if self.num_states else ()

    def target(self, state: int, label: str) -> Optional[int]:
        return self.trans.get((state, label))

    def transitions(self) -> list[tuple[int, str, int]]:
        return sorted((s, lbl, t) for (s, lbl), t in self.trans.items())

    def _out_edges(self) -> list[dict[str, int]]:
        """Per-state sorted outgoing map; precomputed for traversals."""
        out: list[dict[str, int]] = [dict() for _ in range(self.num_states)]
        for (s, lbl), t in sorted(self.trans.items()):
            out[s][lbl] = t
        return out


def empty_generator(alphabet: Alphabet = Alphabet()) -> Generator:
    return Generator(0, None, (), {}, alphabet)


def reachable_states(g: Generator) -> set:
    if g.is_empty:
        return set()
    out = g._out_edges()
    seen = {g.initial}
    queue = deque([g.initial])
    while queue:
        q = queue.popleft()
        for t in out[q].values():
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def coreachable_states(g: Generator) -> set:
    if g.is_empty:
        return set()
    back: list[list[int]] = [[] for _ in range(g.num_states)]
    for (s, _lbl), t in g.trans.items():
        back[t].append(s)
    seen = set(g.marked)
    queue = deque(g.marked)
    while queue:
        q = queue.popleft()
        for s in back[q]:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return seen


def _renumber(g: Generator, keep: Sequence[int]) -> Generator:
    """Restrict to ``keep`` (must contain the initial state) and renumber
    canonically by BFS in sorted label order."""
    keepset = set(keep)
    out = g._out_edges()
    order: dict[int, int] = {g.initial: 0}
    queue = deque([g.initial])
    while queue:
        q = queue.popleft()
        for lbl in sorted(out[q]):
            t = out[q][lbl]
            if t in keepset and t not in order:
                order[t] = len(order)
                queue.append(t)
    trans = {
        (order[s], lbl): order[t]
        for (s, lbl), t in g.trans.items()
        if s in order and t in order
    }
    marked = frozenset(order[q] for q in g.marked if q in order)
    return Generator(len(order), 0, marked, trans, g.alphabet)


def canonicalize(g: Generator) -> Generator:
    """BFS renumbering from the initial state, sorted label order.

    Unreachable states are dropped.  Idempotent; two generators are
    isomorphic (on their reachable parts) iff their canonical forms are
    equal.
    """
    if g.is_empty:
        return g
    return _renumber(g, sorted(reachable_states(g)))


def is_isomorphic(a: Generator, b: Generator) -> bool:
    ca, cb = canonicalize(a), canonicalize(b)
    return (
        ca.alphabet == cb.alphabet
        and ca.num_states == cb.num_states
        and ca.marked == cb.marked
        and ca.trans == cb.trans
    )


def trim(g: Generator) -> Generator:
    """Restrict to states both reachable and coreachable.

    Returns the empty generator when the initial state cannot reach a
    marked state.  The result is nonblocking or empty.
    """
    if g.is_empty:
        return g
    good = reachable_states(g) & coreachable_states(g)
    if g.initial not in good:
        return empty_generator(g.alphabet)
    return _renumber(g, sorted(good))


def is_nonblocking(g: Generator) -> bool:
    """True iff every reachable state can reach a marked state."""
    if g.is_empty:
        return True
    return reachable_states(g) <= coreachable_states(g)


def sync_product(
    gs: Sequence[Generator], *, max_states: Optional[int] = None
) -> Generator:
    """Synchronous product of ``gs``.

    Components synchronize on shared events and interleave on private ones;
    for pairwise-disjoint alphabets this is the shuffle.  Only reachable
    product states are kept and the result carries the union alphabet even
    for events with no surviving transitions.

    ``max_states`` caps the number of explored product states; exceeding it
    raises ``ScaleLimit``.
    """
    from .errors import ScaleLimit

    if not gs:
        raise ValueError("sync_product needs at least one operand")
    alphabet = gs[0].alphabet.union(*(g.alphabet for g in gs[1:]))
    if any(g.is_empty for g in gs):
        return empty_generator(alphabet)
    outs = [g._out_edges() for g in gs]
    init = tuple(g.initial for g in gs)
    index = {init: 0}
    queue = deque([init])
    trans: dict[tuple[int, str], int] = {}
    marked = set()
    while queue:
        state = queue.popleft()
        sid = index[state]
        if all(q in g.marked for q, g in zip(state, gs)):
            marked.add(sid)
        for lbl in alphabet.labels:
            nxt = []
            for q, g, out in zip(state, gs, outs):
                if lbl in g.alphabet:
                    t = out[q].get(lbl)
                    if t is None:
                        break
                    nxt.append(t)
                else:
                    nxt.append(q)
            else:
                nstate = tuple(nxt)
                if nstate not in index:
                    if max_states is not None and len(index) >= max_states:
                        raise ScaleLimit(
                            f"synchronous product exceeds {max_states} states"
                        )
                    index[nstate] = len(index)
                    queue.append(nstate)
                trans[(sid, lbl)] = index[nstate]
    return Generator(len(index), 0, marked, trans, alphabet)


def _subset_inclusion(
    a: Generator, b: Generator
) -> Optional[tuple[tuple[str, ...], str]]:
    """Check L(a) subseteq L(b) and Lm(a) subseteq Lm(b).

    Returns None when the inclusion holds, otherwise the shortest witness as
    (string, reason-label) where the string is in L(a)\\L(b), or in
    Lm(a)\\Lm(b) with reason "" for a marking mismatch.
    """
    if a.is_empty:
        return None
    if b.is_empty:
        return ((), "")  # epsilon is in L(a) but L(b) is empty
    aout, bout = a._out_edges(), b._out_edges()
    start = (a.initial, b.initial)
    seen = {start: ()}
    queue = deque([start])
    while queue:
        p, q = pair = queue.popleft()
        path = seen[pair]
        if p in a.marked and q not in b.marked:
            return (path, "")
        for lbl, pt in sorted(aout[p].items()):
            qt = bout[q].get(lbl)
            if qt is None:
                return (path + (lbl,), lbl)
            npair = (pt, qt)
            if npair not in seen:
                seen[npair] = path + (lbl,)
                queue.append(npair)
    return None


def language_subset(a: Generator, b: Generator) -> bool:
    """True iff L(a) subseteq L(b) and Lm(a) subseteq Lm(b)."""
    return _subset_inclusion(a, b) is None


def language_subset_witness(
    a: Generator, b: Generator
) -> Optional[tuple[str, ...]]:
    """Shortest string witnessing a failure of language_subset, else None."""
    res = _subset_inclusion(a, b)
    return None if res is None else res[0]


def language_equal(a: Generator, b: Generator) -> bool:
    """True iff L(a) = L(b) and Lm(a) = Lm(b)."""
    return language_subset(a, b) and language_subset(b, a)


def natural_projection(g: Generator, keep: Alphabet) -> Generator:
    """Erase events outside ``keep`` and determinize by subset construction.

    Lm(result) = P(Lm(g)) for the natural projection P onto keep*.
    """
    if not set(keep.labels) <= set(g.alphabet.labels):
        raise ValueError("projection alphabet must be a subset of g's")
    if g.is_empty:
        return empty_generator(keep)
    out = g._out_edges()
    erased = set(g.alphabet.labels) - set(keep.labels)

    def closure(states: Iterable[int]) -> tuple[int, ...]:
        seen = set(states)
        queue = deque(seen)
        while queue:
            q = queue.popleft()
            for lbl in erased:
                t = out[q].get(lbl)
                if t is not None and t not in seen:
                    seen.add(t)
                    queue.append(t)
        return tuple(sorted(seen))

    init = closure([g.initial])
    index = {init: 0}
    queue = deque([init])
    trans: dict[tuple[int, str], int] = {}
    marked = set()
    while queue:
        subset = queue.popleft()
        sid = index[subset]
        if any(q in g.marked for q in subset):
            marked.add(sid)
        for lbl in keep.labels:
            targets = {out[q][lbl] for q in subset if lbl in out[q]}
            if not targets:
                continue
            nsubset = closure(targets)
            if nsubset not in index:
                index[nsubset] = len(index)
                queue.append(nsubset)
            trans[(sid, lbl)] = index[nsubset]
    return Generator(len(index), 0, marked, trans, keep)


def restrict_alphabet(g: Generator, labels: Iterable[str]) -> Generator:
    """Drop transitions on events outside ``labels``; Lm becomes
    Lm(g) intersect labels*."""
    keep = set(labels) & set(g.alphabet.labels)
    if g.is_empty:
        return empty_generator(g.alphabet.restrict(keep))
    trans = {k: t for k, t in g.trans.items() if k[1] in keep}
    return canonicalize(
        Generator(
            g.num_states, g.initial, g.marked, trans, g.alphabet.restrict(keep)
        )
    )


def selfloop(alphabet: Alphabet) -> Generator:
    """One-state marked generator selflooping every event: the neutral
    element of the synchronous product over ``alphabet``."""
    trans = {(0, lbl): 0 for lbl in alphabet.labels}
    return Generator(1, 0, {0}, trans, alphabet)
