"""Relabeling maps, their action on generators, inverse relabeling, and the
normality / similar-set checks built on them.

A relabeling map sends every source event to a target event, preserving
controllability, with source and target alphabets disjoint.  Applying it to
a generator may create nondeterminism, which is resolved by subset
construction; inverse relabeling replaces each target transition by one
transition per preimage event and never changes the state count.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping, Optional, Sequence

from .automata import (
    Alphabet,
    Event,
    Generator,
    canonicalize,
    empty_generator,
    is_isomorphic,
    language_equal,
)
from .errors import SimilarityViolation


class RelabelingMap:
    """Total, controllability-preserving event map from a source alphabet
    onto a target alphabet.

    Constructed from label-to-label pairs; the target alphabet and the
    inverse-image classes are derived, never declared, so they cannot be
    inconsistent.
    """

    __slots__ = ("source", "target", "_map", "_classes")

    def __init__(self, source: Alphabet, mapping: Mapping[str, str]):
        missing = set(source.labels) - set(mapping)
        if missing:
            raise ValueError(f"relabeling map not total, missing {sorted(missing)}")
        extra = set(mapping) - set(source.labels)
        if extra:
            raise ValueError(f"relabeling map has unknown sources {sorted(extra)}")
        target_events: dict[str, bool] = {}
        classes: dict[str, list[str]] = {}
        for src in source.labels:
            tgt = mapping[src]
            ctrl = source.controllable(src)
            if tgt in target_events and target_events[tgt] != ctrl:
                raise ValueError(
                    f"target event {tgt!r} would mix controllable and "
                    f"uncontrollable sources"
                )
            target_events[tgt] = ctrl
            classes.setdefault(tgt, []).append(src)
        overlap = set(target_events) & set(source.labels)
        if overlap:
            raise ValueError(
                f"source and target alphabets must be disjoint, got {sorted(overlap)}"
            )
        object.__setattr__(self, "source", source)
        object.__setattr__(
            self,
            "target",
            Alphabet(Event(t, c) for t, c in target_events.items()),
        )
        object.__setattr__(self, "_map", dict(mapping))
        object.__setattr__(
            self, "_classes", {t: tuple(sorted(ls)) for t, ls in classes.items()}
        )

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("RelabelingMap is immutable")

    def __call__(self, label: str) -> str:
        return self._map[label]

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self._map)

    def preimage(self, target_label: str) -> tuple[str, ...]:
        """The class [sigma] of source events mapping to ``target_label``."""
        return self._classes[target_label]

    def image_alphabet(self, labels: Iterable[str]) -> Alphabet:
        return Alphabet(self.target.event(self._map[l]) for l in labels)

    def preimage_alphabet(self, labels: Iterable[str]) -> Alphabet:
        sources = [s for t in labels for s in self._classes[t]]
        return Alphabet(self.source.event(s) for s in sources)

    def restricted(self, labels: Iterable[str]) -> "RelabelingMap":
        """The same map on a sub-alphabet of the source."""
        keep = set(labels)
        return RelabelingMap(
            self.source.restrict(keep),
            {l: t for l, t in self._map.items() if l in keep},
        )

    def extended(self, source: Alphabet, mapping: Mapping[str, str]) -> "RelabelingMap":
        """A new map whose domain additionally covers ``source``."""
        merged = self.source.union(source)
        full = dict(self._map)
        full.update(mapping)
        return RelabelingMap(merged, full)


def relabel(g: Generator, r: RelabelingMap) -> Generator:
    """Compute the relabeled generator R(g).

    Transitions are relabeled in place, which may produce nondeterminism;
    subset construction then yields a deterministic generator with
    Lm = R(Lm(g)) and L = R(L(g)).  A subset state is marked iff it
    contains a marked state of g.  Output is canonical (subset states
    explored in sorted target-label order).
    """
    if not set(g.alphabet.labels) <= set(r.source.labels):
        raise ValueError("generator alphabet must be inside the map's domain")
    target = r.image_alphabet(g.alphabet.labels)
    if g.is_empty:
        return empty_generator(target)
    # nondeterministic relabeled transition relation
    moves: dict[tuple[int, str], set] = {}
    for (s, lbl), t in g.trans.items():
        moves.setdefault((s, r(lbl)), set()).add(t)
    init = (g.initial,)
    index = {init: 0}
    queue = deque([init])
    trans: dict[tuple[int, str], int] = {}
    marked = set()
    while queue:
        subset = queue.popleft()
        sid = index[subset]
        if any(q in g.marked for q in subset):
            marked.add(sid)
        for tau in target.labels:
            targets: set = set()
            for q in subset:
                targets |= moves.get((q, tau), set())
            if not targets:
                continue
            nsubset = tuple(sorted(targets))
            if nsubset not in index:
                index[nsubset] = len(index)
                queue.append(nsubset)
            trans[(sid, tau)] = index[nsubset]
    return Generator(len(index), 0, marked, trans, target)


def inverse_relabel(h: Generator, r: RelabelingMap) -> Generator:
    """Compute R^{-1}(h): each tau-transition is replaced by one
    sigma-transition per sigma in the class of tau, all to the same target.

    The result is deterministic, keeps h's state numbering, and has exactly
    the same number of states as h.
    """
    if not set(h.alphabet.labels) <= set(r.target.labels):
        raise ValueError("generator alphabet must be inside the map's target")
    source = r.preimage_alphabet(h.alphabet.labels)
    if h.is_empty:
        return empty_generator(source)
    trans: dict[tuple[int, str], int] = {}
    for (s, tau), t in h.trans.items():
        for sigma in r.preimage(tau):
            trans[(s, sigma)] = t
    return Generator(h.num_states, h.initial, h.marked, trans, source)


def check_normality(e: Generator, r: RelabelingMap) -> bool:
    """True iff R^{-1}(R(e)) is language-equal to e.

    This is the representable form of the specification assumption; it
    implies that Lm(e) is normal with respect to the plant and map.
    """
    return language_equal(inverse_relabel(relabel(e, r), r), e)


def check_similar_set(
    group: Sequence[Generator],
    r: RelabelingMap,
    *,
    mode: str = "language",
    group_name: str = "",
) -> Generator:
    """Return the common template of ``group`` under ``r``.

    All agents must relabel to the same generator, compared by language
    equality (default) or isomorphism (``mode="isomorphism"``).  Raises
    SimilarityViolation naming the first offending agent.
    """
    if not group:
        raise ValueError("similar set must be nonempty")
    if mode not in ("language", "isomorphism"):
        raise ValueError(f"unknown similarity mode {mode!r}")
    same = language_equal if mode == "language" else is_isomorphic
    template = canonicalize(relabel(group[0], r))
    for j, agent in enumerate(group[1:], start=1):
        image = relabel(agent, r)
        if not same(image, template) or image.alphabet != template.alphabet:
            raise SimilarityViolation(group_name, j)
    return template


def _fresh_label(base: str, part: int, taken: set) -> str:
    """Primed variant of ``base`` for subgroup ``part`` (1-based beyond the
    first), kept clear of every label already in use."""
    candidate = base + "'" * part
    while candidate in taken:
        candidate += "'"
    return candidate


def refine_map(
    r: RelabelingMap,
    group_sources: Sequence[Sequence[Alphabet]],
    parts: Optional[Sequence[Sequence[Sequence[int]]]] = None,
) -> RelabelingMap:
    """Refine ``r`` by splitting each group of agents into subgroups with
    pairwise-disjoint target alphabets.

    ``group_sources[i][j]`` is the alphabet of agent j of group i.
    ``parts[i]`` partitions the agent indices of group i; the default is the
    halves split (first floor(n/2) agents keep the original targets, the
    rest get primed copies).  Controllability is preserved and all source
    and target alphabets stay globally pairwise disjoint.
    """
    if parts is None:
        parts = []
        for alphabets in group_sources:
            n = len(alphabets)
            half = max(n // 2, 1)
            split = [list(range(half))]
            if half < n:
                split.append(list(range(half, n)))
            parts.append(split)
    if len(parts) != len(group_sources):
        raise ValueError("one partition per group required")
    taken = set(r.source.labels) | set(r.target.labels)
    mapping = dict(r.mapping)
    for gi, (alphabets, split) in enumerate(zip(group_sources, parts)):
        indices = sorted(j for part in split for j in part)
        if indices != list(range(len(alphabets))):
            raise ValueError(f"partition of group {gi} must cover all agents")
        if any(not part for part in split):
            raise ValueError(f"partition of group {gi} has an empty part")
        for p, part in enumerate(split[1:], start=1):
            renames: dict[str, str] = {}
            for j in part:
                for lbl in alphabets[j].labels:
                    base = r(lbl)
                    if base not in renames:
                        renames[base] = _fresh_label(base, p, taken)
                        taken.add(renames[base])
                    mapping[lbl] = renames[base]
    return RelabelingMap(r.source, mapping)
