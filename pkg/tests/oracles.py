"""Independently coded oracles used only by the tests.

These deliberately avoid the library's algorithms: languages are handled as
explicit string sets up to a depth bound, and the supremal-controllable
computation is a from-scratch fixpoint over an explicit product state set.
"""

from __future__ import annotations

from collections import deque
from itertools import product as iproduct

from scasup import Alphabet, Generator


def enumerate_language(g: Generator, depth: int) -> tuple[set, set]:
    """All strings of length <= depth in (L(g), Lm(g)), as tuples of labels."""
    closed: set = set()
    marked: set = set()
    if g.is_empty:
        return closed, marked
    queue = deque([((), g.initial)])
    while queue:
        word, state = queue.popleft()
        closed.add(word)
        if state in g.marked:
            marked.add(word)
        if len(word) == depth:
            continue
        for (s, lbl), t in g.trans.items():
            if s == state:
                queue.append((word + (lbl,), t))
    return closed, marked


def image_strings(strings: set, r) -> set:
    """R applied elementwise to a set of source strings."""
    return {tuple(r(lbl) for lbl in word) for word in strings}


def preimage_strings(strings: set, r) -> set:
    """R^-1 applied to a set of target strings: every source string whose
    image is in the set."""
    out: set = set()
    for word in strings:
        classes = [r.preimage(lbl) for lbl in word]
        out.update(iproduct(*classes))
    return out


def _complete_spec(spec: Generator, plant_alphabet: Alphabet):
    """Spec transition table over the plant alphabet, with events absent
    from the spec alphabet self-looped at every state."""
    if spec.is_empty:
        return None
    out = [dict() for _ in range(spec.num_states)]
    for (s, lbl), t in spec.trans.items():
        out[s][lbl] = t
    for lbl in plant_alphabet.labels:
        if lbl not in spec.alphabet:
            for s in range(spec.num_states):
                out[s][lbl] = s
    return out


def naive_supcon(plant: Generator, spec: Generator) -> Generator:
    """Supremal controllable sublanguage of Lm(plant) /\\ Lm(spec)||,
    computed as a plain set fixpoint on the explicit product."""
    empty = Generator(0, None, (), {}, plant.alphabet)
    if plant.is_empty or spec.is_empty:
        return empty
    sout = _complete_spec(spec, plant.alphabet)
    pout = [dict() for _ in range(plant.num_states)]
    for (s, lbl), t in plant.trans.items():
        pout[s][lbl] = t

    # explicit reachable product
    init = (plant.initial, spec.initial)
    states = {init}
    queue = deque([init])
    trans: dict = {}
    while queue:
        p, q = queue.popleft()
        for lbl, pt in pout[p].items():
            qt = sout[q].get(lbl)
            if qt is None:
                continue
            trans[((p, q), lbl)] = (pt, qt)
            if (pt, qt) not in states:
                states.add((pt, qt))
                queue.append((pt, qt))
    marked_pairs = {
        (p, q) for (p, q) in states if p in plant.marked and q in spec.marked
    }
    unc = plant.alphabet.uncontrollable_labels

    good = set(states)
    while True:
        # uncontrollability: the plant continues with an uncontrollable
        # event the candidate cannot follow inside the good set
        bad = set()
        for p, q in good:
            for lbl in unc:
                if lbl in pout[p]:
                    nxt = trans.get(((p, q), lbl))
                    if nxt is None or nxt not in good:
                        bad.add((p, q))
                        break
        survivors = good - bad
        # reachability from the initial state within survivors
        reach = set()
        if init in survivors:
            reach = {init}
            queue = deque([init])
            while queue:
                cur = queue.popleft()
                for lbl in plant.alphabet.labels:
                    nxt = trans.get((cur, lbl))
                    if nxt in survivors and nxt not in reach:
                        reach.add(nxt)
                        queue.append(nxt)
        # coreachability to a marked state within reach
        coreach = set(x for x in marked_pairs if x in reach)
        changed = True
        while changed:
            changed = False
            for cur in reach - coreach:
                for lbl in plant.alphabet.labels:
                    if trans.get((cur, lbl)) in coreach:
                        coreach.add(cur)
                        changed = True
                        break
        new_good = coreach
        if new_good == good:
            break
        good = new_good
    if init not in good:
        return empty
    order = sorted(good)
    index = {x: i for i, x in enumerate(order)}
    gtrans = {
        (index[src], lbl): index[dst]
        for (src, lbl), dst in trans.items()
        if src in good and dst in good
    }
    return Generator(
        len(order),
        index[init],
        {index[x] for x in marked_pairs if x in good},
        gtrans,
        plant.alphabet,
    )
