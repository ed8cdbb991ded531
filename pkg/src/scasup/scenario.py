"""Scenario and generator file formats plus DOT export.

A scenario is a versioned JSON document (``format: 1``) describing a
multi-agent plant and its specification:

* ``groups``: each group gives either an explicit ``agents`` list of
  generators, or a single ``template`` generator with a ``count`` whose
  event labels are printf-style schemes (``"1{j}1"``); the scheme is
  instantiated for ``j = 1..count``, which makes the agent alphabets
  pairwise disjoint by construction.
* ``relabel``: label-to-label pairs; keys may be schemes, which expand over
  the count of the group owning the scheme.
* ``specs``: one or more specification generators (composed by synchronous
  product); their labels may also be schemes.
* ``options``: ``similarity_mode`` (``"language"`` or ``"isomorphism"``)
  and the default state ``budget`` for desk-scale oracles.

Generators serialize as ``{states, initial, marked, events, transitions}``
with events as ``{label, controllable}`` objects and transitions as
``[from, label, to]`` triples.  Emission is canonical (sorted keys, sorted
transitions), so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .automata import Alphabet, Generator, canonicalize, sync_product
from .errors import ParseError
from .relabeling import RelabelingMap
from .synthesis import DEFAULT_BUDGET, Group, MultiAgentPlant

FORMAT_VERSION = 1

#: Placeholder expanded to the agent index when instantiating a scheme.
_PLACEHOLDER = "{j}"


@dataclass
class ScenarioOptions:
    """Per-scenario defaults surfaced to the command line."""

    similarity_mode: str = "language"
    budget: Optional[int] = DEFAULT_BUDGET


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"missing required field {key!r}", where)
    return obj[key]


def _expect(value, types, where: str, what: str):
    if not isinstance(value, types):
        raise ParseError(f"{what} must be {types if not isinstance(types, tuple) else ' or '.join(t.__name__ for t in types)}", where)
    return value


def _parse_events(raw, where: str) -> list:
    if not isinstance(raw, list):
        raise ParseError("events must be a list", where)
    events = []
    for i, ev in enumerate(raw):
        loc = f"{where}.events[{i}]"
        if not isinstance(ev, dict):
            raise ParseError("event must be an object", loc)
        label = _require(ev, "label", loc)
        controllable = _require(ev, "controllable", loc)
        if not isinstance(label, str) or not isinstance(controllable, bool):
            raise ParseError("event needs a string label and boolean controllable", loc)
        events.append((label, controllable))
    return events


def _parse_transitions(raw, where: str) -> list:
    if not isinstance(raw, list):
        raise ParseError("transitions must be a list", where)
    triples = []
    for i, tr in enumerate(raw):
        loc = f"{where}.transitions[{i}]"
        if (
            not isinstance(tr, list)
            or len(tr) != 3
            or not isinstance(tr[0], int)
            or not isinstance(tr[1], str)
            or not isinstance(tr[2], int)
        ):
            raise ParseError("transition must be a [from, label, to] triple", loc)
        triples.append((tr[0], tr[1], tr[2]))
    return triples


def parse_generator(obj: dict, where: str = "generator") -> Generator:
    """Build a Generator from its JSON object form, diagnosing the failing
    field on malformed input."""
    if not isinstance(obj, dict):
        raise ParseError("generator must be an object", where)
    states = _require(obj, "states", where)
    initial = _require(obj, "initial", where)
    marked = _require(obj, "marked", where)
    events = _parse_events(_require(obj, "events", where), where)
    triples = _parse_transitions(_require(obj, "transitions", where), where)
    if not isinstance(states, int) or not isinstance(marked, list):
        raise ParseError("states must be an integer and marked a list", where)
    try:
        alphabet = Alphabet(events)
        trans = {}
        for s, lbl, t in triples:
            if (s, lbl) in trans and trans[(s, lbl)] != t:
                raise ValueError(f"nondeterministic on ({s}, {lbl!r})")
            trans[(s, lbl)] = t
        return Generator(states, initial, marked, trans, alphabet)
    except ValueError as exc:
        raise ParseError(str(exc), where) from exc


def generator_to_obj(g: Generator) -> dict:
    """Canonical JSON object form of a generator (states renumbered in
    breadth-first order, transitions sorted)."""
    g = canonicalize(g)
    return {
        "states": g.num_states,
        "initial": g.initial,
        "marked": sorted(g.marked),
        "events": [
            {"label": e.label, "controllable": e.controllable}
            for e in g.alphabet
        ],
        "transitions": [list(t) for t in sorted(g.transitions())],
    }


def save_generator(path, g: Generator) -> None:
    """Write a generator as canonical JSON; save-then-load is the identity
    on canonical forms."""
    obj = {"format": FORMAT_VERSION, **generator_to_obj(g)}
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def load_generator(path) -> Generator:
    """Read a generator written by :func:`save_generator`."""
    where = str(path)
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", where) from exc
    if not isinstance(obj, dict) or obj.get("format") != FORMAT_VERSION:
        raise ParseError(f"expected format {FORMAT_VERSION}", where)
    return parse_generator(obj, where)


def _instantiate(label: str, j: int) -> str:
    return label.replace(_PLACEHOLDER, str(j))


def _instantiate_generator(template: Generator, j: int) -> Generator:
    alphabet = Alphabet(
        (_instantiate(e.label, j), e.controllable) for e in template.alphabet
    )
    trans = {
        (s, _instantiate(lbl, j)): t for (s, lbl), t in template.trans.items()
    }
    return Generator(
        template.num_states, template.initial, template.marked, trans, alphabet
    )


def _group_agents(graw: dict, where: str) -> tuple:
    """Agents of one group plus the scheme->count table for its template
    labels (empty for explicit agent lists)."""
    if "agents" in graw:
        agents = [
            parse_generator(a, f"{where}.agents[{i}]")
            for i, a in enumerate(_expect(graw["agents"], list, where, "agents"))
        ]
        if not agents:
            raise ParseError("group needs at least one agent", where)
        return agents, {}
    template = parse_generator(_require(graw, "template", where), f"{where}.template")
    count = _require(graw, "count", where)
    if not isinstance(count, int) or count < 1:
        raise ParseError("count must be a positive integer", where)
    schemes = {}
    for e in template.alphabet:
        if count > 1 and _PLACEHOLDER not in e.label:
            raise ParseError(
                f"template label {e.label!r} lacks {_PLACEHOLDER}; instantiated "
                f"agents would share events",
                f"{where}.template",
            )
        schemes[e.label] = count
    return [_instantiate_generator(template, j) for j in range(1, count + 1)], schemes


def _expand_spec(spec: Generator, schemes: dict, where: str) -> Generator:
    """Instantiate scheme labels inside a specification generator: each
    transition on a scheme expands to one transition per agent index."""
    events = []
    for e in spec.alphabet:
        if _PLACEHOLDER in e.label:
            if e.label not in schemes:
                raise ParseError(
                    f"scheme {e.label!r} does not appear in any group template",
                    where,
                )
            events.extend(
                (_instantiate(e.label, j), e.controllable)
                for j in range(1, schemes[e.label] + 1)
            )
        else:
            events.append((e.label, e.controllable))
    trans = {}
    for (s, lbl), t in spec.trans.items():
        labels = (
            [_instantiate(lbl, j) for j in range(1, schemes[lbl] + 1)]
            if _PLACEHOLDER in lbl
            else [lbl]
        )
        for concrete in labels:
            prev = trans.get((s, concrete))
            if prev is not None and prev != t:
                raise ParseError(
                    f"expansion of {lbl!r} makes state {s} nondeterministic", where
                )
            trans[(s, concrete)] = t
    try:
        return Generator(
            spec.num_states, spec.initial, spec.marked, trans, Alphabet(events)
        )
    except ValueError as exc:
        raise ParseError(str(exc), where) from exc


def _expand_relabel(raw: dict, schemes: dict, where: str) -> dict:
    mapping = {}
    for key, tgt in raw.items():
        if not isinstance(tgt, str):
            raise ParseError(f"relabel target for {key!r} must be a string", where)
        if _PLACEHOLDER in key:
            if key not in schemes:
                raise ParseError(
                    f"scheme {key!r} does not appear in any group template", where
                )
            for j in range(1, schemes[key] + 1):
                mapping[_instantiate(key, j)] = tgt
        else:
            mapping[key] = tgt
    return mapping


def parse_scenario(obj: dict, where: str = "scenario", sizes=None) -> tuple:
    """Instantiate a scenario object into (MultiAgentPlant, spec, options).

    ``sizes`` optionally overrides the per-group agent counts (template
    groups only), letting one scenario describe a whole family of
    instances.
    """
    if not isinstance(obj, dict):
        raise ParseError("scenario must be an object", where)
    if obj.get("format") != FORMAT_VERSION:
        raise ParseError(f"expected format {FORMAT_VERSION}", where)
    groups_raw = _expect(_require(obj, "groups", where), list, where, "groups")
    if sizes is not None:
        if len(sizes) != len(groups_raw):
            raise ParseError(
                f"--sizes gives {len(sizes)} counts for {len(groups_raw)} groups",
                where,
            )
        groups_raw = [dict(g) for g in groups_raw]
        for graw, n in zip(groups_raw, sizes):
            if "template" not in graw:
                raise ParseError(
                    "size override needs a template group", where
                )
            graw["count"] = n

    groups = []
    schemes: dict[str, int] = {}
    for i, graw in enumerate(groups_raw):
        loc = f"{where}.groups[{i}]"
        if not isinstance(graw, dict):
            raise ParseError("group must be an object", loc)
        name = graw.get("name", f"group{i}")
        parallelism = _require(graw, "parallelism", loc)
        if not isinstance(parallelism, int) or parallelism < 1:
            raise ParseError("parallelism must be a positive integer", loc)
        agents, group_schemes = _group_agents(graw, loc)
        for scheme, count in group_schemes.items():
            if scheme in schemes:
                raise ParseError(f"scheme {scheme!r} used by two groups", loc)
            schemes[scheme] = count
        groups.append(Group(name=name, agents=agents, parallelism=parallelism))

    relabel_raw = _expect(
        _require(obj, "relabel", where), dict, where, "relabel"
    )
    mapping = _expand_relabel(relabel_raw, schemes, f"{where}.relabel")
    source = Alphabet(
        e for g in groups for agent in g.agents for e in agent.alphabet
    )
    try:
        relabeling = RelabelingMap(source, mapping)
    except ValueError as exc:
        raise ParseError(str(exc), f"{where}.relabel") from exc

    specs_raw = _expect(_require(obj, "specs", where), list, where, "specs")
    if not specs_raw:
        raise ParseError("at least one specification generator is required", where)
    specs = [
        _expand_spec(
            parse_generator(s, f"{where}.specs[{i}]"), schemes, f"{where}.specs[{i}]"
        )
        for i, s in enumerate(specs_raw)
    ]
    spec = specs[0] if len(specs) == 1 else sync_product(specs)

    opts_raw = obj.get("options", {})
    if not isinstance(opts_raw, dict):
        raise ParseError("options must be an object", f"{where}.options")
    options = ScenarioOptions(
        similarity_mode=opts_raw.get("similarity_mode", "language"),
        budget=opts_raw.get("budget", DEFAULT_BUDGET),
    )
    if options.similarity_mode not in ("language", "isomorphism"):
        raise ParseError(
            f"unknown similarity_mode {options.similarity_mode!r}",
            f"{where}.options",
        )
    plant = MultiAgentPlant(
        groups, relabeling, similarity_mode=options.similarity_mode
    )
    return plant, spec, options


def resolve_scenario_path(name: str) -> Path:
    """An existing file path, or a bundled scenario by bare name
    (``small-factory`` -> the packaged ``small-factory.json``)."""
    p = Path(name)
    if p.exists():
        return p
    stem = p.name if p.name.endswith(".json") else p.name + ".json"
    bundled = resources.files(__package__) / "scenarios" / stem
    if bundled.is_file():
        return Path(str(bundled))
    raise ParseError(f"scenario {name!r} not found", name)


def load_scenario(path, *, sizes=None) -> tuple:
    """Load a scenario file; returns (MultiAgentPlant, spec).

    Use :func:`load_scenario_full` when the scenario's options are needed.
    """
    plant, spec, _options = load_scenario_full(path, sizes=sizes)
    return plant, spec


def load_scenario_full(path, *, sizes=None) -> tuple:
    path = resolve_scenario_path(str(path))
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", str(path)) from exc
    return parse_scenario(obj, str(path), sizes=sizes)


def export_dot(path, g: Generator, *, name: str = "G") -> None:
    """Write a generator in DOT format: the initial state gets an entering
    arrow from an invisible node, marked states are double circles."""
    g = canonicalize(g)
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    if not g.is_empty:
        lines.append('  __init [shape=point, style=invis];')
    for s in range(g.num_states):
        shape = "doublecircle" if s in g.marked else "circle"
        lines.append(f'  {s} [shape={shape}, label="{s}"];')
    if not g.is_empty:
        lines.append(f"  __init -> {g.initial};")
    for s, lbl, t in sorted(g.transitions()):
        lines.append(f'  {s} -> {t} [label="{lbl}"];')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")
