"""Command-line interface.

Subcommands mirror the pipeline: ``check`` (assumptions and the modular
sufficient condition), ``synth`` (the four-step synthesis, optionally the
refined-map or controllable-spec variant), ``localize`` (per-agent local
controllers), ``verify`` (desk-scale comparison against the monolithic
supervisor), ``oracle`` (monolithic supervisors themselves), and
``export-dot``.

Exit codes: 0 success; 1 a checked condition fails (a witness is printed);
2 a desk-scale computation exceeded its state budget; 3 usage or parse
errors.  All output is canonical and deterministic across runs.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .errors import (
    EmptySupervisor,
    ParseError,
    ScaleLimit,
    ScasupError,
    SpecNotControllable,
)
from .localization import (
    DEFAULT_COVER_TRIALS,
    _COVER_SEED,
    localize,
    verify_control_equivalence,
)
from .scenario import (
    export_dot,
    load_generator,
    load_scenario_full,
    save_generator,
)
from .synthesis import (
    check_assumptions,
    check_condition_modular,
    monolithic_oracle,
    sup1,
    synthesize_corollary2,
    synthesize_refined,
    synthesize_scalable,
    verify_sscsp,
)

EXIT_OK = 0
EXIT_CONDITION = 1
EXIT_SCALE = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; remap to 3 so status 2
    stays reserved for budget overruns."""

    def error(self, message):  # pragma: no cover - exercised via SystemExit
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt_string(labels) -> str:
    return ".".join(labels) if labels else "(empty)"


def _parse_sizes(text: Optional[str]):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"--sizes must be comma-separated integers, got {text!r}")


def _load(args):
    plant, spec, options = load_scenario_full(
        args.scenario, sizes=_parse_sizes(getattr(args, "sizes", None))
    )
    if getattr(args, "budget", None) is not None:
        options.budget = args.budget
    return plant, spec, options


def _cmd_check(args) -> int:
    plant, spec, _options = _load(args)
    report = check_assumptions(plant, spec)
    for name, ok in [
        ("independent nonblocking agents", report.independent_nonblocking),
        ("disjoint template alphabets", report.disjoint_templates),
        ("specification normal", report.spec_normal),
        ("one-agent supervisor nonempty", report.sup1_nonempty),
    ]:
        print(f"assumption {name}: {'ok' if ok else 'FAILED'}")
    for detail in report.details:
        print(f"  {detail}")
    modular = check_condition_modular(plant)
    print(f"modular condition: {'ok' if modular else 'FAILED'}")
    if not modular:
        t, tau = modular.first_witness()
        print(f"witness: t={_fmt_string(t)} tau={tau}")
    return EXIT_OK if report.all_pass() and bool(modular) else EXIT_CONDITION


def _cmd_synth(args) -> int:
    plant, spec, options = _load(args)
    if args.refined:
        artifacts = synthesize_refined(plant, spec)
    elif args.corollary2:
        artifacts = synthesize_corollary2(plant, spec, budget=options.budget)
    else:
        artifacts = synthesize_scalable(plant, spec)
    ssup = artifacts.scalable_supervisor
    print(f"SSUP states: {ssup.num_states}")
    print(f"RSUP states: {artifacts.relabeled_supervisor.num_states}")
    if args.output:
        save_generator(args.output, ssup)
        print(f"wrote {args.output}")
    return EXIT_OK


def _cmd_localize(args) -> int:
    plant, spec, options = _load(args)
    artifacts = synthesize_scalable(plant, spec)
    local = localize(artifacts, trials=args.trials, seed=args.seed)
    for group, sloc in zip(plant.groups, local.slocs):
        print(f"SLOC[{group.name}]: {sloc.num_states} states")
    print(f"decomposition certificate: {'ok' if local.certificate else 'FAILED'}")
    holds, witness = verify_control_equivalence(
        local, artifacts, plant, budget=options.budget
    )
    print(f"control equivalence: {'ok' if holds else 'FAILED'}")
    if not holds:
        print(f"witness: {_fmt_string(witness)}")
    if args.output:
        for group, sloc in zip(plant.groups, local.slocs):
            path = f"{args.output}/sloc-{group.name}.json"
            save_generator(path, sloc)
            print(f"wrote {path}")
    return EXIT_OK if local.certificate and holds else EXIT_CONDITION


def _cmd_verify(args) -> int:
    plant, spec, options = _load(args)
    artifacts = synthesize_scalable(plant, spec)
    report = verify_sscsp(artifacts, plant, spec, budget=options.budget)
    print(f"lower inclusion (SUP1 within controlled behavior): "
          f"{'ok' if report.lower_inclusion else 'FAILED'}")
    print(f"upper inclusion (controlled behavior within SUP): "
          f"{'ok' if report.upper_inclusion else 'FAILED'}")
    print(f"equal to monolithic SUP: "
          f"{'yes' if report.least_restrictive else 'no'}")
    return EXIT_OK if report.sandwich_holds() else EXIT_CONDITION


def _cmd_oracle(args) -> int:
    plant, spec, options = _load(args)
    sup = monolithic_oracle(plant, spec, budget=options.budget)
    one = sup1(plant, spec)
    print(f"SUP states: {sup.num_states}")
    print(f"SUP1 states: {one.num_states}")
    if args.output:
        save_generator(args.output, sup)
        print(f"wrote {args.output}")
    return EXIT_OK


def _cmd_export_dot(args) -> int:
    g = load_generator(args.input)
    export_dot(args.output, g)
    print(f"wrote {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scasup", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_cmd(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("scenario", help="scenario file path or bundled name")
        p.add_argument("--sizes", help="override per-group agent counts, e.g. 2,2,1")
        p.add_argument("--budget", type=int, default=None,
                       help="state budget for desk-scale computations")
        p.set_defaults(func=func)
        return p

    scenario_cmd("check", _cmd_check,
                 "check assumptions and the modular sufficient condition")

    p = scenario_cmd("synth", _cmd_synth, "run the scalable synthesis pipeline")
    variant = p.add_mutually_exclusive_group()
    variant.add_argument("--refined", action="store_true",
                         help="use the refined (subgroup) relabeling map")
    variant.add_argument("--corollary2", action="store_true",
                         help="use the controllable-specification variant")
    p.add_argument("-o", "--output", help="write SSUP to this file")

    p = scenario_cmd("localize", _cmd_localize,
                     "derive per-agent local controllers")
    p.add_argument("--trials", type=int, default=DEFAULT_COVER_TRIALS,
                   help="merge orders explored per control cover")
    p.add_argument("--seed", type=int, default=_COVER_SEED,
                   help="seed of the deterministic merge-order schedule")
    p.add_argument("-o", "--output", help="directory for SLOC files")

    scenario_cmd("verify", _cmd_verify,
                 "compare the scalable supervisor against the monolithic oracle")

    p = scenario_cmd("oracle", _cmd_oracle,
                     "compute the monolithic supervisors (desk scale)")
    p.add_argument("-o", "--output", help="write SUP to this file")

    p = sub.add_parser("export-dot", help="convert a generator file to DOT")
    p.add_argument("input", help="generator JSON file")
    p.add_argument("output", help="DOT file to write")
    p.set_defaults(func=_cmd_export_dot)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScaleLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except (EmptySupervisor, SpecNotControllable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONDITION
    except ScasupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONDITION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
