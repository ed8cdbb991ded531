#!/usr/bin/env python3
"""Transfer line walkthrough: synthesis with two buffer specifications,
verification against the monolithic supervisor, and localization into
per-agent controllers at several instance sizes.
"""

import logging

from scasup import (
    load_scenario,
    localize,
    synthesize_scalable,
    verify_control_equivalence,
    verify_sscsp,
)


def main() -> None:
    logging.basicConfig(level=logging.ERROR)
    for sizes in [(2, 2, 1), (2, 3, 1), (3, 3, 2)]:
        plant, spec = load_scenario("transfer-line", sizes=list(sizes))
        artifacts = synthesize_scalable(plant, spec)
        local = localize(artifacts)
        report = verify_sscsp(artifacts, plant, spec)
        eq6, _ = verify_control_equivalence(local, artifacts, plant)
        print(
            f"sizes={sizes}: RSUP={artifacts.relabeled_supervisor.num_states} "
            f"SSUP={artifacts.scalable_supervisor.num_states} "
            f"SLOC={[s.num_states for s in local.slocs]} "
            f"certificate={local.certificate} "
            f"behavior==SUP: {report.least_restrictive} "
            f"control equivalence: {eq6}"
        )


if __name__ == "__main__":
    main()
