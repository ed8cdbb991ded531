"""Scalable supervisory control for multi-agent discrete-event systems.

Template extraction via relabeling maps, relabeled-supervisor synthesis,
inverse relabeling into a scalable centralized supervisor, and localization
into scalable per-agent distributed controllers, plus a desk-scale
monolithic oracle for verification.
"""

from .automata import (
    Alphabet,
    Event,
    Generator,
    canonicalize,
    empty_generator,
    is_isomorphic,
    is_nonblocking,
    language_equal,
    language_subset,
    natural_projection,
    sync_product,
    trim,
)
from .errors import (
    ConditionFailed,
    EmptySupervisor,
    LocalizationFailed,
    ParseError,
    ScaleLimit,
    ScasupError,
    SimilarityViolation,
    SpecNotControllable,
)
from .relabeling import (
    RelabelingMap,
    check_normality,
    check_similar_set,
    inverse_relabel,
    refine_map,
    relabel,
)
from .supcon import (
    ControllabilityReport,
    is_controllable,
    is_nonconflicting,
    selfloop_completion,
    supcon,
)
from .synthesis import (
    AssumptionReport,
    Group,
    MultiAgentPlant,
    SynthesisArtifacts,
    build_relabeled_plant,
    check_assumptions,
    check_condition_direct,
    check_condition_modular,
    controlled_behavior,
    monolithic_oracle,
    sup1,
    synthesize_corollary2,
    synthesize_refined,
    synthesize_scalable,
    verify_sscsp,
)
from .localization import (
    LocalControllerSet,
    build_sloc,
    localize,
    localize_rsup,
    verify_control_equivalence,
    verify_relabeled_identity,
)
from .scenario import (
    export_dot,
    load_generator,
    load_scenario,
    load_scenario_full,
    save_generator,
)

__version__ = "0.1.0"
