"""Exception types shared across the package."""


class ScasupError(Exception):
    """Base class for all package-specific errors."""


class SimilarityViolation(ScasupError):
    """A group of agents fails to relabel to a common template."""

    def __init__(self, group: str, agent_index: int):
        self.group = group
        self.agent_index = agent_index
        super().__init__(
            f"agent {agent_index} of group {group!r} does not relabel to "
            f"the group template"
        )


class EmptySupervisor(ScasupError):
    """The relabeled synthesis step produced an empty supervisor."""


class ScaleLimit(ScasupError):
    """A desk-scale (oracle) computation exceeded its state budget."""


class SpecNotControllable(ScasupError):
    """Corollary-2 pipeline: the specification is not controllable with
    respect to the full plant."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"specification not controllable, witness {witness}")


class ConditionFailed(ScasupError):
    """A sufficient-condition check failed; carries the witness."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class LocalizationFailed(ScasupError):
    """The control-equivalence certificate could not be established even
    with the fallback controllers (internal-consistency guard)."""


class ParseError(ScasupError):
    """Scenario or generator file is malformed; carries a location hint."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
