"""Exception types shared across the planner package."""


class ScenarioFormatError(ValueError):
    """The scenario document is not parseable (malformed JSON, wrong shape)."""


class ScenarioValidationError(ValueError):
    """A parsed scenario violates an invariant. `field` names the offender."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class SafetyViolationError(RuntimeError):
    """A human agent was asked to execute a task flagged unsafe for humans.

    This always signals a planner bug upstream; it is never silently corrected.
    """


class ResourceLimitError(RuntimeError):
    """A search or enumeration exceeded its configured size cap."""


class ConstraintViolationError(RuntimeError):
    """An executed sequence fails one of the decision-matrix constraints.

    `constraint` is a stable identifier: one of ``arc_binary``, ``arc_count``,
    ``flow_conservation``, ``assignment_binary``, ``unsafe_forcing``.
    """

    def __init__(self, constraint: str, message: str):
        super().__init__(f"{constraint}: {message}")
        self.constraint = constraint


class InvariantViolationError(RuntimeError):
    """An internal consistency check failed (e.g. case-study regression)."""
