"""Exception hierarchy."""


class QuasimartError(Exception):
    """Base class for all library errors."""


class SpaceError(QuasimartError, ValueError):
    """A filtered space candidate violates one or more invariants.

    ``violations`` lists every problem found, not only the first one.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class LabelError(QuasimartError, ValueError):
    """Unknown outcome or index label, or a malformed cut."""


class NotAdaptedError(QuasimartError, ValueError):
    """A slice is not constant on the blocks of its sigma-algebra."""


class PreconditionError(QuasimartError, ValueError):
    """An operation was called outside the domain it is defined on."""
