"""Exception taxonomy shared by all modules.

The distinction that matters operationally: CapExceeded aborts work that was
never attempted (exit 3 in the CLI), PreconditionError rejects bad inputs,
HypothesisError signals that a stated hypothesis of an algorithm failed on
the given instance, and CertificationError means an internally constructed
object failed its own post-hoc verification (a bug, never user error).
"""


class TangleforgeError(Exception):
    pass


class CapExceededError(TangleforgeError):
    """An enumeration would exceed a configured size cap."""


class PreconditionError(TangleforgeError):
    """Caller violated a documented precondition."""


class InputError(TangleforgeError):
    """Malformed external input (graph files, system JSON)."""


class HypothesisError(TangleforgeError):
    """An algorithm's hypothesis (splinter condition, shape lemma) failed.

    Carries a `witness` attribute naming the offending pair/index when known.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CertificationError(TangleforgeError):
    """A constructed object failed its own certification suite."""
