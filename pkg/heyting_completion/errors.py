"""
Exception hierarchy for the toolkit.
Every error carries a JSON-serialisable witness so reports can show what failed.
"""
from typing import Any, Optional


class HeytingError(Exception):
    """Base class for all toolkit errors."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness

    def to_dict(self) -> dict:
        """Return a machine-readable description of the error."""
        return {
            "error": type(self).__name__,
            "message": str(self),
            "witness": self.witness,
        }


class NotAPartialOrder(HeytingError):
    """The relation is not reflexive, antisymmetric and transitive."""


class NotALattice(HeytingError):
    """Some pair of elements lacks a meet or a join."""


class NotDistributive(HeytingError):
    """Heyting mode was requested for a non-distributive lattice."""


class NotCentral(HeytingError):
    """The element has no complement."""


class NotAHomomorphism(HeytingError):
    """A map fails to preserve a bounded-lattice operation."""


class NotSHom(HeytingError):
    """A homomorphism does not preserve equality of co-annihilators."""


class NotCentrallySupplemented(HeytingError):
    """The algebra fails the dual Stone identity."""


class FrameAxiomViolation(HeytingError):
    """A Heyting frame axiom fails."""

    def __init__(self, axiom: int, witness: Any):
        super().__init__(f"frame axiom ({axiom}) fails at {witness}", witness)
        self.axiom = axiom

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["axiom"] = self.axiom
        return data


class UnsupportedOperation(HeytingError):
    """A partial operation was evaluated outside its domain."""


class InvariantBreach(HeytingError):
    """An internal consistency check failed."""

    def __init__(self, check: str, witness: Optional[Any] = None, detail: str = ""):
        message = f"invariant '{check}' failed"
        if detail:
            message += f": {detail}"
        super().__init__(message, witness)
        self.check = check


class ResourceLimit(HeytingError):
    """A configured size bound was exceeded."""

    def __init__(self, bound: str, limit: int):
        super().__init__(f"{bound} exceeded the configured limit {limit}", {"bound": bound, "limit": limit})
        self.bound = bound
        self.limit = limit


class InputError(HeytingError):
    """Malformed user input."""


class FormatError(InputError):
    """A lattice or corpus file is malformed."""

    def __init__(self, path: str, field: str, message: str):
        super().__init__(f"{path}: field '{field}': {message}", {"file": path, "field": field})
        self.path = path
        self.field = field


class ParseError(InputError):
    """An equation could not be parsed."""

    def __init__(self, text: str, position: int, message: str):
        super().__init__(f"{message} at position {position} in {text!r}", {"position": position})
        self.position = position
