"""Exception hierarchy shared across the library.

Validation errors carry an optional ``witness`` (the offending pair,
element, or simplex) so callers and the CLI can print a concrete
counterexample instead of a bare message.
"""

from __future__ import annotations


class GpdError(Exception):
    """Base class for all library errors."""


class ValidationError(GpdError):
    """An input object violates one of its structural invariants."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness

    def __str__(self) -> str:
        base = super().__str__()
        if self.witness is not None:
            return f"{base} (witness: {self.witness!r})"
        return base


class CycleDetected(ValidationError):
    """Cover relation contains a directed cycle."""


class UnknownElement(ValidationError):
    """Reference to an element that is not in the poset."""


class DuplicateElement(ValidationError):
    """Element ids are not distinct."""


class NotMonotone(ValidationError):
    """A map fails to preserve the order relation."""


class AdjunctionFailed(ValidationError):
    """f(a) <= x iff a <= g(x) fails; witness is the pair (a, x)."""


class UnknownVertex(ValidationError):
    """Simplex references a vertex that is not in the complex."""


class NotFaceClosed(ValidationError):
    """Simplex set is missing a face of one of its members."""


class NotSubcomplex(ValidationError):
    """Downward closure fails; witness is a pair (face, member)."""


class NotSupcomplex(ValidationError):
    """Upward closure fails; witness is a pair (member, coface)."""


class NotNested(ValidationError):
    """Expected one simplex set to contain the other."""


class AmbientMismatch(ValidationError):
    """Subspaces live in different ambient spaces."""


class ShapeMismatch(ValidationError):
    """Matrix shape disagrees with the declared dimensions."""


class NotFunctorial(ValidationError):
    """Two composition paths through a module disagree."""


class IndexMismatch(ValidationError):
    """Galois connection does not start at the object's index poset."""


class HypothesisNotMet(ValidationError):
    """Strict-mode duality check on a complex failing the manifold flags."""


class CheckFailed(GpdError):
    """A mathematical identity check found a counterexample."""
