"""Exception types shared across the package."""


class GptLabError(Exception):
    """Base class for all package errors."""


class InvalidInputError(GptLabError):
    """Malformed or inconsistent input (dimension mismatch, bad weights, ...)."""


class UnboundedError(GptLabError):
    """Vertex enumeration was asked for an unbounded polyhedron."""


class SingularMapError(GptLabError):
    """A linear map that must be invertible is singular."""


class InvalidRestrictionError(GptLabError):
    """An effect restriction leaves the probability range [0, 1]."""


class InvalidEffectError(GptLabError):
    """An effect outside the relevant effect set was used."""


class BudgetExceededError(GptLabError):
    """An enumeration grew past the configured vertex/ray budget."""
