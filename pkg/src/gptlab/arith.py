"""Scalar arithmetic contexts.

Geometry in this package is generic over the scalar type: exact rationals
(`fractions.Fraction`, no tolerances anywhere) or floats in which every
sign test goes through a configured epsilon. Each geometric object carries
an `Arith` context; combining an exact object with an approximate one
yields an approximate result.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from gptlab.errors import InvalidInputError

Scalar = Fraction | float
Vector = tuple


class Arith:
    """Common interface of the exact and approximate contexts."""

    mode: str

    def join(self, other: "Arith") -> "Arith":
        """Combined context for an operation mixing two objects."""
        if self.mode == "exact":
            return other
        if other.mode == "exact":
            return self
        return self if self.eps >= other.eps else other  # type: ignore[attr-defined]


class ExactArith(Arith):
    """Exact rational arithmetic; comparisons are decidable, no epsilon."""

    mode = "exact"
    eps = 0.0

    def coerce(self, x) -> Fraction:
        if isinstance(x, float):
            raise InvalidInputError("floats are not allowed in exact mode; use Fraction or str")
        return Fraction(x)

    def coerce_vector(self, v: Iterable) -> Vector:
        return tuple(self.coerce(x) for x in v)

    def sign(self, x: Fraction) -> int:
        return (x > 0) - (x < 0)

    def is_zero(self, x: Fraction) -> bool:
        return x == 0

    def eq(self, a, b) -> bool:
        return a == b

    def vec_equal(self, a: Sequence, b: Sequence) -> bool:
        return tuple(a) == tuple(b)

    def canonical_ray(self, v: Sequence[Fraction]) -> Vector:
        """Scale a ray so its first nonzero entry is +-1."""
        for x in v:
            if x != 0:
                s = abs(x)
                return tuple(y / s for y in v)
        return tuple(v)

    def format(self, x: Fraction) -> str:
        return str(Fraction(x))

    def parse(self, s: str) -> Fraction:
        return Fraction(s)


class ApproxArith(Arith):
    """Float arithmetic with a fixed epsilon for every sign test."""

    mode = "approx"

    def __init__(self, eps: float = 1e-9):
        if not eps > 0:
            raise InvalidInputError("epsilon must be positive")
        self.eps = float(eps)
        # tolerance for merging nearly identical canonical vectors
        self.merge_tol = 1000.0 * self.eps

    def coerce(self, x) -> float:
        return float(x)

    def coerce_vector(self, v: Iterable) -> Vector:
        return tuple(float(x) for x in v)

    def sign(self, x: float) -> int:
        if x > self.eps:
            return 1
        if x < -self.eps:
            return -1
        return 0

    def is_zero(self, x: float) -> bool:
        return abs(x) <= self.eps

    def eq(self, a, b) -> bool:
        return abs(a - b) <= self.merge_tol

    def vec_equal(self, a: Sequence, b: Sequence) -> bool:
        return len(a) == len(b) and all(abs(x - y) <= self.merge_tol for x, y in zip(a, b))

    def canonical_ray(self, v: Sequence[float]) -> Vector:
        """Scale a ray to unit Euclidean norm (positive factor only)."""
        n = math.sqrt(math.fsum(x * x for x in v))
        if n <= self.eps:
            return tuple(0.0 for _ in v)
        return tuple(x / n for x in v)

    def format(self, x: float) -> str:
        return repr(float(x))

    def parse(self, s: str) -> float:
        try:
            return float(s)
        except ValueError:
            return float(Fraction(s))

    def __eq__(self, other):
        return isinstance(other, ApproxArith) and other.eps == self.eps

    def __hash__(self):
        return hash(("approx", self.eps))


EXACT = ExactArith()


def approx(eps: float = 1e-9) -> ApproxArith:
    return ApproxArith(eps)


def parse_scalar(s: str) -> Fraction:
    """Parse a rational given as 'p/q', an integer, or a decimal string."""
    return Fraction(s)
