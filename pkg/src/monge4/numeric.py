"""Zero tests shared by exact and floating computations."""

from __future__ import annotations

from dataclasses import dataclass, field

from .surd import QuadSurd, sign

DEFAULT_TOL = 1e-9


@dataclass
class ZeroTest:
    """Decides ``value == 0`` exactly, or with a relative tolerance for floats.

    A float is zero when ``|value| <= tol * scale``.  Values within ten times
    that bound (but above it) are recorded in :attr:`near` so callers can
    flag them as near-degenerate instead of trusting the decision.
    """

    tol: float = DEFAULT_TOL
    near: list = field(default_factory=list)

    def __call__(self, value, scale: float = 1.0, label: str = "") -> bool:
        if isinstance(value, float):
            bound = self.tol * max(scale, 1e-300)
            mag = abs(value)
            if mag <= bound:
                return True
            if mag <= 10 * bound:
                self.near.append(label or "value")
            return False
        if isinstance(value, QuadSurd):
            return False
        return value == 0

    def sign(self, value, scale: float = 1.0, label: str = "") -> int:
        if self(value, scale, label):
            return 0
        return sign(value)


EXACT = ZeroTest()


def is_float(value) -> bool:
    return isinstance(value, float)


def magnitude(values) -> float:
    """Largest absolute value among ``values`` as a float (at least 1)."""
    return max([1.0] + [abs(float(v)) for v in values])
