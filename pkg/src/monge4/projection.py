"""Jets of central projections of a Monge-form surface germ from a view point."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .jets import Jet2, JetError, JetMap, MongeJet, divide_by_unit, parse_coefficient, format_coefficient
from .numeric import EXACT, ZeroTest
from .twojet import Direction, asymptotic_directions


class ViewPointError(JetError):
    pass


@dataclass(frozen=True)
class ViewPoint:
    """A projection centre ``[a; b; c; d; e]`` in RP^4, with ``e`` normalized to 0 or 1."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(Fraction(v) if isinstance(v, (int, str)) else v for v in self.coords)
        if len(coords) != 5:
            raise ViewPointError("a view point has five homogeneous coordinates")
        if all(v == 0 for v in coords):
            raise ViewPointError("all homogeneous coordinates vanish")
        e = coords[4]
        if e != 0 and e != 1:
            coords = tuple(v / e for v in coords[:4]) + (coords[4] / e,)
        if coords[4] != 0 and all(v == 0 for v in coords[:4]):
            raise ViewPointError("the view point is the origin of the germ")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def finite(cls, a, b, c, d) -> "ViewPoint":
        return cls((a, b, c, d, 1))

    @classmethod
    def at_infinity(cls, a, b, c, d) -> "ViewPoint":
        return cls((a, b, c, d, 0))

    @property
    def is_finite(self) -> bool:
        return self.coords[4] != 0

    @property
    def on_tangent_plane(self) -> bool:
        return self.coords[2] == 0 and self.coords[3] == 0

    def on_asymptotic_line(self, f: MongeJet, zero: ZeroTest = EXACT) -> bool:
        if not self.on_tangent_plane:
            return False
        ad = asymptotic_directions(f, zero)
        if ad.all_directions:
            return True
        a, b = self.coords[:2]
        return any(zero(a * d.u2 - b * d.u1) for d in ad.directions)

    def to_json(self) -> list:
        return [format_coefficient(v) for v in self.coords]

    @classmethod
    def from_json(cls, data, mode: str = "exact") -> "ViewPoint":
        return cls(tuple(parse_coefficient(v, mode) for v in data))

    def __str__(self):
        if self.is_finite:
            return "(" + ", ".join(str(v) for v in self.coords[:4]) + ")"
        return "[" + "; ".join(str(v) for v in self.coords) + "]"


def project(f: MongeJet, p: ViewPoint, k: int | None = None, zero: ZeroTest = EXACT) -> JetMap:
    """``k``-jet of the central projection of ``graph f`` from ``p``, as a germ at 0.

    Finite centres use the affine chart whose denominator is the first of
    ``x - a, y - b, z - c, w - d`` that is a unit; centres at infinity
    project linearly along their direction.  Constant terms are removed so
    the origin maps to the origin.
    """
    k = f.order if k is None else k
    if k > f.order:
        raise JetError(f"order overflow: jet has order {f.order}, asked for {k}")
    f = f.truncate(k)
    forms = [Jet2.x(k), Jet2.y(k), f.f1, f.f2]
    a = p.coords[:4]
    if p.is_finite:
        shifted = [form - c for form, c in zip(forms, a)]
        pivot = next((i for i, c in enumerate(a) if not zero(c)), None)
        if pivot is None:
            raise ViewPointError("no admissible chart: the view point is the origin")
        den = shifted[pivot]
        comps = [divide_by_unit(s, den) for i, s in enumerate(shifted) if i != pivot]
    else:
        pivot = next(i for i, c in enumerate(a) if not zero(c))
        comps = [
            forms[i] - forms[pivot].scale(a[i] / a[pivot]) for i in range(4) if i != pivot
        ]
    return JetMap([c.without_constant() for c in comps])


def points_on_line(direction: Direction, params) -> list[ViewPoint]:
    u1, u2 = direction.u1, direction.u2
    return [ViewPoint.finite(t * u1, t * u2, 0, 0) for t in params]


def sample_view_points(direction: Direction | tuple, count: int, seed: int = 0) -> list[ViewPoint]:
    """``count`` distinct centres on the tangent line with the given direction.

    The finite points sit at parameters 1, -2, then seeded random rationals;
    the point at infinity is always the last entry.
    """
    if not isinstance(direction, Direction):
        direction = Direction(*direction)
    if count <= 0:
        return []
    rng = random.Random(seed)
    params: list[Fraction] = []
    for t in (Fraction(1), Fraction(-2)):
        if len(params) < count - 1:
            params.append(t)
    while len(params) < count - 1:
        t = Fraction(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 7))
        if t not in params:
            params.append(t)
    pts = points_on_line(direction, params)
    pts.append(ViewPoint.at_infinity(direction.u1, direction.u2, 0, 0))
    return pts
