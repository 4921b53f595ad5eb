"""The group G(5) of projective transformations fixing the origin and the xy-plane.

An element is written in the affine chart used throughout the classification::

    Psi(x, y, z, w) = (q1, q2, q3, q4) / p
    q1, q2 = linear forms in x, y, z, w
    q3, q4 = linear forms in z, w only
    p      = 1 + p1 x + p2 y + p3 z + p4 w

which is 16 parameters.  Internally it is the 5x5 matrix acting on
homogeneous coordinates ``[x; y; z; w; 1]``; its last column is always
``e5`` so products and inverses stay in the chart without rescaling.

Convention for the action on Monge forms: ``act_on_monge(psi, f)`` is the
jet ``g`` with ``psi(graph g) = graph f``, i.e. the one for which

    F1(x, y, g1, g2) = F2(x, y, g1, g2) = o(k),
    F1 = q3/p - f1(q1/p, q2/p),  F2 = q4/p - f2(q1/p, q2/p).

This is a right action: ``act(compose_maps(a, b), f) == act(b, act(a, f))``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .jets import (
    Jet2,
    JetError,
    MongeJet,
    SingularLinearPart,
    compose,
    divide_by_unit,
    format_coefficient,
    invert_planar,
    parse_coefficient,
)

_ONE = Fraction(1)
_ZERO = Fraction(0)


class GroupError(ValueError):
    """An element violating the G(5) block structure."""


def _matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), _ZERO) for j in range(n))
        for i in range(n)
    )


def _matinv(m):
    """Gauss-Jordan inverse over any exact field."""
    n = len(m)
    aug = [list(row) + [_ONE if i == j else _ZERO for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise GroupError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * pv for v, pv in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


@dataclass(frozen=True)
class ProjectiveMapG5:
    """A G(5) element by its 16 chart parameters."""

    q1: tuple  # coefficients of x, y, z, w
    q2: tuple
    q3: tuple  # coefficients of z, w
    q4: tuple
    p: tuple  # p1..p4; the constant term of p is 1

    def __post_init__(self):
        for name, size in (("q1", 4), ("q2", 4), ("q3", 2), ("q4", 2), ("p", 4)):
            value = tuple(getattr(self, name))
            if len(value) != size:
                raise GroupError(f"{name} needs {size} coefficients")
            object.__setattr__(self, name, tuple(_num(v) for v in value))
        if self.q1[0] * self.q2[1] - self.q1[1] * self.q2[0] == 0:
            raise GroupError("the (x, y) block is not invertible")
        if self.q3[0] * self.q4[1] - self.q3[1] * self.q4[0] == 0:
            raise GroupError("the (z, w) block is not invertible")

    # constructors -----------------------------------------------------
    @classmethod
    def identity(cls) -> "ProjectiveMapG5":
        return cls((1, 0, 0, 0), (0, 1, 0, 0), (1, 0), (0, 1), (0, 0, 0, 0))

    @classmethod
    def linear(cls, source: Sequence[Sequence], target: Sequence[Sequence]) -> "ProjectiveMapG5":
        """The GL(2) x GL(2) element ``(x, y, z, w) -> (L (x, y), M (z, w))``."""
        (a, b), (c, d) = source
        (e, f), (g, h) = target
        return cls((a, b, 0, 0), (c, d, 0, 0), (e, f), (g, h), (0, 0, 0, 0))

    @classmethod
    def from_matrix(cls, m) -> "ProjectiveMapG5":
        corner = m[4][4]
        if corner == 0:
            raise GroupError("matrix does not fix the origin")
        m = [[v / corner for v in row] for row in m]
        if any(m[i][4] != 0 for i in range(4)):
            raise GroupError("matrix moves the origin")
        if any(m[i][j] != 0 for i in (2, 3) for j in (0, 1)):
            raise GroupError("matrix does not preserve the xy-plane")
        return cls(
            tuple(m[0][:4]), tuple(m[1][:4]), tuple(m[2][2:4]), tuple(m[3][2:4]), tuple(m[4][:4])
        )

    def matrix(self):
        z = _ZERO
        return (
            (*self.q1, z),
            (*self.q2, z),
            (z, z, *self.q3, z),
            (z, z, *self.q4, z),
            (*self.p, _ONE),
        )

    def parameters(self) -> tuple:
        return (*self.q1, *self.q2, *self.q3, *self.q4, *self.p)

    def is_identity(self) -> bool:
        return self == ProjectiveMapG5.identity()

    # point action -----------------------------------------------------
    def apply_homogeneous(self, point: Sequence) -> tuple:
        """Image of a point given in homogeneous coordinates [x; y; z; w; e]."""
        m = self.matrix()
        return tuple(sum((m[i][j] * point[j] for j in range(5)), _ZERO) for i in range(5))

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        fmt = lambda vs: [format_coefficient(v) for v in vs]  # noqa: E731
        return {
            "schema": 1,
            "q1": fmt(self.q1),
            "q2": fmt(self.q2),
            "q3": fmt(self.q3),
            "q4": fmt(self.q4),
            "p": fmt(self.p),
        }

    @classmethod
    def from_json(cls, data, mode: str = "exact") -> "ProjectiveMapG5":
        parse = lambda vs: tuple(parse_coefficient(v, mode) for v in vs)  # noqa: E731
        return cls(parse(data["q1"]), parse(data["q2"]), parse(data["q3"]), parse(data["q4"]), parse(data["p"]))

    def map_coefficients(self, fn) -> "ProjectiveMapG5":
        return ProjectiveMapG5(
            tuple(map(fn, self.q1)), tuple(map(fn, self.q2)), tuple(map(fn, self.q3)),
            tuple(map(fn, self.q4)), tuple(map(fn, self.p)),
        )


def _num(v):
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    return v


def compose_maps(a: ProjectiveMapG5, b: ProjectiveMapG5) -> ProjectiveMapG5:
    """The map composite ``a o b`` (apply ``b`` first)."""
    return ProjectiveMapG5.from_matrix(_matmul(a.matrix(), b.matrix()))


def inverse_map(a: ProjectiveMapG5) -> ProjectiveMapG5:
    return ProjectiveMapG5.from_matrix(_matinv(a.matrix()))


def random_element(
    seed: int | random.Random,
    coefficient_bound: int = 3,
    *,
    linear_only: bool = False,
    unipotent: bool = False,
) -> ProjectiveMapG5:
    """A reproducible random G(5) element with rational entries in ``[-bound, bound]``.

    ``linear_only`` restricts to GL(2) x GL(2); ``unipotent`` fixes both
    linear blocks to the identity.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    bound = max(1, int(coefficient_bound))

    def draw():
        den = rng.randint(1, bound)
        return Fraction(rng.randint(-bound * den, bound * den), den)

    while True:
        if unipotent:
            q1 = (_ONE, _ZERO, draw(), draw())
            q2 = (_ZERO, _ONE, draw(), draw())
            q3, q4 = (_ONE, _ZERO), (_ZERO, _ONE)
        else:
            q1 = (draw(), draw(), _ZERO, _ZERO) if linear_only else tuple(draw() for _ in range(4))
            q2 = (draw(), draw(), _ZERO, _ZERO) if linear_only else tuple(draw() for _ in range(4))
            q3 = (draw(), draw())
            q4 = (draw(), draw())
        p = (_ZERO,) * 4 if linear_only else tuple(draw() for _ in range(4))
        try:
            return ProjectiveMapG5(q1, q2, q3, q4, p)
        except GroupError:
            continue


# action on Monge jets -----------------------------------------------------


def _linear_forms(psi: ProjectiveMapG5, x: Jet2, y: Jet2, z: Jet2, w: Jet2):
    one = Jet2.constant(_ONE, x.order)
    m = psi.matrix()
    out = []
    for row in m:
        jet = Jet2.zero(x.order)
        for coef, var in zip(row, (x, y, z, w, one)):
            if coef != 0:
                jet = jet + var.scale(coef)
        out.append(jet)
    return out


def push_forward(psi: ProjectiveMapG5, f: MongeJet, k: int | None = None) -> MongeJet:
    """The Monge jet of ``psi(graph f)``, truncated at order ``k``."""
    k = f.order if k is None else k
    if k > f.order:
        raise JetError(f"order overflow: jet has order {f.order}, asked for {k}")
    f = f.truncate(k)
    x, y = Jet2.x(k), Jet2.y(k)
    q1, q2, q3, q4, p = _linear_forms(psi, x, y, f.f1, f.f2)
    big_x, big_y = divide_by_unit(q1, p), divide_by_unit(q2, p)
    big_z, big_w = divide_by_unit(q3, p), divide_by_unit(q4, p)
    try:
        t = invert_planar((big_x, big_y))
    except SingularLinearPart as exc:
        raise GroupError("transformation moves the tangent plane off the xy-plane") from exc
    g1, g2 = compose(big_z, t.components), compose(big_w, t.components)
    if any(i + j < 2 for g in (g1, g2) for i, j in g.support()):
        raise GroupError("image acquired a constant or linear part")
    return MongeJet(g1, g2)


def act_on_monge(psi: ProjectiveMapG5, f: MongeJet, k: int | None = None) -> MongeJet:
    """The jet ``g`` with ``psi(graph g) = graph f`` to order ``k``."""
    return push_forward(inverse_map(psi), f, k)


def residuals(psi: ProjectiveMapG5, f: MongeJet, g: MongeJet, k: int | None = None) -> tuple[Jet2, Jet2]:
    """``F1, F2`` evaluated on ``(x, y, g1(x, y), g2(x, y))`` to order ``k``."""
    k = min(f.order, g.order) if k is None else k
    if k > f.order or k > g.order:
        raise JetError("order mismatch in residual check")
    f, g = f.truncate(k), g.truncate(k)
    x, y = Jet2.x(k), Jet2.y(k)
    q1, q2, q3, q4, p = _linear_forms(psi, x, y, g.f1, g.f2)
    big_x, big_y = divide_by_unit(q1, p), divide_by_unit(q2, p)
    r1 = divide_by_unit(q3, p) - compose(f.f1, (big_x, big_y))
    r2 = divide_by_unit(q4, p) - compose(f.f2, (big_x, big_y))
    return r1, r2


def residual_check(psi: ProjectiveMapG5, f: MongeJet, g: MongeJet, k: int | None = None, tol: float | None = None) -> bool:
    """True iff ``F1(x, y, g1, g2)`` and ``F2(x, y, g1, g2)`` vanish through degree ``k``.

    With ``tol`` set, coefficients are compared in absolute value against it
    (for jets carrying floating coefficients).
    """
    r1, r2 = residuals(psi, f, g, k)
    if tol is None:
        return r1.is_zero() and r2.is_zero()
    return all(abs(float(v)) <= tol for r in (r1, r2) for _, v in r.items())
