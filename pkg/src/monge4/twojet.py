"""2-jets of Monge forms under GL(2) x GL(2): Gibson's orbits and asymptotic lines.

The classification rests on the degeneracy form of the pencil spanned by
the two quadratic parts.  With ``A1, A2`` their symmetric matrices,

    delta(u) = det[A1 u | A2 u]

is a binary quadratic whose real roots are exactly the directions lying in
the kernel of some member of the pencil.  Its discriminant sign separates
hyperbolic (two roots), elliptic (none) and parabolic (one double root)
2-jets; ``delta == 0`` identically means the pencil has dimension <= 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .jets import Jet2, JetError, MongeJet
from .numeric import EXACT, ZeroTest, magnitude
from .projective import ProjectiveMapG5, act_on_monge
from .surd import QuadSurd, exact_sqrt


class TwoJetClass(enum.Enum):
    Hyperbolic = "hyperbolic"
    Elliptic = "elliptic"
    Parabolic = "parabolic"
    InflectionPlus = "inflection+"
    InflectionMinus = "inflection-"
    DegenerateInflectionRank1 = "degenerate-inflection-rank1"
    DegenerateInflectionZero = "degenerate-inflection-zero"

    @property
    def codim(self) -> int:
        return _CODIM[self]

    @property
    def normal_form(self) -> tuple[dict, dict]:
        return _NORMAL_FORMS[self]


_CODIM = {
    TwoJetClass.Hyperbolic: 0,
    TwoJetClass.Elliptic: 0,
    TwoJetClass.Parabolic: 1,
    TwoJetClass.InflectionPlus: 2,
    TwoJetClass.InflectionMinus: 2,
    TwoJetClass.DegenerateInflectionRank1: 3,
    TwoJetClass.DegenerateInflectionZero: 4,
}

_NORMAL_FORMS = {
    TwoJetClass.Hyperbolic: ({(2, 0): 1}, {(0, 2): 1}),
    TwoJetClass.Elliptic: ({(2, 0): 1, (0, 2): -1}, {(1, 1): 1}),
    TwoJetClass.Parabolic: ({(2, 0): 1}, {(1, 1): 1}),
    TwoJetClass.InflectionPlus: ({(2, 0): 1, (0, 2): 1}, {}),
    TwoJetClass.InflectionMinus: ({(1, 1): 1}, {}),
    TwoJetClass.DegenerateInflectionRank1: ({(2, 0): 1}, {}),
    TwoJetClass.DegenerateInflectionZero: ({}, {}),
}


def normal_form_jet(cls: TwoJetClass, order: int = 2) -> MongeJet:
    f1, f2 = cls.normal_form
    return MongeJet.from_dicts(order, f1, f2)


def _quad(f: Jet2) -> tuple:
    return f.coeff(2, 0), f.coeff(1, 1), f.coeff(0, 2)


def degeneracy_form(f: MongeJet) -> tuple:
    """Coefficients ``(A, B, C)`` of ``delta = A u1^2 + B u1 u2 + C u2^2``."""
    a20, a11, a02 = _quad(f.f1)
    b20, b11, b02 = _quad(f.f2)
    return (
        (a20 * b11 - a11 * b20) / 2,
        a20 * b02 - a02 * b20,
        (a11 * b02 - a02 * b11) / 2,
    )


def _check_order(f: MongeJet):
    if f.order < 2:
        raise JetError("2-jet classification needs order >= 2")


def _scale2(f: MongeJet) -> float:
    return magnitude(_quad(f.f1) + _quad(f.f2))


def classify_2jet(f: MongeJet, zero: ZeroTest = EXACT) -> TwoJetClass:
    _check_order(f)
    A, B, C = degeneracy_form(f)
    s = _scale2(f)
    if zero(A, s * s, "delta") and zero(B, s * s, "delta") and zero(C, s * s, "delta"):
        return _classify_flat_pencil(f, zero)
    disc = B * B - 4 * A * C
    sgn = zero.sign(disc, s**4, "delta discriminant")
    if sgn > 0:
        return TwoJetClass.Hyperbolic
    if sgn < 0:
        return TwoJetClass.Elliptic
    return TwoJetClass.Parabolic


def _pencil_generator(f: MongeJet, zero: ZeroTest) -> tuple:
    s = _scale2(f)
    q1 = _quad(f.f1)
    if all(zero(v, s) for v in q1):
        return _quad(f.f2)
    return q1


def _classify_flat_pencil(f: MongeJet, zero: ZeroTest) -> TwoJetClass:
    s = _scale2(f)
    q20, q11, q02 = _pencil_generator(f, zero)
    if all(zero(v, s) for v in (q20, q11, q02)):
        return TwoJetClass.DegenerateInflectionZero
    det4 = 4 * q20 * q02 - q11 * q11
    sgn = zero.sign(det4, s * s, "pencil determinant")
    if sgn > 0:
        return TwoJetClass.InflectionPlus
    if sgn < 0:
        return TwoJetClass.InflectionMinus
    return TwoJetClass.DegenerateInflectionRank1


def delta_discriminant(f: MongeJet):
    A, B, C = degeneracy_form(f)
    return B * B - 4 * A * C


# asymptotic directions ---------------------------------------------------


@dataclass(frozen=True)
class Direction:
    """A tangent direction ``(u1 : u2)`` normalized to ``(r : 1)`` or ``(1 : 0)``."""

    u1: object
    u2: object

    def as_float(self) -> tuple[float, float]:
        return float(self.u1), float(self.u2)

    def __str__(self):
        return f"({self.u1} : {self.u2})"


@dataclass(frozen=True)
class AsymptoticDirections:
    """Either a finite list of directions or every tangent direction."""

    directions: tuple = ()
    all_directions: bool = False
    quadratic: tuple = ()  # (A, B, C) of the degeneracy form
    discriminant: object = 0

    @property
    def count(self):
        return "All" if self.all_directions else len(self.directions)


def _sqrt(value, zero: ZeroTest):
    if isinstance(value, float):
        return max(value, 0.0) ** 0.5
    return exact_sqrt(value)


def asymptotic_directions(f: MongeJet, zero: ZeroTest = EXACT) -> AsymptoticDirections:
    _check_order(f)
    A, B, C = degeneracy_form(f)
    s = _scale2(f)
    s2 = s * s
    disc = B * B - 4 * A * C
    if zero(A, s2) and zero(B, s2) and zero(C, s2):
        return AsymptoticDirections((), True, (A, B, C), disc)
    one = 1.0 if isinstance(A, float) else Fraction(1)
    dirs: list[Direction] = []
    if zero(A, s2):
        dirs.append(Direction(one, 0 * one))
        if not zero(B, s2):
            dirs.append(Direction(-C / B, one))
    else:
        sgn = zero.sign(disc, s**4)
        if sgn == 0:
            dirs.append(Direction(-B / (2 * A), one))
        elif sgn > 0:
            root = _sqrt(disc, zero)
            if isinstance(A, float):
                # avoid cancellation: the roots are q/A and C/q
                q = -(B + math.copysign(root, B)) / 2
                r1, r2 = q / A, C / q
            else:
                r1, r2 = (-B - root) / (2 * A), (-B + root) / (2 * A)
            if r2 < r1:
                r1, r2 = r2, r1
            dirs.extend([Direction(r1, one), Direction(r2, one)])
    return AsymptoticDirections(tuple(dirs), False, (A, B, C), disc)


# normalization ------------------------------------------------------------


def _inv2(m):
    (a, b), (c, d) = m
    det = a * d - b * c
    return ((d / det, -b / det), (-c / det, a / det))


def _mat2(a, b):
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(2)), 0) for j in range(2)) for i in range(2)
    )


def _pullback_quadratics(f: MongeJet, L) -> tuple[tuple, tuple]:
    """Quadratic parts of ``f o L`` for a linear source change ``L``."""
    (l11, l12), (l21, l22) = L
    out = []
    for q20, q11, q02 in (_quad(f.f1), _quad(f.f2)):
        # q(l11 X + l12 Y, l21 X + l22 Y)
        cx2 = q20 * l11 * l11 + q11 * l11 * l21 + q02 * l21 * l21
        cxy = 2 * q20 * l11 * l12 + q11 * (l11 * l22 + l12 * l21) + 2 * q02 * l21 * l22
        cy2 = q20 * l12 * l12 + q11 * l12 * l22 + q02 * l22 * l22
        out.append((cx2, cxy, cy2))
    return out[0], out[1]


def _target_for(k1, k2):
    # invertible M with first column (k1, k2)
    return ((k1, -k2), (k2, k1))


def _swap_source(f: MongeJet) -> MongeJet:
    flip = lambda jet: Jet2(jet.order, {(j, i): v for (i, j), v in jet.items()})  # noqa: E731
    return MongeJet(flip(f.f1), flip(f.f2))


def _source_change(f: MongeJet, cls: TwoJetClass, zero: ZeroTest):
    """Linear source change L and target matrix M sending the 2-jet to normal form."""
    if cls in (TwoJetClass.Hyperbolic, TwoJetClass.Parabolic, TwoJetClass.Elliptic):
        A, _, C = degeneracy_form(f)
        if isinstance(A, float) and abs(A) < abs(C):
            # floats: work in the frame where x^2 dominates the degeneracy form
            L, M = _source_change_direct(_swap_source(f), cls, zero)
            return ((L[1][0], L[1][1]), (L[0][0], L[0][1])), M
    return _source_change_direct(f, cls, zero)


def _unit_column(u1, u2):
    # keep columns of size about one (matters for floats)
    if abs(float(u1)) > abs(float(u2)):
        return 1 + 0 * u1, u2 / u1
    return u1, u2


def _source_change_direct(f: MongeJet, cls: TwoJetClass, zero: ZeroTest):
    one = Fraction(1)
    if cls is TwoJetClass.DegenerateInflectionZero:
        return ((one, 0), (0, one)), ((one, 0), (0, one))
    if cls in (TwoJetClass.Hyperbolic, TwoJetClass.Parabolic):
        dirs = asymptotic_directions(f, zero).directions
        if cls is TwoJetClass.Hyperbolic:
            a1, a2 = _unit_column(dirs[0].u1, dirs[0].u2)
            b1, b2 = _unit_column(dirs[1].u1, dirs[1].u2)
            L = ((a1, b1), (a2, b2))
            (x2_1, _, y2_1), (x2_2, _, y2_2) = _pullback_quadratics(f, L)
            return L, ((x2_1, y2_1), (x2_2, y2_2))
        (u0,) = dirs
        other = (one, 0) if u0.u2 != 0 else (0, one)
        L = ((other[0], u0.u1), (other[1], u0.u2))
        (x2_1, xy_1, _), (x2_2, xy_2, _) = _pullback_quadratics(f, L)
        return L, ((x2_1, xy_1), (x2_2, xy_2))
    if cls is TwoJetClass.Elliptic:
        A, B, C = degeneracy_form(f)
        disc = B * B - 4 * A * C
        rho = -B / (2 * A)
        sigma = _sqrt(-disc, zero) / (2 * abs(A))
        L = ((sigma, rho), (0, one))
        (x2_1, xy_1, _), (x2_2, xy_2, _) = _pullback_quadratics(f, L)
        return L, ((x2_1, xy_1), (x2_2, xy_2))
    # flat pencil: one generating form q
    q20, q11, q02 = _pencil_generator(f, zero)
    s = _scale2(f)
    L = ((one, 0), (0, one))
    if zero(q20, s):
        if zero(q02, s):
            # q11 * xy already
            return _finish_flat(f, L, (0, 1, 0))
        L = ((0, one), (one, 0))
        q20, q02 = q02, q20
    L = _mat2(L, ((one, -q11 / (2 * q20)), (0, one)))
    c = q02 - q11 * q11 / (4 * q20)
    if cls is TwoJetClass.DegenerateInflectionRank1:
        return _finish_flat(f, L, (1, 0, 0))
    if cls is TwoJetClass.InflectionPlus:
        L = _mat2(L, ((one, 0), (0, _sqrt(q20 / c, zero))))
        return _finish_flat(f, L, (1, 0, 1))
    kappa = _sqrt(-c / q20, zero)
    half = one / 2
    L = _mat2(L, ((half, half), (-half / kappa, half / kappa)))
    return _finish_flat(f, L, (0, 1, 0))


def _finish_flat(f: MongeJet, L, shape):
    q1, q2 = _pullback_quadratics(f, L)
    idx = next(i for i, v in enumerate(shape) if v)
    k1, k2 = q1[idx], q2[idx]
    return L, _target_for(k1, k2)


def normalizing_map(f: MongeJet, zero: ZeroTest = EXACT) -> ProjectiveMapG5:
    """A GL(2) x GL(2) element whose action brings the 2-jet of ``f`` to normal form."""
    _check_order(f)
    cls = classify_2jet(f, zero)
    L, M = _source_change(f, cls, zero)
    return ProjectiveMapG5.linear(L, M)


def normalize_2jet(f: MongeJet, zero: ZeroTest = EXACT) -> tuple[ProjectiveMapG5, MongeJet]:
    """Return ``(psi, act_on_monge(psi, f))`` with the 2-jet in Gibson normal form."""
    psi = normalizing_map(f, zero)
    if psi.is_identity():
        return psi, f
    return psi, act_on_monge(psi, f)


def is_normal_2jet(f: MongeJet, cls: TwoJetClass, zero: ZeroTest = EXACT) -> bool:
    nf1, nf2 = cls.normal_form
    s = _scale2(f)
    for jet, ref in ((f.f1, nf1), (f.f2, nf2)):
        for e in ((2, 0), (1, 1), (0, 2)):
            if not zero(jet.coeff(*e) - ref.get(e, 0), s):
                return False
    return True


__all__ = [
    "AsymptoticDirections",
    "Direction",
    "QuadSurd",
    "TwoJetClass",
    "asymptotic_directions",
    "classify_2jet",
    "degeneracy_form",
    "delta_discriminant",
    "is_normal_2jet",
    "normal_form_jet",
    "normalize_2jet",
    "normalizing_map",
]
