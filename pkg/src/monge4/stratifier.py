"""Strata of 4-jets of Monge forms and their projective normal forms.

``classify_stratum`` reads the stratum of a Monge jet from its cubic
coefficients in normalized 2-jet coordinates.  ``reduce_normal_form``
runs the explicit sequence of G(5) transformations for that stratum and
returns the reduced jet, the moduli read off it, and the accumulated
transformation (so ``residual_check(report.transform, f, report.normal_form)``
holds).

Coefficient names follow the usual convention: ``a_ij`` / ``b_ij`` are the
coefficients of ``x^i y^j`` in ``f1`` / ``f2`` of the jet being reduced at
that step.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .jets import Jet2, JetError, MongeJet, format_coefficient, monge_to_json
from .mond import MondType, classify_A3
from .numeric import EXACT, ZeroTest, magnitude
from .projective import (
    ProjectiveMapG5,
    act_on_monge,
    compose_maps,
    residual_check,
)
from .projection import ViewPoint, project, sample_view_points
from .surd import QuadSurd
from .twojet import Direction, TwoJetClass, asymptotic_directions, classify_2jet, normalize_2jet


class Stratum(enum.Enum):
    Pi_E = "Pi_E"
    Pi_S = "Pi_S"
    Pi_B = "Pi_B"
    Pi_2B = "Pi_2B"
    Pi_H = "Pi_H"
    Pi_P = "Pi_P"
    Pi_I_plus = "Pi_I_plus"
    Pi_I_minus = "Pi_I_minus"
    HigherCodim = "HigherCodim"

    @property
    def codim(self) -> int:
        """Codimension in the jet space (3 stands for "3 or more")."""
        return _CODIM[self]

    @property
    def expected_projections(self) -> frozenset[str]:
        return _PROJ[self]


_CODIM = {
    Stratum.Pi_E: 0,
    Stratum.Pi_S: 0,
    Stratum.Pi_B: 1,
    Stratum.Pi_2B: 2,
    Stratum.Pi_H: 1,
    Stratum.Pi_P: 2,
    Stratum.Pi_I_plus: 2,
    Stratum.Pi_I_minus: 2,
    Stratum.HigherCodim: 3,
}

_PROJ = {
    Stratum.Pi_E: frozenset(),
    Stratum.Pi_S: frozenset({"S"}),
    Stratum.Pi_B: frozenset({"S", "B"}),
    Stratum.Pi_2B: frozenset({"B"}),
    Stratum.Pi_H: frozenset({"H"}),
    Stratum.Pi_P: frozenset({"P"}),
    Stratum.Pi_I_plus: frozenset({"S", "B"}),
    Stratum.Pi_I_minus: frozenset({"S", "B", "H"}),
    Stratum.HigherCodim: frozenset(),
}


class StratifierError(JetError):
    pass


class HypothesisViolation(StratifierError):
    """The jet lies in the stratum but outside the hypotheses of its reduction."""


class LambdaObstruction(HypothesisViolation):
    """Pi_P with 6 gamma^2 + 4 lambda - 15 gamma + 5 = 0: the quartic terms cannot be removed."""


class ConsistencyError(StratifierError):
    """A reduction step failed its own shape or residual check (a bug)."""


# -----------------------------------------------------------------------------
# 2-jet preparation


_SWAP_XY_ZW = ProjectiveMapG5((0, 1, 0, 0), (1, 0, 0, 0), (0, 1), (1, 0), (0, 0, 0, 0))
_SWAP_XY = ProjectiveMapG5((0, 1, 0, 0), (1, 0, 0, 0), (1, 0), (0, 1), (0, 0, 0, 0))


@dataclass
class Prepared:
    two_jet: TwoJetClass
    transform: ProjectiveMapG5
    jet: MongeJet


def prepare(f: MongeJet, zero: ZeroTest = EXACT) -> Prepared:
    """Normalize the 2-jet and fix the remaining discrete choice of axes.

    Hyperbolic jets are oriented so that ``a03 != 0`` when possible;
    ``(xy, 0)`` inflections so that ``b30 != 0`` when possible.
    """
    if f.order < 3:
        raise JetError("stratification needs order >= 3")
    psi, g = normalize_2jet(f, zero)
    cls = classify_2jet(g, zero)
    s = _scale(g)
    if cls is TwoJetClass.Hyperbolic and zero(g.a(0, 3), s) and not zero(g.b(3, 0), s):
        psi, g = compose_maps(psi, _SWAP_XY_ZW), g.swapped()
    elif cls is TwoJetClass.InflectionMinus and zero(g.b(3, 0), s) and not zero(g.b(0, 3), s):
        psi, g = compose_maps(psi, _SWAP_XY), act_on_monge(_SWAP_XY, g)
    return Prepared(cls, psi, g)


def _scale(f: MongeJet) -> float:
    return magnitude(v for jet in f for _, v in jet.items())


def stratum_of_prepared(prep: Prepared, zero: ZeroTest = EXACT) -> Stratum:
    g, cls = prep.jet, prep.two_jet
    s = _scale(g)
    nz = lambda v: not zero(v, s)  # noqa: E731
    if cls is TwoJetClass.Elliptic:
        return Stratum.Pi_E
    if cls is TwoJetClass.Hyperbolic:
        a03, b30 = nz(g.a(0, 3)), nz(g.b(3, 0))
        if a03 and b30:
            return Stratum.Pi_S
        if a03 or b30:
            return Stratum.Pi_B
        return Stratum.Pi_2B
    if cls is TwoJetClass.Parabolic:
        if nz(g.a(0, 3)):
            return Stratum.Pi_H
        if nz(g.a(1, 2)) and nz(g.b(0, 3)):
            return Stratum.Pi_P
        return Stratum.HigherCodim
    if cls is TwoJetClass.InflectionPlus:
        return Stratum.Pi_I_plus
    if cls is TwoJetClass.InflectionMinus:
        return Stratum.Pi_I_minus if nz(g.b(3, 0)) else Stratum.HigherCodim
    return Stratum.HigherCodim


def classify_stratum(f: MongeJet, zero: ZeroTest = EXACT) -> Stratum:
    return stratum_of_prepared(prepare(f, zero), zero)


# -----------------------------------------------------------------------------
# explicit reduction steps; each returns the G(5) element for the current jet


def _map(q1=(1, 0, 0, 0), q2=(0, 1, 0, 0), q3=(1, 0), q4=(0, 1), p=(0, 0, 0, 0)) -> ProjectiveMapG5:
    return ProjectiveMapG5(q1, q2, q3, q4, p)


def elliptic_cubic_map(g: MongeJet) -> ProjectiveMapG5:
    a, b = g.a, g.b
    return _map(
        q1=(1, 0, b(0, 3), -a(2, 1) + b(1, 2) - b(3, 0)),
        q2=(0, 1, -b(3, 0), -b(2, 1) + b(0, 3) + a(3, 0)),
        p=(a(3, 0) + 2 * b(0, 3), 2 * b(1, 2) - a(2, 1), 0, 0),
    )


def elliptic_quartic_map(g: MongeJet) -> ProjectiveMapG5:
    return _map(p=(0, 0, g.a(4, 0), g.a(3, 1)))


def hyperbolic_cubic_map(g: MongeJet) -> ProjectiveMapG5:
    a, b = g.a, g.b
    half = Fraction(1, 2)
    return _map(
        q1=(1, 0, half * (-a(3, 0) + b(1, 2)), -half * a(1, 2)),
        q2=(0, 1, -half * b(2, 1), half * (a(2, 1) - b(0, 3))),
        p=(b(1, 2), a(2, 1), 0, 0),
    )


def hyperbolic_quartic_map(g: MongeJet) -> ProjectiveMapG5:
    return _map(p=(0, 0, g.a(4, 0), g.b(0, 4)))


def parabolic_cubic_prenormal_map(g: MongeJet) -> ProjectiveMapG5:
    """Clears a30, a21, b30, b21; b12 becomes b12 - a21/2."""
    a, b = g.a, g.b
    half = Fraction(1, 2)
    return _map(
        q1=(1, 0, -half * a(3, 0), -half * a(2, 1)),
        q2=(0, 1, -b(3, 0), half * a(3, 0) - b(2, 1)),
    )


def parabolic_h_cubic_map(g: MongeJet) -> ProjectiveMapG5:
    a12, a03, bb12, b03 = g.a(1, 2), g.a(0, 3), g.b(1, 2), g.b(0, 3)
    return _map(
        q1=(1, 0, 0, -(-bb12 * a03 + 3 * a12 * b03 + 3 * b03**2) / a03),
        q2=(
            b03 / a03,
            1,
            b03**2 * (a12 * b03 - a03 * bb12) / a03**3,
            -b03 * (2 * b03**2 + bb12 * a03) / a03**2,
        ),
        q4=(b03 / a03, 1),
        p=(
            b03**2 * (a12 + b03) / a03**2,
            -(-2 * bb12 * a03 + 4 * a12 * b03 + 3 * b03**2) / a03,
            0,
            0,
        ),
    )


def parabolic_h_quartic_map(s, p3) -> ProjectiveMapG5:
    return _map(q1=(1, 0, s, 0), q2=(0, 1, 0, s), p=(2 * s, 0, p3, 0))


def parabolic_p_cubic_map(g: MongeJet) -> ProjectiveMapG5:
    a12, b12 = g.a(1, 2), g.b(1, 2)
    return _map(q1=(a12, 0, 0, a12 * b12), q3=(a12 * a12, 0), q4=(0, a12), p=(0, 2 * b12, 0, 0))


def lambda_invariant(gamma, lam):
    return 6 * gamma * gamma + 4 * lam - 15 * gamma + 5


def parabolic_p_quartic_map(gamma, q21, p1, p3, p4) -> ProjectiveMapG5:
    half = Fraction(1, 2)
    return _map(
        q1=(1, 0, half * (p1 - q21 * q21), 3 * (gamma - 1) * q21),
        q2=(q21, 1, half * (-2 * gamma * q21**3 + q21**3 + p1 * q21), half * (p1 - q21 * q21)),
        q4=(q21, 1),
        p=(p1, (6 * gamma - 4) * q21, p3, p4),
    )


def inflection_plus_cubic_map(g: MongeJet) -> ProjectiveMapG5:
    a, b = g.a, g.b
    den = b(3, 0) - b(1, 2)
    return _map(
        q3=(1, a(3, 0) - a(1, 2)),
        q4=(0, den),
        p=(
            -(a(3, 0) * b(1, 2) - a(1, 2) * b(3, 0)) / den,
            -(a(3, 0) * b(0, 3) - a(1, 2) * b(0, 3) - a(0, 3) * b(3, 0) + a(0, 3) * b(1, 2)) / den,
            0,
            0,
        ),
    )


def inflection_plus_quartic_map(g: MongeJet) -> ProjectiveMapG5:
    return _map(p=(0, 0, g.a(4, 0), 0))


def inflection_minus_cubic_map(g: MongeJet) -> ProjectiveMapG5:
    a, b = g.a, g.b
    b03 = b(0, 3)
    return _map(
        q3=(1, a(0, 3)),
        q4=(0, b03),
        p=((a(2, 1) * b03 - a(0, 3) * b(2, 1)) / b03, (a(1, 2) * b03 - a(0, 3) * b(1, 2)) / b03, 0, 0),
    )


def inflection_minus_quartic_map(g: MongeJet) -> ProjectiveMapG5:
    return _map(p=(0, 0, g.a(2, 2), 0))


# -----------------------------------------------------------------------------
# shapes of the normal forms: monomials required to vanish, per slot

_CUBIC = [(3, 0), (2, 1), (1, 2), (0, 3)]
_QUARTIC = [(4, 0), (3, 1), (2, 2), (1, 3), (0, 4)]

# after the cubic step (order-3 shape) and after the quartic step
CUBIC_SHAPES = {
    Stratum.Pi_E: ([(3, 0), (2, 1)], _CUBIC),
    Stratum.Pi_S: ([(3, 0), (2, 1), (1, 2)], [(2, 1), (1, 2), (0, 3)]),
    Stratum.Pi_H: ([(3, 0), (2, 1)], _CUBIC),
    Stratum.Pi_P: ([(3, 0), (2, 1), (0, 3)], [(3, 0), (2, 1), (1, 2)]),
    Stratum.Pi_I_plus: ([(3, 0), (1, 2), (0, 3)], []),
    Stratum.Pi_I_minus: ([(2, 1), (1, 2), (0, 3)], []),
}
CUBIC_SHAPES[Stratum.Pi_B] = CUBIC_SHAPES[Stratum.Pi_S]
CUBIC_SHAPES[Stratum.Pi_2B] = CUBIC_SHAPES[Stratum.Pi_S]

QUARTIC_SHAPES = {
    Stratum.Pi_E: ([(4, 0), (3, 1)], []),
    Stratum.Pi_S: ([(4, 0)], [(0, 4)]),
    Stratum.Pi_H: ([(4, 0)], [(0, 4)]),
    Stratum.Pi_P: ([(4, 0), (3, 1), (2, 2), (1, 3)], []),
    Stratum.Pi_I_plus: ([(4, 0)], []),
    Stratum.Pi_I_minus: ([(2, 2)], []),
}
QUARTIC_SHAPES[Stratum.Pi_B] = QUARTIC_SHAPES[Stratum.Pi_S]
QUARTIC_SHAPES[Stratum.Pi_2B] = QUARTIC_SHAPES[Stratum.Pi_S]

# fixed leading coefficients of the final normal form
LEADING = {
    Stratum.Pi_E: ({(2, 0): 1, (0, 2): -1}, {(1, 1): 1}),
    Stratum.Pi_S: ({(2, 0): 1, (0, 3): 1}, {(0, 2): 1}),
    Stratum.Pi_B: ({(2, 0): 1, (0, 3): 1}, {(0, 2): 1}),
    Stratum.Pi_2B: ({(2, 0): 1}, {(0, 2): 1}),
    Stratum.Pi_H: ({(2, 0): 1, (0, 3): 1}, {(1, 1): 1}),
    Stratum.Pi_P: ({(2, 0): 1, (1, 2): 1}, {(1, 1): 1}),
    Stratum.Pi_I_plus: ({(2, 0): 1, (0, 2): 1}, {}),
    Stratum.Pi_I_minus: ({(1, 1): 1}, {}),
}


def required_zero(stratum: Stratum) -> tuple[set, set]:
    """All monomials (degree <= 4) that must vanish in the normal form of the stratum."""
    z1, z2 = set(), set()
    quad = [(2, 0), (1, 1), (0, 2)]
    lead1, lead2 = LEADING[stratum]
    z1 |= {m for m in quad if m not in lead1}
    z2 |= {m for m in quad if m not in lead2}
    c1, c2 = CUBIC_SHAPES[stratum]
    q1, q2 = QUARTIC_SHAPES[stratum]
    z1 |= set(c1) | set(q1)
    z2 |= set(c2) | set(q2)
    if stratum is Stratum.Pi_B:
        z2 |= {(3, 0)}
    if stratum is Stratum.Pi_2B:
        z1 |= {(0, 3)}
        z2 |= {(3, 0)}
    if stratum is Stratum.Pi_H:
        z2 |= {(0, 3)}
    if stratum is Stratum.Pi_I_plus:
        z1 -= {(0, 3)}
    return z1, z2


def shape_violations(g: MongeJet, stratum: Stratum, zero: ZeroTest = EXACT) -> list[str]:
    """Monomials that should vanish (or leading coefficients that should be 1) but do not."""
    s = _scale(g)
    bad = []
    z1, z2 = required_zero(stratum)
    for name, jet, zs in (("f1", g.f1, z1), ("f2", g.f2, z2)):
        for m in sorted(zs):
            if sum(m) <= g.order and not zero(jet.coeff(*m), s):
                bad.append(f"{name}[{m}]={jet.coeff(*m)}")
    lead1, lead2 = LEADING[stratum]
    for name, jet, lead in (("f1", g.f1, lead1), ("f2", g.f2, lead2)):
        for m, v in lead.items():
            if sum(m) <= g.order and not zero(jet.coeff(*m) - v, s):
                bad.append(f"{name}[{m}]={jet.coeff(*m)} (want {v})")
    return bad


# -----------------------------------------------------------------------------


@dataclass
class NormalFormReport:
    stratum: Stratum
    normal_form: MongeJet
    moduli: dict
    transform: ProjectiveMapG5
    exact: bool
    prescaling_form: MongeJet
    prescaling_transform: ProjectiveMapG5
    input_jet: MongeJet
    steps: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)

    @property
    def codim(self) -> int:
        return self.stratum.codim

    def residual_coefficients(self) -> dict:
        """Coefficients of the normal form that are neither fixed nor required zero."""
        z1, z2 = required_zero(self.stratum)
        lead1, lead2 = LEADING[self.stratum]
        out = {}
        for prefix, jet, zs, lead in (("a", self.normal_form.f1, z1, lead1), ("b", self.normal_form.f2, z2, lead2)):
            for (i, j), v in jet.items():
                if (i, j) not in zs and (i, j) not in lead:
                    out[f"{prefix}{i}{j}"] = v
        return out

    def verify(self, tol: float = 1e-9) -> bool:
        """``residual_check`` of the accumulated transform (with tolerance for floats)."""
        float_input = any(isinstance(v, float) for jet in self.input_jet for _, v in jet.items())
        if self.exact and not float_input:
            return residual_check(self.transform, self.input_jet, self.normal_form, 4)
        scale = _scale(self.input_jet) + _scale(self.normal_form)
        if float_input:
            return residual_check(self.transform, self.input_jet, self.normal_form, 4, tol=tol * scale**4)
        exact_ok = residual_check(self.prescaling_transform, self.input_jet, self.prescaling_form, 4)
        numeric_ok = residual_check(
            self.transform,
            self.input_jet.map_coefficients(float),
            self.normal_form,
            4,
            tol=tol * scale**4,
        )
        return exact_ok and numeric_ok

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "stratum": self.stratum.value,
            "codim": self.codim,
            "proj": sorted(self.stratum.expected_projections),
            "exact": self.exact,
            "normal_form": monge_to_json(self.normal_form),
            "prescaling_form": monge_to_json(self.prescaling_form),
            "moduli": {k: format_coefficient(v) for k, v in self.moduli.items()},
            "residual_coefficients": {k: format_coefficient(v) for k, v in self.residual_coefficients().items()},
            "transform": self.transform.to_json(),
            "prescaling_transform": self.prescaling_transform.to_json(),
            "steps": [{"name": name, "transform": psi.to_json()} for name, psi in self.steps],
            "warnings": list(self.warnings),
            "flags": dict(self.flags),
        }


class _Reducer:
    """Applies steps to a jet while accumulating the transformation."""

    def __init__(self, f: MongeJet, prep: Prepared, zero: ZeroTest):
        self.input = f
        self.zero = zero
        self.jet = prep.jet
        self.transform = prep.transform
        self.steps: list = [("normalize 2-jet", prep.transform)]

    def apply(self, name: str, psi: ProjectiveMapG5):
        if psi.is_identity():
            return
        self.jet = act_on_monge(psi, self.jet, 4)
        self.transform = compose_maps(self.transform, psi)
        self.steps.append((name, psi))

    def check(self, name: str, z1, z2):
        s = _scale(self.jet)
        bad = [
            f"{slot}{m}"
            for slot, jet, zs in (("f1", self.jet.f1, z1), ("f2", self.jet.f2, z2))
            for m in zs
            if not self.zero(jet.coeff(*m), s)
        ]
        if bad:
            raise ConsistencyError(f"step '{name}' left nonzero coefficients {bad}")

    def solve_affine(self, name: str, build: Callable, slot: int, mono) -> object:
        """Parameter t making coefficient ``mono`` of slot ``slot`` vanish, assuming affine dependence."""
        c0 = _coef(act_on_monge(build(0), self.jet, 4), slot, mono)
        c1 = _coef(act_on_monge(build(1), self.jet, 4), slot, mono)
        slope = c1 - c0
        if self.zero(slope, _scale(self.jet)):
            raise HypothesisViolation(f"{name}: coefficient {mono} cannot be removed")
        return -c0 / slope


def _coef(g: MongeJet, slot: int, mono):
    return (g.f1 if slot == 1 else g.f2).coeff(*mono)


def reduce_normal_form(f: MongeJet, zero: ZeroTest = EXACT) -> NormalFormReport:
    """Reduce a Monge 4-jet to the normal form of its stratum."""
    if f.order < 4:
        raise JetError("normal-form reduction needs a 4-jet")
    f = f.truncate(4)
    prep = prepare(f, zero)
    stratum = stratum_of_prepared(prep, zero)
    if stratum is Stratum.HigherCodim:
        raise HypothesisViolation("jet lies in a stratum of codimension >= 3")
    r = _Reducer(f, prep, zero)
    warnings: list[str] = []
    flags: dict = {}
    if stratum is Stratum.Pi_E:
        r.apply("elliptic cubic", elliptic_cubic_map(r.jet))
        r.check("elliptic cubic", *CUBIC_SHAPES[stratum])
        r.apply("elliptic quartic", elliptic_quartic_map(r.jet))
        r.check("elliptic quartic", *QUARTIC_SHAPES[stratum])
    elif stratum in (Stratum.Pi_S, Stratum.Pi_B, Stratum.Pi_2B):
        r.apply("hyperbolic cubic", hyperbolic_cubic_map(r.jet))
        r.check("hyperbolic cubic", *CUBIC_SHAPES[stratum])
        r.apply("hyperbolic quartic", hyperbolic_quartic_map(r.jet))
        r.check("hyperbolic quartic", *QUARTIC_SHAPES[stratum])
    elif stratum is Stratum.Pi_H:
        r.apply("parabolic prenormal", parabolic_cubic_prenormal_map(r.jet))
        r.check("parabolic prenormal", [(3, 0), (2, 1)], [(3, 0), (2, 1)])
        r.apply("parabolic H cubic", parabolic_h_cubic_map(r.jet))
        r.check("parabolic H cubic", *CUBIC_SHAPES[stratum])
        s = r.solve_affine("parabolic H quartic", lambda t: parabolic_h_quartic_map(t, 0), 2, (0, 4))
        p3 = r.solve_affine("parabolic H quartic", lambda t: parabolic_h_quartic_map(s, t), 1, (4, 0))
        r.apply("parabolic H quartic", parabolic_h_quartic_map(s, p3))
        r.check("parabolic H quartic", *QUARTIC_SHAPES[stratum])
    elif stratum is Stratum.Pi_P:
        r.apply("parabolic prenormal", parabolic_cubic_prenormal_map(r.jet))
        r.check("parabolic prenormal", [(3, 0), (2, 1)], [(3, 0), (2, 1)])
        r.apply("parabolic P cubic", parabolic_p_cubic_map(r.jet))
        r.check("parabolic P cubic", *CUBIC_SHAPES[stratum])
        gamma, lam = r.jet.b(0, 3), r.jet.a(0, 4)
        big_lambda = lambda_invariant(gamma, lam)
        if zero(big_lambda, _scale(r.jet) ** 2):
            raise LambdaObstruction(
                "Lambda = 6 gamma^2 + 4 lambda - 15 gamma + 5 vanishes: "
                "the order-4 terms cannot be removed"
            )
        q21 = -r.jet.a(1, 3) / big_lambda
        build = lambda p1, p3, p4: parabolic_p_quartic_map(gamma, q21, p1, p3, p4)  # noqa: E731
        p1 = r.solve_affine("parabolic P quartic", lambda t: build(t, 0, 0), 1, (2, 2))
        p4 = r.solve_affine("parabolic P quartic", lambda t: build(p1, 0, t), 1, (3, 1))
        p3 = r.solve_affine("parabolic P quartic", lambda t: build(p1, t, p4), 1, (4, 0))
        r.apply("parabolic P quartic", build(p1, p3, p4))
        r.check("parabolic P quartic", *QUARTIC_SHAPES[stratum])
    elif stratum is Stratum.Pi_I_plus:
        s = _scale(r.jet)
        if zero(r.jet.b(3, 0) - r.jet.b(1, 2), s):
            rot = _pythagorean_rotation(r.jet, zero)
            if rot is None:
                raise HypothesisViolation("b30 - b12 vanishes in every rotated frame")
            r.apply("rotation", rot)
            warnings.append("rotated the (x^2 + y^2, 0) frame to get b30 - b12 != 0")
        r.apply("inflection+ cubic", inflection_plus_cubic_map(r.jet))
        r.check("inflection+ cubic", *CUBIC_SHAPES[stratum])
        r.apply("inflection+ quartic", inflection_plus_quartic_map(r.jet))
        r.check("inflection+ quartic", *QUARTIC_SHAPES[stratum])
    elif stratum is Stratum.Pi_I_minus:
        s = _scale(r.jet)
        if zero(r.jet.b(0, 3), s):
            warnings.append("b30 != 0 but b03 = 0: outside the generic Pi_I^- conditions")
            if zero(r.jet.b(3, 0), s):
                raise HypothesisViolation("Pi_I^- reduction needs b03 != 0")
            r.apply("swap x, y", _SWAP_XY)
        r.apply("inflection- cubic", inflection_minus_cubic_map(r.jet))
        r.check("inflection- cubic", *CUBIC_SHAPES[stratum])
        r.apply("inflection- quartic", inflection_minus_quartic_map(r.jet))
        r.check("inflection- quartic", *QUARTIC_SHAPES[stratum])

    pre_jet, pre_transform = r.jet, r.transform
    exact = True
    if stratum in (Stratum.Pi_S, Stratum.Pi_B, Stratum.Pi_H):
        scaling, exact = _leading_scaling(stratum, r.jet)
        if not exact:
            r.jet = r.jet.map_coefficients(float)
            r.transform = r.transform.map_coefficients(float)
        r.apply("leading coefficient scaling", scaling)

    g = r.jet
    moduli = _moduli(stratum, g)
    if stratum is Stratum.Pi_P:
        moduli["Lambda"] = lambda_invariant(moduli["gamma"], moduli["lambda"])
    if stratum is Stratum.Pi_S:
        flags["proper_substratum_a31_b13"] = not zero(g.a(3, 1), _scale(g)) and not zero(g.b(1, 3), _scale(g))

    report = NormalFormReport(
        stratum=stratum,
        normal_form=g,
        moduli=moduli,
        transform=r.transform,
        exact=exact,
        prescaling_form=pre_jet,
        prescaling_transform=pre_transform,
        input_jet=f,
        steps=r.steps,
        warnings=warnings,
        flags=flags,
    )
    bad = shape_violations(g, stratum, zero if exact else ZeroTest(1e-9))
    if bad:
        raise ConsistencyError(f"normal form has the wrong shape: {bad}")
    return report


def _moduli(stratum: Stratum, g: MongeJet) -> dict:
    if stratum is Stratum.Pi_S:
        return {"alpha": g.b(3, 0)}
    if stratum is Stratum.Pi_H:
        return {"beta": g.a(1, 2)}
    if stratum is Stratum.Pi_P:
        return {"gamma": g.b(0, 3), "lambda": g.a(0, 4)}
    if stratum is Stratum.Pi_I_plus:
        return {"k1": g.a(2, 1)}
    if stratum is Stratum.Pi_I_minus:
        return {"k2": g.a(3, 0)}
    if stratum is Stratum.Pi_E:
        return {"phi1_x": g.a(1, 2), "phi1_y": g.a(0, 3)}
    return {}


def _real_cbrt(value):
    """Exact rational cube root when it exists, else a float."""
    if isinstance(value, Fraction):
        num, den = value.numerator, value.denominator
        rn = _icbrt(abs(num))
        rd = _icbrt(den)
        if rn is not None and rd is not None:
            return Fraction(rn if num > 0 else -rn, rd), True
    v = float(value)
    return math.copysign(abs(v) ** (1.0 / 3.0), v), False


def _icbrt(n: int):
    r = round(n ** (1.0 / 3.0)) if n < 2**53 else int(round(float(n) ** (1.0 / 3.0)))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**3 == n:
            return c
    # large integers: bisection
    lo, hi = 0, 1 << ((n.bit_length() + 2) // 3 + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**3 < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**3 == n else None


def _leading_scaling(stratum: Stratum, g: MongeJet):
    """Scale y (then w) so the y^3 coefficient of f1 becomes 1; x, z are left alone."""
    a03 = g.a(0, 3)
    if stratum is Stratum.Pi_B and a03 == 0:
        raise ConsistencyError("Pi_B jet not oriented with a03 != 0")
    inv, exact = _real_cbrt(1 / a03 if not isinstance(a03, float) else 1.0 / a03)
    t = inv  # y -> t y with a03 t^3 = 1
    if isinstance(a03, QuadSurd):
        exact = False
    one = 1.0 if not exact else Fraction(1)
    if stratum is Stratum.Pi_H:
        # f2 = xy scales by t
        return ProjectiveMapG5.linear(((one, 0), (0, t)), ((one, 0), (0, t))), exact
    return ProjectiveMapG5.linear(((one, 0), (0, t)), ((one, 0), (0, t * t))), exact


def _pythagorean_rotation(g: MongeJet, zero: ZeroTest):
    # rotations by (c, s) with c^2 + s^2 = 1 rational keep x^2 + y^2 fixed
    triples = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)]
    for a, b, c in triples:
        for cs, sn in ((Fraction(a, c), Fraction(b, c)), (Fraction(b, c), Fraction(a, c))):
            rot = ProjectiveMapG5.linear(((cs, -sn), (sn, cs)), ((1, 0), (0, 1)))
            h = act_on_monge(rot, g, 4)
            if not zero(h.b(3, 0) - h.b(1, 2), _scale(h)):
                return rot
    return None


# -----------------------------------------------------------------------------
# closed-form consistency checks


def beta_closed_form(a12, b03, a03) -> float:
    """``(a12 + 3 b03) / a03^(3/2)`` for ``a03 > 0``."""
    if float(a03) <= 0:
        raise ValueError("closed form needs a03 > 0")
    return float(a12 + 3 * b03) / float(a03) ** 1.5


# -----------------------------------------------------------------------------
# the "Proj." column


def _jet(terms1: dict, terms2: dict, order: int = 4) -> MongeJet:
    return MongeJet(
        Jet2(order, {k: Fraction(v) for k, v in terms1.items()}),
        Jet2(order, {k: Fraction(v) for k, v in terms2.items()}),
    )


# Representatives in normal form.  For the inflection strata phi3 is picked so
# that one B direction of the tangent plane is rational: x + y divides it.
REPRESENTATIVES = {
    Stratum.Pi_E: _jet({(2, 0): 1, (0, 2): -1, (1, 2): 1, (0, 3): 2}, {(1, 1): 1}),
    Stratum.Pi_S: _jet({(2, 0): 1, (0, 3): 1}, {(0, 2): 1, (3, 0): 1}),
    Stratum.Pi_B: _jet({(2, 0): 1, (0, 3): 1}, {(0, 2): 1}),
    Stratum.Pi_2B: _jet({(2, 0): 1}, {(0, 2): 1}),
    Stratum.Pi_H: _jet({(2, 0): 1, (0, 3): 1}, {(1, 1): 1}),
    Stratum.Pi_P: _jet({(2, 0): 1, (1, 2): 1}, {(1, 1): 1, (0, 3): 1}),
    Stratum.Pi_I_plus: _jet({(2, 0): 1, (0, 2): 1, (2, 1): 1}, {(3, 0): 1, (0, 3): 1}),
    Stratum.Pi_I_minus: _jet({(1, 1): 1, (3, 0): 1}, {(3, 0): 1, (0, 3): 1}),
}


def representative(stratum: Stratum) -> MongeJet:
    return REPRESENTATIVES[stratum]


# tangent directions sampled when every tangent line matters
DIRECTION_GRID = [
    Direction(Fraction(a), Fraction(b))
    for a, b in [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1), (1, 3), (3, 1), (1, -3), (3, -1)]
]

_GENERIC = frozenset({MondType.Regular.value, MondType.S0.value})


class ProjectionColumnMismatch(ConsistencyError):
    def __init__(self, report: "ProjectionColumnReport"):
        self.report = report
        super().__init__(report.describe())


@dataclass
class ProjectionSample:
    direction: tuple
    point: ViewPoint
    label: str


@dataclass
class ProjectionColumnReport:
    """Projection types seen from the sampled centres, in normalized coordinates."""

    stratum: Stratum
    expected: frozenset
    samples: list
    mismatches: list

    @property
    def observed(self) -> frozenset:
        return frozenset(s.label for s in self.samples) - _GENERIC

    @property
    def contained(self) -> bool:
        return not self.mismatches

    @property
    def complete(self) -> bool:
        return self.contained and self.observed == self.expected

    def describe(self) -> str:
        if not self.mismatches:
            return f"{self.stratum.value}: observed {sorted(self.observed)}, expected {sorted(self.expected)}"
        first = self.mismatches[0]
        return (
            f"{self.stratum.value}: {len(self.mismatches)} unexpected projection types, "
            f"e.g. {first.label} from {first.point} (expected {sorted(self.expected)})"
        )

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "stratum": self.stratum.value,
            "expected": sorted(self.expected),
            "observed": sorted(self.observed),
            "contained": self.contained,
            "complete": self.complete,
            "samples": len(self.samples),
            "mismatches": [
                {"point": m.point.to_json(), "direction": [format_coefficient(v) for v in m.direction], "label": m.label}
                for m in self.mismatches
            ],
        }


def sampled_directions(prep: Prepared, zero: ZeroTest = EXACT) -> list[Direction]:
    """Asymptotic directions, or a fixed grid when there are none or all are."""
    ad = asymptotic_directions(prep.jet, zero)
    if ad.all_directions or prep.two_jet is TwoJetClass.Elliptic:
        return list(DIRECTION_GRID)
    return list(ad.directions)


def verify_projection_column(
    f: MongeJet,
    points_per_line: int = 20,
    seed: int = 0,
    zero: ZeroTest = EXACT,
    strict: bool = False,
) -> ProjectionColumnReport:
    """Classify central projections from centres on the relevant tangent lines.

    The jet is first brought to normalized 2-jet coordinates; centres are
    sampled there (``points_per_line`` per line, the last at infinity).  For
    elliptic jets the tangent-plane grid is sampled and only regular points
    and crosscaps are allowed.  Every other label must belong to the
    stratum's expected set; with ``strict`` a mismatch raises.
    """
    prep = prepare(f, zero)
    stratum = stratum_of_prepared(prep, zero)
    expected = stratum.expected_projections
    allowed = expected | _GENERIC if stratum is Stratum.Pi_E else expected
    g = prep.jet.truncate(3)
    samples, mismatches = [], []
    for d in sampled_directions(prep, zero):
        for p in sample_view_points(d, points_per_line, seed):
            label = classify_A3(project(g, p, 3, zero), zero).value
            sample = ProjectionSample((d.u1, d.u2), p, label)
            samples.append(sample)
            if label not in allowed:
                mismatches.append(sample)
    report = ProjectionColumnReport(stratum, expected, samples, mismatches)
    if strict and mismatches:
        raise ProjectionColumnMismatch(report)
    return report


# -----------------------------------------------------------------------------
# random jets in a given stratum


def _rand_q(rng, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound * 4, bound * 4), rng.randint(1, 4))


def random_normal_form(stratum: Stratum, rng, bound: int = 3) -> MongeJet:
    """A random 4-jet with the normal-form shape of ``stratum`` meeting its hypotheses."""
    if stratum is Stratum.HigherCodim:
        raise ValueError("no normal form for HigherCodim")
    z1, z2 = required_zero(stratum)
    lead1, lead2 = LEADING[stratum]
    while True:
        d1, d2 = dict(lead1), dict(lead2)
        for deg in (2, 3, 4):
            for i in range(deg + 1):
                m = (i, deg - i)
                if m not in z1 and m not in lead1:
                    d1[m] = _rand_q(rng, bound)
                if m not in z2 and m not in lead2:
                    d2[m] = _rand_q(rng, bound)
        g = _jet(d1, d2)
        if _generic_enough(stratum, g):
            return g


def _generic_enough(stratum: Stratum, g: MongeJet) -> bool:
    a, b = g.a, g.b
    if stratum is Stratum.Pi_S:
        return b(3, 0) != 0
    if stratum is Stratum.Pi_P:
        return b(0, 3) != 0 and lambda_invariant(b(0, 3), a(0, 4)) != 0
    if stratum is Stratum.Pi_I_plus:
        return b(3, 0) != b(1, 2)
    if stratum is Stratum.Pi_I_minus:
        return b(3, 0) != 0 and b(0, 3) != 0
    return True


def random_stratum_jet(stratum: Stratum, rng, bound: int = 3) -> MongeJet:
    """A random G(5)-conjugate of a random normal form of ``stratum``."""
    from .projective import random_element

    return act_on_monge(random_element(rng, bound), random_normal_form(stratum, rng, bound), 4)
