"""The Monge-Taylor map over a parametrized surface patch.

A patch is four polynomials ``X(u, v)`` in R^4.  At each grid node the
surface is moved to the origin by an affine map of R^4 (an element of the
affine part of PGL(5)), re-graphed over its tangent plane and classified.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .jets import (
    Jet2,
    JetError,
    MongeJet,
    compose,
    format_coefficient,
    invert_planar,
    jet_from_terms,
    jet_to_terms,
    parse_coefficient,
)
from .numeric import EXACT, ZeroTest, magnitude
from .projective import _matinv
from .stratifier import (
    HypothesisViolation,
    Stratum,
    StratifierError,
    prepare,
    reduce_normal_form,
    stratum_of_prepared,
)
from .twojet import TwoJetClass, degeneracy_form, delta_discriminant

Poly = dict  # {(i, j): coefficient} in the parameters (u, v)


class ImmersionError(JetError):
    """The differential of the patch has rank < 2 at the requested point."""


@dataclass
class SurfacePatch:
    """``X(u, v) = (X1, X2, X3, X4)`` with polynomial components on a rectangle."""

    components: tuple
    domain: tuple = ((-1, 1), (-1, 1))
    name: str = ""
    _rank_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.components) != 4:
            raise JetError("a surface patch has four components")
        self.components = tuple({tuple(k): v for k, v in c.items()} for c in self.components)

    @classmethod
    def graph(cls, f1: Poly, f2: Poly, domain=((-1, 1), (-1, 1)), name: str = "") -> "SurfacePatch":
        one = Fraction(1)
        return cls(({(1, 0): one}, {(0, 1): one}, dict(f1), dict(f2)), domain, name)

    def map_coefficients(self, fn) -> "SurfacePatch":
        comps = tuple({k: fn(v) for k, v in c.items()} for c in self.components)
        dom = tuple(tuple(fn(b) for b in side) for side in self.domain)
        return SurfacePatch(comps, dom, self.name)

    def evaluate(self, u, v) -> tuple:
        return tuple(sum(c * u**i * v**j for (i, j), c in comp.items()) for comp in self.components)

    def taylor(self, u0, v0, order: int) -> list[Jet2]:
        """Expansions of the four components in ``s = u - u0, t = v - v0``."""
        return [_shift(comp, u0, v0, order) for comp in self.components]

    def differential(self, u0, v0) -> list[list]:
        """The 4x2 Jacobian at ``(u0, v0)``."""
        rows = []
        for jet in self.taylor(u0, v0, 1):
            rows.append([jet.coeff(1, 0), jet.coeff(0, 1)])
        return rows

    def is_immersive(self, u0, v0, zero: ZeroTest = EXACT) -> bool:
        key = (u0, v0, zero.tol if zero is not EXACT else None)
        if key not in self._rank_cache:
            d = self.differential(u0, v0)
            scale = magnitude(v for row in d for v in row)
            minors = [d[k][0] * d[l][1] - d[k][1] * d[l][0] for k, l in combinations(range(4), 2)]
            self._rank_cache[key] = any(not zero(m, scale * scale) for m in minors)
        return self._rank_cache[key]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "name": self.name,
            "components": [jet_to_terms(Jet2(_degree(c), c)) for c in self.components],
            "domain": [[format_coefficient(b) for b in side] for side in self.domain],
        }

    @classmethod
    def from_json(cls, data: dict, mode: str = "exact") -> "SurfacePatch":
        """Accepts ``components`` (four term lists) or ``graph`` (two term lists)."""
        if "components" in data:
            comps = [_poly_from_terms(t, mode) for t in data["components"]]
        elif "graph" in data:
            g = [_poly_from_terms(t, mode) for t in data["graph"]]
            if len(g) != 2:
                raise JetError("'graph' needs two term lists")
            one = parse_coefficient("1", mode)
            comps = [{(1, 0): one}, {(0, 1): one}, g[0], g[1]]
        else:
            raise JetError("surface needs 'components' or 'graph'")
        domain = data.get("domain", [["-1", "1"], ["-1", "1"]])
        domain = tuple(tuple(parse_coefficient(b, mode) for b in side) for side in domain)
        return cls(tuple(comps), domain, data.get("name", ""))


def _degree(poly: Poly) -> int:
    return max([0] + [i + j for i, j in poly])


def _poly_from_terms(terms, mode) -> Poly:
    degree = max([0] + [int(t[0]) + int(t[1]) for t in terms])
    return dict(jet_from_terms(degree, terms, mode).items())


def _shift(poly: Poly, u0, v0, order: int) -> Jet2:
    out: dict = {}
    for (i, j), c in poly.items():
        for a in range(i + 1):
            for b in range(j + 1):
                if a + b > order:
                    continue
                coef = c * math.comb(i, a) * math.comb(j, b) * u0 ** (i - a) * v0 ** (j - b)
                out[(a, b)] = out.get((a, b), 0) + coef
    return Jet2(order, out)


# -----------------------------------------------------------------------------


@dataclass
class MongeFrame:
    """``X(u0 + s, v0 + t) = c + A (x, y, f1(x, y), f2(x, y))`` with ``(x, y) = sigma(s, t)``."""

    point: tuple
    origin: tuple
    matrix: list
    completion: tuple
    jet: MongeJet


def monge_frame_at(surface: SurfacePatch, point, order: int = 4, zero: ZeroTest = EXACT) -> MongeFrame:
    u0, v0 = point
    if not surface.is_immersive(u0, v0, zero):
        raise ImmersionError(f"differential has rank < 2 at {point}")
    taylor = surface.taylor(u0, v0, order)
    origin = tuple(j.constant_term() for j in taylor)
    t1 = [j.coeff(1, 0) for j in taylor]
    t2 = [j.coeff(0, 1) for j in taylor]
    # complete the tangent vectors with the pair of basis vectors of largest |det|
    best, best_pair = None, None
    for k, l in combinations(range(4), 2):
        rest = [r for r in range(4) if r not in (k, l)]
        minor = t1[rest[0]] * t2[rest[1]] - t1[rest[1]] * t2[rest[0]]
        if best is None or abs(minor) > abs(best):
            best, best_pair = minor, (k, l)
    k, l = best_pair
    one = 1.0 if any(isinstance(v, float) for v in t1 + t2) else Fraction(1)
    e = [[one if r == c else 0 * one for r in range(4)] for c in range(4)]
    cols = [t1, t2, e[k], e[l]]
    matrix = [[cols[c][r] for c in range(4)] for r in range(4)]
    inv = _matinv(matrix)
    centred = [jet - jet.constant_term() for jet in taylor]
    moved = []
    for r in range(4):
        acc = Jet2.zero(order)
        for c in range(4):
            if inv[r][c] != 0:
                acc = acc + centred[c].scale(inv[r][c])
        moved.append(acc)
    # exact arithmetic leaves no linear terms here; floats leave rounding noise
    moved[2] = _drop_linear(moved[2])
    moved[3] = _drop_linear(moved[3])
    sigma = invert_planar((moved[0], moved[1]))
    f1 = compose(moved[2], sigma.components)
    f2 = compose(moved[3], sigma.components)
    return MongeFrame((u0, v0), origin, matrix, best_pair, MongeJet(_drop_linear(f1), _drop_linear(f2)))


def _drop_linear(f: Jet2) -> Jet2:
    return Jet2(f.order, {m: v for m, v in f.items() if sum(m) >= 2})


def monge_form_at(surface: SurfacePatch, point, order: int = 4, zero: ZeroTest = EXACT) -> MongeJet:
    """Monge form of the surface at ``X(point)``, up to an affine change of R^4."""
    return monge_frame_at(surface, point, order, zero).jet


# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    nu: int
    nv: int
    domain: tuple | None = None

    def __post_init__(self):
        if self.nu < 1 or self.nv < 1:
            raise JetError("grid needs at least one node per side")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        for sep in ("x", "X", "×", ","):
            if sep in text:
                a, b = text.split(sep, 1)
                return cls(int(a), int(b))
        n = int(text)
        return cls(n, n)

    def nodes(self, surface: SurfacePatch, exact: bool) -> list[tuple]:
        (u0, u1), (v0, v1) = self.domain or surface.domain
        conv = Fraction if exact else float
        us = _linspace(conv(u0), conv(u1), self.nu)
        vs = _linspace(conv(v0), conv(v1), self.nv)
        return [(i, j, u, v) for j, v in enumerate(vs) for i, u in enumerate(us)]


def _linspace(a, b, n):
    if n == 1:
        return [a]
    return [a + (b - a) * k / (n - 1) for k in range(n)]


@dataclass
class ScanRecord:
    i: int
    j: int
    u: object
    v: object
    two_jet: str
    stratum: str
    codim: int | None
    delta_sign: int | None
    moduli: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    completion: tuple = ()
    b_predicates: tuple = ()  # ((direction angle, value), ...) for hyperbolic nodes
    error: str | None = None


def b_predicates(f: MongeJet) -> tuple:
    """Signed quantities whose zeros are the S/B boundaries at a hyperbolic point.

    For each asymptotic unit direction ``e`` the value ``Q2(e) C1(e) - Q1(e) C2(e)``
    (quadratic parts ``Q``, cubic parts ``C``) vanishes exactly when the
    projection from that asymptotic line is of type B.  The sign depends on
    the orientation of ``e``; callers comparing neighbours must align it.
    """
    A, B, C = (float(v) for v in degeneracy_form(f))
    disc = B * B - 4 * A * C
    if disc <= 0:
        return ()
    root = math.sqrt(disc)
    # directions (r : 1) for the roots q/A and C/q of A r^2 + B r + C
    q = -(B + math.copysign(root, B)) / 2
    dirs = [(q, A), (C, q)]
    out = []
    for d1, d2 in dirs:
        n = math.hypot(d1, d2)
        e = (d1 / n, d2 / n)
        q1, q2 = (_eval(jet, 2, e) for jet in f)
        c1, c2 = (_eval(jet, 3, e) for jet in f)
        out.append((math.atan2(e[1], e[0]), q2 * c1 - q1 * c2))
    return tuple(sorted(out))


def _eval(jet: Jet2, degree: int, e) -> float:
    return sum(float(c) * e[0] ** i * e[1] ** j for (i, j), c in jet.items() if i + j == degree)


def classify_node(
    surface: SurfacePatch,
    node: tuple,
    order: int = 4,
    zero: ZeroTest | None = None,
    with_moduli: bool = False,
) -> ScanRecord:
    i, j, u, v = node
    zero = ZeroTest(zero.tol) if zero is not None else EXACT
    try:
        frame = monge_frame_at(surface, (u, v), order, zero)
    except (ImmersionError, JetError) as exc:
        return ScanRecord(i, j, u, v, "", "Error", None, None, flags=["not_immersive"], error=str(exc))
    f = frame.jet
    flags: list[str] = []
    d = delta_discriminant(f)
    scale = magnitude(c for jet in f for m, c in jet.items() if sum(m) == 2)
    delta_sign = zero.sign(d, scale**4, "delta")
    try:
        prep = prepare(f.truncate(min(order, 3)) if order >= 3 else f, zero)
        two = prep.two_jet
        stratum = stratum_of_prepared(prep, zero)
    except JetError as exc:
        return ScanRecord(i, j, u, v, "", "Error", None, delta_sign, error=str(exc), completion=frame.completion)
    moduli: dict = {}
    if with_moduli and order >= 4 and stratum is not Stratum.HigherCodim:
        try:
            moduli = reduce_normal_form(f, zero).moduli
        except HypothesisViolation as exc:
            flags.append("hypothesis:" + type(exc).__name__)
        except StratifierError as exc:
            flags.append("reduction_failed:" + str(exc)[:40])
    if zero.near:
        flags.append("near_degenerate")
    preds = b_predicates(f) if two is TwoJetClass.Hyperbolic else ()
    return ScanRecord(
        i, j, u, v, two.value, stratum.value, stratum.codim, delta_sign, moduli, flags, frame.completion, preds
    )


@dataclass
class Crossing:
    """A grid edge across which one of the S/B predicates changes sign."""

    a: tuple
    b: tuple
    direction: int  # 0 = along u, 1 = along v


@dataclass
class ScanResult:
    surface: SurfacePatch
    grid: GridSpec
    order: int
    mode: str
    records: list

    @property
    def failures(self) -> list:
        return [r for r in self.records if r.error]

    def histogram(self) -> dict:
        return dict(sorted(Counter(r.stratum for r in self.records).items()))

    def at(self, i: int, j: int) -> ScanRecord:
        return self.records[j * self.grid.nu + i]

    def crossings(self) -> list[Crossing]:
        """Grid edges between hyperbolic nodes where an S/B predicate changes sign.

        Asymptotic directions at the two ends are matched by angle and their
        orientations aligned (the predicate is odd in the direction).
        Nodes labelled Pi_B are reported as degenerate edges.
        """
        out = []
        for r in self.records:
            if r.stratum == Stratum.Pi_B.value:
                out.append(Crossing((r.i, r.j), (r.i, r.j), -1))
        for r in self.records:
            for di, dj, axis in ((1, 0, 0), (0, 1, 1)):
                if r.i + di >= self.grid.nu or r.j + dj >= self.grid.nv:
                    continue
                s = self.at(r.i + di, r.j + dj)
                if _sign_change(r, s):
                    out.append(Crossing((r.i, r.j), (s.i, s.j), axis))
        return out

    def crossings_along_rows(self) -> dict[int, list[int]]:
        """For each row ``j``, the ``i`` of every u-edge ``(i, i + 1)`` with a crossing."""
        rows: dict[int, list[int]] = {}
        for c in self.crossings():
            if c.direction == 0:
                rows.setdefault(c.a[1], []).append(c.a[0])
        return rows

    def moduli_names(self) -> list[str]:
        return sorted({k for r in self.records for k in r.moduli})

    def to_csv(self, stream=None) -> str:
        buf = stream if stream is not None else io.StringIO()
        names = self.moduli_names()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["u", "v", "two_jet_class", "stratum", "codim", "delta_disc_sign", *names, "flags"])
        for r in self.records:
            writer.writerow(
                [
                    format_coefficient(r.u),
                    format_coefficient(r.v),
                    r.two_jet,
                    r.stratum,
                    "" if r.codim is None else r.codim,
                    "" if r.delta_sign is None else r.delta_sign,
                    *[format_coefficient(r.moduli[n]) if n in r.moduli else "" for n in names],
                    ";".join(r.flags),
                ]
            )
        return buf.getvalue() if stream is None else ""

    def summary(self) -> dict:
        return {
            "schema": 1,
            "surface": self.surface.name,
            "grid": [self.grid.nu, self.grid.nv],
            "order": self.order,
            "mode": self.mode,
            "histogram": self.histogram(),
            "failures": len(self.failures),
            "crossing_edges": len([c for c in self.crossings() if c.direction >= 0]),
        }


def _sign_change(r: ScanRecord, s: ScanRecord) -> bool:
    if len(r.b_predicates) != 2 or len(s.b_predicates) != 2 or r.completion != s.completion:
        return False
    for ang, val in r.b_predicates:
        best = min(s.b_predicates, key=lambda p: _angle_gap(ang, p[0]))
        other = best[1]
        if math.cos(ang - best[0]) < 0:
            other = -other
        if val * other < 0:
            return True
    return False


def _angle_gap(a: float, b: float) -> float:
    # distance between lines (angles mod pi)
    d = (a - b) % math.pi
    return min(d, math.pi - d)


def scan(
    surface: SurfacePatch,
    grid: GridSpec,
    order: int = 4,
    mode: str = "float",
    tol: float = 1e-9,
    with_moduli: bool = False,
) -> ScanResult:
    """Classify every grid node; records are ordered by ``(v, u)`` index."""
    if mode not in ("exact", "float"):
        raise JetError(f"unknown mode {mode!r}")
    exact = mode == "exact"
    patch = surface if exact else surface.map_coefficients(float)
    zero = None if exact else ZeroTest(tol)
    records = [classify_node(patch, node, order, zero, with_moduli) for node in grid.nodes(patch, exact)]
    records.sort(key=lambda r: (r.j, r.i))
    return ScanResult(patch, grid, order, mode, records)


# -----------------------------------------------------------------------------
# demo surfaces (artifact choices; no example surfaces come with the theory)


def demo_surface() -> SurfacePatch:
    """``(z, w) = (x^2 + y^3, y^2 + x^3 - x^4 + x^3 y / 2)`` on ``[0, 1/2] x [-1/4, 1/4]``.

    Hyperbolic throughout; the S/B predicate attached to the x-direction
    changes sign along a curve near ``x = 1/4``, so a Pi_B curve separates two
    Pi_S regions.
    """
    q = Fraction
    f1 = {(2, 0): q(1), (0, 3): q(1)}
    f2 = {(0, 2): q(1), (3, 0): q(1), (4, 0): q(-1), (3, 1): q(1, 2)}
    return SurfacePatch.graph(f1, f2, ((q(0), q(1, 2)), (q(-1, 4), q(1, 4))), "demo-b30")


def elliptic_patch() -> SurfacePatch:
    q = Fraction
    return SurfacePatch.graph({(2, 0): q(1), (0, 2): q(-1)}, {(1, 1): q(1)}, ((q(-1, 10), q(1, 10)),) * 2, "elliptic")


def flat_patch() -> SurfacePatch:
    return SurfacePatch.graph({}, {}, ((Fraction(-1), Fraction(1)),) * 2, "plane")


DEMOS = {"demo-b30": demo_surface, "elliptic": elliptic_patch, "plane": flat_patch}

