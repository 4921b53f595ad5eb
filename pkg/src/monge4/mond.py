"""Recognition of A^3-orbits of 3-jets of plane-to-space map germs.

Mond's list of orbits reachable by central projections::

    S0  (x, y^2, xy)                 crosscap
    S   (x, y^2, y^3 + x^2 y), (x, y^2, y^3)
    B   (x, y^2, x^2 y), (x, y^2, 0)
    H   (x, xy, y^3)
    P   (x, xy + y^3, xy^2)
    R   (x, xy, xy^2)
    T   (x, xy + y^3, 0)
    U   (x, xy, 0)

The recognizer brings a corank-1 jet to ``(x, g2, g3)`` with only rational
coordinate changes and reads the deciding coefficients off the result.
"""

from __future__ import annotations

import enum
import random
from fractions import Fraction

from .jets import Jet2, JetError, JetMap, compose, invert_planar
from .numeric import EXACT, ZeroTest, magnitude


class MondType(enum.Enum):
    Regular = "Regular"
    S0 = "S0"
    S = "S"
    B = "B"
    H = "H"
    P = "P"
    R = "R"
    T = "T"
    U = "U"
    Other = "Other"


NORMAL_FORMS = {
    MondType.Regular: ({(1, 0): 1}, {(0, 1): 1}, {}),
    MondType.S0: ({(1, 0): 1}, {(0, 2): 1}, {(1, 1): 1}),
    MondType.S: ({(1, 0): 1}, {(0, 2): 1}, {(0, 3): 1}),
    MondType.B: ({(1, 0): 1}, {(0, 2): 1}, {(2, 1): 1}),
    MondType.H: ({(1, 0): 1}, {(1, 1): 1}, {(0, 3): 1}),
    MondType.P: ({(1, 0): 1}, {(1, 1): 1, (0, 3): 1}, {(1, 2): 1}),
    MondType.R: ({(1, 0): 1}, {(1, 1): 1}, {(1, 2): 1}),
    MondType.T: ({(1, 0): 1}, {(1, 1): 1, (0, 3): 1}, {}),
    MondType.U: ({(1, 0): 1}, {(1, 1): 1}, {}),
}


def normal_form(t: MondType, order: int = 3) -> JetMap:
    return JetMap([Jet2(order, {k: Fraction(v) for k, v in c.items()}) for c in NORMAL_FORMS[t]])


def _drop_pure_x(f: Jet2) -> Jet2:
    # left change Y -> Y - phi(X) once the first component is exactly x
    return Jet2(f.order, {k: v for k, v in f.items() if k[1] != 0})


def _rank_1x(rows, zero, scale):
    nonzero = [r for r in rows if not (zero(r[0], scale) and zero(r[1], scale))]
    if not nonzero:
        return 0, None
    first = nonzero[0]
    for r in nonzero[1:]:
        if not zero(first[0] * r[1] - first[1] * r[0], scale * scale):
            return 2, None
    return 1, first


def classify_A3(g: JetMap, zero: ZeroTest = EXACT) -> MondType:
    """The A^3 orbit of the 3-jet of a germ (R^2, 0) -> (R^3, 0)."""
    if len(g) != 3:
        raise JetError("classify_A3 needs a 3-component jet")
    if g.order < 3:
        raise JetError("classify_A3 needs order >= 3")
    g = g.truncate(3)
    if any(c.constant_term() != 0 for c in g):
        raise JetError("germ is not based at the origin")
    scale = magnitude(v for c in g for _, v in c.items())
    rows = g.linear_matrix()
    rank, _ = _rank_1x(rows, zero, scale)
    if rank == 2:
        return MondType.Regular
    if rank == 0:
        return MondType.Other

    # corank 1: left changes so only one component has a linear part
    i = next(i for i, r in enumerate(rows) if not (zero(r[0], scale) and zero(r[1], scale)))
    j = 0 if not zero(rows[i][0], scale) else 1
    lead = g[i]
    others = [g[k] - lead.scale(rows[k][j] / rows[i][j]) for k in range(3) if k != i]
    others = [_strip_linear(o) for o in others]

    # source change making the first component exactly x
    x, y = Jet2.x(3), Jet2.y(3)
    sigma = (lead, y) if j == 0 else (lead, x)
    t = invert_planar(sigma)
    h2, h3 = (_drop_pure_x(compose(o, t.components)) for o in others)

    v2 = (h2.coeff(0, 2), h2.coeff(1, 1))
    v3 = (h3.coeff(0, 2), h3.coeff(1, 1))
    rank, _ = _rank_1x([v2, v3], zero, scale)
    if rank == 2:
        return MondType.S0
    if rank == 0:
        return MondType.Other

    if not zero(v2[0], scale) or not zero(v3[0], scale):
        return _fold_branch(h2, h3, zero, scale)
    return _cusp_branch(h2, h3, zero, scale)


def _strip_linear(f: Jet2) -> Jet2:
    return Jet2(f.order, {k: v for k, v in f.items() if sum(k) != 1})


def _fold_branch(h2: Jet2, h3: Jet2, zero: ZeroTest, scale: float) -> MondType:
    # a y^2 term is present: bring to (x, y^2 + ..., g3 in m^3)
    if zero(h2.coeff(0, 2), scale):
        h2, h3 = h3, h2
    lead = h2.coeff(0, 2)
    h3 = h3 - h2.scale(h3.coeff(0, 2) / lead)
    h2 = h2.scale(1 / lead)
    c = h2.coeff(1, 1)
    x, y = Jet2.x(3), Jet2.y(3)
    shift = (x, y - x.scale(c / 2))  # complete the square in y
    h2 = _drop_pure_x(compose(h2, shift))
    h3 = _drop_pure_x(compose(h3, shift))
    if zero(h3.coeff(0, 3), scale):
        return MondType.B
    return MondType.S


def _cusp_branch(h2: Jet2, h3: Jet2, zero: ZeroTest, scale: float) -> MondType:
    # only xy terms: normalize g3 = xy + c y^3, g2 in m^3
    if zero(h3.coeff(1, 1), scale):
        h2, h3 = h3, h2
    lead = h3.coeff(1, 1)
    h2 = h2 - h3.scale(h2.coeff(1, 1) / lead)
    h3 = h3.scale(1 / lead)
    x, y = Jet2.x(3), Jet2.y(3)
    # y -> y - p21 x y - p12 y^2 removes x^2 y and x y^2 from g3
    shift = (x, y - (x * y).scale(h3.coeff(2, 1)) - (y * y).scale(h3.coeff(1, 2)))
    h3 = _drop_pure_x(compose(h3, shift))
    h2 = _drop_pure_x(compose(h2, shift))
    # Y -> Y - q21 X Z removes x^2 y from g2
    h2 = h2 - (x * h3).scale(h2.coeff(2, 1))
    c, s, t = h3.coeff(0, 3), h2.coeff(1, 2), h2.coeff(0, 3)
    if not zero(t, scale):
        return MondType.H
    c0, s0 = zero(c, scale), zero(s, scale)
    if not s0:
        return MondType.R if c0 else MondType.P
    return MondType.U if c0 else MondType.T


# random A^3 changes of coordinates ---------------------------------------------


def _rand_q(rng: random.Random, bound: int) -> Fraction:
    den = rng.randint(1, bound)
    return Fraction(rng.randint(-bound * den, bound * den), den)


def _random_invertible(rng, n, bound):
    while True:
        m = [[_rand_q(rng, bound) for _ in range(n)] for _ in range(n)]
        if _det(m) != 0:
            return m


def _det(m):
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def conjugate(g: JetMap, source: JetMap, target_linear, target_quadratic=None) -> JetMap:
    """``tau o g o source`` with ``tau(u) = A u + sum_{j<=l} B[i][(j, l)] u_j u_l``."""
    composed = g.compose(source.components)
    comps = list(composed)
    out = []
    for i in range(3):
        acc = Jet2.zero(g.order)
        for j in range(3):
            if target_linear[i][j] != 0:
                acc = acc + comps[j].scale(target_linear[i][j])
        for (j, l), coef in (target_quadratic or [{}, {}, {}])[i].items():
            acc = acc + (comps[j] * comps[l]).scale(coef)
        out.append(acc)
    return JetMap(out)


def a3_conjugate(g: JetMap, seed: int | random.Random, bound: int = 3) -> JetMap:
    """A random element of the A^3 orbit of ``g`` (same order as ``g``)."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    k = g.order
    x, y = Jet2.x(k), Jet2.y(k)
    lin = _random_invertible(rng, 2, bound)
    nonlinear = []
    for base in (x, y):
        terms = {(i, d - i): _rand_q(rng, bound) for d in range(2, k + 1) for i in range(d + 1)}
        nonlinear.append(base + Jet2(k, terms))
    linear = [x.scale(lin[0][0]) + y.scale(lin[0][1]), x.scale(lin[1][0]) + y.scale(lin[1][1])]
    source = JetMap([compose(c, linear) for c in nonlinear])
    A = _random_invertible(rng, 3, bound)
    B = [{(j, l): _rand_q(rng, bound) for j in range(3) for l in range(j, 3)} for _ in range(3)]
    return conjugate(g, source, A, B)


def a3_distinguish(g: JetMap, h: JetMap, zero: ZeroTest = EXACT) -> bool:
    """True certifies that ``g`` and ``h`` are not A^3-equivalent; False is inconclusive."""
    return classify_A3(g, zero) != classify_A3(h, zero)
