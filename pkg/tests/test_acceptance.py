"""Acceptance suite: one test per criterion, run at full sample counts.

A PASS/FAIL line per criterion is printed in the terminal summary (see
``conftest.py``).
"""

import random
import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from scipy.optimize import brentq

from monge4.jets import Jet2, MongeJet
from monge4.mond import MondType, a3_conjugate, a3_distinguish, classify_A3, normal_form
from monge4.projection import ViewPoint, project, sample_view_points
from monge4.projective import act_on_monge, random_element, residual_check
from monge4.scanner import GridSpec, demo_surface, scan
from monge4.stratifier import (
    CUBIC_SHAPES,
    LEADING,
    QUARTIC_SHAPES,
    REPRESENTATIVES,
    LambdaObstruction,
    Stratum,
    classify_stratum,
    elliptic_cubic_map,
    elliptic_quartic_map,
    hyperbolic_cubic_map,
    hyperbolic_quartic_map,
    inflection_minus_cubic_map,
    inflection_minus_quartic_map,
    inflection_plus_cubic_map,
    inflection_plus_quartic_map,
    lambda_invariant,
    parabolic_cubic_prenormal_map,
    parabolic_h_cubic_map,
    parabolic_h_quartic_map,
    parabolic_p_cubic_map,
    parabolic_p_quartic_map,
    prepare,
    random_stratum_jet,
    reduce_normal_form,
    required_zero,
    verify_projection_column,
)
from monge4.twojet import Direction, TwoJetClass, asymptotic_directions, classify_2jet, normal_form_jet

from conftest import monge, rand_q

STRATA = [s for s in Stratum if s is not Stratum.HigherCodim]
COUNT = {
    TwoJetClass.Hyperbolic: 2,
    TwoJetClass.Elliptic: 0,
    TwoJetClass.Parabolic: 1,
    TwoJetClass.InflectionPlus: "All",
    TwoJetClass.InflectionMinus: "All",
    TwoJetClass.DegenerateInflectionRank1: "All",
    TwoJetClass.DegenerateInflectionZero: "All",
}


def _gl2_conjugates(seed, per_class=1000):
    """GL(2) x GL(2) conjugates of every 2-jet normal form, entries of magnitude <= 10."""
    rng = random.Random(seed)
    out = []
    for cls in TwoJetClass:
        nf = normal_form_jet(cls, 2)
        for _ in range(per_class):
            out.append((cls, act_on_monge(random_element(rng, 10, linear_only=True), nf, 2)))
    return out


@pytest.fixture(scope="module")
def conjugates():
    return _gl2_conjugates(1)


def test_criterion_01_two_jet_round_trip(conjugates):
    failures = [(cls, f) for cls, f in conjugates if classify_2jet(f) is not cls]
    assert len(conjugates) == 7000
    assert not failures, failures[:3]


def _with_cubic(rng, f):
    def cubic():
        return Jet2(3, {(i, 3 - i): rand_q(rng) for i in range(4)})

    return MongeJet(Jet2(3, dict(f.f1.items())) + cubic(), Jet2(3, dict(f.f2.items())) + cubic())


def test_criterion_02_asymptotic_counts(conjugates):
    bad = [(cls, f) for cls, f in conjugates if asymptotic_directions(f).count != COUNT[cls]]
    assert not bad, bad[:3]
    rng = random.Random(2)
    hyperbolic = [f for cls, f in conjugates if cls is TwoJetClass.Hyperbolic][:100]
    checked = 0
    for f in hyperbolic:
        f = _with_cubic(rng, f)
        dirs = asymptotic_directions(f).directions
        assert len(dirs) == 2
        for d in dirs:
            for p in sample_view_points(d, 5, seed=checked):
                label = classify_A3(project(f, p, 3))
                assert label not in (MondType.Regular, MondType.S0), (f, d, p, label)
            checked += 1
    assert checked == 200


def test_criterion_03_g5_invariance():
    rng = random.Random(3)
    failures = []
    for stratum in STRATA:
        for _ in range(200):
            f = random_stratum_jet(stratum, rng)
            g = act_on_monge(random_element(rng, 3), f, 4)
            if classify_stratum(f) is not stratum or classify_stratum(g) is not stratum:
                failures.append((stratum, f))
    assert not failures, failures[:3]


# criterion 4 ------------------------------------------------------------------

PRENORMAL = ([(3, 0), (2, 1)], [(3, 0), (2, 1)])


def _union(*shapes):
    return tuple(sorted({m for s in shapes for m in s[k]}) for k in (0, 1))


def _h_quartic_params(g):
    # solves b04 = a40 = 0 for the kernel element of the H normal form
    s = -g.b(0, 4) / g.a(0, 3)
    return s, g.a(4, 0) + s * s


def _p_quartic_params(g):
    gamma, lam = g.b(0, 3), g.a(0, 4)
    a13, a22, a31, a40 = g.a(1, 3), g.a(2, 2), g.a(3, 1), g.a(4, 0)
    q = -a13 / lambda_invariant(gamma, lam)
    p1 = -6 * a13 * q - 2 * a22 - 18 * gamma**2 * q**2 + 48 * gamma * q**2 - 12 * lam * q**2 - 17 * q**2
    p4 = (
        -18 * a13 * gamma * q**2 + 15 * a13 * q**2 - 6 * a22 * gamma * q + 6 * a22 * q + a31
        - 54 * gamma**3 * q**3 + 180 * gamma**2 * q**3 - 36 * gamma * lam * q**3 - 155 * gamma * q**3
        + 28 * lam * q**3 + 37 * q**3
    )
    p3 = (
        9 * a13**2 * q**2 + 6 * a13 * a22 * q + 54 * a13 * gamma**2 * q**3 - 144 * a13 * gamma * q**3
        + 36 * a13 * lam * q**3 + 52 * a13 * q**3 + a22**2 + 18 * a22 * gamma**2 * q**2
        - 48 * a22 * gamma * q**2 + 12 * a22 * lam * q**2 + 18 * a22 * q**2 + a31 * q + a40
        + 81 * gamma**4 * q**4 - 432 * gamma**3 * q**4 + 108 * gamma**2 * lam * q**4 + 729 * gamma**2 * q**4
        - 288 * gamma * lam * q**4 - 410 * gamma * q**4 + 36 * lam**2 * q**4 + 103 * lam * q**4 + 73 * q**4
    )
    return gamma, q, p1, p3, p4


def _stages(stratum):
    """(case name, map builder, cumulative shape after the stage) for one stratum."""
    c, q = CUBIC_SHAPES[stratum], QUARTIC_SHAPES[stratum]
    cq = _union(c, q)
    if stratum is Stratum.Pi_E:
        return [("elliptic cubic", elliptic_cubic_map, c), ("elliptic quartic", elliptic_quartic_map, cq)]
    if stratum in (Stratum.Pi_S, Stratum.Pi_B, Stratum.Pi_2B):
        return [("hyperbolic cubic", hyperbolic_cubic_map, c), ("hyperbolic quartic", hyperbolic_quartic_map, cq)]
    if stratum is Stratum.Pi_H:
        return [
            ("parabolic prenormal", parabolic_cubic_prenormal_map, PRENORMAL),
            ("parabolic H cubic", parabolic_h_cubic_map, c),
            ("parabolic H quartic", lambda g: parabolic_h_quartic_map(*_h_quartic_params(g)), cq),
        ]
    if stratum is Stratum.Pi_P:
        return [
            ("parabolic prenormal", parabolic_cubic_prenormal_map, PRENORMAL),
            ("parabolic P cubic", parabolic_p_cubic_map, c),
            ("parabolic P quartic", lambda g: parabolic_p_quartic_map(*_p_quartic_params(g)), cq),
        ]
    if stratum is Stratum.Pi_I_plus:
        return [("inflection+ cubic", inflection_plus_cubic_map, c), ("inflection+ quartic", inflection_plus_quartic_map, cq)]
    return [("inflection- cubic", inflection_minus_cubic_map, c), ("inflection- quartic", inflection_minus_quartic_map, cq)]


def _stage_ready(stratum, g):
    if stratum is Stratum.Pi_I_plus:
        return g.b(3, 0) != g.b(1, 2)
    if stratum is Stratum.Pi_I_minus:
        return g.b(0, 3) != 0
    return True


def test_criterion_04_transform_fidelity():
    rng = random.Random(4)
    families = [
        [Stratum.Pi_E],
        [Stratum.Pi_S, Stratum.Pi_B, Stratum.Pi_2B],
        [Stratum.Pi_H],
        [Stratum.Pi_P],
        [Stratum.Pi_I_plus],
        [Stratum.Pi_I_minus],
    ]
    counts, failures = {}, []
    for family in families:
        done = 0
        while done < 100:
            stratum = family[done % len(family)]
            g = prepare(random_stratum_jet(stratum, rng)).jet
            if not _stage_ready(stratum, g):
                continue
            for name, build, (z1, z2) in _stages(stratum):
                psi = build(g)
                h = act_on_monge(psi, g, 4)
                left = [m for m in z1 if h.a(*m) != 0] + [m for m in z2 if h.b(*m) != 0]
                if left or not residual_check(psi, g, h, 4):
                    failures.append((name, g, left))
                counts[name] = counts.get(name, 0) + 1
                g = h
            done += 1
    assert all(n >= 100 for n in counts.values()) and len(counts) == 13, counts
    assert not failures, failures[:3]


def test_criterion_05_normal_form_shape():
    rng = random.Random(5)
    failures, inexact = [], 0
    for stratum in STRATA:
        z1, z2 = required_zero(stratum)
        lead1, lead2 = LEADING[stratum]
        for _ in range(100):
            f = random_stratum_jet(stratum, rng)
            report = reduce_normal_form(f)
            g = report.normal_form
            # required-absent monomials are exactly zero even when the final scaling is irrational
            bad = [m for m in z1 if g.a(*m) != 0] + [m for m in z2 if g.b(*m) != 0]
            if report.exact:
                bad += [m for m, v in lead1.items() if g.a(*m) != v]
                bad += [m for m, v in lead2.items() if g.b(*m) != v]
                ok = residual_check(report.transform, f, g, 4)
            else:
                inexact += 1
                bad += [m for m, v in lead1.items() if abs(g.a(*m) - v) > 1e-12]
                bad += [m for m, v in lead2.items() if abs(g.b(*m) - v) > 1e-12]
                pre = report.prescaling_form
                bad += [m for m in z1 if pre.a(*m) != 0] + [m for m in z2 if pre.b(*m) != 0]
                ok = residual_check(report.prescaling_transform, f, pre, 4) and report.verify()
            if bad or not ok or report.stratum is not stratum:
                failures.append((stratum, f, bad))
    print(f"\ncriterion 5: {inexact} of {100 * len(STRATA)} reductions needed an irrational final scaling")
    assert not failures, failures[:3]


# criterion 6 ------------------------------------------------------------------


def _cubic(rng, zero_prob, names):
    """Random cubic parts; each named coefficient is zeroed with probability ``zero_prob``."""
    a = {(i, 3 - i): rand_q(rng) or Fraction(1) for i in range(4)}
    b = {(i, 3 - i): rand_q(rng) or Fraction(1) for i in range(4)}
    for slot, m in names:
        if rng.random() < zero_prob:
            (a if slot == "a" else b)[m] = Fraction(0)
    return a, b


def _jet_with(q1, q2, a, b, rng):
    quartic = lambda: {(i, 4 - i): rand_q(rng) for i in range(5)}  # noqa: E731
    return monge(4, {**q1, **a, **quartic()}, {**q2, **b, **quartic()})


def _cusp_label(a03, a12, b03):
    if a03 != 0:
        return MondType.H
    if a12 != 0:
        return MondType.P if b03 != 0 else MondType.R
    return MondType.T if b03 != 0 else MondType.U


def _finite_axis_points(rng, axis, n):
    pts = []
    while len(pts) < n:
        t = rand_q(rng)
        if t != 0:
            pts.append(ViewPoint.finite(t, 0, 0, 0) if axis == 0 else ViewPoint.finite(0, t, 0, 0))
    return pts


def test_criterion_06_projection_predicates():
    rng = random.Random(6)
    trials = {"hyperbolic": 0, "parabolic": 0, "inflection": 0}
    failures = []

    # j2 f = (x^2, y^2): S iff a03 != 0 on x = 0, S iff b30 != 0 on y = 0
    for _ in range(500):
        a, b = _cubic(rng, 0.4, [("a", (0, 3)), ("b", (3, 0))])
        f = _jet_with({(2, 0): 1}, {(0, 2): 1}, a, b, rng)
        for direction, coef in ((Direction(0, 1), a[(0, 3)]), (Direction(1, 0), b[(3, 0)])):
            want = MondType.S if coef != 0 else MondType.B
            for p in sample_view_points(direction, 4, seed=rng.randrange(10**6)):
                got = classify_A3(project(f, p, 3))
                if got is not want:
                    failures.append(("hyperbolic", f, p, got, want))
        trials["hyperbolic"] += 1

    # j2 f = (x^2, xy): H, P, R, T, U from a03, a12, b03 on x = 0
    for _ in range(500):
        a, b = _cubic(rng, 0.45, [("a", (0, 3)), ("a", (1, 2)), ("b", (0, 3))])
        f = _jet_with({(2, 0): 1}, {(1, 1): 1}, a, b, rng)
        want = _cusp_label(a[(0, 3)], a[(1, 2)], b[(0, 3)])
        for p in sample_view_points(Direction(0, 1), 4, seed=rng.randrange(10**6)):
            got = classify_A3(project(f, p, 3))
            if got is not want:
                failures.append(("parabolic", f, p, got, want))
        trials["parabolic"] += 1

    # j2 f = (xy, 0): the special centres are the finite points of y = 0;
    # elsewhere on the plane only S or B occur
    for _ in range(500):
        a, b = _cubic(rng, 0.45, [("a", (3, 0)), ("b", (3, 0)), ("b", (2, 1))])
        f = _jet_with({(1, 1): 1}, {}, a, b, rng)
        if b[(3, 0)] != 0:
            want = MondType.H
        elif b[(2, 1)] != 0:
            want = MondType.P if a[(3, 0)] != 0 else MondType.R
        else:
            want = MondType.T if a[(3, 0)] != 0 else MondType.U
        for p in _finite_axis_points(rng, 0, 3):
            got = classify_A3(project(f, p, 3))
            if got is not want:
                failures.append(("inflection", f, p, got, want))
        for _ in range(2):
            u, v = rand_q(rng) or Fraction(1), rand_q(rng) or Fraction(2)
            got = classify_A3(project(f, ViewPoint.finite(u, v, 0, 0), 3))
            if got not in (MondType.S, MondType.B, want):
                failures.append(("inflection", f, (u, v), got, "S/B"))
        trials["inflection"] += 1

    assert min(trials.values()) >= 500
    assert not failures, failures[:3]


def test_criterion_07_projection_columns():
    bad = []
    for stratum in STRATA:
        report = verify_projection_column(REPRESENTATIVES[stratum], points_per_line=20)
        per_line = {}
        for s in report.samples:
            per_line[s.direction] = per_line.get(s.direction, 0) + 1
        assert stratum is Stratum.Pi_E or min(per_line.values()) >= 20
        if report.stratum is not stratum or not report.complete:
            bad.append(report.describe())
    assert not bad, bad


def test_criterion_08_mond_classifier():
    types = [MondType.S0, MondType.S, MondType.B, MondType.H, MondType.P, MondType.R, MondType.T, MondType.U]
    rng = random.Random(8)
    failures = []
    for t in types:
        g = normal_form(t)
        assert classify_A3(g) is t
        for _ in range(100):
            h = a3_conjugate(g, rng)
            if classify_A3(h) is not t:
                failures.append((t, h))
    assert not failures, failures[:3]
    assert all(a3_distinguish(normal_form(s), normal_form(t)) for s, t in combinations(types, 2))


def test_criterion_09_lambda_obstruction():
    def p_jet(lam):
        # gamma = 1: 6 - 15 + 5 + 4 lambda vanishes at lambda = 1
        return monge(4, {(2, 0): 1, (1, 2): 1, (0, 4): lam, (1, 3): 1, (2, 2): 2}, {(1, 1): 1, (0, 3): 1})

    assert lambda_invariant(1, 1) == 0
    with pytest.raises(LambdaObstruction):
        reduce_normal_form(p_jet(Fraction(1)))
    rng = random.Random(9)
    psi = random_element(rng, 3)
    with pytest.raises(LambdaObstruction):
        reduce_normal_form(act_on_monge(psi, p_jet(Fraction(1)), 4))
    for lam in (1 + Fraction(1, 1000), 1 - Fraction(1, 1000)):
        report = reduce_normal_form(p_jet(lam))
        assert report.stratum is Stratum.Pi_P and report.verify()
        assert report.moduli["Lambda"] == lambda_invariant(1, lam)


# criterion 10 -----------------------------------------------------------------


def _graph_arrays(surface):
    """Coefficient matrices of the two graph functions (independent of the library's jets)."""
    mats = []
    for comp in surface.components[2:]:
        deg = max(i + j for i, j in comp) + 1
        m = np.zeros((deg, deg))
        for (i, j), c in comp.items():
            m[i, j] = float(c)
        mats.append(m)
    return mats


def _derivs(m, u, v, order):
    from numpy.polynomial import polynomial as P

    out = {}
    for i in range(order + 1):
        d = P.polyder(m, i, axis=0) if i else m
        for j in range(order + 1 - i):
            dd = P.polyder(d, j, axis=1) if j else d
            out[(i, j)] = P.polyval2d(u, v, dd)
    return out


def _oracle_predicate(mats, u, v):
    """S/B predicate for the asymptotic direction nearest the u-axis, oriented with e_u > 0."""
    d = [_derivs(m, u, v, 3) for m in mats]
    H = [np.array([[k[(2, 0)], k[(1, 1)]], [k[(1, 1)], k[(0, 2)]]]) for k in d]

    def quad(k, e):
        return 0.5 * e @ H[k] @ e

    def cubic(k, e):
        x, y = e
        t = d[k]
        return (t[(3, 0)] * x**3 + 3 * t[(2, 1)] * x * x * y + 3 * t[(1, 2)] * x * y * y + t[(0, 3)] * y**3) / 6

    # asymptotic directions: det[H1 e, H2 e] is a binary quadratic form in e
    def delta(e):
        return np.linalg.det(np.column_stack([H[0] @ e, H[1] @ e]))

    A, C = delta(np.array([1.0, 0.0])), delta(np.array([0.0, 1.0]))
    B = delta(np.array([1.0, 1.0])) - A - C
    roots = [np.arctan2(r.real, 1.0) for r in np.roots([C, B, A]) if abs(r.imag) < 1e-12]  # slopes y / x
    if abs(C) < 1e-15:
        roots.append(np.pi / 2)
    a = min(roots, key=abs)
    e = np.array([np.cos(a), np.sin(a)])
    return quad(1, e) * cubic(0, e) - quad(0, e) * cubic(1, e)


def test_criterion_10_scanner_end_to_end():
    surface = demo_surface()
    start = time.perf_counter()
    result = scan(surface, GridSpec(100, 100))
    elapsed = time.perf_counter() - start
    print(f"\ncriterion 10: 100x100 scan took {elapsed:.1f} s")
    assert elapsed < 60
    assert not result.failures

    rows = result.crossings_along_rows()
    mats = _graph_arrays(surface)
    (u0, u1), _ = surface.domain
    us = [r.u for r in result.records if r.j == 0]
    misses = []
    for j in range(100):
        v = result.at(0, j).v
        g = lambda u: _oracle_predicate(mats, u, v)  # noqa: E731
        grid = np.linspace(float(u0), float(u1), 201)
        vals = [g(u) for u in grid]
        roots = [brentq(g, grid[k], grid[k + 1]) for k in range(200) if vals[k] * vals[k + 1] < 0]
        edges = rows.get(j, [])
        if len(roots) != 1 or len(edges) != 1:
            misses.append((j, roots, edges))
            continue
        i = edges[0]
        if not (us[i] <= roots[0] <= us[i + 1]):
            misses.append((j, roots, edges))
        # Pi_S on both sides of the located Pi_B curve
        if result.at(0, j).stratum != "Pi_S" or result.at(99, j).stratum != "Pi_S":
            misses.append((j, "sides"))
    assert not misses, misses[:3]
