import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monge4.jets import (
    Jet2,
    JetError,
    JetMap,
    MongeJet,
    NotAUnit,
    OrderMismatch,
    SingularLinearPart,
    add,
    compose,
    divide_by_unit,
    invert_planar,
    jet_from_terms,
    monge_from_json,
    monge_to_json,
    mul,
    parse_coefficient,
    scale,
)
from monge4.surd import QuadSurd

from conftest import jet, random_jet

X4, Y4 = Jet2.x(4), Jet2.y(4)


def test_add_examples():
    assert add(jet(3, {(2, 0): 1}), jet(3, {(0, 2): 1})) == jet(3, {(2, 0): 1, (0, 2): 1})
    assert add(jet(3, {(2, 0): 1, (0, 2): -1}), jet(3, {(0, 2): 1})) == jet(3, {(2, 0): 1})
    assert scale(0, jet(3, {(1, 1): 7, (0, 0): 2})).is_zero()


def test_mul_examples():
    x, y = Jet2.x(3), Jet2.y(3)
    assert mul(x + y, x - y) == x * x - y * y
    one = Jet2.constant(1, 3)
    geo = one - x + x * x - x * x * x
    assert mul(one + x, geo) == one


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        add(Jet2.x(3), Jet2.x(4))
    with pytest.raises(OrderMismatch):
        mul(Jet2.x(3), Jet2.x(4))


def _convolution(a, b, order):
    out = {}
    for (i, j), u in a.items():
        for (k, l), v in b.items():
            if i + j + k + l <= order:
                out[(i + k, j + l)] = out.get((i + k, j + l), 0) + u * v
    return Jet2(order, out)


def test_mul_matches_convolution(rng):
    for _ in range(50):
        a, b = random_jet(rng, 5), random_jet(rng, 5)
        assert mul(a, b) == _convolution(a, b, 5) == mul(b, a)


def test_ring_axioms(rng):
    for order in range(7):
        a, b, c = (random_jet(rng, order) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) - b == a


def test_compose_examples():
    f = X4 * X4
    assert compose(f, (X4 + Y4 * Y4, Y4)) == X4**2 + 2 * X4 * Y4**2 + Y4**4
    g = random_jet(random.Random(1), 4)
    assert compose(g, (X4, Y4)) == g


def test_compose_rejects_constant():
    with pytest.raises(JetError):
        compose(X4, (X4 + 1, Y4))


def _expand(f, s, order):
    # term-by-term expansion with repeated products
    acc = Jet2.zero(order)
    for (i, j), c in f.items():
        term = Jet2.constant(c, order)
        for _ in range(i):
            term = term * s[0]
        for _ in range(j):
            term = term * s[1]
        acc = acc + term
    return acc


def test_compose_matches_expansion(rng):
    for _ in range(30):
        f = random_jet(rng, 4)
        s = (random_jet(rng, 4, 1), random_jet(rng, 4, 1))
        assert compose(f, s) == _expand(f, s, 4)


def test_compose_associative(rng):
    for _ in range(20):
        f = random_jet(rng, 4)
        s = JetMap([random_jet(rng, 4, 1), random_jet(rng, 4, 1)])
        t = JetMap([random_jet(rng, 4, 1), random_jet(rng, 4, 1)])
        st_ = JetMap([compose(c, t.components) for c in s])
        assert compose(f, st_.components) == compose(compose(f, s.components), t.components)


def test_invert_planar_examples():
    t = invert_planar((X4 + Y4 * Y4, Y4))
    assert t.components[0] == X4 - Y4 * Y4 and t.components[1] == Y4
    x3, y3 = Jet2.x(3), Jet2.y(3)
    t = invert_planar((x3.scale(2), y3.scale(3)))
    assert list(t) == [x3.scale(Fraction(1, 2)), y3.scale(Fraction(1, 3))]


def test_invert_planar_round_trip(rng):
    for _ in range(30):
        lin = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        if lin[0][0] * lin[1][1] - lin[0][1] * lin[1][0] == 0:
            continue
        s = [X4.scale(lin[r][0]) + Y4.scale(lin[r][1]) + random_jet(rng, 4, 2) for r in range(2)]
        t = invert_planar(s)
        assert [compose(c, t.components) for c in s] == [X4, Y4]
        assert [compose(c, s) for c in t] == [X4, Y4]


def test_invert_planar_singular():
    with pytest.raises(SingularLinearPart):
        invert_planar((X4, X4 + Y4 * Y4))


def test_divide_by_unit():
    x = Jet2.x(3)
    one = Jet2.constant(1, 3)
    assert divide_by_unit(x, one + x) == x - x * x + x * x * x
    f = random_jet(random.Random(2), 3)
    assert divide_by_unit(f, one) == f
    with pytest.raises(NotAUnit):
        divide_by_unit(f, x)


def test_divide_round_trip(rng):
    for _ in range(30):
        f = random_jet(rng, 5)
        u = random_jet(rng, 5, 1) + Jet2.constant(rng.randint(1, 4), 5)
        assert mul(divide_by_unit(f, u), u) == f


def test_truncation_consistency(rng):
    for _ in range(20):
        a, b = random_jet(rng, 5), random_jet(rng, 5)
        assert (a * b).truncate(4) == a.truncate(4) * b.truncate(4)
        s = (random_jet(rng, 5, 1), random_jet(rng, 5, 1))
        assert compose(a, s).truncate(4) == compose(a.truncate(4), [c.truncate(4) for c in s])


def test_monge_validation_and_json():
    with pytest.raises(JetError):
        MongeJet(Jet2.x(3), Jet2.zero(3))
    f = MongeJet(jet(4, {(2, 0): 1, (0, 3): Fraction(-2, 7)}), jet(4, {(1, 1): 3}))
    data = monge_to_json(f)
    assert sorted(data["f1"]) == [[0, 3, "-2/7"], [2, 0, "1"]]
    assert monge_from_json(data) == f
    with pytest.raises(JetError):
        jet_from_terms(3, [[1, 1, "1"], [1, 1, "2"]])


def test_parse_coefficient_modes():
    assert parse_coefficient("3/4") == Fraction(3, 4)
    assert parse_coefficient("0.25") == Fraction(1, 4)
    assert parse_coefficient("1+2*sqrt(3)") == QuadSurd(1, 2, 3)
    assert parse_coefficient("0.1", "float") == 0.1
    for bad in ("nan", "inf", "pi", "1e400x"):
        with pytest.raises(JetError):
            parse_coefficient(bad)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.fractions(max_denominator=9)), max_size=8))
def test_json_round_trip_property(terms):
    seen, coeffs = set(), {}
    for i, j, v in terms:
        if (i, j) not in seen:
            seen.add((i, j))
            coeffs[(i, j)] = v
    f = Jet2(6, coeffs)
    from monge4.jets import jet_to_terms

    assert jet_from_terms(6, jet_to_terms(f)) == f
