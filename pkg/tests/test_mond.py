import random
from fractions import Fraction
from itertools import combinations

import pytest

from monge4.jets import Jet2, JetMap
from monge4.mond import MondType, a3_conjugate, a3_distinguish, classify_A3, conjugate, normal_form


def m(*comps):
    return JetMap([Jet2(3, {k: Fraction(v) for k, v in c.items()}) for c in comps])


TABLE = [MondType.S, MondType.B, MondType.H, MondType.P, MondType.R, MondType.T, MondType.U]


@pytest.mark.parametrize("t", TABLE + [MondType.S0, MondType.Regular])
def test_normal_forms(t):
    assert classify_A3(normal_form(t)) is t


def test_grouped_representatives():
    assert classify_A3(m({(1, 0): 1}, {(0, 2): 1}, {(0, 3): 1, (2, 1): 1})) is MondType.S
    assert classify_A3(m({(1, 0): 1}, {(0, 2): 1}, {})) is MondType.B


def test_other():
    assert classify_A3(m({(2, 0): 1}, {(0, 2): 1}, {})) is MondType.Other
    assert classify_A3(m({(1, 0): 1}, {(0, 3): 1}, {(3, 0): 1})) is MondType.Other


@pytest.mark.parametrize("t", TABLE + [MondType.S0])
def test_stable_under_conjugation(t):
    rng = random.Random(hash(t.value) & 0xFFFF)
    g = normal_form(t)
    for _ in range(25):
        assert classify_A3(a3_conjugate(g, rng)) is t


def test_identity_conjugation():
    g = normal_form(MondType.P)
    x, y = Jet2.x(3), Jet2.y(3)
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert conjugate(g, JetMap([x, y]), ident) == g


def test_distinguish():
    assert a3_distinguish(normal_form(MondType.S), normal_form(MondType.B))
    for s, t in combinations(TABLE, 2):
        assert a3_distinguish(normal_form(s), normal_form(t))
    assert not a3_distinguish(normal_form(MondType.H), a3_conjugate(normal_form(MondType.H), 3))


def test_order_check():
    with pytest.raises(ValueError):
        classify_A3(JetMap([Jet2.x(2), Jet2.y(2), Jet2.zero(2)]))
