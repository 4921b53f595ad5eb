import random
from fractions import Fraction

import pytest

from monge4.jets import Jet2, MongeJet


def jet(order, terms):
    return Jet2(order, {k: Fraction(v) for k, v in terms.items()})


def monge(order, t1, t2):
    return MongeJet(jet(order, t1), jet(order, t2))


def rand_q(rng, bound=5):
    return Fraction(rng.randint(-bound * 3, bound * 3), rng.randint(1, 3))


def random_jet(rng, order, min_degree=0, density=0.7, bound=5):
    terms = {}
    for d in range(min_degree, order + 1):
        for i in range(d + 1):
            if rng.random() < density:
                terms[(i, d - i)] = rand_q(rng, bound)
    return Jet2(order, terms)


def random_monge(rng, order=4, bound=5):
    return MongeJet(random_jet(rng, order, 2, bound=bound), random_jet(rng, order, 2, bound=bound))


@pytest.fixture
def rng():
    return random.Random(20240601)


# one PASS/FAIL line per acceptance criterion in the terminal summary

_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.failed or (report.when == "call" and name not in _CRITERIA):
        _CRITERIA[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        number, _, title = name[len("test_criterion_"):].partition("_")
        terminalreporter.write_line(f"criterion {int(number):2d}  {_CRITERIA[name]}  {title.replace('_', ' ')}")
