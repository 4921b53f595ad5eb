"""Truncated bivariate power series ("jets") with exact coefficients.

A :class:`Jet2` of order ``k`` is a polynomial in ``x, y`` whose monomials
``x**i * y**j`` satisfy ``i + j <= k``; everything above the order is
unknown and discarded.  Coefficients are :class:`fractions.Fraction` in
exact mode, :class:`monge4.surd.QuadSurd` after a 2-jet normalization
that needed a square root, or ``float`` in the scanner's floating mode.

Every binary operation checks that the orders agree; mixing orders raises
:class:`OrderMismatch` instead of silently truncating.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .surd import QuadSurd

Exponent = tuple[int, int]


class JetError(ValueError):
    """Base class for jet algebra errors."""


class OrderMismatch(JetError):
    pass


class NotAUnit(JetError):
    """Division by a jet whose constant term vanishes."""


class SingularLinearPart(JetError):
    pass


def parse_coefficient(text, mode: str = "exact"):
    """Parse a JSON coefficient (string or number) for the given mode."""
    if mode == "float":
        if isinstance(text, str) and "/" in text:
            num, den = text.split("/")
            return float(num) / float(den)
        return float(text)
    if isinstance(text, float):
        raise JetError(f"exact mode rejects floating coefficient {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    text = str(text).strip()
    if "sqrt(" in text:
        return _parse_surd(text)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise JetError(f"not an exact rational: {text!r}") from exc


def _parse_surd(text: str):
    # format written by format_coefficient: "a+b*sqrt(d)"
    head, _, rest = text.partition("*sqrt(")
    d = int(rest.rstrip(")"))
    split = max(head.rfind("+"), head.rfind("-", 1))
    a, b = head[:split], head[split:]
    return QuadSurd.make(Fraction(a), Fraction(b.lstrip("+")), d)


def format_coefficient(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _is_zero(value) -> bool:
    return not isinstance(value, QuadSurd) and value == 0


class Jet2:
    """An immutable truncated polynomial in ``x, y``."""

    __slots__ = ("order", "_c")

    def __init__(self, order: int, coeffs: Mapping[Exponent, object] | None = None):
        if order < 0:
            raise JetError("order must be nonnegative")
        self.order = order
        c = {}
        for (i, j), v in (coeffs or {}).items():
            if i < 0 or j < 0:
                raise JetError(f"negative exponent {(i, j)}")
            if i + j > order:
                raise JetError(f"monomial x^{i} y^{j} exceeds order {order}")
            if not _is_zero(v):
                c[(i, j)] = v
        self._c = c

    @classmethod
    def _raw(cls, order, c):
        jet = cls.__new__(cls)
        jet.order = order
        jet._c = c
        return jet

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, order: int) -> "Jet2":
        return cls(order)

    @classmethod
    def constant(cls, value, order: int) -> "Jet2":
        return cls(order, {(0, 0): value})

    @classmethod
    def x(cls, order: int) -> "Jet2":
        return cls(order, {(1, 0): Fraction(1)})

    @classmethod
    def y(cls, order: int) -> "Jet2":
        return cls(order, {(0, 1): Fraction(1)})

    @classmethod
    def from_terms(cls, order: int, terms: Iterable[tuple[int, int, object]]) -> "Jet2":
        """Build from ``(i, j, coeff)`` triples; terms above the order are dropped."""
        c: dict[Exponent, object] = {}
        for i, j, v in terms:
            if i + j <= order:
                c[(i, j)] = c.get((i, j), 0) + v
        return cls(order, c)

    # access -----------------------------------------------------------
    def __getitem__(self, key: Exponent):
        return self._c.get(key, 0)

    def coeff(self, i: int, j: int):
        return self._c.get((i, j), 0)

    def items(self) -> Iterator[tuple[Exponent, object]]:
        return iter(sorted(self._c.items()))

    def support(self) -> set[Exponent]:
        return set(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def constant_term(self):
        return self._c.get((0, 0), 0)

    def homogeneous(self, degree: int) -> "Jet2":
        return Jet2._raw(self.order, {k: v for k, v in self._c.items() if sum(k) == degree})

    def truncate(self, order: int) -> "Jet2":
        """Drop monomials above ``order`` (which may not exceed the current order)."""
        if order > self.order:
            raise OrderMismatch(f"cannot raise order {self.order} to {order}")
        return Jet2._raw(order, {k: v for k, v in self._c.items() if sum(k) <= order})

    def with_order(self, order: int) -> "Jet2":
        """Reinterpret at another order (raising keeps the polynomial as is)."""
        return Jet2._raw(order, {k: v for k, v in self._c.items() if sum(k) <= order})

    def without_constant(self) -> "Jet2":
        return Jet2._raw(self.order, {k: v for k, v in self._c.items() if k != (0, 0)})

    def map_coefficients(self, fn) -> "Jet2":
        return Jet2(self.order, {k: fn(v) for k, v in self._c.items()})

    def min_degree(self) -> int | None:
        return min((i + j for i, j in self._c), default=None)

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Jet2"):
        if not isinstance(other, Jet2):
            raise TypeError(f"expected Jet2, got {type(other).__name__}")
        if other.order != self.order:
            raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")

    def __add__(self, other):
        if not isinstance(other, Jet2):
            return self + Jet2.constant(other, self.order)
        self._check(other)
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, 0) + v
            if _is_zero(s):
                c.pop(k, None)
            else:
                c[k] = s
        return Jet2._raw(self.order, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet2._raw(self.order, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, Jet2):
            return self + Jet2.constant(-other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "Jet2":
        if _is_zero(factor):
            return Jet2.zero(self.order)
        c = {}
        for k, v in self._c.items():
            s = v * factor
            if not _is_zero(s):
                c[k] = s
        return Jet2._raw(self.order, c)

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return self.scale(other)
        self._check(other)
        order = self.order
        c: dict[Exponent, object] = {}
        for (i1, j1), v1 in self._c.items():
            room = order - i1 - j1
            for (i2, j2), v2 in other._c.items():
                if i2 + j2 <= room:
                    k = (i1 + i2, j1 + j2)
                    c[k] = c.get(k, 0) + v1 * v2
        return Jet2._raw(order, {k: v for k, v in c.items() if not _is_zero(v)})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> "Jet2":
        result = Jet2.constant(Fraction(1), self.order)
        for _ in range(n):
            result = result * self
        return result

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return divide_by_unit(self, other)
        return self.scale(Fraction(1, other) if isinstance(other, int) else 1 / other)

    def __eq__(self, other):
        if not isinstance(other, Jet2):
            return NotImplemented
        return self.order == other.order and self._c == other._c

    def __hash__(self):
        return hash((self.order, frozenset(self._c.items())))

    def __call__(self, x, y):
        """Evaluate the polynomial at a point."""
        total = 0
        for (i, j), v in self._c.items():
            total = total + v * x**i * y**j
        return total

    def __repr__(self):
        return f"Jet2({self.order}, {dict(self.items())!r})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for (i, j), v in sorted(self._c.items(), key=lambda kv: (sum(kv[0]), -kv[0][0])):
            mono = "*".join(
                p for p in ((f"x^{i}" if i > 1 else "x" if i else ""),
                            (f"y^{j}" if j > 1 else "y" if j else "")) if p
            )
            parts.append(f"({v})*{mono}" if mono else f"({v})")
        return " + ".join(parts)


def add(a: Jet2, b: Jet2) -> Jet2:
    return a + b


def scale(c, a: Jet2) -> Jet2:
    return a.scale(c)


def mul(a: Jet2, b: Jet2) -> Jet2:
    return a * b


def unit_inverse(u: Jet2) -> Jet2:
    """Multiplicative inverse of a jet with nonzero constant term."""
    u0 = u.constant_term()
    if _is_zero(u0):
        raise NotAUnit("constant term vanishes")
    inv0 = 1 / u0 if not isinstance(u0, int) else Fraction(1, u0)
    v = u.without_constant().scale(inv0)  # u = u0 (1 + v)
    result = Jet2.constant(Fraction(1), u.order)
    term = Jet2.constant(Fraction(1), u.order)
    for _ in range(u.order):
        term = -(term * v)
        if term.is_zero():
            break
        result = result + term
    return result.scale(inv0)


def divide_by_unit(f: Jet2, u: Jet2) -> Jet2:
    """``f / u`` truncated at the common order; ``u(0, 0)`` must be nonzero."""
    f._check(u)
    return f * unit_inverse(u)


def _powers(s: Jet2, n: int) -> list[Jet2]:
    out = [Jet2.constant(Fraction(1), s.order)]
    for _ in range(n):
        out.append(out[-1] * s)
    return out


def compose(f: Jet2, s: Sequence[Jet2]) -> Jet2:
    """``f(s[0](x, y), s[1](x, y))`` for a substitution without constant terms.

    ``f`` may have a constant term; the substitution may not.
    """
    s1, s2 = s
    order = s1.order
    if s2.order != order or f.order < 0:
        raise OrderMismatch("substitution components have different orders")
    if f.order != order:
        raise OrderMismatch(f"orders differ: {f.order} vs {order}")
    if not _is_zero(s1.constant_term()) or not _is_zero(s2.constant_term()):
        raise JetError("substituted map has a nonzero constant part")
    degree = max((i + j for i, j in f._c), default=0)
    p1 = _powers(s1, min(degree, order))
    p2 = _powers(s2, min(degree, order))
    c: dict[Exponent, object] = {}
    for (i, j), v in f._c.items():
        if i + j > order:
            continue
        for k, w in (p1[i] * p2[j])._c.items():
            c[k] = c.get(k, 0) + v * w
    return Jet2._raw(order, {k: v for k, v in c.items() if not _is_zero(v)})


class JetMap:
    """A tuple of 2, 3 or 4 jets of the same order: a jet of a map from the plane."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Jet2]):
        comps = tuple(components)
        if not 2 <= len(comps) <= 4:
            raise JetError("a jet map has 2, 3 or 4 components")
        orders = {c.order for c in comps}
        if len(orders) != 1:
            raise OrderMismatch(f"components have orders {sorted(orders)}")
        self.components = comps

    @property
    def order(self) -> int:
        return self.components[0].order

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i) -> Jet2:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        return isinstance(other, JetMap) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"JetMap({list(self.components)!r})"

    def linear_matrix(self) -> list[list]:
        """Differential at the origin, one row per component."""
        return [[c.coeff(1, 0), c.coeff(0, 1)] for c in self.components]

    def compose(self, s: Sequence[Jet2]) -> "JetMap":
        """Precompose every component with the planar substitution ``s``."""
        return JetMap([compose(c, s) for c in self.components])

    def truncate(self, order: int) -> "JetMap":
        return JetMap([c.truncate(order) for c in self.components])

    @classmethod
    def identity(cls, order: int) -> "JetMap":
        return cls([Jet2.x(order), Jet2.y(order)])


def compose_maps(s: JetMap, t: JetMap) -> JetMap:
    """The planar composite ``s o t``."""
    return s.compose(t.components)


def invert_planar(s: JetMap | Sequence[Jet2]) -> JetMap:
    """Inverse of a planar jet diffeomorphism fixing the origin."""
    s = s if isinstance(s, JetMap) else JetMap(s)
    if len(s) != 2:
        raise JetError("invert_planar needs a 2-component map")
    order = s.order
    for c in s:
        if not _is_zero(c.constant_term()):
            raise JetError("map does not fix the origin")
    (a, b), (c, d) = s.linear_matrix()
    det = a * d - b * c
    if _is_zero(det):
        raise SingularLinearPart("linear part is not invertible")
    ia, ib, ic, id_ = d / det, -b / det, -c / det, a / det
    x, y = Jet2.x(order), Jet2.y(order)
    lin = [x.scale(a) + y.scale(b), x.scale(c) + y.scale(d)]
    nonlin = [s[0] - lin[0], s[1] - lin[1]]
    t = [x.scale(ia) + y.scale(ib), x.scale(ic) + y.scale(id_)]
    # t = L^{-1} (id - N o t); each pass fixes one more degree
    for _ in range(order - 1):
        n1 = x - compose(nonlin[0], t)
        n2 = y - compose(nonlin[1], t)
        t = [n1.scale(ia) + n2.scale(ib), n1.scale(ic) + n2.scale(id_)]
    return JetMap(t)


class MongeJet:
    """A Monge form ``(z, w) = (f1(x, y), f2(x, y))`` with vanishing 1-jet."""

    __slots__ = ("f1", "f2")

    def __init__(self, f1: Jet2, f2: Jet2):
        if f1.order != f2.order:
            raise OrderMismatch(f"orders differ: {f1.order} vs {f2.order}")
        for name, f in (("f1", f1), ("f2", f2)):
            if any(i + j < 2 for i, j in f.support()):
                raise JetError(f"{name} has a nonzero constant or linear part")
        self.f1 = f1
        self.f2 = f2

    @property
    def order(self) -> int:
        return self.f1.order

    @classmethod
    def from_dicts(cls, order: int, f1: Mapping[Exponent, object], f2: Mapping[Exponent, object]):
        return cls(Jet2(order, _exact(f1)), Jet2(order, _exact(f2)))

    def truncate(self, order: int) -> "MongeJet":
        return MongeJet(self.f1.truncate(order), self.f2.truncate(order))

    def with_order(self, order: int) -> "MongeJet":
        return MongeJet(self.f1.with_order(order), self.f2.with_order(order))

    def swapped(self) -> "MongeJet":
        """Exchange x with y and z with w."""
        return MongeJet(_swap_xy(self.f2), _swap_xy(self.f1))

    def a(self, i: int, j: int):
        return self.f1.coeff(i, j)

    def b(self, i: int, j: int):
        return self.f2.coeff(i, j)

    def map_coefficients(self, fn) -> "MongeJet":
        return MongeJet(self.f1.map_coefficients(fn), self.f2.map_coefficients(fn))

    def __iter__(self):
        return iter((self.f1, self.f2))

    def __eq__(self, other):
        return isinstance(other, MongeJet) and self.f1 == other.f1 and self.f2 == other.f2

    def __hash__(self):
        return hash((self.f1, self.f2))

    def __repr__(self):
        return f"MongeJet(f1={self.f1}, f2={self.f2}, order={self.order})"


def _exact(d):
    return {k: (Fraction(v) if isinstance(v, (int, str)) else v) for k, v in d.items()}


def _swap_xy(f: Jet2) -> Jet2:
    return Jet2._raw(f.order, {(j, i): v for (i, j), v in f._c.items()})


# JSON ---------------------------------------------------------------------

SCHEMA_VERSION = 1


def jet_to_terms(f: Jet2) -> list[list]:
    return [[i, j, format_coefficient(v)] for (i, j), v in f.items()]


def jet_from_terms(order: int, terms, mode: str = "exact") -> Jet2:
    seen = set()
    coeffs = {}
    for entry in terms:
        i, j, v = entry
        if (i, j) in seen:
            raise JetError(f"duplicate exponent {(i, j)}")
        seen.add((i, j))
        coeffs[(int(i), int(j))] = parse_coefficient(v, mode)
    return Jet2(order, coeffs)


def monge_to_json(f: MongeJet) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "order": f.order,
        "f1": jet_to_terms(f.f1),
        "f2": jet_to_terms(f.f2),
    }


def monge_from_json(data: Mapping, mode: str = "exact") -> MongeJet:
    order = int(data["order"])
    return MongeJet(
        jet_from_terms(order, data.get("f1", []), mode),
        jet_from_terms(order, data.get("f2", []), mode),
    )


def jetmap_to_json(g: JetMap) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "order": g.order,
        "components": [jet_to_terms(c) for c in g],
    }


def jetmap_from_json(data: Mapping, mode: str = "exact") -> JetMap:
    order = int(data["order"])
    return JetMap([jet_from_terms(order, c, mode) for c in data["components"]])
