"""Bernoulli numbers, operator series in ``ad``, exp/log, BCH and the gauge action.

Bernoulli numbers use the convention ``B_1 = -1/2``, i.e. the coefficients of
``t / (e^t - 1)``.  The other convention silently breaks the interval
differential, so there is deliberately no switch.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict

from .core import (
    Element,
    add,
    bracket,
    concat,
    linear_combination,
    require_homogeneous,
    scale,
)
from .dgl import DglContext, apply_diff, require_mc
from .errors import (
    NegativeIndex,
    NotUnipotent,
    TruncationMismatch,
    UnitTermError,
)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """``B_n`` from ``sum_{k=0}^{n} C(n+1, k) B_k = 0`` with ``B_0 = 1``."""
    if n < 0:
        raise NegativeIndex(f"Bernoulli index must be >= 0, got {n}")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2:
        return Fraction(0)
    return -sum(comb(n + 1, k) * bernoulli(k) for k in range(n)) / (n + 1)


class RationalSeries:
    """Formal power series ``sum c_n t^n`` with lazily evaluated exact coefficients."""

    def __init__(self, coefficient: Callable[[int], object], name: str = "series"):
        self._fn = coefficient
        self._cache: Dict[int, Fraction] = {}
        self.name = name

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise NegativeIndex(n)
        if n not in self._cache:
            self._cache[n] = Fraction(self._fn(n))
        return self._cache[n]

    def coefficients(self, count: int):
        return [self[n] for n in range(count)]

    def __repr__(self) -> str:
        return f"RationalSeries({self.name})"

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        return RationalSeries(lambda n: self[n] + other[n], f"({self.name} + {other.name})")

    def __sub__(self, other: "RationalSeries") -> "RationalSeries":
        return RationalSeries(lambda n: self[n] - other[n], f"({self.name} - {other.name})")

    def __neg__(self) -> "RationalSeries":
        return RationalSeries(lambda n: -self[n], f"-{self.name}")

    def __mul__(self, other: "RationalSeries") -> "RationalSeries":
        return RationalSeries(
            lambda n: sum(self[k] * other[n - k] for k in range(n + 1)),
            f"{self.name} * {other.name}",
        )

    def negate_argument(self) -> "RationalSeries":
        """``f(-t)``."""
        return RationalSeries(lambda n: -self[n] if n % 2 else self[n], f"{self.name}(-t)")

    def equal_to_order(self, other: "RationalSeries", order: int) -> bool:
        return all(self[n] == other[n] for n in range(order + 1))


def monomial(power: int, coeff=1) -> RationalSeries:
    return RationalSeries(lambda n: coeff if n == power else 0, f"{coeff} t^{power}")


#: e^t
EXP = RationalSeries(lambda n: Fraction(1, factorial(n)), "exp")
#: t / (e^t - 1)
BERNOULLI = RationalSeries(lambda n: bernoulli(n) / factorial(n), "t/(e^t-1)")
#: (e^t - 1) / t
EXPM1_OVER_T = RationalSeries(lambda n: Fraction(1, factorial(n + 1)), "(e^t-1)/t")
#: -t / (e^{-t} - 1)
NEG_BERNOULLI = BERNOULLI.negate_argument()
#: (e^{-t} - 1) / (-t)
NEG_EXPM1_OVER_T = EXPM1_OVER_T.negate_argument()
#: e^{-t}
NEG_EXP = EXP.negate_argument()
ZERO_SERIES = RationalSeries(lambda n: 0, "0")


def _require_ad_argument(g: Element) -> None:
    require_homogeneous(g, 0, "ad argument")
    if g.has_unit_term():
        raise UnitTermError("ad argument has a length-0 component")


def apply_ad_series(s: RationalSeries, g: Element, e: Element) -> Element:
    """``sum_n c_n ad_g^n(e)``; terminates because ``ad_g`` raises word length."""
    _require_ad_argument(g)
    if g.truncation != e.truncation:
        raise TruncationMismatch(f"orders differ: {g.truncation} vs {e.truncation}")
    pairs = []
    power = e
    n = 0
    while power:
        c = s[n]
        if c:
            pairs.append((c, power))
        power = bracket(g, power)
        n += 1
    return linear_combination(pairs, e.truncation)


def exp_element(e: Element) -> Element:
    """``exp(e)`` in the truncated tensor algebra (result contains the unit)."""
    require_homogeneous(e, 0, "exp argument")
    if e.has_unit_term():
        raise UnitTermError("exp argument has a length-0 component")
    n = e.truncation
    total = Element.unit(n)
    power = Element.unit(n)
    k = 0
    while True:
        k += 1
        power = scale(Fraction(1, k), concat(power, e))
        if not power:
            return total
        total = add(total, power)


def log_element(e: Element) -> Element:
    """``log(e)`` for ``e = 1 + u`` with ``u`` of word length >= 1."""
    require_homogeneous(e, 0, "log argument")
    if e.coefficient(()) != 1:
        raise NotUnipotent("log argument must have constant term 1")
    u = add(e, scale(-1, Element.unit(e.truncation)))
    total = Element.zero(e.truncation)
    power = Element.unit(e.truncation)
    k = 0
    while True:
        k += 1
        power = concat(power, u)
        if not power:
            return total
        total = add(total, scale(Fraction((-1) ** (k + 1), k), power))


def exp_log(e: Element, direction: str) -> Element:
    if direction == "exp":
        return exp_element(e)
    if direction == "log":
        return log_element(e)
    raise ValueError(f"direction must be 'exp' or 'log', got {direction!r}")


def bch(u: Element, v: Element) -> Element:
    """Baker-Campbell-Hausdorff product ``log(exp(u) exp(v))``."""
    if u.truncation != v.truncation:
        raise TruncationMismatch(f"orders differ: {u.truncation} vs {v.truncation}")
    for w in (u, v):
        if w.has_unit_term():
            raise UnitTermError("BCH argument has a length-0 component")
    return log_element(concat(exp_element(u), exp_element(v)))


def gauge(y: Element, z: Element, ctx: DglContext) -> Element:
    """Gauge action ``e^{ad_y}(z) - ((e^{ad_y} - 1)/ad_y)(dy)`` of degree-0 ``y`` on MC ``z``."""
    _require_ad_argument(y)
    require_homogeneous(z, -1, "gauge target")
    require_mc(ctx, z, "gauge target")
    if not y:
        return z
    return add(
        apply_ad_series(EXP, y, z),
        scale(-1, apply_ad_series(EXPM1_OVER_T, y, apply_diff(ctx, y))),
    )
