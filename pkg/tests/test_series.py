from fractions import Fraction
from math import factorial

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import homogeneous_elements, small_rationals
from lsinterval.core import Element, Generator, bracket, concat, scale
from lsinterval.dgl import free_context
from lsinterval.errors import NegativeIndex, NotMaurerCartan, NotUnipotent, UnitTermError
from lsinterval.interval import build_interval
from lsinterval.series import (
    BERNOULLI,
    EXP,
    EXPM1_OVER_T,
    NEG_BERNOULLI,
    NEG_EXP,
    NEG_EXPM1_OVER_T,
    ZERO_SERIES,
    apply_ad_series,
    bch,
    bernoulli,
    exp_element,
    exp_log,
    gauge,
    log_element,
    monomial,
)

XG, YG, WG = Generator("x", 0), Generator("y", 0), Generator("w", 0)


def bernoulli_by_division(count):
    # t/(e^t - 1) = 1 / ((e^t - 1)/t), inverted term by term
    d = [Fraction(1, factorial(k + 1)) for k in range(count)]
    q = []
    for n in range(count):
        q.append((Fraction(int(n == 0)) - sum(d[k] * q[n - k] for k in range(1, n + 1))) / d[0])
    return [q[n] * factorial(n) for n in range(count)]


def test_bernoulli_examples():
    assert bernoulli(0) == 1
    assert [bernoulli(n) for n in range(1, 5)] == [
        Fraction(-1, 2), Fraction(1, 6), Fraction(0), Fraction(-1, 30)
    ]
    assert all(bernoulli(2 * k + 1) == 0 for k in range(1, 6))
    with pytest.raises(NegativeIndex):
        bernoulli(-1)


def test_bernoulli_matches_division_and_sympy():
    ref = bernoulli_by_division(31)
    assert [bernoulli(n) for n in range(31)] == ref
    # sympy uses B_1 = +1/2; compare the even ones
    for n in range(0, 31, 2):
        assert bernoulli(n) == Fraction(str(sympy.bernoulli(n)))


def test_series_identities():
    # -t/(e^{-t} - 1) = t + t/(e^t - 1)
    assert NEG_BERNOULLI.equal_to_order(monomial(1) + BERNOULLI, 30)
    # ((e^{-t} - 1)/(-t)) (t/(e^t - 1)) = e^{-t}
    assert (NEG_EXPM1_OVER_T * BERNOULLI).equal_to_order(NEG_EXP, 30)
    assert (EXPM1_OVER_T * BERNOULLI).equal_to_order(monomial(0), 30)


@pytest.fixture
def ls2():
    return build_interval(2)


def test_apply_ad_series_examples(ls2):
    a, b, x = ls2.gen("a"), ls2.gen("b"), ls2.gen("x")
    assert apply_ad_series(EXP, x, b) == b + bracket(x, b)
    assert apply_ad_series(BERNOULLI, x, b - a) == (b - a) - scale(Fraction(1, 2), bracket(x, b - a))
    assert apply_ad_series(ZERO_SERIES, x, b).is_zero()


def test_apply_ad_series_rejects_bad_argument(ls2):
    with pytest.raises(UnitTermError):
        apply_ad_series(EXP, Element.unit(2), ls2.gen("b"))
    from lsinterval.errors import DegreeError

    with pytest.raises(DegreeError):
        apply_ad_series(EXP, ls2.gen("a"), ls2.gen("b"))


def test_exp_log_examples():
    n = 3
    ctx = free_context([XG], n)
    x = ctx.gen("x")
    assert exp_element(Element.zero(n)) == Element.unit(n)
    assert log_element(exp_element(x)) == x
    xx = concat(x, x)
    expected = Element.unit(n) + x + scale(Fraction(1, 2), xx) + scale(Fraction(1, 6), concat(xx, x))
    assert exp_log(x, "exp") == expected
    assert exp_log(expected, "log") == x
    with pytest.raises(NotUnipotent):
        log_element(x)
    with pytest.raises(UnitTermError):
        exp_element(Element.unit(n))


def test_bch_examples():
    n = 6
    ctx = free_context([XG, YG], n)
    x, y = ctx.gen("x"), ctx.gen("y")
    assert bch(scale(2, x), scale(3, x)) == scale(5, x)
    assert bch(x, -x).is_zero()
    three = free_context([XG, YG], 3)
    x3, y3 = three.gen("x"), three.gen("y")
    xy = bracket(x3, y3)
    expected = (x3 + y3 + scale(Fraction(1, 2), xy) + scale(Fraction(1, 12), bracket(x3, xy))
                + scale(Fraction(1, 12), bracket(y3, bracket(y3, x3))))
    assert bch(x3, y3) == expected
    with pytest.raises(UnitTermError):
        bch(Element.unit(n), x)


# -- independent noncommutative oracle ---------------------------------------------

SX, SY = sympy.symbols("x y", commutative=False)
SYMS = {SX: XG, SY: YG}


def _degree(term):
    return sum(e for _, e in (f.as_base_exp() for f in sympy.Mul.make_args(term) if f.free_symbols))


def _trunc(expr, n):
    return sympy.Add(*[t for t in sympy.Add.make_args(sympy.expand(expr)) if _degree(t) <= n])


def _sym_exp(u, n):
    total, power = sympy.Integer(1), sympy.Integer(1)
    for k in range(1, n + 1):
        power = _trunc(power * u, n)
        total += power / sympy.factorial(k)
    return _trunc(total, n)


def _sym_log(g, n):
    u = _trunc(g - 1, n)
    total, power = sympy.Integer(0), sympy.Integer(1)
    for k in range(1, n + 1):
        power = _trunc(power * u, n)
        total += sympy.Rational((-1) ** (k + 1), k) * power
    return _trunc(total, n)


def _to_element(expr, n):
    terms = {}
    for t in sympy.Add.make_args(sympy.expand(expr)):
        if t == 0:
            continue
        coeff, rest = t.as_coeff_Mul()
        word = []
        for f in sympy.Mul.make_args(rest):
            base, e = f.as_base_exp()
            if base in SYMS:
                word += [SYMS[base]] * int(e)
            else:
                coeff *= f
        terms[tuple(word)] = terms.get(tuple(word), 0) + Fraction(str(coeff))
    return Element(terms, n)


def _to_sympy(e):
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[SX if g == XG else SY for g in w])
                       for w, c in e.items()])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bch_matches_noncommutative_oracle(n):
    ctx = free_context([XG, YG], n)
    x, y = ctx.gen("x"), ctx.gen("y")
    oracle = _sym_log(_trunc(_sym_exp(SX, n) * _sym_exp(SY, n), n), n)
    assert bch(x, y) == _to_element(oracle, n)


@given(homogeneous_elements(gens=(XG, YG), n=4, degree=0, max_terms=3),
       homogeneous_elements(gens=(XG, YG), n=4, degree=0, max_terms=3))
def test_bch_random_against_oracle(u, v):
    n = 4
    oracle = _sym_log(_trunc(_sym_exp(_to_sympy(u), n) * _sym_exp(_to_sympy(v), n), n), n)
    assert bch(u, v) == _to_element(oracle, n)


def _lie_poly(gens, coeffs):
    x, y = gens
    basis = [x, y, bracket(x, y), bracket(x, bracket(x, y)), bracket(y, bracket(x, y))]
    total = Element.zero(x.truncation)
    for c, e in zip(coeffs, basis):
        total = total + scale(c, e)
    return total


lie_coeffs = st.lists(small_rationals, min_size=5, max_size=5)


@given(lie_coeffs, lie_coeffs, lie_coeffs)
def test_bch_associative(c1, c2, c3):
    ctx = free_context([XG, YG], 5)
    gens = (ctx.gen("x"), ctx.gen("y"))
    u, v, w = (_lie_poly(gens, c) for c in (c1, c2, c3))
    assert bch(u, bch(v, w)) == bch(bch(u, v), w)


@given(lie_coeffs, lie_coeffs)
def test_bch_group_like(c1, c2):
    ctx = free_context([XG, YG], 6)
    gens = (ctx.gen("x"), ctx.gen("y"))
    u, v = _lie_poly(gens, c1), _lie_poly(gens, c2)
    assert exp_element(bch(u, v)) == concat(exp_element(u), exp_element(v))


@given(homogeneous_elements(gens=(XG, YG), n=6, degree=0))
def test_exp_log_inverse(u):
    assert log_element(exp_element(u)) == u
    g = exp_element(u)
    assert exp_element(log_element(g)) == g


def test_exp_ad_is_conjugation():
    n = 5
    ls = build_interval(n)
    x, b = ls.gen("x"), ls.gen("b")
    conj = concat(concat(exp_element(x), b), exp_element(-x))
    assert apply_ad_series(EXP, x, b) == conj


# -- gauge ---------------------------------------------------------------------------


def test_gauge_examples():
    ls = build_interval(6)
    a, b, x = ls.gen("a"), ls.gen("b"), ls.gen("x")
    for z in (a, b, ls.zero()):
        assert gauge(ls.zero(), z, ls) == z
    assert gauge(x, b, ls) == a
    assert gauge(x, ls.zero(), ls) == a - apply_ad_series(EXP, x, b)
    with pytest.raises(NotMaurerCartan):
        gauge(x, a + b, ls)


def test_gauge_linear_part_family_one():
    ls = build_interval(4)
    g = gauge(scale(3, ls.gen("x")), ls.gen("b"), ls)
    assert g.length_part(1) == scale(3, ls.gen("a")) - scale(2, ls.gen("b"))


@given(small_rationals, small_rationals, st.sampled_from(["a", "b", "0"]))
def test_gauge_preserves_mc_and_group_law(nu, mu, zname):
    from lsinterval.dgl import mc_residual

    ls = build_interval(7)
    x = ls.gen("x")
    z = ls.zero() if zname == "0" else ls.gen(zname)
    y1, y2 = scale(nu, x), scale(mu, x)
    g = gauge(y1, z, ls)
    assert mc_residual(ls, g).is_zero()
    assert gauge(bch(y1, y2), z, ls) == gauge(y1, gauge(y2, z, ls), ls)


def test_example_identities():
    ls = build_interval(8)
    a, b, x = ls.gen("a"), ls.gen("b"), ls.gen("x")
    dx = ls.differential[ls.generator("x")]
    assert gauge(-x, ls.zero(), ls) == b - apply_ad_series(EXP, -x, a)
    assert -apply_ad_series(EXPM1_OVER_T, x, dx) == a - apply_ad_series(EXP, x, b)
