from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import homogeneous_elements, small_rationals
from lsinterval.core import Element, bracket, concat, linear_part, scale
from lsinterval.dgl import (
    DglContext,
    apply_diff,
    apply_map,
    check_d_squared,
    check_mc_preserved,
    check_morphism,
    compose_maps,
    determinant,
    is_linear_iso,
    make_map,
    mc_residual,
    perturb,
)
from lsinterval.errors import DegreeError, NotMaurerCartan, TruncationMismatch
from lsinterval.interval import (
    A,
    B,
    X,
    build_interval,
    build_subdivision,
    orientation_reversal,
    solve_mc,
)
from lsinterval.series import gauge

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def ls():
    return build_interval(6)


def test_apply_diff_examples(ls):
    a, b, x = ls.gen("a"), ls.gen("b"), ls.gen("x")
    assert apply_diff(ls, a) == -concat(a, a)
    dx = apply_diff(ls, x)
    assert linear_part(dx) == b - a
    assert dx.length_part(2) == scale(HALF, bracket(x, a)) + scale(HALF, bracket(x, b))


def test_apply_diff_order_mismatch(ls):
    with pytest.raises(TruncationMismatch):
        apply_diff(ls, Element.generator(A, 3))


def test_differential_degree_validated():
    n = 3
    a = Element.generator(A, n)
    with pytest.raises(DegreeError):
        DglContext((A,), {A: a}, n)


def test_check_d_squared_examples():
    assert check_d_squared(build_interval(8)).passed
    n = 4
    a, b = Element.generator(A, n), Element.generator(B, n)
    wrong = DglContext(
        (A, B, X),
        {A: scale(-HALF, bracket(a, a)), B: scale(-HALF, bracket(b, b)), X: b},
        n,
    )
    report = check_d_squared(wrong)
    assert not report.passed
    # d^2 x = db = -1/2 [b, b] = -bb
    assert report.witness == -concat(b, b)
    assert report.witness.lengths() == {2}
    ls = build_interval(6)
    assert check_d_squared(perturb(ls, ls.gen("a"))).passed


def test_mc_residual_examples(ls):
    assert mc_residual(ls, ls.gen("a")).is_zero()
    assert mc_residual(ls, ls.zero()).is_zero()
    assert not mc_residual(ls, ls.gen("a") + ls.gen("b")).is_zero()
    with pytest.raises(DegreeError):
        mc_residual(ls, ls.gen("x"))


def test_perturb_examples(ls):
    a = ls.gen("a")
    assert perturb(ls, ls.zero()).differential == ls.differential
    pa = perturb(ls, a)
    # -aa + [a, a] = +aa
    assert pa.differential[A] == concat(a, a)
    z = gauge(scale(3, ls.gen("x")), ls.gen("b"), ls)
    assert check_d_squared(perturb(ls, z)).passed
    with pytest.raises(NotMaurerCartan):
        perturb(ls, a + ls.gen("b"))


def test_check_morphism_examples(ls):
    a, b, x = ls.gen("a"), ls.gen("b"), ls.gen("x")
    assert check_morphism(make_map(ls, ls, a=a, b=b, x=x)).passed
    assert check_morphism(orientation_reversal(6)).passed
    bad = check_morphism(make_map(ls, ls, a=a, b=ls.zero(), x=x))
    assert not bad.passed
    assert not linear_part(bad.witness).is_zero()
    with pytest.raises(DegreeError):
        check_morphism(make_map(ls, ls, a=x, b=b, x=x))


def test_check_mc_preserved_examples(ls):
    assert check_mc_preserved(orientation_reversal(6), ls.gen("a")).passed
    assert apply_map(orientation_reversal(6), ls.gen("a")) == ls.gen("b")
    ctx, f = build_subdivision(5)
    ls5 = build_interval(5)
    assert check_mc_preserved(f, ls5.gen("a")).passed
    assert apply_map(f, ls5.gen("a")) == ctx.gen("a0")
    with pytest.raises(NotMaurerCartan):
        check_mc_preserved(f, ls5.gen("a") + ls5.gen("b"))


def test_compose_and_linear_iso(ls):
    g = orientation_reversal(6)
    gg = compose_maps(g, g)
    assert all(gg.images[h] == ls.gen(h.name) for h in ls.generators)
    assert is_linear_iso(g)
    assert determinant([[1, 2], [2, 4]]) == 0
    assert determinant([[0, 1], [1, 0]]) == -1


@given(homogeneous_elements(n=6, max_terms=3), homogeneous_elements(n=6, max_terms=3))
def test_leibniz(u, v):
    ls = build_interval(6)
    du = u.degrees()
    sign = -1 if next(iter(du), 0) % 2 else 1
    lhs = apply_diff(ls, concat(u, v))
    rhs = concat(apply_diff(ls, u), v) + scale(sign, concat(u, apply_diff(ls, v)))
    assert lhs == rhs


@given(homogeneous_elements(n=7, degree=-1), homogeneous_elements(n=7, degree=0))
def test_d_squared_on_random_elements(u, y):
    ls = build_interval(7)
    for e in (u, y):
        assert apply_diff(ls, apply_diff(ls, e)).is_zero()


@given(st.sampled_from([Fraction(-2), Fraction(1, 3), Fraction(5, 2)]),
       st.sampled_from([Fraction(-1), Fraction(1, 2), Fraction(2)]))
def test_perturb_composes(lam, mu):
    ls = build_interval(5)
    z = solve_mc(lam, 1 - lam, 5).element
    twisted = perturb(ls, z)
    w = solve_mc(mu, -mu, 5).element - z
    # z + w is MC for d, so w is MC for d_z
    assert mc_residual(twisted, w).is_zero()
    assert perturb(twisted, w).differential == perturb(ls, z + w).differential


@given(small_rationals, st.sampled_from(["I", "II"]), small_rationals)
def test_morphism_implies_mc_preserved(nu, family, p):
    from lsinterval.interval import morphism_from_gauge, solve_family

    ls = build_interval(5)
    z = solve_family(family, p, 5).element
    y = scale(nu, ls.gen("x"))
    f = morphism_from_gauge(y, z, gauge(y, z, ls))
    assert check_morphism(f).passed
    for sample in (ls.gen("a"), ls.gen("b"), ls.zero(), solve_mc(nu, -nu, 5).element):
        assert check_mc_preserved(f, sample).passed
