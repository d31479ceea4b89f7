"""The Lawrence-Sullivan interval, its subdivision, the Maurer-Cartan
classifier and the Deligne groupoid as two rational lines.

Objects of the groupoid are indexed by ``(family, param)``: family I has linear
part ``param*a + (1-param)*b``, family II has linear part ``param*(a - b)``.
An arrow ``nu*x`` goes from ``gauge(nu*x, z)`` to ``z``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

from .core import Element, Generator, ad_power, add, as_rational, bracket, linear_part, scale
from .dgl import (
    CheckReport,
    DglContext,
    GeneratorMap,
    apply_diff,
    check_d_squared,
    check_morphism,
    compose_maps,
    is_linear_iso,
    make_map,
    mc_residual,
    perturb,
    require_mc,
)
from .errors import (
    CertificationError,
    ConsistencyError,
    DisconnectedComponents,
    FamilyViolation,
    NoSolution,
    TruncationMismatch,
)
from .series import BERNOULLI, EXP, NEG_BERNOULLI, apply_ad_series, bch, gauge

A = Generator("a", -1)
B = Generator("b", -1)
X = Generator("x", 0)

FAMILY_I = "I"
FAMILY_II = "II"


def interval_dx(x: Element, a: Element, b: Element) -> Element:
    """``ad_x(b) + (ad_x/(e^{ad_x} - 1))(b - a)``."""
    return add(bracket(x, b), apply_ad_series(BERNOULLI, x, b - a))


def interval_dx_reversed(x: Element, a: Element, b: Element) -> Element:
    """``ad_x(a) + (ad_{-x}/(e^{-ad_x} - 1))(b - a)``; must agree with :func:`interval_dx`."""
    return add(bracket(x, a), apply_ad_series(NEG_BERNOULLI, x, b - a))


def _mc_differential(g: Element) -> Element:
    return scale(Fraction(-1, 2), bracket(g, g))


def certify_interval(ctx: DglContext) -> None:
    a, b, x = ctx.gen("a"), ctx.gen("b"), ctx.gen("x")
    report = check_d_squared(ctx)
    if not report:
        raise CertificationError(report.detail)
    for z in (a, b):
        if mc_residual(ctx, z):
            raise CertificationError("generator of degree -1 is not Maurer-Cartan")
    if gauge(x, b, ctx) != a:
        raise CertificationError("gauge(x, b) != a")


@lru_cache(maxsize=None)
def build_interval(n: int) -> DglContext:
    """The interval on ``a, b`` (degree -1) and ``x`` (degree 0), certified to order ``n``."""
    if n < 1:
        raise ValueError("truncation order must be >= 1")
    a, b, x = (Element.generator(g, n) for g in (A, B, X))
    ctx = DglContext(
        (A, B, X),
        {A: _mc_differential(a), B: _mc_differential(b), X: interval_dx(x, a, b)},
        n,
        "LS",
    )
    certify_interval(ctx)
    return ctx


def build_eq2_form(n: int) -> Element:
    """The Bernoulli-series closed form of the differential of x."""
    a, b, x = (Element.generator(g, n) for g in (A, B, X))
    return interval_dx_reversed(x, a, b)


def orientation_reversal(
    n: int, source: Optional[DglContext] = None, target: Optional[DglContext] = None
) -> GeneratorMap:
    """``a <-> b``, ``x -> -x``; optionally between twisted copies of the interval."""
    ls = build_interval(n)
    return make_map(
        source or ls, target or ls, a=ls.gen("b"), b=ls.gen("a"), x=-ls.gen("x")
    )


# -- subdivision -------------------------------------------------------------


@lru_cache(maxsize=None)
def build_subdivision(n: int) -> Tuple[DglContext, GeneratorMap]:
    """Two glued intervals ``a0 -x1- a1 -x2- a2`` and the map ``x -> x1 * x2``."""
    a0, a1, a2 = (Generator(f"a{i}", -1) for i in range(3))
    x1, x2 = Generator("x1", 0), Generator("x2", 0)
    e = {g: Element.generator(g, n) for g in (a0, a1, a2, x1, x2)}
    diff = {g: _mc_differential(e[g]) for g in (a0, a1, a2)}
    diff[x1] = interval_dx(e[x1], e[a0], e[a1])
    diff[x2] = interval_dx(e[x2], e[a1], e[a2])
    ctx = DglContext((a0, a1, a2, x1, x2), diff, n, "LS2")
    f = make_map(build_interval(n), ctx, a=e[a0], b=e[a2], x=bch(e[x1], e[x2]))
    return ctx, f


# -- Maurer-Cartan set ---------------------------------------------------------


@dataclass(frozen=True)
class McDescriptor:
    family: str
    param: Fraction
    element: Element
    decomposable_part: Element

    @property
    def truncation(self) -> int:
        return self.element.truncation


def family_of(lam: Fraction, mu: Fraction) -> Tuple[str, Fraction]:
    s = lam + mu
    if s == 1:
        return FAMILY_I, lam
    if s == 0:
        return FAMILY_II, lam
    raise FamilyViolation(f"linear part {lam}*a + {mu}*b has coefficient sum {s}, not 0 or 1")


def linear_coefficients(family: str, param) -> Tuple[Fraction, Fraction]:
    p = as_rational(param)
    if family == FAMILY_I:
        return p, 1 - p
    if family == FAMILY_II:
        return p, -p
    raise ValueError(f"family must be 'I' or 'II', got {family!r}")


def _solve_affine(r0: Element, columns: List[Element]) -> Optional[List[Fraction]]:
    """Exact solution of ``r0 + sum_j t_j * columns[j] = 0``; free unknowns set to 0."""
    words = sorted({w for e in (r0, *columns) for w, _ in e.items()}, key=lambda w: [g.name for g in w])
    rows = [[c.coefficient(w) for c in columns] + [-r0.coefficient(w)] for w in words]
    k = len(columns)
    pivots = []
    r = 0
    for col in range(k):
        p = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        lead = rows[r][col]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [u - f * v for u, v in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[k] for row in rows[r:]):
        return None
    sol = [Fraction(0)] * k
    for i, col in enumerate(pivots):
        sol[col] = rows[i][k]
    return sol


def quadratic_constraints(lam: Fraction, mu: Fraction) -> str:
    s = lam + mu
    return f"(lambda+mu)^2 = lambda+mu violated: ({s})^2 = {s * s} != {s}"


def _assemble(family: str, param: Fraction, omega: Element) -> McDescriptor:
    return McDescriptor(family, param, omega, add(omega, scale(-1, linear_part(omega))))


@lru_cache(maxsize=None)
def _solve_cached(lam: Fraction, mu: Fraction, n: int) -> McDescriptor:
    work = max(n, 2)
    ctx = build_interval(work)
    a, b, x = ctx.gen("a"), ctx.gen("b"), ctx.gen("x")
    omega = add(scale(lam, a), scale(mu, b))
    for r in range(1, work):
        ansatz = [ad_power(x, r, a), ad_power(x, r, b)]
        residual = mc_residual(ctx, omega).length_part(r + 1)
        # unknowns enter the length-(r+1) residual only through the linear differential
        cols = [apply_diff(ctx, t).length_part(r + 1) for t in ansatz]
        sol = _solve_affine(residual, cols)
        if sol is None:
            if r == 1:
                raise NoSolution(
                    f"no Maurer-Cartan element has linear part {lam}*a + {mu}*b",
                    quadratic_constraints(lam, mu),
                )
            raise ConsistencyError(f"ansatz failed at length {r + 1}")
        omega = add(omega, add(scale(sol[0], ansatz[0]), scale(sol[1], ansatz[1])))
    if mc_residual(ctx, omega):
        raise ConsistencyError("solver output is not Maurer-Cartan")
    family, param = family_of(lam, mu)
    return _assemble(family, param, omega.truncate(n))


def solve_mc(lam, mu, n: int) -> McDescriptor:
    """The unique Maurer-Cartan element with linear part ``lam*a + mu*b``.

    Built length by length: the unknown length-``r+1`` component is
    ``lam_r ad_x^r(a) + mu_r ad_x^r(b)`` and is fixed by the length-``r+1``
    component of the Maurer-Cartan residual.
    """
    lam, mu = as_rational(lam), as_rational(mu)
    if lam + mu not in (0, 1):
        # the quadratic stage decides this independently of n
        _solve_cached(lam, mu, 2)
    return _solve_cached(lam, mu, n)


def solve_family(family: str, param, n: int) -> McDescriptor:
    return solve_mc(*linear_coefficients(family, param), n)


def classify_mc(z: Element, ctx: Optional[DglContext] = None) -> McDescriptor:
    ctx = ctx or build_interval(z.truncation)
    require_mc(ctx, z, "input")
    lam, mu = z.coefficient((A,)), z.coefficient((B,))
    family, param = family_of(lam, mu)
    if solve_mc(lam, mu, ctx.truncation).element != z:
        raise ConsistencyError("Maurer-Cartan element differs from the solver output")
    return _assemble(family, param, z)


def gauge_orbit_representative(family: str, param, n: int) -> Element:
    """``(param*x) G b`` for family I and ``(param*x) G 0`` for family II."""
    ctx = build_interval(n)
    base = ctx.gen("b") if family == FAMILY_I else ctx.zero()
    if family not in (FAMILY_I, FAMILY_II):
        raise ValueError(f"family must be 'I' or 'II', got {family!r}")
    return gauge(scale(as_rational(param), ctx.gen("x")), base, ctx)


# -- groupoid ------------------------------------------------------------------


@dataclass(frozen=True)
class GroupoidArrow:
    nu: Fraction
    source: McDescriptor
    target: McDescriptor


def connect(source: McDescriptor, target: McDescriptor) -> GroupoidArrow:
    """The arrow ``nu*x`` from ``source`` to ``target``: ``gauge(nu*x, target) = source``."""
    if source.truncation != target.truncation:
        raise TruncationMismatch("descriptors classified at different orders")
    if source.family != target.family:
        raise DisconnectedComponents(
            f"family {source.family} and family {target.family} are not gauge equivalent"
        )
    ctx = build_interval(source.truncation)
    nu = source.param - target.param
    if gauge(scale(nu, ctx.gen("x")), target.element, ctx) != source.element:
        raise ConsistencyError("gauge(nu x, target) != source")
    return GroupoidArrow(nu, source, target)


def morphism_from_gauge(
    y: Element, z: Element, z_prime: Element, ctx: Optional[DglContext] = None
) -> GeneratorMap:
    """``a -> z'``, ``b -> z``, ``x -> y``; a DGL map iff ``gauge(y, z) = z'``."""
    ctx = ctx or build_interval(y.truncation)
    require_mc(ctx, z, "z")
    require_mc(ctx, z_prime, "z'")
    return make_map(build_interval(ctx.truncation), ctx, a=z_prime, b=z, x=y)


def cross_family_candidate(lam, n: int) -> CheckReport:
    """The map ``a -> a, b -> 0, x -> lam*x`` and the linear equations it would need."""
    ls = build_interval(n)
    lam = as_rational(lam)
    f = make_map(ls, ls, a=ls.gen("a"), b=ls.zero(), x=scale(lam, ls.gen("x")))
    report = check_morphism(f)
    if report.witness is not None:
        # lhs f(dx) - d f(x) has linear part (lam - 1) a - lam b
        lin = linear_part(report.witness)
        ca, cb = lin.coefficient((A,)), lin.coefficient((B,))
        report.equations = (
            f"b-coefficient: {cb} = 0 forces lambda = 0",
            f"a-coefficient: {ca} = 0 requires lambda = 1",
        )
    return report


# -- isomorphisms of perturbed intervals -----------------------------------------


def build_perturbed_isos(z: McDescriptor, n: Optional[int] = None) -> GeneratorMap:
    """Isomorphism onto the interval twisted by ``z``.

    Family II: ``(L, d) -> (L, d_z)``, ``a -> a - z, b -> b - z, x -> x``.
    Family I, ``lam != 0``: ``(L, d_a) -> (L, d_z)``, ``a -> z, b -> b, x -> lam x``.
    Family I, ``lam = 0`` (so ``z = b``): orientation reversal ``(L, d_a) -> (L, d_b)``.
    """
    n = n or z.truncation
    if n != z.truncation:
        z = solve_family(z.family, z.param, n)
    ls = build_interval(n)
    a, b, x = ls.gen("a"), ls.gen("b"), ls.gen("x")
    twisted = perturb(ls, z.element, "LS^z")
    if z.family == FAMILY_II:
        return make_map(ls, twisted, a=a - z.element, b=b - z.element, x=x)
    ls_a = perturb(ls, a, "LS^a")
    if z.param == 0:
        return orientation_reversal(n, ls_a, twisted)
    return make_map(ls_a, twisted, a=z.element, b=b, x=scale(z.param, x))


@dataclass(frozen=True)
class BaseIsoChain:
    """``(L, d_a) <- (L(c, w, x), d') -> L`` and the composite ``(L, d_a) -> L``."""

    primed: DglContext
    substitution: GeneratorMap
    substitution_inverse: GeneratorMap
    phi: GeneratorMap
    composite: GeneratorMap


@lru_cache(maxsize=None)
def base_iso_chain(n: int) -> BaseIsoChain:
    ls = build_interval(n)
    ls_a = perturb(ls, ls.gen("a"), "LS^a")
    c, w, xg = Generator("c", -1), Generator("w", -1), Generator("x", 0)
    ce, we, xe = (Element.generator(g, n) for g in (c, w, xg))
    primed = DglContext(
        (c, w, xg),
        {
            c: _mc_differential(ce),
            w: _mc_differential(we),
            xg: apply_ad_series(NEG_BERNOULLI, xe, we),
        },
        n,
        "LS'",
    )
    a, b, x = ls.gen("a"), ls.gen("b"), ls.gen("x")
    substitution = make_map(primed, ls_a, c=-a, w=b - a, x=x)
    inverse = make_map(ls_a, primed, a=-ce, b=we - ce, x=xe)
    phi = make_map(primed, ls, c=a, w=a - apply_ad_series(EXP, x, b), x=-x)
    return BaseIsoChain(primed, substitution, inverse, phi, compose_maps(phi, inverse))


def build_base_iso(n: int) -> GeneratorMap:
    """Certified isomorphism ``(L, d_a) -> L``."""
    chain = base_iso_chain(n)
    for f in (chain.substitution, chain.phi, chain.composite):
        report = check_morphism(f)
        if not report:
            raise CertificationError(report.detail)
        if not is_linear_iso(f):
            raise CertificationError("linear part is not invertible")
    return chain.composite


def quotient_dx_forms(n: int) -> Tuple[Element, Element]:
    """Both closed forms of the quotient differential of ``x``."""
    b, x = Element.generator(B, n), Element.generator(X, n)
    first = add(bracket(x, b), apply_ad_series(BERNOULLI, x, b))
    second = apply_ad_series(NEG_BERNOULLI, x, b)
    return first, second


@lru_cache(maxsize=None)
def build_quotient_model(n: int) -> Tuple[DglContext, GeneratorMap]:
    """``(L(a, b, x), d')`` with ``d'x = (-ad_x/(e^{-ad_x} - 1))(b)`` and its map to the interval."""
    ls = build_interval(n)
    a_e, b_e = Element.generator(A, n), Element.generator(B, n)
    ctx = DglContext(
        (A, B, X),
        {A: _mc_differential(a_e), B: _mc_differential(b_e), X: quotient_dx_forms(n)[1]},
        n,
        "LSq",
    )
    a, b, x = ls.gen("a"), ls.gen("b"), ls.gen("x")
    phi = make_map(ctx, ls, a=a, b=a - apply_ad_series(EXP, x, b), x=-x)
    return ctx, phi
