"""Differentials as graded derivations, Maurer-Cartan checks, perturbation and
morphism verification.

Everything here is verified "up to the truncation order N": a context carries
its order and every report records which order it was checked at.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .core import (
    Element,
    Generator,
    Word,
    add,
    bracket,
    concat,
    linear_part,
    require_homogeneous,
    scale,
    word_degree,
)
from .errors import DegreeError, NotMaurerCartan, TruncationMismatch, UnknownSymbol

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DglContext:
    """Free graded Lie algebra on ``generators`` with a derivation given on generators."""

    generators: Tuple[Generator, ...]
    differential: Mapping[Generator, Element]
    truncation: int
    name: str = ""

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        missing = [g.name for g in self.generators if g not in self.differential]
        if missing:
            raise ValueError(f"no differential given for {missing}")
        for g in self.generators:
            image = self.differential[g]
            if image.truncation != self.truncation:
                raise TruncationMismatch(
                    f"differential of {g.name} has order {image.truncation}, context {self.truncation}"
                )
            require_homogeneous(image, g.degree - 1, f"differential of {g.name}")
        object.__setattr__(self, "differential", dict(self.differential))

    def __hash__(self):
        return hash((self.generators, self.truncation, self.name))

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise UnknownSymbol(f"unknown generator {name!r} in context {self.name or '?'}")

    def gen(self, name: str) -> Element:
        """The generator ``name`` as an Element at this context's order."""
        return Element.generator(self.generator(name), self.truncation)

    def zero(self) -> Element:
        return Element.zero(self.truncation)

    def truncate(self, order: int) -> "DglContext":
        if order == self.truncation:
            return self
        return DglContext(
            self.generators,
            {g: e.truncate(order) for g, e in self.differential.items()},
            order,
            self.name,
        )

    def renamed(self, name: str) -> "DglContext":
        return DglContext(self.generators, self.differential, self.truncation, name)


@dataclass
class CheckReport:
    """Outcome of a finite verification; failure is data, not an exception."""

    name: str
    passed: bool
    truncation: int
    detail: str = ""
    witness: Optional[Element] = None
    equations: Tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.passed


def _first_term(e: Element) -> str:
    w, c = e.sorted_items()[0]
    return f"{c} * {''.join(g.name for g in w) or '1'}"


def apply_diff(ctx: DglContext, e: Element) -> Element:
    """Extend the differential to tensor words by the graded Leibniz rule."""
    n = ctx.truncation
    if e.truncation != n:
        raise TruncationMismatch(f"element order {e.truncation} vs context order {n}")
    images = {g: list(img.items()) for g, img in ctx.differential.items()}
    acc: Dict[Word, Fraction] = defaultdict(Fraction)
    for word, c in e.items():
        prefix_degree = 0
        for i, g in enumerate(word):
            try:
                img = images[g]
            except KeyError:
                raise UnknownSymbol(f"generator {g.name!r} not in context {ctx.name or '?'}") from None
            coeff = -c if prefix_degree % 2 else c
            head, tail = word[:i], word[i + 1:]
            room = n - len(word) + 1
            for v, d in img:
                if len(v) <= room:
                    acc[head + v + tail] += coeff * d
            prefix_degree += g.degree
    return Element._raw({w: v for w, v in acc.items() if v}, n)


def check_d_squared(ctx: DglContext) -> CheckReport:
    for g in ctx.generators:
        dd = apply_diff(ctx, apply_diff(ctx, ctx.gen(g.name)))
        if dd:
            return CheckReport(
                "d_squared",
                False,
                ctx.truncation,
                f"d^2({g.name}) != 0, first term {_first_term(dd)}",
                witness=dd,
            )
    return CheckReport("d_squared", True, ctx.truncation, "d^2 = 0 on all generators")


def mc_residual(ctx: DglContext, z: Element) -> Element:
    """``dz + 1/2 [z, z]``; ``z`` is Maurer-Cartan to order N iff this vanishes."""
    require_homogeneous(z, -1, "Maurer-Cartan candidate")
    return add(apply_diff(ctx, z), scale(HALF, bracket(z, z)))


def is_mc(ctx: DglContext, z: Element) -> bool:
    return not mc_residual(ctx, z)


def require_mc(ctx: DglContext, z: Element, what: str = "element") -> None:
    r = mc_residual(ctx, z)
    if r:
        raise NotMaurerCartan(
            f"{what} is not Maurer-Cartan to order {ctx.truncation}; residual starts {_first_term(r)}"
        )


def perturb(ctx: DglContext, z: Element, name: Optional[str] = None) -> DglContext:
    """The twisted differential ``g -> dg + [z, g]``."""
    require_mc(ctx, z, "twisting element")
    diff = {g: add(img, bracket(z, ctx.gen(g.name))) for g, img in ctx.differential.items()}
    return DglContext(ctx.generators, diff, ctx.truncation, name or f"{ctx.name}^z")


@dataclass(frozen=True)
class GeneratorMap:
    """A Lie algebra map given by the images of the source generators."""

    images: Mapping[Generator, Element]
    source: DglContext
    target: DglContext

    def __post_init__(self):
        if self.source.truncation != self.target.truncation:
            raise TruncationMismatch("source and target orders differ")
        missing = [g.name for g in self.source.generators if g not in self.images]
        if missing:
            raise ValueError(f"no image given for {missing}")
        object.__setattr__(self, "images", dict(self.images))

    def __hash__(self):
        return id(self)

    def image(self, name: str) -> Element:
        return self.images[self.source.generator(name)]

    def __call__(self, e: Element) -> Element:
        return apply_map(self, e)

    def check_degrees(self) -> None:
        for g in self.source.generators:
            require_homogeneous(self.images[g], g.degree, f"image of {g.name}")


def make_map(source: DglContext, target: DglContext, **images: Element) -> GeneratorMap:
    return GeneratorMap({source.generator(k): v for k, v in images.items()}, source, target)


def apply_map(f: GeneratorMap, e: Element) -> Element:
    """Multiplicative extension of ``f`` to tensor words."""
    n = f.target.truncation
    if e.truncation != n:
        raise TruncationMismatch(f"element order {e.truncation} vs map order {n}")
    cache: Dict[Word, Element] = {(): Element.unit(n)}

    def image_of(word: Word) -> Element:
        hit = cache.get(word)
        if hit is None:
            try:
                last = f.images[word[-1]]
            except KeyError:
                raise UnknownSymbol(f"generator {word[-1].name!r} not in map source") from None
            hit = concat(image_of(word[:-1]), last)
            cache[word] = hit
        return hit

    acc: Dict[Word, Fraction] = defaultdict(Fraction)
    for word, c in e.items():
        for w, v in image_of(word).items():
            acc[w] += c * v
    return Element._raw({w: v for w, v in acc.items() if v}, n)


def compose_maps(f: GeneratorMap, g: GeneratorMap) -> GeneratorMap:
    """``f . g`` (apply ``g`` first)."""
    return GeneratorMap(
        {h: apply_map(f, img) for h, img in g.images.items()}, g.source, f.target
    )


def check_morphism(f: GeneratorMap) -> CheckReport:
    """Check ``f(d g) = d f(g)`` on every source generator."""
    f.check_degrees()
    for g in f.source.generators:
        lhs = apply_map(f, f.source.differential[g])
        rhs = apply_diff(f.target, f.images[g])
        delta = add(lhs, scale(-1, rhs))
        if delta:
            lin = linear_part(delta)
            detail = f"f(d{g.name}) - d f({g.name}) != 0, first term {_first_term(delta)}"
            if lin:
                detail += "; linear part nonzero"
            return CheckReport("morphism", False, f.source.truncation, detail, witness=delta)
    return CheckReport("morphism", True, f.source.truncation, "commutes with differentials")


def check_mc_preserved(f: GeneratorMap, z: Element) -> CheckReport:
    require_mc(f.source, z, "input")
    r = mc_residual(f.target, apply_map(f, z))
    if r:
        return CheckReport(
            "mc_preserved", False, f.source.truncation,
            f"image not Maurer-Cartan, residual starts {_first_term(r)}", witness=r,
        )
    return CheckReport("mc_preserved", True, f.source.truncation, "image is Maurer-Cartan")


def linear_matrix(f: GeneratorMap):
    """Matrix of the linear parts of the images, rows indexed by source generators."""
    cols = f.target.generators
    return [
        [f.images[g].coefficient((h,)) for h in cols] for g in f.source.generators
    ]


def determinant(rows) -> Fraction:
    m = [[Fraction(v) for v in row] for row in rows]
    size = len(m)
    if any(len(row) != size for row in m):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, size):
            factor = m[r][col] / m[col][col]
            if factor:
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det


def is_linear_iso(f: GeneratorMap) -> bool:
    """A map of free complete Lie algebras is invertible iff its linear part is."""
    if len(f.source.generators) != len(f.target.generators):
        return False
    return determinant(linear_matrix(f)) != 0


def free_context(
    generators: Iterable[Generator], truncation: int, name: str = "free"
) -> DglContext:
    """Generators with zero differential (scratch algebra for tests and oracles)."""
    gens = tuple(generators)
    return DglContext(gens, {g: Element.zero(truncation) for g in gens}, truncation, name)
