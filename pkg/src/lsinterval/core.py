"""Exact sparse arithmetic in the truncated tensor algebra on graded generators.

Lie elements live inside the tensor algebra through the graded commutator
``[u, v] = uv - (-1)^{|u||v|} vu``.  An :class:`Element` is a finite map from
words to reduced rationals together with a truncation order ``N``; words longer
than ``N`` are discarded on construction, so every product is computed modulo
the ideal of words of length ``> N``.
"""
from __future__ import annotations

from bisect import bisect_right
from collections import defaultdict
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Tuple

from .errors import DegreeError, NegativePower, TruncationMismatch


class Generator(str):
    """A named free generator with an integer homological degree.

    Subclasses ``str`` so that words (tuples of generators) hash and compare at
    C speed; names are unique within a context, so the name is the identity.
    """

    def __new__(cls, name: str, degree: int):
        obj = super().__new__(cls, name)
        obj.degree = int(degree)
        return obj

    @property
    def name(self) -> str:
        return str(self)

    def __repr__(self) -> str:
        return f"Generator({str(self)!r}, {self.degree})"

    def __reduce__(self):
        return (Generator, (str(self), self.degree))


Word = Tuple[Generator, ...]


def word_degree(word: Word) -> int:
    return sum(g.degree for g in word)


def word_key(word: Word):
    """Canonical order: shorter words first, then lexicographic on names."""
    return (len(word), tuple(g.name for g in word))


def as_rational(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, bool) or not isinstance(c, (Rational, str)):
        raise TypeError(f"exact rational coefficient required, got {type(c).__name__}")
    return Fraction(c)


class Element:
    """Immutable exact-rational combination of words, truncated at ``truncation``."""

    __slots__ = ("_terms", "_truncation", "_hash")

    def __init__(self, terms: Mapping[Word, object] | Iterable = (), truncation: int = 1):
        if truncation < 1:
            raise ValueError("truncation order must be >= 1")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: Dict[Word, Fraction] = {}
        for word, c in items:
            word = tuple(word)
            if len(word) > truncation:
                continue
            c = as_rational(c)
            if c:
                clean[word] = clean.get(word, Fraction(0)) + c
        self._terms = {w: c for w, c in clean.items() if c}
        self._truncation = truncation
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Word, Fraction], truncation: int) -> "Element":
        # trusted constructor: terms already reduced, nonzero and within truncation
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._truncation = truncation
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, truncation: int) -> "Element":
        return cls._raw({}, truncation)

    @classmethod
    def unit(cls, truncation: int) -> "Element":
        return cls._raw({(): Fraction(1)}, truncation)

    @classmethod
    def generator(cls, g: Generator, truncation: int) -> "Element":
        return cls._raw({(g,): Fraction(1)}, truncation)

    @property
    def truncation(self) -> int:
        return self._truncation

    @property
    def terms(self) -> Mapping[Word, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Word, Fraction]]:
        return iter(self._terms.items())

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: word_key(kv[0]))

    def coefficient(self, word: Iterable[Generator]) -> Fraction:
        return self._terms.get(tuple(word), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self._truncation == other._truncation and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._truncation, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .serial import print_canonical

        return f"Element({print_canonical(self)!r}, N={self._truncation})"

    # -- grading -------------------------------------------------------------

    def degrees(self) -> set:
        return {word_degree(w) for w in self._terms}

    def lengths(self) -> set:
        return {len(w) for w in self._terms}

    def is_homogeneous(self, degree: int) -> bool:
        """True iff every word has the given degree (the zero element qualifies)."""
        return all(word_degree(w) == degree for w in self._terms)

    def has_unit_term(self) -> bool:
        return () in self._terms

    def homogeneous_parts(self) -> Dict[int, "Element"]:
        parts: Dict[int, Dict[Word, Fraction]] = defaultdict(dict)
        for w, c in self._terms.items():
            parts[word_degree(w)][w] = c
        return {d: Element._raw(t, self._truncation) for d, t in parts.items()}

    def length_part(self, length: int) -> "Element":
        return Element._raw(
            {w: c for w, c in self._terms.items() if len(w) == length}, self._truncation
        )

    def truncate(self, order: int) -> "Element":
        if order > self._truncation:
            raise TruncationMismatch(
                f"cannot raise truncation from {self._truncation} to {order}"
            )
        return Element._raw(
            {w: c for w, c in self._terms.items() if len(w) <= order}, order
        )

    def generators(self) -> set:
        return {g for w in self._terms for g in w}

    # -- operators -----------------------------------------------------------

    def __add__(self, other: "Element") -> "Element":
        return add(self, other)

    def __sub__(self, other: "Element") -> "Element":
        return add(self, scale(-1, other))

    def __neg__(self) -> "Element":
        return scale(-1, self)

    def __mul__(self, c) -> "Element":
        if isinstance(c, Element):
            return NotImplemented
        return scale(c, self)

    __rmul__ = __mul__

    def __matmul__(self, other: "Element") -> "Element":
        return concat(self, other)


def _check_orders(*elements: Element) -> int:
    n = elements[0].truncation
    for e in elements[1:]:
        if e.truncation != n:
            raise TruncationMismatch(
                f"truncation orders differ: {n} vs {e.truncation}"
            )
    return n


def scale(c, e: Element) -> Element:
    c = as_rational(c)
    if not c:
        return Element.zero(e.truncation)
    return Element._raw({w: c * v for w, v in e._terms.items()}, e.truncation)


def add(e1: Element, e2: Element) -> Element:
    n = _check_orders(e1, e2)
    out = dict(e1._terms)
    for w, c in e2._terms.items():
        s = out.get(w, 0) + c
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return Element._raw(out, n)


def linear_combination(pairs: Iterable[Tuple[object, Element]], truncation: int) -> Element:
    acc: Dict[Word, Fraction] = defaultdict(Fraction)
    for c, e in pairs:
        if e.truncation != truncation:
            raise TruncationMismatch(
                f"truncation orders differ: {truncation} vs {e.truncation}"
            )
        c = as_rational(c)
        for w, v in e._terms.items():
            acc[w] += c * v
    return Element._raw({w: v for w, v in acc.items() if v}, truncation)


def _by_length(e: Element):
    """Terms as ``(length, word, degree parity, coeff)`` sorted by length."""
    rows = [(len(w), w, word_degree(w) & 1, c) for w, c in e._terms.items()]
    rows.sort(key=lambda r: r[0])
    return rows, [r[0] for r in rows]


def concat(e1: Element, e2: Element) -> Element:
    """Tensor-algebra product (bilinear word concatenation)."""
    n = _check_orders(e1, e2)
    acc: Dict[Word, Fraction] = defaultdict(Fraction)
    right, lengths = _by_length(e2)
    for w1, c1 in e1._terms.items():
        stop = bisect_right(lengths, n - len(w1))
        for _, w2, _, c2 in right[:stop]:
            acc[w1 + w2] += c1 * c2
    return Element._raw({w: v for w, v in acc.items() if v}, n)


def bracket(e1: Element, e2: Element) -> Element:
    """Graded commutator, computed term by term with the Koszul sign."""
    n = _check_orders(e1, e2)
    acc: Dict[Word, Fraction] = defaultdict(Fraction)
    right, lengths = _by_length(e2)
    for w1, c1 in e1._terms.items():
        odd1 = word_degree(w1) & 1
        stop = bisect_right(lengths, n - len(w1))
        for _, w2, odd2, c2 in right[:stop]:
            c = c1 * c2
            acc[w1 + w2] += c
            if odd1 and odd2:
                acc[w2 + w1] += c
            else:
                acc[w2 + w1] -= c
    return Element._raw({w: v for w, v in acc.items() if v}, n)


def ad_power(g: Element, n: int, e: Element) -> Element:
    """``ad_g^n(e)``, the n-fold left bracket with ``g``."""
    if n < 0:
        raise NegativePower(f"ad power must be >= 0, got {n}")
    _check_orders(g, e)
    for _ in range(n):
        if not e:
            break
        e = bracket(g, e)
    return e


def linear_part(e: Element) -> Element:
    return e.length_part(1)


def require_homogeneous(e: Element, degree: int, what: str = "element") -> None:
    if not e.is_homogeneous(degree):
        raise DegreeError(
            f"{what} must be homogeneous of degree {degree}, found degrees {sorted(e.degrees())}"
        )
