"""Canonical text and bit-exact JSON forms for elements, contexts and reports.

Element schema::

    {"truncation": N, "terms": [{"word": ["x", "b"], "coeff": "1/2"}, ...]}

Terms appear in canonical order (word length, then lexicographic on generator
names) and coefficients are reduced rational strings; both are enforced on
the way in so that ``serialize(deserialize(s)) == s``.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping

from .core import Element, Generator, word_key
from .errors import DuplicateWord, NonReducedCoefficient, SchemaError, UnknownSymbol

_RATIONAL = re.compile(r"^(-?)(0|[1-9][0-9]*)(?:/([1-9][0-9]*))?$")


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rational(text: str) -> Fraction:
    """Strict inverse of :func:`format_rational`; rejects anything non-canonical."""
    if not isinstance(text, str):
        raise SchemaError(f"coefficient must be a string, got {type(text).__name__}")
    m = _RATIONAL.match(text)
    if not m:
        raise SchemaError(f"malformed rational {text!r}")
    value = Fraction(int(m.group(2)) * (-1 if m.group(1) else 1), int(m.group(3) or 1))
    if not value:
        raise NonReducedCoefficient("zero coefficients are never stored")
    if format_rational(value) != text:
        raise NonReducedCoefficient(f"coefficient {text!r} is not in lowest terms")
    return value


def _word_text(word) -> str:
    if not word:
        return ""
    names = [g.name for g in word]
    sep = "" if all(len(n) == 1 for n in names) else "."
    return sep.join(names)


def print_canonical(e: Element) -> str:
    """Deterministic tensor-word text, e.g. ``-1 a + 1 b``; the unit word prints empty."""
    if not e:
        return "0"
    parts = []
    for i, (word, c) in enumerate(e.sorted_items()):
        body = format_rational(abs(c))
        wt = _word_text(word)
        term = f"{body} {wt}" if wt else body
        if i == 0:
            parts.append(("-" if c < 0 else "") + term)
        else:
            parts.append(("- " if c < 0 else "+ ") + term)
    return " ".join(parts)


def element_to_obj(e: Element) -> dict:
    return {
        "truncation": e.truncation,
        "terms": [
            {"word": [g.name for g in w], "coeff": format_rational(c)}
            for w, c in e.sorted_items()
        ],
    }


def _lookup(generators: Mapping[str, Generator] | Iterable[Generator]) -> Dict[str, Generator]:
    if isinstance(generators, Mapping):
        return dict(generators)
    return {g.name: g for g in generators}


def element_from_obj(obj, generators) -> Element:
    gens = _lookup(generators)
    if not isinstance(obj, dict) or set(obj) != {"truncation", "terms"}:
        raise SchemaError("element object needs exactly the keys 'truncation' and 'terms'")
    n = obj["truncation"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError(f"truncation must be a positive integer, got {n!r}")
    terms = obj["terms"]
    if not isinstance(terms, list):
        raise SchemaError("'terms' must be a list")
    out = {}
    prev = None
    for t in terms:
        if not isinstance(t, dict) or set(t) != {"word", "coeff"}:
            raise SchemaError(f"term must have exactly 'word' and 'coeff': {t!r}")
        if not isinstance(t["word"], list) or not all(isinstance(s, str) for s in t["word"]):
            raise SchemaError(f"word must be a list of generator names: {t['word']!r}")
        try:
            word = tuple(gens[s] for s in t["word"])
        except KeyError as exc:
            raise UnknownSymbol(f"unknown generator {exc.args[0]!r}") from None
        if len(word) > n:
            raise SchemaError(f"word of length {len(word)} exceeds truncation {n}")
        if word in out:
            raise DuplicateWord(f"word {t['word']!r} appears twice")
        key = word_key(word)
        if prev is not None and key < prev:
            raise SchemaError("terms are not in canonical order")
        prev = key
        out[word] = parse_rational(t["coeff"])
    return Element._raw(out, n)


def serialize(e: Element) -> str:
    return json.dumps(element_to_obj(e), separators=(", ", ": "))


def deserialize(text: str, generators) -> Element:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return element_from_obj(obj, generators)


def context_to_obj(ctx) -> dict:
    return {
        "name": ctx.name,
        "truncation": ctx.truncation,
        "generators": [{"name": g.name, "degree": g.degree} for g in ctx.generators],
        "differential": {g.name: element_to_obj(ctx.differential[g]) for g in ctx.generators},
    }


def context_from_obj(obj):
    from .dgl import DglContext

    try:
        gens = tuple(Generator(d["name"], d["degree"]) for d in obj["generators"])
        diff = {g: element_from_obj(obj["differential"][g.name], gens) for g in gens}
        return DglContext(gens, diff, obj["truncation"], obj.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed context object: {exc!r}") from None
