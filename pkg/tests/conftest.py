from contextlib import contextmanager
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from lsinterval.core import Element, Generator
from lsinterval.interval import A, B, X

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

_CRITERIA = {}


@contextmanager
def criterion(number, title):
    """Record one acceptance criterion; the outcome is listed in the terminal summary."""
    try:
        yield
    except BaseException:
        _CRITERIA[number] = (title, "FAIL")
        print(f"criterion {number:>2} FAIL  {title}")
        raise
    _CRITERIA[number] = (title, "PASS")
    print(f"criterion {number:>2} PASS  {title}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2} {status}  {title}")


small_rationals = st.builds(
    Fraction, st.integers(min_value=-6, max_value=6), st.integers(min_value=1, max_value=4)
)


@st.composite
def homogeneous_elements(draw, gens=(A, B, X), n=5, degree=None, max_terms=4, min_len=1):
    """Random element of the truncated tensor algebra, homogeneous of one degree."""
    if degree is None:
        degree = draw(st.sampled_from(sorted({g.degree for g in gens})))
    terms = {}
    for _ in range(draw(st.integers(min_value=0, max_value=max_terms))):
        length = draw(st.integers(min_value=min_len, max_value=n))
        word = tuple(draw(st.lists(st.sampled_from(gens), min_size=length, max_size=length)))
        if sum(g.degree for g in word) == degree:
            terms[word] = terms.get(word, 0) + draw(small_rationals)
    return Element(terms, n)


@pytest.fixture
def ls4():
    from lsinterval.interval import build_interval

    return build_interval(4)
