import pytest
from hypothesis import settings, strategies as st

from hybridsum.algebra import BivarPoly
from hybridsum.field import make_field

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_PRIMES = (5, 7, 11, 13, 31, 101)
_FIELDS = {}


def field(p):
    if p not in _FIELDS:
        _FIELDS[p] = make_field(p)
    return _FIELDS[p]


@pytest.fixture
def F7():
    return field(7)


@pytest.fixture
def F5():
    return field(5)


@st.composite
def polys(draw, p, max_deg=3):
    F = field(p)
    monos = [(i, j) for i in range(max_deg + 1) for j in range(max_deg + 1 - i)]
    coeffs = draw(st.dictionaries(st.sampled_from(monos), st.integers(0, p - 1), max_size=6))
    return BivarPoly(F, coeffs)
