import hypothesis.strategies as st
import pytest
from hypothesis import settings

from higherforms.ring import QQ, AlgInt, make_field

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SMALL_D = [2, 3, 5, 6, 7, 13, 17, 21]


@pytest.fixture(params=[2, 5], ids=["D2", "D5"])
def field(request):
    return make_field(request.param)


@st.composite
def fields(draw, include_q=False):
    choices = SMALL_D + ([None] if include_q else [])
    return make_field(draw(st.sampled_from(choices)))


@st.composite
def elements(draw, field, bound=50):
    a = draw(st.integers(-bound, bound))
    b = 0 if field.is_rational else draw(st.integers(-bound, bound))
    return AlgInt(a, b, field)


@st.composite
def totally_positive(draw, field, bound=40):
    """A totally positive element: pick b, then a above the positivity threshold."""
    if field.is_rational:
        return AlgInt(draw(st.integers(1, bound * bound)), 0, field)
    b = draw(st.integers(-bound, bound))
    w1, w2 = field.omega_embeddings
    a0 = int(-min(b * w1, b * w2)) - 1
    while not AlgInt(a0, b, field).is_totally_positive():
        a0 += 1
    return AlgInt(a0 + draw(st.integers(0, bound)), b, field)
