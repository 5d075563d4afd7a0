"""Shared hypothesis strategies."""
from fractions import Fraction

from hypothesis import strategies as st

from orderlab.exact import ElementaryMatrix, identity, multiply

small_int = st.integers(-4, 4)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def elementary(draw, n=3, ring="z"):
    i = draw(st.integers(1, n))
    j = draw(st.integers(1, n).filter(lambda j: j != i))
    t = draw(st.integers(-3, 3).filter(bool)) if ring == "z" else \
        draw(rationals.filter(bool))
    return ElementaryMatrix(n, i, j, t)


@st.composite
def sl_elements(draw, n=3, ring="z", max_len=12):
    m = identity(n)
    for f in draw(st.lists(elementary(n, ring), max_size=max_len)):
        m = multiply(m, f.matrix())
    return m


@st.composite
def pl_circle_maps(draw, max_breaks=4):
    from orderlab.circle.maps import PLCircleHomeo
    k = draw(st.integers(1, max_breaks))
    xs = sorted(set(draw(st.lists(st.fractions(0, 1, max_denominator=16).filter(lambda x: x < 1),
                                  min_size=k, max_size=k))))
    # increasing values with total span < 1
    steps = draw(st.lists(st.fractions(Fraction(1, 16), 1, max_denominator=16),
                          min_size=len(xs) + 1, max_size=len(xs) + 1))
    total = sum(steps)
    y0 = draw(st.fractions(0, 3, max_denominator=16))
    ys, y = [], y0
    for s in steps[:-1]:
        ys.append(y)
        y += s / total
    return PLCircleHomeo(xs, ys)


@st.composite
def rotations(draw, max_q=12):
    from orderlab.circle.maps import rotation
    q = draw(st.integers(1, max_q))
    p = draw(st.integers(0, q - 1))
    return rotation(Fraction(p, q))
