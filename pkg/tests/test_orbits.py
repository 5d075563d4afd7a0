import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orderlab.circle import INF, MobiusMap, PLCircleHomeo, PLLineMap, UnboundedOrbit, rotation
from orderlab.circle.orbits import (finite_orbit_search, fixed_points, holder_witness,
                                    propagate_orbit_bound, verify_fixed_point)

F = Fraction
T = MobiusMap(1, 1, 0, 1)
S = MobiusMap(0, -1, 1, 0)


def test_rotation_third_orbit():
    orb = finite_orbit_search({"g": rotation(F(1, 3))}, 5, 5)
    assert orb.points == [0, F(1, 3), F(2, 3)]


def test_parabolic_orbit():
    orb = finite_orbit_search({"T": T}, 3, 4)
    assert orb.points == [INF]


def test_long_rational_orbit():
    orb = finite_orbit_search({"g": rotation(F(355, 113))}, 120, 60)
    assert orb.size == 113
    assert finite_orbit_search({"g": rotation(F(355, 113))}, 100, 60) is None


def test_orbit_closed_under_generators():
    gens = {"a": rotation(F(1, 4)), "b": rotation(F(1, 2))}
    orb = finite_orbit_search(gens, 8, 4)
    pts = set(orb.points)
    for g in gens.values():
        assert {g.apply(x) for x in pts} == pts


def test_psl2z_has_no_small_finite_orbit_but_a_holder_witness():
    assert finite_orbit_search({"S": S, "T": T}, 6, 4) is None
    res = holder_witness({"S": S, "T": T}, 2)
    assert res.found and len(res.word) <= 2
    assert verify_fixed_point(res.element, res.point)


def test_holder_rotations_abelian():
    res = holder_witness({"a": rotation(F(1, 5)), "b": rotation(F(2, 7))}, 3)
    assert res.status == "abelian"


def test_holder_pl_commutator():
    a = PLCircleHomeo([0, F(1, 2)], [F(1, 4), F(1, 2)])   # fixes 1/2
    b = rotation(F(1, 3))
    res = holder_witness({"a": a, "b": b}, 4)
    assert res.found and len(res.word) <= 4
    assert res.element.apply(res.point) == res.point


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 4), st.integers(0, 4))
def test_mobius_fixed_points_verify(a, b, c, d):
    if a * d - b * c == 0:
        return
    g = MobiusMap(a, b, c, d)
    fps = fixed_points(g)
    for p in fps.points + fps.surds:
        assert verify_fixed_point(g, p)


def test_propagation_examples():
    assert propagate_orbit_bound([PLLineMap.identity()], 3) == 0
    g = PLLineMap([0, 2], [1, 2])
    h = PLLineMap([0, 2, 5], [0, 3, 5])
    assert propagate_orbit_bound([g, h], 2) == 5
    with pytest.raises(UnboundedOrbit) as info:
        propagate_orbit_bound([g, PLLineMap([0], [1])], 2)
    assert info.value.index == 1


def line_map(seed):
    """Random PL line homeo with fixed points above 0 (identity outside [-8, 8])."""
    rng = random.Random(seed)
    xs = sorted({F(rng.randint(-16, 16), 2) for _ in range(4)} | {F(-8), F(8)})
    ys = [xs[0]]
    for x0, x1 in zip(xs, xs[1:]):
        ys.append(ys[-1] + (x1 - x0) * F(rng.randint(1, 6), 3))
    # rescale the interior so the map fixes -8 and 8
    scale = (xs[-1] - xs[0]) / (ys[-1] - ys[0])
    ys = [xs[0] + (y - ys[0]) * scale for y in ys]
    return PLLineMap(xs, ys)


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
@settings(max_examples=40)
def test_bound_dominates_sampled_orbits(seed, depth_per):
    gens = [line_map(seed), line_map(seed + 1)]
    bound = propagate_orbit_bound(gens, 2 * depth_per)
    rng = random.Random(seed)
    # cycle words g1^{n1} g2^{n2} ... applied in the same order as the bound
    for _ in range(10):
        x = F(0)
        for k in range(2 * depth_per):
            g = gens[k % 2]
            step = g if rng.random() < 0.5 else g.inverse()
            for _ in range(rng.randint(0, 6)):
                x = step(x)
        assert x <= bound
