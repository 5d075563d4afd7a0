import itertools
import random
from fractions import Fraction
from math import floor

import pytest
from hypothesis import given, settings, strategies as st

from orderlab.circle.cohomology import (INTEGERS, Cochain, CocycleReport, EulerCocycleTable,
                                        MissingEntry, OrbitEscape, SearchBudgetExceeded,
                                        check_cocycle_identity, circle_ops, coboundary_search,
                                        cocycle_pairs, delta, euler_table,
                                        fixed_point_from_coboundary, homogenize, inhomogenize,
                                        zero_cochain)
from orderlab.circle.maps import PLCircleHomeo, element_ball, euler_z, rotation

from strategies import pl_circle_maps

F = Fraction
ZBALL = list(range(-6, 7))


def random_cochain(arity, seed, bound=3, domain=ZBALL):
    rng = random.Random(seed)
    vals = {k: rng.randint(-bound, bound) for k in itertools.product(domain, repeat=arity)}
    return Cochain(arity, INTEGERS, values=vals)


def test_delta_of_zero():
    for k in (0, 1, 2):
        assert delta(zero_cochain(k, INTEGERS), ZBALL[:5]).bound == 0


def test_delta_clipped_on_z():
    B = 3
    phi = Cochain(1, INTEGERS, rule=lambda n: min(n, B))
    d = delta(phi, ZBALL)
    for a in ZBALL:
        for b in ZBALL:
            assert d(a, b) == min(b, B) - min(a + b, B) + min(a, B)
    assert d.bound == max(abs(min(b, B) - min(a + b, B) + min(a, B)) for a in ZBALL for b in ZBALL)


@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_delta_squared_zero(seed, arity):
    c = random_cochain(arity, seed, domain=range(-3, 4))
    dd = delta(delta(c))
    pts = list(range(-2, 3))
    assert dd.is_zero_on(pts)


def test_delta_squared_zero_nonabelian():
    gens = {"a": PLCircleHomeo([0, F(1, 3)], [0, F(1, 2)]), "r": rotation(F(1, 4))}
    ball = [g for _, g in element_ball(gens, 2)]
    rng = random.Random(1)
    vals = {(g,): rng.randint(-2, 2) for g in ball}
    c = Cochain(1, circle_ops(ball[0]), values=vals)
    assert delta(delta(c)).is_zero_on(ball[:8])


def test_delta_reports_escape():
    c = Cochain(1, INTEGERS, values={(10,): 1})
    d = delta(c, [0, 1, 2])
    assert d.escaped == ((10,),)


def test_homogenize_constant_left_invariant():
    c = Cochain(2, INTEGERS, rule=lambda a, b: 7)
    h = homogenize(c)
    for g0, g1, g2, t in itertools.product(range(-2, 3), repeat=4):
        assert h(g0, g1, g2) == h(t + g0, t + g1, t + g2) == 7


@given(st.integers(0, 10 ** 6))
def test_homogenize_left_invariant_random(seed):
    c = random_cochain(2, seed, domain=range(-8, 9))
    h = homogenize(c)
    rng = random.Random(seed)
    for _ in range(20):
        g = [rng.randint(-3, 3) for _ in range(3)]
        t = rng.randint(-2, 2)
        assert h(*g) == h(*(t + x for x in g))


def test_identity_supported_round_trip():
    c = Cochain(2, INTEGERS, values={(0, 0): 5})
    back = inhomogenize(homogenize(c))
    for a, b in itertools.product(range(-3, 4), repeat=2):
        assert back(a, b) == c(a, b)


def test_euler_half_rotation_round_trip():
    r = rotation(F(1, 2))
    ball = [g for _, g in element_ball({"g": r}, 1)]
    z = euler_table(ball).as_cochain(circle_ops(r))
    back = inhomogenize(homogenize(z))
    for g, h in itertools.product(ball, repeat=2):
        assert back(g, h) == z(g, h)
    assert z(r, r) == 1


def family(qmax):
    return list(dict.fromkeys(rotation(F(p, q)) for q in range(1, qmax + 1) for p in range(q)))


def test_cocycle_identity_rotations_q6():
    rots = family(6)
    triples = list(itertools.product(rots, repeat=3))
    table = euler_table([], cocycle_pairs(triples))
    for (g, h), v in table.values.items():
        assert v == floor(g.ys[0] + h.ys[0])
    rep = check_cocycle_identity(table, triples)
    assert rep.passed and rep.checked == len(triples)


def test_corrupted_table_reports_failure():
    rots = family(4)
    triples = list(itertools.product(rots, repeat=3))
    table = euler_table([], cocycle_pairs(triples))
    a, b = rotation(F(1, 2)), rotation(F(3, 4))
    table.values[(a, b)] = 1 - table.values[(a, b)]
    rep = check_cocycle_identity(table, triples)
    assert not rep.passed
    x, y, w = rep.failure
    assert (a, b) in {(x, y), (x * y, w), (x, y * w), (y, w)}


def test_singleton_group_vacuous():
    e = PLCircleHomeo.identity()
    table = euler_table([e])
    assert check_cocycle_identity(table, [(e, e, e)]).passed
    assert check_cocycle_identity(table, []) == CocycleReport(True, 0)


def test_missing_entry():
    table = EulerCocycleTable({})
    with pytest.raises(MissingEntry):
        check_cocycle_identity(table, [(rotation(F(1, 2)),) * 3])


def test_table_rejects_non_binary():
    with pytest.raises(ValueError):
        EulerCocycleTable({(1, 1): 2})


@given(st.lists(pl_circle_maps(), min_size=1, max_size=3))
@settings(max_examples=25)
def test_cocycle_identity_pl(maps):
    ball = list(dict.fromkeys(maps + [m.inverse() for m in maps]))
    triples = list(itertools.product(ball, repeat=3))
    table = euler_table([], cocycle_pairs(triples))
    assert check_cocycle_identity(table, triples).passed


def fixing(p, k, seed):
    """Random PL circle map fixing p."""
    rng = random.Random(seed)
    xs = sorted({F(rng.randint(1, 30), 31) for _ in range(k)} | {F(0)})
    # move breakpoints monotonically, keep 0 fixed, then conjugate by rotation p
    ys = [F(0)]
    for x0, x1 in zip(xs, xs[1:]):
        ys.append(ys[-1] + (x1 - x0) * F(rng.randint(1, 4), 2))
    span = ys[-1] + (1 - xs[-1]) * F(rng.randint(1, 4), 2)
    ys = [y / span for y in ys]
    g = PLCircleHomeo(xs, ys)
    r = rotation(p)
    return r * g * r.inverse()


@given(st.integers(0, 10 ** 6), st.fractions(0, 1, max_denominator=12).filter(lambda p: p < 1))
@settings(max_examples=30)
def test_global_fixed_point_conjugated_to_zero_kills_euler(seed, p):
    g, h = fixing(p, 3, seed), fixing(p, 2, seed + 1)
    assert g.apply(p) == p and h.apply(p) == p
    r = rotation(p)
    g0, h0 = r.inverse() * g * r, r.inverse() * h * r
    ball = [x for _, x in element_ball({"g": g0, "h": h0}, 2)]
    assert euler_table(ball).is_zero()


def test_coboundary_examples():
    g = fixing(F(0), 3, 1)
    h = fixing(F(0), 2, 2)
    res = coboundary_search({"g": g, "h": h}, 2, 1)
    assert res.found and res.phi.bound == 0
    assert euler_table(res.ball).is_zero()
    # rotation by 1/3 generating Z/3: no primitive with |phi| <= 0
    assert not coboundary_search({"g": rotation(F(1, 3))}, 3, 0).found


def test_half_rotation_has_no_integer_primitive():
    # z(g, g) = 1 and z(e, e) = 0 force 2 phi(g) = 1
    res = coboundary_search({"g": rotation(F(1, 2))}, 1, 1)
    assert len(res.ball) == 2 and not res.found
    assert res.status == "none-within-bound"


def test_coboundary_found_satisfies_delta():
    a = PLCircleHomeo([0, F(1, 4)], [F(1, 5), F(1, 4)])
    b = PLCircleHomeo([F(1, 4), F(1, 2)], [F(1, 4), F(3, 4)])
    res = coboundary_search({"a": a, "b": b}, 2, 1)
    assert res.found
    inside = set(res.ball)
    d = delta(res.phi)
    for x in res.ball:
        for y in res.ball:
            if x * y in inside:
                assert d(x, y) == euler_z(x, y)


def test_coboundary_budget():
    with pytest.raises(SearchBudgetExceeded):
        coboundary_search({"g": rotation(F(1, 7)), "h": rotation(F(2, 9))}, 3, 3, node_budget=5)
    with pytest.raises(ValueError):
        coboundary_search({"g": rotation(F(1, 7))}, 1, -1)


def test_fixed_point_at_quarter():
    a = PLCircleHomeo([0, F(1, 4)], [F(1, 5), F(1, 4)])
    b = PLCircleHomeo([F(1, 4), F(1, 2)], [F(1, 4), F(3, 4)])
    gens = {"a": a, "b": b}
    res = coboundary_search(gens, 3, 1)
    est = fixed_point_from_coboundary(res.phi, gens)
    assert est.point <= F(1, 4) and F(1, 4) - est.point < F(1, 100)


def test_fixed_point_exact_at_zero():
    gens = {"g": fixing(F(0), 3, 5), "h": fixing(F(0), 3, 6)}
    res = coboundary_search(gens, 2, 1)
    est = fixed_point_from_coboundary(res.phi, gens)
    assert est.point == 0 and est.exact


def test_trivial_group_gives_zero():
    gens = {"e": PLCircleHomeo.identity()}
    res = coboundary_search(gens, 2, 0)
    assert res.found and len(res.ball) == 1
    assert fixed_point_from_coboundary(res.phi, gens).point == 0


def test_bad_phi_escapes():
    gens = {"g": fixing(F(0), 2, 3)}
    res = coboundary_search(gens, 2, 1)
    bad = Cochain(1, res.phi.ops, values={k: -5 for k in res.phi.values})
    with pytest.raises(OrbitEscape):
        fixed_point_from_coboundary(bad, gens, limit=res.phi.bound + 1)


def test_mobius_coboundary_parabolic():
    from orderlab.circle.maps import MobiusMap
    T = MobiusMap(1, 1, 0, 1)
    res = coboundary_search({"T": T}, 3, 1)
    assert res.found
    est = fixed_point_from_coboundary(res.phi, {"T": T})
    assert est.exact
