"""Exact fixed points, finite orbits, Hölder witnesses and orbit-bound propagation."""
from __future__ import annotations

from dataclasses import dataclass

from .line import UnboundedOrbit
from .maps import QuadraticSurd, element_ball


def verify_fixed_point(g, p) -> bool:
    if isinstance(p, QuadraticSurd):
        # c x^2 + (d - a) x - b = 0
        return p.is_root(g.c, g.d - g.a, -g.b)
    return g.apply(p) == p


def fixed_points(g):
    """Exact fixed point set; every returned point is re-checked by evaluation."""
    fps = g.fixed_points()
    for p in fps.points + fps.surds:
        if not verify_fixed_point(g, p):
            raise AssertionError(f"{p} is not fixed by {g}")
    for a, b in fps.intervals:
        assert g.apply(a) == a and g.apply(b) == b
    return fps


@dataclass
class FiniteOrbit:
    points: list
    seed: object

    @property
    def size(self):
        return len(self.points)


def _seed_points(entries):
    seeds = {}
    for _, g in entries:
        seeds.setdefault(g.base_point, None)
        for x in getattr(g, "xs", ()):
            seeds.setdefault(x, None)
        fps = g.fixed_points()
        for p in fps.points:
            seeds.setdefault(p, None)
        for a, _ in fps.intervals:
            seeds.setdefault(a, None)
    return list(seeds)


def finite_orbit_search(generators: dict, max_orbit: int, max_word: int):
    """A point whose orbit is closed under every generator and has at most
    ``max_orbit`` points, exploring words up to length ``max_word``; else None.

    Seeds are rational: the base point, breakpoints, and fixed points of
    elements of the ``max_word`` ball.  Irrational (surd) seeds are skipped.
    """
    if max_orbit < 1 or max_word < 1:
        raise ValueError("bounds must be >= 1")
    letters = []
    for g in generators.values():
        letters += [g, g.inverse()]
    entries = element_ball(generators, max_word)
    carrier = entries[0][1]
    for seed in _seed_points(entries):
        orbit, frontier = {seed: None}, [seed]
        for _ in range(max_word):
            nxt = []
            for x in frontier:
                for g in letters:
                    y = g.apply(x)
                    if y not in orbit:
                        orbit[y] = None
                        nxt.append(y)
            frontier = nxt
            if len(orbit) > max_orbit or not frontier:
                break
        if len(orbit) > max_orbit:
            continue
        if all(g.apply(x) in orbit for g in letters for x in orbit):
            pts = sorted(orbit, key=carrier.point_key)
            return FiniteOrbit(pts, seed)
    return None


@dataclass
class HolderResult:
    status: str               # "found" | "abelian" | "none-within-bound"
    word: object = None
    element: object = None
    point: object = None

    @property
    def found(self):
        return self.status == "found"


def holder_witness(generators: dict, max_word: int) -> HolderResult:
    """Shortest (shortlex) nonidentity word with a fixed point on the circle."""
    gens = list(generators.values())
    if all(g * h == h * g for g in gens for h in gens):
        return HolderResult("abelian")
    for w, g in element_ball(generators, max_word):
        if g.is_identity():
            continue
        fps = fixed_points(g)
        p = fps.some_point()
        if p is not None:
            assert verify_fixed_point(g, p)
            return HolderResult("found", w, g, p)
    return HolderResult("none-within-bound")


def propagate_orbit_bound(generators, depth: int):
    """x_0 = 0, x_k = sup(<g_k> . x_{k-1}) with g_1 applied first and the
    generator list cycled; returns x_depth.  Each generator needs an exact
    ``orbit_sup`` (e.g. :class:`~orderlab.circle.line.PLLineMap`)."""
    gens = list(generators)
    if depth > 0 and not gens:
        raise ValueError("no generators")
    x = 0
    for k in range(depth):
        idx = k % len(gens)
        try:
            x = gens[idx].orbit_sup(x)
        except UnboundedOrbit as exc:
            raise UnboundedOrbit(str(exc), index=idx) from None
    return x


__all__ = ["FiniteOrbit", "HolderResult", "finite_orbit_search", "fixed_points",
           "holder_witness", "propagate_orbit_bound", "verify_fixed_point"]
