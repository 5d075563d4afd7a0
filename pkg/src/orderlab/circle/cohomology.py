"""Inhomogeneous bounded cochains on a group, the Euler cocycle table, and a
bounded search for a primitive of the Euler cocycle on a word ball."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .maps import (LiftPoint, PLCircleHomeo, element_ball, euler_z, identity_like, lift)


class SearchBudgetExceeded(RuntimeError):
    pass


class MissingEntry(KeyError):
    pass


class OrbitEscape(RuntimeError):
    pass


@dataclass(frozen=True)
class GroupOps:
    mul: object
    inv: object
    e: object


def circle_ops(sample) -> GroupOps:
    return GroupOps(lambda g, h: g * h, lambda g: g.inverse(), identity_like(sample))


INTEGERS = GroupOps(lambda a, b: a + b, lambda a: -a, 0)


@dataclass
class Cochain:
    """k-cochain c: G^k -> Z, either a finite table (absent keys are 0) or a rule."""
    arity: int
    ops: GroupOps
    values: dict | None = None
    rule: object = None
    escaped: tuple = ()

    def __post_init__(self):
        if (self.values is None) == (self.rule is None):
            raise ValueError("give exactly one of values / rule")
        if self.values is not None:
            for key in self.values:
                if len(key) != self.arity:
                    raise ValueError(f"key {key!r} has the wrong arity")

    def __call__(self, *args):
        if len(args) != self.arity:
            raise TypeError(f"expected {self.arity} arguments")
        if self.values is not None:
            return self.values.get(tuple(args), 0)
        return self.rule(*args)

    @property
    def support(self):
        if self.values is None:
            raise ValueError("rule-defined cochain has no explicit support")
        return [k for k, v in self.values.items() if v]

    @property
    def bound(self) -> int:
        return max((abs(v) for v in self.values.values()), default=0)

    def restrict(self, ball) -> "Cochain":
        """Tabulate on ball^arity (a BoundedCochain in the finite sense)."""
        vals = {args: self(*args) for args in itertools.product(ball, repeat=self.arity)}
        return Cochain(self.arity, self.ops, values=vals)

    def is_zero_on(self, ball) -> bool:
        return all(self(*args) == 0 for args in itertools.product(ball, repeat=self.arity))


def zero_cochain(arity, ops) -> Cochain:
    return Cochain(arity, ops, values={})


def delta(c: Cochain, ball=None) -> Cochain:
    """δc(g0..gk) = c(g1..gk) + Σ_{i=1..k} (-1)^i c(.., g_{i-1} g_i, ..) + (-1)^{k+1} c(g0..g_{k-1}).

    With ``ball`` the result is tabulated on ball^(k+1); support elements of
    a tabulated ``c`` lying outside the ball are listed in ``escaped``.
    """
    k, mul = c.arity, c.ops.mul

    def rule(*g):
        total = c(*g[1:])
        for i in range(1, k + 1):
            merged = g[:i - 1] + (mul(g[i - 1], g[i]),) + g[i + 1:]
            total += (-1) ** i * c(*merged)
        total += (-1) ** (k + 1) * c(*g[:k])
        return total

    out = Cochain(k + 1, c.ops, rule=rule)
    if ball is None:
        return out
    tab = out.restrict(ball)
    if c.values is not None:
        inside = set(ball)
        tab.escaped = tuple(key for key in c.support if not set(key) <= inside)
    return tab


def homogenize(c: Cochain) -> Cochain:
    """ċ(g0..gk) = c(g0^-1 g1, .., g_{k-1}^-1 g_k); a left-invariant (k+1)-argument form."""
    mul, inv = c.ops.mul, c.ops.inv

    def rule(*g):
        return c(*(mul(inv(g[i]), g[i + 1]) for i in range(len(g) - 1)))

    return Cochain(c.arity + 1, c.ops, rule=rule)


def inhomogenize(h: Cochain) -> Cochain:
    """c(g1..gk) = ḣ(e, g1, g1 g2, .., g1⋯gk)."""
    mul, e = h.ops.mul, h.ops.e

    def rule(*g):
        pts = [e]
        for x in g:
            pts.append(mul(pts[-1], x))
        return h(*pts)

    return Cochain(h.arity - 1, h.ops, rule=rule)


# -- Euler table --------------------------------------------------------------------

@dataclass
class EulerCocycleTable:
    values: dict
    domain: list = field(default_factory=list)

    def __post_init__(self):
        bad = {v for v in self.values.values() if v not in (0, 1)}
        if bad:
            raise ValueError(f"Euler cocycle values must be 0 or 1, got {sorted(bad)}")

    def __call__(self, g, h):
        try:
            return self.values[(g, h)]
        except KeyError:
            raise MissingEntry((g, h)) from None

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def as_cochain(self, ops) -> Cochain:
        return Cochain(2, ops, values=dict(self.values))


def euler_table(elements, pairs=None) -> EulerCocycleTable:
    elements = list(dict.fromkeys(elements))
    if pairs is None:
        pairs = itertools.product(elements, repeat=2)
    return EulerCocycleTable({(g, h): euler_z(g, h) for g, h in pairs}, elements)


def cocycle_pairs(triples):
    """Every pair the cocycle identity touches on ``triples``."""
    out = {}
    for a, b, c in triples:
        for pair in ((a, b), (a * b, c), (a, b * c), (b, c)):
            out[pair] = None
    return list(out)


@dataclass
class CocycleReport:
    passed: bool
    checked: int
    failure: tuple | None = None


def check_cocycle_identity(table: EulerCocycleTable, triples, mul=lambda g, h: g * h) -> CocycleReport:
    """z(a,b) + z(ab,c) = z(a,bc) + z(b,c) on each triple; stops at the first failure."""
    n = 0
    for a, b, c in triples:
        lhs = table(a, b) + table(mul(a, b), c)
        rhs = table(a, mul(b, c)) + table(b, c)
        n += 1
        if lhs != rhs:
            return CocycleReport(False, n, (a, b, c))
    return CocycleReport(True, n)


# -- coboundary search --------------------------------------------------------------

@dataclass
class CoboundaryResult:
    """``phi`` is None when nothing was found within the bound; that is not a
    proof that the Euler class is nonzero."""
    phi: Cochain | None
    ball: list
    words: list
    constraints: int
    nodes: int
    phi_bound: int

    @property
    def found(self) -> bool:
        return self.phi is not None

    @property
    def status(self) -> str:
        return "found" if self.found else "none-within-bound"


def _value_order(bound):
    yield 0
    for v in range(1, bound + 1):
        yield -v
        yield v


def coboundary_search(generators: dict, radius: int, phi_bound: int, node_budget=10 ** 6):
    """Integer φ on the radius-``radius`` ball with |φ| <= phi_bound and
    φ(g) + φ(h) - φ(gh) = z(g, h) whenever g, h, gh all lie in the ball."""
    if phi_bound < 0:
        raise ValueError("phi_bound must be >= 0")
    entries = element_ball(generators, radius)
    words = [w for w, _ in entries]
    ball = [g for _, g in entries]
    index = {g: i for i, g in enumerate(ball)}
    cons = []
    for i, g in enumerate(ball):
        for j, h in enumerate(ball):
            kk = index.get(g * h)
            if kk is not None:
                cons.append((i, j, kk, euler_z(g, h)))
    # constraint (i, j, k, z): x_i + x_j - x_k = z
    watch = [[] for _ in ball]
    for c in cons:
        for v in set(c[:3]):
            watch[v].append(c)

    n = len(ball)
    assign = [None] * n
    nodes = 0

    def propagate(var, trail):
        stack = [var]
        while stack:
            v = stack.pop()
            for i, j, k, z in watch[v]:
                vals = (assign[i], assign[j], assign[k])
                missing = [x for x, val in zip((i, j, k), vals) if val is None]
                if not missing:
                    if assign[i] + assign[j] - assign[k] != z:
                        return False
                    continue
                if len(set(missing)) != 1:
                    continue
                m = missing[0]
                # solve for the single unknown, which may occur more than once
                coef = (i == m) + (j == m) - (k == m)
                rest = sum(c * (assign[x] if x != m else 0)
                           for x, c in ((i, 1), (j, 1), (k, -1)))
                if coef == 0:
                    if rest != z:
                        return False
                    continue
                q, r = divmod(z - rest, coef)
                if r or abs(q) > phi_bound:
                    return False
                assign[m] = q
                trail.append(m)
                stack.append(m)
        return True

    def solve(pos):
        nonlocal nodes
        while pos < n and assign[pos] is not None:
            pos += 1
        if pos == n:
            return True
        for val in _value_order(phi_bound):
            nodes += 1
            if nodes > node_budget:
                raise SearchBudgetExceeded(f"more than {node_budget} search nodes")
            trail = [pos]
            assign[pos] = val
            if propagate(pos, trail) and solve(pos + 1):
                return True
            for t in trail:
                assign[t] = None
        return False

    ops = circle_ops(ball[0])
    phi = None
    if solve(0):
        phi = Cochain(1, ops, values={(g,): v for g, v in zip(ball, assign)})
    return CoboundaryResult(phi, ball, words, len(cons), nodes, phi_bound)


@dataclass
class FixedPointEstimate:
    point: object          # on the circle
    lifted: object         # Fraction (PL) or LiftPoint
    exact: bool            # every corrected generator lift fixes it
    orbit_size: int


def fixed_point_from_coboundary(phi: Cochain, generators: dict | None = None, limit=None):
    """sup of the orbit of 0 under corrected lifts g -> lift(g) - φ(g) over
    the domain of ``phi``.  The sup of a genuinely bounded orbit is a fixed
    point of the corrected action; on a finite ball it is a lower estimate."""
    if phi.values is None or phi.arity != 1:
        raise ValueError("need a tabulated 1-cochain")
    domain = [key[0] for key in phi.values]
    if not domain:
        raise ValueError("empty cochain domain")
    if limit is None:
        limit = phi.bound + 1
    carrier = domain[0]
    pl = isinstance(carrier, PLCircleHomeo)

    def corrected(g, x):
        if pl:
            return lift(g)(x) - phi(g)
        y = lift(g)(x)
        return LiftPoint(y.n - phi(g), y.p)

    start = Fraction(0) if pl else LiftPoint(0, carrier.base_point)

    def key(x):
        return x if pl else x.key(carrier)

    orbit = [corrected(g, start) for g in domain]
    top = max(orbit, key=key)
    big = top if pl else top.n
    if big > limit:
        raise OrbitEscape(f"orbit sup {big} exceeds limit {limit}; φ is not a primitive")
    gens = list((generators or {}).values())
    exact = all(key(corrected(g, top)) == key(top) for g in gens if (g,) in phi.values)
    point = (top - (top.numerator // top.denominator)) if pl else top.p
    return FixedPointEstimate(point, top, exact and bool(gens), len(set(map(key, orbit))))
