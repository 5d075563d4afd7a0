"""Exact circle homeomorphisms on R/Z, their normalized lifts, and the Euler cocycle.

Two carriers share one duck-typed interface:

* :class:`PLCircleHomeo` acts on rational points of [0, 1);
* :class:`MobiusMap` acts on the projective line; points are Fractions or
  :data:`INF`, ordered as the chart t = 1/2 + arctan(x)/pi places them on
  [0, 1), with INF at t = 0.

Composition is ``g * h = g ∘ h`` (apply h first).
"""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd, isqrt

from ..exact import GroupWord


class OrientationError(ValueError):
    pass


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _frac_part(x: Fraction) -> Fraction:
    return x - floor(x)


# -- PL -----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PLCircleHomeo:
    """Orientation-preserving PL circle map given by its lift at breakpoints.

    ``xs`` are the breakpoints in [0, 1), ``ys`` the normalized lift values
    F(xs) (so F(0) is in [0, 1)).  Stored in canonical form: only genuine
    slope changes are kept, a rotation keeps the single breakpoint 0.
    """
    xs: tuple
    ys: tuple

    def __init__(self, breakpoints, values):
        xs = [_q(x) for x in breakpoints]
        ys = [_q(y) for y in values]
        if not xs or len(xs) != len(ys):
            raise ValueError("need matching, non-empty breakpoints and values")
        if any(not (0 <= x < 1) for x in xs):
            raise ValueError("breakpoints must lie in [0, 1)")
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(a >= b for a, b in zip(ys, ys[1:])) or not ys[-1] < ys[0] + 1:
            raise OrientationError("lift values must increase with ys[-1] < ys[0] + 1")
        object.__setattr__(self, "xs", tuple(xs))
        object.__setattr__(self, "ys", tuple(ys))
        object.__setattr__(self, "_ex", None)
        shift = floor(self._raw_lift(Fraction(0)))
        xs2, ys2 = _canonical(xs, [y - shift for y in ys])
        self._set(xs2, ys2)

    def _set(self, xs, ys):
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "_ex", None)
        object.__setattr__(self, "_hash", hash((xs, ys)))

    # elements are dict keys in every table; hash once
    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, PLCircleHomeo):
            return NotImplemented
        return self._hash == other._hash and self.xs == other.xs and self.ys == other.ys

    @classmethod
    def _rot(cls, r: Fraction) -> "PLCircleHomeo":
        g = object.__new__(cls)
        g._set((Fraction(0),), (r - floor(r),))
        return _intern(g)

    base_point = Fraction(0)
    orientation_preserving = True

    @classmethod
    def rotation(cls, r) -> "PLCircleHomeo":
        return cls._rot(_q(r))

    @classmethod
    def identity(cls) -> "PLCircleHomeo":
        return cls([0], [0])

    def _ext(self):
        if self._ex is None:
            xs, ys = self.xs, self.ys
            object.__setattr__(self, "_ex", ([xs[-1] - 1] + list(xs) + [xs[0] + 1],
                                             [ys[-1] - 1] + list(ys) + [ys[0] + 1]))
        return self._ex

    def _raw_lift(self, x: Fraction) -> Fraction:
        if len(self.xs) == 1 and self.xs[0] == 0:
            return x + self.ys[0]
        n = floor(x)
        r = x - n
        ex, ey = self._ext()
        for k in range(len(ex) - 1):
            if ex[k] <= r <= ex[k + 1]:
                y = ey[k] + (ey[k + 1] - ey[k]) * (r - ex[k]) / (ex[k + 1] - ex[k])
                return y + n
        raise AssertionError("unreachable")

    def lift_value(self, x) -> Fraction:
        """Normalized lift F evaluated at a rational x."""
        return self._raw_lift(_q(x))

    def __call__(self, p):
        return self.apply(p)

    def apply(self, p) -> Fraction:
        return _frac_part(self._raw_lift(_q(p)))

    def apply_inverse(self, p) -> Fraction:
        return self.inverse().apply(p)

    @staticmethod
    def point_key(p):
        return p

    @staticmethod
    def chart(p) -> float:
        return float(p)

    def slopes(self):
        ex, ey = self._ext()
        return [(ey[k + 1] - ey[k]) / (ex[k + 1] - ex[k]) for k in range(len(ex) - 1)]

    def __mul__(self, other: "PLCircleHomeo") -> "PLCircleHomeo":
        if not isinstance(other, PLCircleHomeo):
            return NotImplemented
        return _pl_compose(self, other)

    def inverse(self) -> "PLCircleHomeo":
        if self.is_rotation():
            return PLCircleHomeo._rot(-self.ys[0])
        return _pl_inverse(self)

    def is_identity(self) -> bool:
        return self.xs == (0,) and self.ys == (0,)

    def is_rotation(self) -> bool:
        return len(self.xs) == 1 and self.xs[0] == 0

    def fixed_points(self) -> "FixedPointSet":
        if self.is_identity():
            return FixedPointSet(all_points=True)
        ex, ey = self._ext()
        points, intervals = set(), []
        for k in range(len(ex) - 1):
            x0, x1 = ex[k], ex[k + 1]
            d0, d1 = ey[k] - x0, ey[k + 1] - x1
            lo, hi = min(d0, d1), max(d0, d1)
            for n in range(math.ceil(lo), math.floor(hi) + 1):
                if d0 == d1:
                    a, b = max(x0, Fraction(0)), min(x1, Fraction(1))
                    if a < b:
                        intervals.append((a, b))
                    continue
                x = x0 + (x1 - x0) * (n - d0) / (d1 - d0)
                if 0 <= x < 1:
                    points.add(x)
        points = {p for p in points if not any(a <= p <= b for a, b in intervals)}
        return FixedPointSet(points=sorted(points), intervals=_merge_intervals(intervals))

    def to_json(self):
        return {"pl": {"breakpoints": [str(x) for x in self.xs],
                       "values": [str(y) for y in self.ys]}}


_INTERNED = weakref.WeakValueDictionary()


def _intern(g):
    # equal maps share one instance, so table lookups mostly succeed on identity
    return _INTERNED.setdefault(g, g)


@lru_cache(maxsize=1 << 18)
def _pl_compose(g, h):
    if g.is_rotation() and h.is_rotation():
        return PLCircleHomeo._rot(g.ys[0] + h.ys[0])
    inv = h.inverse()
    pts = sorted(set(h.xs) | {inv.apply(x) for x in g.xs})
    return _intern(PLCircleHomeo(pts, [g._raw_lift(h._raw_lift(p)) for p in pts]))


@lru_cache(maxsize=1 << 18)
def _pl_inverse(g):
    pairs = sorted((_frac_part(y), x - floor(y)) for x, y in zip(g.xs, g.ys))
    return _intern(PLCircleHomeo([p for p, _ in pairs], [v for _, v in pairs]))


def _canonical(xs, ys):
    n = len(xs)
    ex = [xs[-1] - 1] + list(xs) + [xs[0] + 1]
    ey = [ys[-1] - 1] + list(ys) + [ys[0] + 1]
    slopes = [(ey[k + 1] - ey[k]) / (ex[k + 1] - ex[k]) for k in range(n + 1)]
    keep = [i for i in range(n) if slopes[i] != slopes[i + 1]]
    if not keep:
        # rigid rotation: F(x) = x + F(0)
        f0 = ys[0] - xs[0]
        return (Fraction(0),), (f0,)
    return tuple(xs[i] for i in keep), tuple(ys[i] for i in keep)


def _merge_intervals(iv):
    out = []
    for a, b in sorted(iv):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


# -- Möbius --------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticSurd:
    """r + s * sqrt(d) with d > 1 squarefree-free of square factors checked by caller."""
    r: Fraction
    s: Fraction
    d: int

    def __float__(self):
        return float(self.r) + float(self.s) * math.sqrt(self.d)

    def is_root(self, c2, c1, c0) -> bool:
        """Exact test of c2 x^2 + c1 x + c0 = 0 in Q(sqrt d)."""
        r, s, d = self.r, self.s, self.d
        rational = c2 * (r * r + s * s * d) + c1 * r + c0
        irrational = 2 * c2 * r * s + c1 * s
        return rational == 0 and irrational == 0

    def __str__(self):
        return f"{self.r} {'+' if self.s >= 0 else '-'} {abs(self.s)}*sqrt({self.d})"

    def to_json(self):
        return {"surd": {"r": str(self.r), "s": str(self.s), "d": self.d}}


@dataclass(frozen=True)
class MobiusMap:
    """x -> (a x + b) / (c x + d) on the projective line, in lowest terms."""
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __init__(self, a, b, c, d):
        ents = [_q(v) for v in (a, b, c, d)]
        if ents[0] * ents[3] - ents[1] * ents[2] == 0:
            raise ValueError("singular Möbius matrix")
        den = 1
        for v in ents:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) for v in ents]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        first = next(v for v in ints if v)
        if first < 0:
            ints = [-v for v in ints]
        for name, v in zip("abcd", ints):
            object.__setattr__(self, name, Fraction(v))

    base_point = INF

    @classmethod
    def from_matrix(cls, m) -> "MobiusMap":
        (a, b), (c, d) = m
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def orientation_preserving(self) -> bool:
        return self.det > 0

    def apply(self, p):
        a, b, c, d = self.a, self.b, self.c, self.d
        if p is INF:
            return INF if c == 0 else a / c
        den = c * p + d
        if den == 0:
            return INF
        return (a * p + b) / den

    __call__ = apply

    def apply_inverse(self, p):
        return self.inverse().apply(p)

    @staticmethod
    def point_key(p):
        return (0, 0) if p is INF else (1, p)

    @staticmethod
    def chart(p) -> float:
        if p is INF:
            return 0.0
        if isinstance(p, QuadraticSurd):
            p = float(p)
        return 0.5 + math.atan(float(p)) / math.pi

    def __mul__(self, other: "MobiusMap") -> "MobiusMap":
        if not isinstance(other, MobiusMap):
            return NotImplemented
        return MobiusMap(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                         self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def fixed_points(self) -> "FixedPointSet":
        a, b, c, d = self.a, self.b, self.c, self.d
        if self.is_identity():
            return FixedPointSet(all_points=True)
        pts, surds = [], []
        if c == 0:
            pts.append(INF)
            if a != d:
                pts.append(b / (d - a))
            return FixedPointSet(points=pts)
        # c x^2 + (d - a) x - b = 0
        disc = (d - a) ** 2 + 4 * b * c
        if disc < 0:
            return FixedPointSet()
        num, den = disc.numerator, disc.denominator
        rn, rd = isqrt(num), isqrt(den)
        if rn * rn == num and rd * rd == den:
            root = Fraction(rn, rd)
            xs = {(a - d + root) / (2 * c), (a - d - root) / (2 * c)}
            return FixedPointSet(points=sorted(xs))
        # sqrt(num/den) = sqrt(num*den)/den; pull out square factors
        sq, core = _split_square(num * den)
        s = Fraction(sq, den) / (2 * c)
        r = (a - d) / (2 * c)
        surds = [QuadraticSurd(r, -abs(s), core), QuadraticSurd(r, abs(s), core)]
        return FixedPointSet(surds=surds)

    def to_json(self):
        return {"mobius": [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]}


def _split_square(n: int):
    sq, core, f = 1, n, 2
    while f * f <= core:
        while core % (f * f) == 0:
            core //= f * f
            sq *= f
        f += 1
    return sq, core


@dataclass
class FixedPointSet:
    points: list = None
    intervals: list = None
    surds: list = None
    all_points: bool = False

    def __post_init__(self):
        self.points = list(self.points or [])
        self.intervals = list(self.intervals or [])
        self.surds = list(self.surds or [])

    def is_empty(self) -> bool:
        return not (self.points or self.intervals or self.surds or self.all_points)

    def some_point(self):
        if self.all_points:
            return Fraction(0)
        if self.points:
            return self.points[0]
        if self.intervals:
            return self.intervals[0][0]
        if self.surds:
            return self.surds[0]
        return None

    def to_json(self):
        return {"allPoints": self.all_points,
                "points": [point_to_json(p) for p in self.points],
                "intervals": [[str(a), str(b)] for a, b in self.intervals],
                "surds": [s.to_json() for s in self.surds]}


def point_to_json(p):
    if p is INF:
        return "inf"
    if isinstance(p, QuadraticSurd):
        return p.to_json()
    return str(p)


# -- lifts and the Euler cocycle --------------------------------------------------

@dataclass(frozen=True)
class LiftPoint:
    """The real number n + chart(p) for a circle point p."""
    n: int
    p: object

    def key(self, carrier):
        return (self.n, carrier.point_key(self.p))


@dataclass(frozen=True)
class LiftedHomeo:
    """Lift of g to R; ``offset = 0`` is the normalized lift with F(0) in [0, 1)."""
    g: object
    offset: int = 0

    def __call__(self, x):
        if isinstance(x, LiftPoint):
            g = self.g
            y = g.apply(x.p)
            wrap = 1 if g.point_key(y) < g.point_key(g.apply(g.base_point)) else 0
            return LiftPoint(x.n + wrap + self.offset, y)
        if not isinstance(self.g, PLCircleHomeo):
            raise TypeError("rational evaluation needs a PL carrier; pass a LiftPoint")
        return self.g.lift_value(x) + self.offset

    def __add__(self, k: int) -> "LiftedHomeo":
        return LiftedHomeo(self.g, self.offset + k)

    def __sub__(self, k: int) -> "LiftedHomeo":
        return LiftedHomeo(self.g, self.offset - k)


def lift(g) -> LiftedHomeo:
    if not g.orientation_preserving:
        raise OrientationError("orientation-reversing maps have no lift of degree 1")
    return LiftedHomeo(g, 0)


def rotation(r) -> PLCircleHomeo:
    return PLCircleHomeo.rotation(r)


def euler_z(g, h) -> int:
    """The integer z with lift(g) ∘ lift(h) = lift(g h) + z."""
    if not (g.orientation_preserving and h.orientation_preserving):
        raise OrientationError("Euler cocycle needs orientation-preserving maps")
    if isinstance(g, PLCircleHomeo) and isinstance(h, PLCircleHomeo):
        z = g.lift_value(h.lift_value(0)) - (g * h).lift_value(0)
        assert z.denominator == 1
        return int(z)
    base = LiftPoint(0, g.base_point)
    lhs = lift(g)(lift(h)(base))
    rhs = lift(g * h)(base)
    assert lhs.p == rhs.p
    return lhs.n - rhs.n


# -- finite pieces of the group ---------------------------------------------------

def identity_like(g):
    return type(g).identity()


def element_ball(generators: dict, radius: int):
    """Distinct elements of word length <= radius with a shortest word for each."""
    if not generators:
        raise ValueError("need at least one generator")
    e = identity_like(next(iter(generators.values())))
    letters = []
    for name, g in generators.items():
        letters.append((GroupWord.gen(name, 1), g))
        letters.append((GroupWord.gen(name, -1), g.inverse()))
    out = [(GroupWord(), e)]
    seen = {e}
    frontier = list(out)
    for _ in range(radius):
        nxt = []
        for w, x in frontier:
            for lw, lg in letters:
                y = x * lg
                if y in seen:
                    continue
                seen.add(y)
                nxt.append((w * lw, y))
        out.extend(nxt)
        frontier = nxt
    return out


def evaluate_word(generators: dict, w: GroupWord):
    e = identity_like(next(iter(generators.values())))
    result = e
    for name, k in w.letters:
        g = generators[name]
        step = g if k > 0 else g.inverse()
        for _ in range(abs(k)):
            result = result * step
    return result


def parse_generator(spec):
    """{"rotation": "p/q"} | {"pl": {breakpoints, values}} | {"mobius": [[a, b], [c, d]]}."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ValueError(f"generator must be a one-key object, got {spec!r}")
    (tag, body), = spec.items()
    if tag == "rotation":
        return PLCircleHomeo.rotation(Fraction(str(body)))
    if tag == "pl":
        return PLCircleHomeo([Fraction(str(x)) for x in body["breakpoints"]],
                             [Fraction(str(y)) for y in body["values"]])
    if tag == "mobius":
        (a, b), (c, d) = body
        return MobiusMap(*(Fraction(str(v)) for v in (a, b, c, d)))
    raise ValueError(f"unknown generator tag {tag!r}")


def parse_generators(data) -> dict:
    if isinstance(data, dict) and "generators" in data:
        data = data["generators"]
    if isinstance(data, list):
        return {f"g{i + 1}": parse_generator(s) for i, s in enumerate(data)}
    return {str(k): parse_generator(v) for k, v in data.items()}
