"""Exact piecewise-linear homeomorphisms of the line."""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction


class UnboundedOrbit(ValueError):
    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index


@dataclass(frozen=True)
class PLLineMap:
    """Increasing PL map through (xs[i], ys[i]), translation by the end
    displacement outside [xs[0], xs[-1]] (so displacement is bounded)."""
    xs: tuple
    ys: tuple

    def __init__(self, xs, ys):
        xs = tuple(Fraction(x) for x in xs)
        ys = tuple(Fraction(y) for y in ys)
        if not xs or len(xs) != len(ys):
            raise ValueError("need matching, non-empty breakpoint lists")
        if any(a >= b for a, b in zip(xs, xs[1:])) or any(a >= b for a, b in zip(ys, ys[1:])):
            raise ValueError("breakpoints and values must be strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @classmethod
    def translation(cls, t) -> "PLLineMap":
        return cls([0], [t])

    @classmethod
    def identity(cls) -> "PLLineMap":
        return cls([0], [0])

    def __call__(self, x):
        x = Fraction(x)
        xs, ys = self.xs, self.ys
        if x <= xs[0]:
            return x + (ys[0] - xs[0])
        if x >= xs[-1]:
            return x + (ys[-1] - xs[-1])
        k = bisect_right(xs, x) - 1
        x0, x1, y0, y1 = xs[k], xs[k + 1], ys[k], ys[k + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def inverse(self) -> "PLLineMap":
        return PLLineMap(self.ys, self.xs)

    def compose(self, other: "PLLineMap") -> "PLLineMap":
        """self ∘ other."""
        inv = other.inverse()
        pts = sorted(set(other.xs) | {inv(x) for x in self.xs})
        return PLLineMap(pts, [self(other(p)) for p in pts])

    __mul__ = compose

    def displacement_pieces(self):
        """Yield (lo, hi, d_lo, d_hi) for each piece; lo/hi None means infinite."""
        xs, ys = self.xs, self.ys
        d = [y - x for x, y in zip(xs, ys)]
        yield None, xs[0], d[0], d[0]
        for k in range(len(xs) - 1):
            yield xs[k], xs[k + 1], d[k], d[k + 1]
        yield xs[-1], None, d[-1], d[-1]

    def fixed_point_above(self, x):
        """Least fixed point >= x, or None."""
        x = Fraction(x)
        if self(x) == x:
            return x
        best = None
        for lo, hi, d0, d1 in self.displacement_pieces():
            if hi is not None and hi < x:
                continue
            if lo is None:
                # constant displacement d0 on (-inf, hi]
                if d0 == 0:
                    cand = x
                else:
                    continue
            elif hi is None:
                if d0 == 0:
                    cand = max(lo, x)
                else:
                    continue
            elif d0 == d1:
                if d0 != 0:
                    continue
                cand = max(lo, x)
            else:
                root = lo + (hi - lo) * (-d0) / (d1 - d0)
                if not (lo <= root <= hi) or root < x:
                    continue
                cand = root
            if best is None or cand < best:
                best = cand
        return best

    def orbit_sup(self, x):
        """sup of {g^n(x) : n in Z}: x if fixed, else the next fixed point above."""
        fp = self.fixed_point_above(x)
        if fp is None:
            raise UnboundedOrbit(f"<g>-orbit of {x} is unbounded above")
        return fp

    def to_json(self):
        return {"breakpoints": [str(x) for x in self.xs], "values": [str(y) for y in self.ys]}
