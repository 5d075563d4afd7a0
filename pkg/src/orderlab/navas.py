"""Floating-point probes of the singular kernel Phi(x, y) = 1/dist(x - y, 0) on R/Z
under the half-density action F^g(x, y) = F(g x, g y) sqrt(g'(x) g'(y)).

For C^2 circle maps Phi^g - Phi is bounded; for maps whose derivative is
only Hölder of exponent below 1/2 the sup near the diagonal blows up.  The
probes measure both on a refining grid with a diagonal band removed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


class NonInvertibleMap(ValueError):
    pass


class NumericalOverflow(ArithmeticError):
    pass


@dataclass(frozen=True)
class RoughBump:
    """u -> amplitude * |u|^alpha * b(u / width), b a smooth bump on (-1, 1), u = x - center.

    The derivative is C^(alpha - 1) at the center and smooth elsewhere, so
    the map is C^1 but not C^(alpha') for alpha' > alpha.
    """
    alpha: float = 1.3
    center: float = 0.25
    amplitude: float = 0.01
    width: float = 0.125

    def _u(self, x):
        u = np.asarray(x, dtype=float) - self.center
        return u - np.round(u)

    def _bump(self, s):
        inside = np.abs(s) < 1
        t = np.where(inside, 1.0 - s * s, 1.0)
        b = np.where(inside, np.exp(1.0 - 1.0 / t), 0.0)
        db = np.where(inside, b * (-2.0 * s / (t * t)), 0.0)
        return b, db

    def value(self, x):
        u = self._u(x)
        b, _ = self._bump(u / self.width)
        return self.amplitude * np.abs(u) ** self.alpha * b

    def derivative(self, x):
        u = self._u(x)
        b, db = self._bump(u / self.width)
        au = np.abs(u)
        return self.amplitude * (self.alpha * au ** (self.alpha - 1) * np.sign(u) * b
                                 + au ** self.alpha * db / self.width)

    def derivative_bound(self, grid=1 << 14):
        x = self.center + self.width * np.linspace(-1, 1, grid)
        return float(np.max(np.abs(self.derivative(x))))


@dataclass(frozen=True)
class SmoothCircleMap:
    """x -> x + shift + sum_j (c_j sin 2 pi j x + d_j cos 2 pi j x) [+ rough(x)]."""
    c: tuple = ()
    d: tuple = ()
    shift: float = 0.0
    rough: RoughBump | None = None

    def __post_init__(self):
        c = tuple(float(v) for v in self.c)
        d = tuple(float(v) for v in self.d)
        n = max(len(c), len(d))
        c, d = c + (0.0,) * (n - len(c)), d + (0.0,) * (n - len(d))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        budget = self.derivative_budget()
        if self.rough is not None:
            budget += self.rough.derivative_bound()
        if budget >= 1:
            raise NonInvertibleMap(f"derivative budget {budget:.4g} >= 1")
        self.check_derivative()

    def derivative_budget(self) -> float:
        return sum(TWO_PI * j * (abs(cj) + abs(dj))
                   for j, (cj, dj) in enumerate(zip(self.c, self.d), start=1))

    @classmethod
    def rotation(cls, s) -> "SmoothCircleMap":
        return cls(shift=float(s))

    @classmethod
    def identity(cls) -> "SmoothCircleMap":
        return cls()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        y = x + self.shift
        for j, (cj, dj) in enumerate(zip(self.c, self.d), start=1):
            if cj or dj:
                y = y + cj * np.sin(TWO_PI * j * x) + dj * np.cos(TWO_PI * j * x)
        if self.rough is not None:
            y = y + self.rough.value(x)
        return y

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        dy = np.ones_like(x)
        for j, (cj, dj) in enumerate(zip(self.c, self.d), start=1):
            if cj or dj:
                w = TWO_PI * j
                dy = dy + w * (cj * np.cos(w * x) - dj * np.sin(w * x))
        if self.rough is not None:
            dy = dy + self.rough.derivative(x)
        return dy

    def second_derivative(self, x):
        if self.rough is not None:
            raise ValueError("rough maps have no second derivative")
        x = np.asarray(x, dtype=float)
        ddy = np.zeros_like(x)
        for j, (cj, dj) in enumerate(zip(self.c, self.d), start=1):
            w = TWO_PI * j
            ddy = ddy - w * w * (cj * np.sin(w * x) + dj * np.cos(w * x))
        return ddy

    def check_derivative(self, n=4096):
        x = np.arange(n) / n
        if self.rough is not None:
            x = np.concatenate([x, self.rough.center + self.rough.width * np.linspace(-1, 1, n)])
        if not np.all(self.derivative(x) > 0):
            raise NonInvertibleMap("nonpositive derivative on the verification grid")

    def __mul__(self, other) -> "ComposedMap":
        return ComposedMap(self, other)

    def to_json(self):
        out = {"fourier": {"c": list(self.c), "d": list(self.d)}, "shift": self.shift}
        if self.rough is not None:
            r = self.rough
            out["rough"] = {"alpha": r.alpha, "center": str(r.center),
                            "amplitude": r.amplitude, "width": r.width}
        return out


@dataclass(frozen=True)
class ComposedMap:
    """outer ∘ inner with the chain rule for the derivative."""
    outer: object
    inner: object

    def __call__(self, x):
        return self.outer(self.inner(x))

    def derivative(self, x):
        return self.outer.derivative(self.inner(x)) * self.inner.derivative(x)

    def __mul__(self, other):
        return ComposedMap(self, other)


def random_smooth_map(rng: np.random.Generator, modes=3, budget=0.6, shift=True) -> SmoothCircleMap:
    """Fourier map with sum 2 pi j (|c_j| + |d_j|) = budget * U(0.2, 1)."""
    c = rng.normal(size=modes) / np.arange(1, modes + 1) ** 2
    d = rng.normal(size=modes) / np.arange(1, modes + 1) ** 2
    scale = sum(TWO_PI * j * (abs(a) + abs(b)) for j, (a, b) in enumerate(zip(c, d), start=1))
    target = budget * rng.uniform(0.2, 1.0)
    s = float(rng.uniform()) if shift else 0.0
    return SmoothCircleMap(tuple(c * target / scale), tuple(d * target / scale), s)


def parse_map(spec: dict) -> SmoothCircleMap:
    four = spec.get("fourier", {})
    rough = None
    if spec.get("rough") is not None:
        r = spec["rough"]
        rough = RoughBump(alpha=float(r.get("alpha", 1.3)), center=float(_num(r.get("center", "0.25"))),
                          amplitude=float(r.get("amplitude", 0.01)), width=float(r.get("width", 0.125)))
    return SmoothCircleMap(tuple(four.get("c", ())), tuple(four.get("d", ())),
                           float(_num(spec.get("shift", 0))), rough)


def _num(v):
    if isinstance(v, str) and "/" in v:
        p, q = v.split("/")
        return int(p) / int(q)
    return float(v)


# -- kernel -------------------------------------------------------------------

def circle_dist(t):
    t = np.asarray(t, dtype=float)
    return np.abs(t - np.round(t))


def phi_kernel(x, y):
    """Phi(x, y) = f(x - y), f(t) = 1 / dist(t, 0)."""
    return 1.0 / circle_dist(np.asarray(x) - np.asarray(y))


def act_on_kernel(F, g):
    """F^g as a callable: (x, y) -> F(g x, g y) sqrt(g'(x) g'(y))."""
    def Fg(x, y):
        dx, dy = g.derivative(x), g.derivative(y)
        if np.any(dx <= 0) or np.any(dy <= 0):
            raise NonInvertibleMap("nonpositive derivative at an evaluation point")
        return F(g(x), g(y)) * np.sqrt(dx * dy)
    return Fg


@dataclass(frozen=True)
class KernelGrid:
    """Refinement schedule of (N, delta) levels on the torus (R/Z)^2."""
    levels: tuple

    def __post_init__(self):
        lv = tuple((int(n), float(dl)) for n, dl in self.levels)
        object.__setattr__(self, "levels", lv)
        ns = [n for n, _ in lv]
        ds = [dl for _, dl in lv]
        if any(a >= b for a, b in zip(ns, ns[1:])) or any(a <= b for a, b in zip(ds, ds[1:])):
            raise ValueError("N must increase and delta must decrease across levels")
        for n, dl in lv:
            if dl < 2.0 / n - 1e-15:
                raise ValueError(f"band {dl} narrower than two cells at N = {n}")

    @classmethod
    def standard(cls, levels=5, base_n=256, band_cells=4) -> "KernelGrid":
        return cls(tuple((base_n << k, band_cells / (base_n << k)) for k in range(levels)))


@dataclass
class LevelStats:
    n: int
    delta: float
    sup: float
    l2: float
    retries: int = 0

    def to_json(self):
        return {"n": self.n, "delta": self.delta, "sup": self.sup, "l2": self.l2,
                "retries": self.retries}


@dataclass
class ProbeConfig:
    stable_low: float = 0.8
    stable_high: float = 1.25
    chunk_rows: int = 256
    max_retries: int = 3
    # sups below noise_floor / delta (the kernel scale at the band edge) count as 0
    noise_floor: float = 1e-9


@dataclass
class ProbeReport:
    levels: list
    config: ProbeConfig = field(default_factory=ProbeConfig)

    @property
    def sups(self):
        return [lv.sup for lv in self.levels]

    @property
    def l2s(self):
        return [lv.l2 for lv in self.levels]

    def ratio(self, which="sup"):
        s = [getattr(lv, which) for lv in self.levels]
        s = [0.0 if v <= self.config.noise_floor / lv.delta else v
             for v, lv in zip(s, self.levels)]
        if s[-2] == 0:
            return 1.0 if s[-1] == 0 else math.inf
        return s[-1] / s[-2]

    @property
    def growth(self):
        s = self.sups
        return math.inf if s[0] == 0 and s[-1] > 0 else (s[-1] / s[0] if s[0] else 1.0)

    def verdict(self, which="sup") -> str:
        r = self.ratio(which)
        if r > self.config.stable_high:
            return "growing"
        if r >= self.config.stable_low:
            return "stabilized"
        return "unresolved"

    def to_json(self):
        def finite(v):
            return v if math.isfinite(v) else None
        return {"levels": [lv.to_json() for lv in self.levels], "ratio": finite(self.ratio()),
                "l2Ratio": finite(self.ratio("l2")), "verdict": self.verdict(),
                "stableRange": [self.config.stable_low, self.config.stable_high]}


def _level(g, n, band_cells, cfg):
    x = np.arange(n, dtype=float) / n
    gx = g(x)
    gp = g.derivative(x)
    if np.any(gp <= 0):
        raise NonInvertibleMap("nonpositive derivative on the grid")
    sq = np.sqrt(gp)
    idx = np.arange(n)
    sup, chunk_sums = 0.0, []
    for lo in range(0, n, cfg.chunk_rows):
        rows = idx[lo:lo + cfg.chunk_rows]
        k = np.abs(rows[:, None] - idx[None, :])
        k = np.minimum(k, n - k)
        keep = k >= band_cells
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            base = 1.0 / circle_dist(x[rows, None] - x[None, :])
            moved = sq[rows, None] * sq[None, :] / circle_dist(gx[rows, None] - gx[None, :])
            diff = np.where(keep, moved - base, 0.0)
        if not np.all(np.isfinite(diff)):
            return None
        sup = max(sup, float(np.max(np.abs(diff))))
        chunk_sums.append(float(np.sum(diff * diff)))
    l2 = math.sqrt(math.fsum(chunk_sums)) / n
    return sup, l2


def _probe(g, schedule: KernelGrid, cfg: ProbeConfig | None):
    cfg = cfg or ProbeConfig()
    if len(schedule.levels) < 3:
        raise ValueError("schedule needs at least 3 levels")
    out = []
    for n, dl in schedule.levels:
        cells = max(2, int(math.ceil(dl * n - 1e-9)))
        for retry in range(cfg.max_retries + 1):
            res = _level(g, n, cells, cfg)
            if res is not None:
                break
            cells *= 2
        else:
            raise NumericalOverflow(f"non-finite kernel values at N = {n} after widening the band")
        out.append(LevelStats(n, cells / n, res[0], res[1], retry))
    return ProbeReport(out, cfg)


def boundedness_probe(g, schedule: KernelGrid, cfg: ProbeConfig | None = None) -> ProbeReport:
    """Per-level sup of |Phi^g - Phi| off the diagonal band (the l2 column is filled too)."""
    return _probe(g, schedule, cfg)


def kernel_square_integrability_probe(g, schedule: KernelGrid, cfg: ProbeConfig | None = None):
    """Per-level discrete L^2 norm of Phi^g - Phi off the band."""
    rep = _probe(g, schedule, cfg)
    return rep.l2s, rep


def right_action_error(g, h, npoints=10_000, n_grid=4096, seed=0, F=phi_kernel):
    """max relative error between F^{g h} and (F^g)^h at random off-diagonal grid points."""
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n_grid, size=npoints)
    j = rng.integers(0, n_grid, size=npoints)
    j = np.where(i == j, (j + 1) % n_grid, j)
    x, y = i / n_grid, j / n_grid
    lhs = act_on_kernel(F, ComposedMap(g, h))(x, y)
    rhs = act_on_kernel(act_on_kernel(F, g), h)(x, y)
    return float(np.max(np.abs(lhs - rhs) / np.abs(lhs)))
