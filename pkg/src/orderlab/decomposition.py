"""Products of unipotent elementary matrices.

Row operations are recorded as left multiplications ``M <- E(i, j, t) M``
(row_i += t * row_j).  If ``E_r ... E_1 M = I`` then
``M = E_1^-1 E_2^-1 ... E_r^-1``, which is the factor list we return.
"""
from __future__ import annotations

import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import (ElementaryMatrix, SpecialLinearElement, identity, make_matrix,
                    multiply, rational_to_str)

INTEGERS = "z"
RATIONALS = "q"


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Decomposition:
    factors: tuple
    ring: str
    n: int

    @property
    def count(self) -> int:
        return len(self.factors)

    def product(self) -> SpecialLinearElement:
        result = identity(self.n)
        for f in self.factors:
            result = multiply(result, f.matrix())
        return result

    def to_json(self) -> dict:
        return {"ring": self.ring, "n": self.n, "count": self.count,
                "factors": [f.to_json() for f in self.factors]}


@dataclass
class DecompositionStats:
    sample_size: int
    histogram: dict = field(default_factory=dict)
    max_count: int = 0
    mean_count: float = 0.0

    @classmethod
    def from_counts(cls, counts) -> "DecompositionStats":
        counts = list(counts)
        hist = dict(sorted(Counter(counts).items()))
        return cls(sample_size=len(counts), histogram=hist,
                   max_count=max(counts, default=0),
                   mean_count=(sum(counts) / len(counts)) if counts else 0.0)

    def to_json(self) -> dict:
        return {"sampleSize": self.sample_size,
                "countHistogram": {str(k): v for k, v in self.histogram.items()},
                "maxCount": self.max_count, "meanCount": self.mean_count}


class _Reducer:
    """Mutable working copy of the matrix plus the log of row operations."""

    def __init__(self, m):
        self.n = m.n
        self.a = [list(r) for r in m.rows]
        self.ops: list = []

    def add_row(self, i, j, t):
        # row_i += t * row_j  (0-based internally)
        if t == 0:
            return
        if type(t) is Fraction and t.denominator == 1:
            t = t.numerator
        ri, rj = self.a[i], self.a[j]
        for c in range(self.n):
            if rj[c]:
                v = ri[c] + t * rj[c]
                ri[c] = v.numerator if type(v) is Fraction and v.denominator == 1 else v
        self.ops.append((i, j, t))

    def factors(self, tail=()):
        out = [ElementaryMatrix(self.n, i + 1, j + 1, -t) for i, j, t in self.ops]
        out.extend(tail)
        return tuple(_merge(out))


def _merge(factors):
    # Adjacent factors with the same (i, j) combine additively.
    out: list = []
    for f in factors:
        if out and (out[-1].i, out[-1].j) == (f.i, f.j):
            t = out[-1].t + f.t
            out.pop()
            if t != 0:
                out.append(ElementaryMatrix(f.n, f.i, f.j, t))
        elif f.t != 0:
            out.append(f)
    return out


def _check(m):
    if not isinstance(m, SpecialLinearElement):
        m = make_matrix(m.rows)
        if not isinstance(m, SpecialLinearElement):
            raise ValueError("input does not have determinant 1")
    return m


def diagonal_pair_factors(n, i, j, d) -> list:
    """Four elementary factors multiplying to diag(.., d at i, .., 1/d at j, ..)."""
    d = Fraction(d)
    if d == 1:
        return []
    c = 1
    b = (d - 1) / c
    a = -c / d
    e = (1 - d) / d
    # L(a) U(b) L(c) U(e) with U = E(i, j), L = E(j, i)
    return [ElementaryMatrix(n, j, i, a), ElementaryMatrix(n, i, j, b),
            ElementaryMatrix(n, j, i, c), ElementaryMatrix(n, i, j, e)]


def decompose_over_field(m) -> Decomposition:
    """Elimination over Q.

    At most one pivot-fixing addition per column, n(n-1)/2 clears below and
    above the diagonal, and 4 factors per adjacent diagonal pair; for n = 3
    that is 2 + 3 + 3 + 8 = 16.
    """
    m = _check(m)
    n = m.n
    r = _Reducer(m)
    a = r.a
    for col in range(n - 1):
        if a[col][col] == 0:
            src = next(k for k in range(col + 1, n) if a[k][col] != 0)
            r.add_row(col, src, 1)
        p = a[col][col]
        for k in range(col + 1, n):
            if a[k][col] != 0:
                r.add_row(k, col, -Fraction(a[k][col]) / p)
    for col in range(n - 1, 0, -1):
        p = a[col][col]
        for k in range(col):
            if a[k][col] != 0:
                r.add_row(k, col, -Fraction(a[k][col]) / p)
    # a is now diagonal with product 1: diag(d1, .., dn) = prod of pair blocks
    tail = []
    running = Fraction(1)
    for k in range(n - 1):
        running *= a[k][k]
        tail.extend(diagonal_pair_factors(n, k + 1, k + 2, running))
    return Decomposition(r.factors(tail), RATIONALS, n)


def decompose_over_integers(m) -> Decomposition:
    """Euclidean row reduction using only integer E(i, j, t)."""
    m = _check(m)
    if not m.is_integral():
        raise ValueError("decompose_over_integers needs an integer matrix")
    n = m.n
    r = _Reducer(m)
    a = r.a
    for col in range(n - 1):
        while True:
            nz = [k for k in range(col, n) if a[k][col] != 0]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda k: (abs(a[k][col]), k))
            for k in nz:
                if k != piv:
                    q = _round_div(a[k][col], a[piv][col])
                    r.add_row(k, piv, -q)
        piv = next(k for k in range(col, n) if a[k][col] != 0)
        if piv != col:
            # no swaps: add the pivot row up, then clear it
            r.add_row(col, piv, 1)
            r.add_row(piv, col, -1)
        if a[col][col] == -1:
            nxt = col + 1
            r.add_row(nxt, col, -1)
            r.add_row(col, nxt, 2)
            r.add_row(nxt, col, -1)
        assert a[col][col] == 1
    assert a[n - 1][n - 1] == 1
    for col in range(n - 1, 0, -1):
        for k in range(col):
            if a[k][col] != 0:
                r.add_row(k, col, -a[k][col])
    return Decomposition(r.factors(), INTEGERS, n)


def _round_div(x: int, y: int) -> int:
    q, rem = divmod(x, y)
    if 2 * abs(rem) > abs(y):
        q += 1
    return q


def decompose(m, ring: str) -> Decomposition:
    if ring == INTEGERS:
        return decompose_over_integers(m)
    if ring == RATIONALS:
        return decompose_over_field(m)
    raise ValueError(f"unknown ring {ring!r}; expected 'z' or 'q'")


def random_elementary(rng: random.Random, n: int, ring: str, coeff_bound: int) -> ElementaryMatrix:
    i, j = rng.sample(range(1, n + 1), 2)
    t = 0
    while t == 0:
        t = rng.randint(-coeff_bound, coeff_bound)
    if ring == RATIONALS:
        t = Fraction(t, rng.randint(1, coeff_bound))
    return ElementaryMatrix(n, i, j, t)


def random_special_linear(n: int, ring: str, word_length: int, coeff_bound: int,
                          seed: int) -> SpecialLinearElement:
    """Product of ``word_length`` random elementary matrices; seeded."""
    if word_length < 0:
        raise ValueError("word_length must be >= 0")
    rng = random.Random(seed)
    result = identity(n)
    for _ in range(word_length):
        result = multiply(result, random_elementary(rng, n, ring, coeff_bound).matrix())
    return result


def elementary_alphabet(n: int, coeff_bound: int) -> list:
    alphabet = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                for t in range(-coeff_bound, coeff_bound + 1):
                    if t:
                        alphabet.append(ElementaryMatrix(n, i, j, t))
    return sorted(alphabet, key=lambda f: (f.i, f.j, f.t))


def minimal_decomposition(m, coeff_bound: int, length_bound: int,
                          node_budget: int = 10 ** 6) -> Decomposition | None:
    """Breadth-first search over words in E(i, j, t), |t| <= coeff_bound.

    Frontier nodes are expanded in lexicographic factor order, so the first
    word reaching ``m`` is the lexicographically least among minimal ones.
    """
    if coeff_bound < 1 or length_bound < 0:
        raise ValueError("need coeff_bound >= 1 and length_bound >= 0")
    m = _check(m)
    n = m.n
    start = identity(n)
    if m.rows == start.rows:
        return Decomposition((), INTEGERS, n)
    alphabet = [(f, f.matrix()) for f in elementary_alphabet(n, coeff_bound)]
    seen = {start.rows}
    frontier = [(start, ())]
    nodes = 1
    for _ in range(length_bound):
        nxt = []
        for mat, word in frontier:
            for f, fm in alphabet:
                child = multiply(mat, fm)
                key = child.rows
                if key in seen:
                    continue
                if key == m.rows:
                    return Decomposition(word + (f,), INTEGERS, n)
                seen.add(key)
                nodes += 1
                if nodes > node_budget:
                    raise SearchBudgetExceeded(f"frontier exceeded {node_budget} nodes")
                nxt.append((child, word + (f,)))
        frontier = nxt
    return None


def _decompose_count(args):
    m, ring = args
    return decompose(m, ring).count


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("ORDERLAB_THREADS", "1")))
    except ValueError:
        return 1


def decomposition_stats(n: int, samples: int, word_length: int, seed: int,
                        ring: str = INTEGERS, coeff_bound: int = 3,
                        workers: int | None = None) -> DecompositionStats:
    """Count statistics over seeded random matrices (sample k uses seed + k)."""
    mats = [random_special_linear(n, ring, word_length, coeff_bound, seed + k)
            for k in range(samples)]
    workers = worker_count() if workers is None else workers
    jobs = [(m, ring) for m in mats]
    if workers > 1 and samples > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(_decompose_count, jobs, chunksize=32))
    else:
        counts = [_decompose_count(j) for j in jobs]
    return DecompositionStats.from_counts(counts)


def factors_from_json(data, n: int) -> tuple:
    from .exact import as_rational
    return tuple(ElementaryMatrix(n, f["i"], f["j"], as_rational(f["t"])) for f in data)


__all__ = ["Decomposition", "DecompositionStats", "decompose", "decompose_over_field",
           "decompose_over_integers", "minimal_decomposition", "random_special_linear",
           "decomposition_stats", "rational_to_str", "SearchBudgetExceeded"]
