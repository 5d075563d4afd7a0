"""Exact integer/rational matrices, elementary generators and group words.

Entries are stored as Python ``int`` when integral and as
:class:`fractions.Fraction` otherwise, so SL(n, Z) computations stay on the
fast integer path while SL(n, Q) is handled by the same code.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


class DimensionError(ValueError):
    pass


class NotSpecialLinear(ValueError):
    pass


def as_rational(x) -> Rational:
    """Coerce ``x`` (int, Fraction, or a "p/q" string) to a normalized rational."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational literal")
        q = Fraction(s)
        return q.numerator if q.denominator == 1 else q
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rational_to_str(x: Rational) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _norm(x) -> Rational:
    if type(x) is int:
        return x
    if x.denominator == 1:
        return x.numerator
    return x


@dataclass(frozen=True)
class SquareMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(as_rational(v) for v in r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionError("matrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other):
        return multiply(self, other)

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, k: int):
        return power(self, k)

    def is_identity(self) -> bool:
        n = self.n
        return all(self.rows[i][j] == (1 if i == j else 0)
                   for i in range(n) for j in range(n))

    def is_integral(self) -> bool:
        return all(type(v) is int for r in self.rows for v in r)

    def to_json(self) -> dict:
        return {"n": self.n,
                "rows": [[rational_to_str(v) for v in r] for r in self.rows]}

    def __repr__(self):
        body = "; ".join(" ".join(rational_to_str(v) for v in r) for r in self.rows)
        return f"{type(self).__name__}[{body}]"


class SpecialLinearElement(SquareMatrix):
    """Square matrix with determinant exactly 1."""

    def __post_init__(self):
        super().__post_init__()
        if determinant(self) != 1:
            raise NotSpecialLinear(f"determinant is {determinant(self)}, not 1")


def _raw(cls, rows):
    # Skips validation; callers guarantee shape and (for SL) det = 1.
    m = object.__new__(cls)
    object.__setattr__(m, "rows", rows)
    return m


def identity(n: int) -> SpecialLinearElement:
    return _raw(SpecialLinearElement,
                tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))


def diag(*entries) -> SquareMatrix:
    n = len(entries)
    rows = [[0] * n for _ in range(n)]
    for i, d in enumerate(entries):
        rows[i][i] = d
    return make_matrix(rows)


def make_matrix(rows: Sequence[Sequence]) -> SquareMatrix:
    """Build a matrix, promoting it to SpecialLinearElement when det = 1."""
    m = SquareMatrix(tuple(tuple(r) for r in rows))
    if determinant(m) == 1:
        return _raw(SpecialLinearElement, m.rows)
    return m


def multiply(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    n = a.n
    if b.n != n:
        raise DimensionError(f"cannot multiply {n}x{n} by {b.n}x{b.n}")
    bt = tuple(zip(*b.rows))
    rows = tuple(tuple(_norm(sum(x * y for x, y in zip(r, c))) for c in bt)
                 for r in a.rows)
    both_sl = isinstance(a, SpecialLinearElement) and isinstance(b, SpecialLinearElement)
    return _raw(SpecialLinearElement if both_sl else SquareMatrix, rows)


def determinant(m: SquareMatrix) -> Rational:
    """Fraction-free (Bareiss) elimination; exact for int and Fraction entries."""
    n = m.n
    a = [list(r) for r in m.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if type(num) is int and type(prev) is int else num / prev
        prev = a[k][k]
    return _norm(sign * a[n - 1][n - 1])


def _minor(rows, i, j):
    return SquareMatrix(tuple(tuple(v for c, v in enumerate(r) if c != j)
                              for k, r in enumerate(rows) if k != i))


def adjugate(m: SquareMatrix) -> SquareMatrix:
    n = m.n
    if n == 1:
        return SquareMatrix(((1,),))
    rows = tuple(tuple(_norm((-1) ** (i + j) * determinant(_minor(m.rows, j, i)))
                       for j in range(n)) for i in range(n))
    return SquareMatrix(rows)


def inverse(m: SpecialLinearElement) -> SpecialLinearElement:
    """Exact inverse; for det = 1 this is the adjugate."""
    if not isinstance(m, SpecialLinearElement):
        raise NotSpecialLinear("inverse is only defined here for det = 1")
    n = m.n
    if n == 2:
        (a, b), (c, d) = m.rows
        return _raw(SpecialLinearElement, ((d, _norm(-b)), (_norm(-c), a)))
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = m.rows
        rows = ((e * i - f * h, c * h - b * i, b * f - c * e),
                (f * g - d * i, a * i - c * g, c * d - a * f),
                (d * h - e * g, b * g - a * h, a * e - b * d))
        return _raw(SpecialLinearElement, tuple(tuple(_norm(v) for v in r) for r in rows))
    return _raw(SpecialLinearElement, adjugate(m).rows)


def power(m: SquareMatrix, k: int) -> SquareMatrix:
    if k < 0:
        m, k = inverse(m), -k
    result = identity(m.n)
    base = m
    while k:
        if k & 1:
            result = multiply(result, base)
        base = multiply(base, base)
        k >>= 1
    return result


def commutator(a: SpecialLinearElement, b: SpecialLinearElement) -> SpecialLinearElement:
    """[a, b] = a^-1 b^-1 a b."""
    if a.n != b.n:
        raise DimensionError("commutator of matrices of different sizes")
    return multiply(multiply(inverse(a), inverse(b)), multiply(a, b))


@dataclass(frozen=True, order=True)
class ElementaryMatrix:
    """Identity plus ``t`` at position (i, j); indices are 1-based like E_ij."""
    n: int
    i: int
    j: int
    t: Rational

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("elementary matrix needs i != j")
        if not (1 <= self.i <= self.n and 1 <= self.j <= self.n):
            raise ValueError(f"index out of range for n={self.n}: ({self.i}, {self.j})")
        object.__setattr__(self, "t", as_rational(self.t))

    def matrix(self) -> SpecialLinearElement:
        rows = [[1 if r == c else 0 for c in range(self.n)] for r in range(self.n)]
        rows[self.i - 1][self.j - 1] = self.t
        return _raw(SpecialLinearElement, tuple(tuple(r) for r in rows))

    def inverse(self) -> "ElementaryMatrix":
        return ElementaryMatrix(self.n, self.i, self.j, _norm(-self.t))

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "t": rational_to_str(self.t)}


def E(i: int, j: int, t=1, n: int = 3) -> SpecialLinearElement:
    return ElementaryMatrix(n, i, j, t).matrix()


def product(mats: Iterable[SquareMatrix], n: int | None = None) -> SquareMatrix:
    result = None
    for m in mats:
        result = m if result is None else multiply(result, m)
    if result is None:
        if n is None:
            raise ValueError("empty product needs an explicit dimension")
        return identity(n)
    return result


# -- group words --------------------------------------------------------------

def _reduce(letters) -> tuple:
    out: list = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e2 = out[-1][1] + e
            out.pop()
            if e2:
                out.append((g, e2))
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class GroupWord:
    """Freely reduced word: a tuple of (generator id, nonzero exponent)."""
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce((str(g), int(e)) for g, e in self.letters))

    @classmethod
    def gen(cls, g: str, e: int = 1) -> "GroupWord":
        return cls(((g, e),))

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        """Parse "a1^2 a3^-1" style text; "e" or "" is the empty word."""
        letters = []
        for tok in text.replace("*", " ").split():
            if tok == "e":
                continue
            g, _, e = tok.partition("^")
            letters.append((g, int(e) if e else 1))
        return cls(tuple(letters))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def __pow__(self, k: int) -> "GroupWord":
        if k < 0:
            return self.inverse() ** (-k)
        return GroupWord(self.letters * k)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def is_empty(self) -> bool:
        return not self.letters

    def __str__(self):
        if not self.letters:
            return "e"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)

    def to_json(self):
        return [[g, e] for g, e in self.letters]

    @classmethod
    def from_json(cls, data) -> "GroupWord":
        if isinstance(data, str):
            return cls.parse(data)
        return cls(tuple((g, e) for g, e in data))


@dataclass
class MatrixGroup:
    """Generators given as matrices; words are evaluated by exact products."""
    generators: dict
    n: int = field(default=0)

    def __post_init__(self):
        dims = {m.n for m in self.generators.values()}
        if len(dims) > 1:
            raise DimensionError("generators of different sizes")
        if dims:
            self.n = dims.pop()
        elif not self.n:
            self.n = 1
        self._inv = {g: inverse(m) for g, m in self.generators.items()}
        self._cache: dict = {}

    def evaluate(self, w: GroupWord) -> SpecialLinearElement:
        hit = self._cache.get(w.letters)
        if hit is not None:
            return hit
        result = identity(self.n)
        for g, e in w.letters:
            try:
                base = self.generators[g] if e > 0 else self._inv[g]
            except KeyError:
                raise KeyError(f"unknown generator {g!r}") from None
            result = multiply(result, power(base, abs(e)))
        if len(self._cache) < 200_000:
            self._cache[w.letters] = result
        return result

    def is_identity(self, w: GroupWord) -> bool:
        return self.evaluate(w).is_identity()

    def letters(self):
        """Generators and their inverses as one-letter words, in a fixed order."""
        out = []
        for g in self.generators:
            out.append(GroupWord.gen(g, 1))
            out.append(GroupWord.gen(g, -1))
        return out


# -- JSON ---------------------------------------------------------------------

def matrix_from_json(data: dict) -> SquareMatrix:
    if not isinstance(data, dict) or "rows" not in data:
        raise ValueError('matrix JSON must be an object with "rows"')
    rows = data["rows"]
    if "n" in data and data["n"] != len(rows):
        raise DimensionError(f'"n" = {data["n"]} but {len(rows)} rows given')
    for r in rows:
        for v in r:
            if not isinstance(v, (str, int)) or isinstance(v, bool):
                raise ValueError(f"matrix entries must be decimal strings, got {v!r}")
    return make_matrix([[as_rational(v) if isinstance(v, str) else v for v in r] for r in rows])
