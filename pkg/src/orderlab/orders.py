"""Left orders as sign oracles, positive cones, and their axiom checks.

Convention: ``u < v`` iff ``u^-1 v`` is positive.  This is the ordering whose
positive cone is ``{a : a > e}`` and it is left-invariant because
``(cu)^-1 (cv) = u^-1 v``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .certificates import (ClosureViolation, PartitionViolation, Sign, UndecidableQuery,
                           ViolationCertificate, ViolationFound)
from .exact import GroupWord, MatrixGroup, inverse, multiply


class OrderError(ValueError):
    pass


# -- oracles ------------------------------------------------------------------

class OrderOracle:
    """Base class: ``sign(word) -> Sign`` plus a matrix group for equality."""

    group: MatrixGroup

    def sign(self, w: GroupWord) -> Sign:
        raise NotImplementedError

    def less(self, u: GroupWord, v: GroupWord) -> bool:
        return self.sign(u.inverse() * v) is Sign.POSITIVE

    def compare(self, u: GroupWord, v: GroupWord) -> int:
        s = self.sign(u.inverse() * v)
        return -1 if s is Sign.POSITIVE else 1 if s is Sign.NEGATIVE else 0


@dataclass
class PositiveConeSpec:
    """Membership predicate over words, optionally with an explicit finite support."""
    group: MatrixGroup
    member: Callable[[GroupWord], bool]
    support: frozenset | None = None

    def __contains__(self, w: GroupWord) -> bool:
        if self.group.is_identity(w):
            return False
        return bool(self.member(w))

    @classmethod
    def finite(cls, group: MatrixGroup, words: Iterable[GroupWord]) -> "PositiveConeSpec":
        keys = {group.evaluate(w).rows for w in words if not group.is_identity(w)}
        return cls(group, lambda w: group.evaluate(w).rows in keys, frozenset(keys))


class ConeOrder(OrderOracle):
    """Order read off a cone; inconsistent cones raise PartitionViolation."""

    def __init__(self, cone: PositiveConeSpec):
        self.cone = cone
        self.group = cone.group

    def sign(self, w: GroupWord) -> Sign:
        if self.group.is_identity(w):
            return Sign.IDENTITY
        pos = w in self.cone
        neg = w.inverse() in self.cone
        if pos and neg:
            raise ViolationFound(ViolationCertificate(
                [], PartitionViolation((w, w.inverse()), "cone contains w and w^-1")))
        if not pos and not neg:
            raise ViolationFound(ViolationCertificate(
                [], PartitionViolation((w,), "neither w nor w^-1 is in the cone")))
        return Sign.POSITIVE if pos else Sign.NEGATIVE


def cone_from_order(oracle: OrderOracle) -> PositiveConeSpec:
    return PositiveConeSpec(oracle.group, lambda w: oracle.sign(w) is Sign.POSITIVE)


def order_from_cone(cone: PositiveConeSpec) -> ConeOrder:
    return ConeOrder(cone)


def matrix_lex_sign(m) -> Sign:
    """Sign of the first nonzero entry of m - I in row-major order."""
    n = m.n
    for i in range(n):
        for j in range(n):
            v = m.rows[i][j] - (1 if i == j else 0)
            if v:
                return Sign.of_int(v)
    return Sign.IDENTITY


def matrix_lex_cone(group: MatrixGroup) -> PositiveConeSpec:
    """Lexicographic cone on unipotent coordinates.

    A genuine left (indeed bi-) order on unitriangular groups such as Z, Z^2
    embedded as E13/E23, and the integer Heisenberg group; on larger groups
    it is only a candidate cone for the checkers to test.
    """
    return PositiveConeSpec(group, lambda w: matrix_lex_sign(group.evaluate(w)) is Sign.POSITIVE)


@dataclass
class TableCone:
    """Cone from explicit (word, sign) entries plus a default rule for the rest."""
    group: MatrixGroup
    entries: dict = field(default_factory=dict)
    default: str = "lex"

    def sign_of(self, w: GroupWord) -> Sign:
        m = self.group.evaluate(w)
        if m.is_identity():
            return Sign.IDENTITY
        if m.rows in self.entries:
            return self.entries[m.rows]
        mi = inverse(m).rows
        if mi in self.entries:
            return -self.entries[mi]
        if self.default == "lex":
            return matrix_lex_sign(m)
        if self.default == "positive":
            return Sign.POSITIVE
        if self.default == "negative":
            return Sign.NEGATIVE
        raise UndecidableQuery(w, "not listed and default rule is 'reject'")

    def cone(self) -> PositiveConeSpec:
        return PositiveConeSpec(self.group, lambda w: self.sign_of(w) is Sign.POSITIVE)


class GreedyOracle(OrderOracle):
    """Answers each new element consistently with what is forced, else freely.

    Forced answers come from earlier answers for the same element or its
    inverse, and from closure: if ``x = u v`` with u, v already positive then
    x is positive (and x^-1 negative).  Free choices are Positive when
    ``seed`` is None, otherwise drawn from ``random.Random(seed)``.
    ``prefix_radius`` pre-answers the whole word ball of that radius in
    shortlex order before any outside query.
    """

    def __init__(self, group: MatrixGroup, seed: int | None = None, prefix_radius: int = 0):
        self.group = group
        self.seed = seed
        self.rng = random.Random(seed) if seed is not None else None
        self.known: dict = {}
        self.positives: list = []
        self._pos_keys: set = set()
        if prefix_radius:
            for w in word_ball(group, prefix_radius):
                self.sign(w)

    def _forced(self, m) -> Sign | None:
        for u, ui in self.positives:
            if multiply(ui, m).rows in self._pos_keys:
                return Sign.POSITIVE
        mi = inverse(m)
        for u, ui in self.positives:
            if multiply(ui, mi).rows in self._pos_keys:
                return Sign.NEGATIVE
        return None

    def sign(self, w: GroupWord) -> Sign:
        m = self.group.evaluate(w)
        if m.is_identity():
            return Sign.IDENTITY
        s = self.known.get(m.rows)
        if s is not None:
            return s
        s = self._forced(m)
        if s is None:
            if self.rng is None:
                s = Sign.POSITIVE
            else:
                s = Sign.POSITIVE if self.rng.random() < 0.5 else Sign.NEGATIVE
        mi = inverse(m)
        self.known[m.rows] = s
        self.known[mi.rows] = -s
        pos, neg = (m, mi) if s is Sign.POSITIVE else (mi, m)
        self.positives.append((pos, neg))
        self._pos_keys.add(pos.rows)
        return s


def rationals() -> Iterator[Fraction]:
    """0, then ±q over the Calkin-Wilf sequence: 0, 1, -1, 1/2, -1/2, 2, -2, ..."""
    yield Fraction(0)
    q = Fraction(1)
    while True:
        yield q
        yield -q
        q = 1 / (2 * (q.numerator // q.denominator) - q + 1)


class ActionOrder(OrderOracle):
    """Order induced by an action on the line, ties broken along q_1, q_2, ...

    ``action`` maps generator ids to exact increasing maps of Q with an
    ``inverse()`` method.  ``group`` (optional) decides identity when a word
    fixes every probed rational.
    """

    def __init__(self, action: dict, group: MatrixGroup | None = None, depth: int = 64,
                 enumeration: Iterable[Fraction] | None = None):
        self.action = dict(action)
        self._inv = {g: f.inverse() for g, f in self.action.items()}
        self.group = group
        self.depth = depth
        self.points = list(itertools.islice(enumeration if enumeration is not None
                                            else rationals(), depth))

    def apply(self, w: GroupWord, x):
        for g, e in reversed(w.letters):
            f = self.action[g] if e > 0 else self._inv[g]
            for _ in range(abs(e)):
                x = f(x)
        return x

    def sign(self, w: GroupWord) -> Sign:
        for q in self.points:
            y = self.apply(w, q)
            if y != q:
                return Sign.POSITIVE if y > q else Sign.NEGATIVE
        if w.is_empty() or (self.group is not None and self.group.is_identity(w)):
            return Sign.IDENTITY
        raise UndecidableQuery(w, f"fixes the first {self.depth} rationals")


def order_from_action(action: dict, group: MatrixGroup | None = None, depth: int = 64,
                      enumeration=None) -> ActionOrder:
    return ActionOrder(action, group, depth, enumeration)


# -- balls and axiom checks -----------------------------------------------------

def word_ball(group: MatrixGroup, radius: int, dedupe: bool = True) -> list:
    """Words of length <= radius in shortlex order, one per element if ``dedupe``."""
    letters = group.letters()
    seen = {group.evaluate(GroupWord()).rows}
    out = [GroupWord()]
    frontier = [GroupWord()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for a in letters:
                v = w * a
                if len(v) != len(w) + 1:
                    continue
                if dedupe:
                    key = group.evaluate(v).rows
                    if key in seen:
                        continue
                    seen.add(key)
                nxt.append(v)
        out.extend(nxt)
        frontier = nxt
    return out


@dataclass
class ConeReport:
    passed: bool
    elements: int
    pairs_checked: int


def check_cone_axioms(cone: PositiveConeSpec, ball: list):
    """ConeReport when both axioms hold on ``ball``, else a ViolationCertificate.

    Closure is checked before the partition axiom.
    """
    group = cone.group
    mats = [group.evaluate(w) for w in ball]
    index = {}
    for w, m in zip(ball, mats):
        index.setdefault(m.rows, w)
    transcript = []
    member = {}
    for w in ball:
        s = Sign.IDENTITY if group.is_identity(w) else (
            Sign.POSITIVE if w in cone else Sign.NEGATIVE)
        member[w] = s
        transcript.append((w, s))
    positives = [(w, m) for w, m in zip(ball, mats) if member[w] is Sign.POSITIVE]
    pairs = 0
    for u, mu in positives:
        for v, mv in positives:
            key = multiply(mu, mv).rows
            uv = index.get(key)
            if uv is None:
                continue
            pairs += 1
            if member[uv] is not Sign.POSITIVE:
                return ViolationCertificate(transcript, ClosureViolation(u, v, uv))
    for w, m in zip(ball, mats):
        s = member[w]
        if m.is_identity():
            if s is not Sign.IDENTITY or w in cone:
                return ViolationCertificate(transcript, PartitionViolation(
                    (w,), "identity element in the cone"))
            continue
        wi = index.get(inverse(m).rows)
        if wi is None:
            continue
        if (member[w] is Sign.POSITIVE) == (member[wi] is Sign.POSITIVE):
            reason = "w and w^-1 both in the cone" if member[w] is Sign.POSITIVE \
                else "neither w nor w^-1 in the cone"
            return ViolationCertificate(transcript, PartitionViolation((w, wi), reason))
    return ConeReport(True, len(ball), pairs)


# -- dynamical realization --------------------------------------------------------

@dataclass
class Realization:
    """Order-embedding of a ball into Q and partial PL generator actions."""
    words: list                 # ball elements in increasing order
    positions: dict             # element key -> Fraction
    maps: dict                  # generator letter (str(word)) -> PLLineMap

    def position(self, group, w):
        return self.positions[group.evaluate(w).rows]


def sort_ball(oracle: OrderOracle, ball: list) -> list:
    import functools
    return sorted(ball, key=functools.cmp_to_key(oracle.compare))


def dynamical_realization(group: MatrixGroup, ordered_ball: list) -> Realization:
    """Embed an ordered ball into Q, identity at 0, and build generator maps.

    ``ordered_ball`` lists the ball in increasing order.  The order must be
    left-invariant wherever both translates stay inside the ball.
    """
    from .circle.line import PLLineMap

    keys = [group.evaluate(w).rows for w in ordered_ball]
    if len(set(keys)) != len(keys):
        raise OrderError("ball lists an element twice")
    rank = {k: i for i, k in enumerate(keys)}
    e_key = group.evaluate(GroupWord()).rows
    if e_key not in rank:
        raise OrderError("ball must contain the identity")
    zero = rank[e_key]
    positions = {k: Fraction(i - zero) for k, i in rank.items()}
    maps = {}
    for letter in group.letters():
        pairs = []
        for w, k in zip(ordered_ball, keys):
            gk = group.evaluate(letter * w).rows
            if gk in rank:
                pairs.append((positions[k], positions[gk]))
        for (x1, y1), (x2, y2) in zip(pairs, pairs[1:]):
            if not y1 < y2:
                raise OrderError(f"left-invariance fails for generator {letter}: "
                                 f"order not preserved between positions {x1} and {x2}")
        if pairs:
            maps[str(letter)] = PLLineMap([x for x, _ in pairs], [y for _, y in pairs])
    return Realization(list(ordered_ball), positions, maps)
