"""Bounded, certificate-producing version of the SL(3, Z) non-orderability argument.

For a Heisenberg configuration ``[a, b] = z^k`` (z central) any left order
has ``z << a`` or ``z << b``; around the hexagon of elementary matrices
a_1..a_6 this forces a cycle ``a_i << ... << a_i``.  Against a concrete sign
oracle both steps become finite computations whose footprint is a
:class:`ViolationCertificate`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .certificates import (CheckedSession, EvaluatedIdentityContradiction, Sign,
                           UndecidableQuery, ViolationCertificate, ViolationFound)
from .exact import E, GroupWord, MatrixGroup, commutator, power

# (i, j) position of a_1 .. a_6
WITTE_POSITIONS = ((1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2))


class NotHeisenberg(ValueError):
    pass


@dataclass
class HeisenbergTriple:
    group: MatrixGroup
    a: GroupWord
    b: GroupWord
    z: GroupWord
    k: int

    def __post_init__(self):
        if self.k == 0:
            raise NotHeisenberg("k must be nonzero")
        A, B, Z = (self.group.evaluate(w) for w in (self.a, self.b, self.z))
        for name, m in (("a", A), ("b", B), ("z", Z)):
            if m.is_identity():
                raise NotHeisenberg(f"{name} is the identity")
        if not commutator(A, Z).is_identity() or not commutator(B, Z).is_identity():
            raise NotHeisenberg("z does not commute with both a and b")
        if commutator(A, B) != power(Z, self.k):
            raise NotHeisenberg(f"[a, b] != z^{self.k}")


@dataclass(frozen=True)
class ObstructionWitness:
    p: int
    q: int
    m: int
    k: int

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0 and self.k > 0 and self.m > self.p + self.q):
            raise ValueError("need positive p, q, k and m > p + q")
        if self.exponent >= 0:
            raise ValueError("-k m^2 + (p + q) m must be negative")

    @property
    def exponent(self) -> int:
        return -self.k * self.m ** 2 + (self.p + self.q) * self.m


@dataclass(frozen=True)
class Normalization:
    """Substitution making a, b, z positive with k > 0."""
    invert_a: bool
    invert_b: bool
    invert_z: bool
    swapped: bool

    def to_json(self):
        return {"invertA": self.invert_a, "invertB": self.invert_b,
                "invertZ": self.invert_z, "swapped": self.swapped}


@dataclass
class Branch:
    """No witness up to the bound: ``z << a`` (left) and/or ``z << b`` (right).

    ``links`` maps "left"/"right" to the recorded positive word ``z'^-1 x'``
    showing ``z' < x'`` for the sign-normalized elements.
    """
    left: bool
    right: bool
    bound: int
    normalization: Normalization
    links: dict = field(default_factory=dict)

    @property
    def kind(self):
        if self.left and self.right:
            return "BothBranches"
        return "LeftBranch" if self.left else "RightBranch"


@dataclass
class Inconclusive:
    bound: int
    frontier: list
    reason: str = ""
    kind: str = "Inconclusive"

    def to_json(self):
        return {"kind": self.kind, "bound": self.bound, "reason": self.reason,
                "frontier": [str(w) for w in self.frontier]}


def _session(oracle) -> CheckedSession:
    return oracle if isinstance(oracle, CheckedSession) else CheckedSession(oracle)


def _signed(w: GroupWord, s: Sign) -> GroupWord:
    return w if s is Sign.POSITIVE else w.inverse()


def _heisenberg(t: HeisenbergTriple, session: CheckedSession, bound: int):
    sa, sb, sz = (session.sign(w) for w in (t.a, t.b, t.z))
    a, b, z = _signed(t.a, sa), _signed(t.b, sb), _signed(t.z, sz)
    k = t.k
    for s in (sa, sb, sz):
        if s is Sign.NEGATIVE:
            k = -k
    swapped = k < 0
    if swapped:
        a, b, k = b, a, -k
    norm = Normalization(sa is Sign.NEGATIVE, sb is Sign.NEGATIVE, sz is Sign.NEGATIVE, swapped)
    g = t.group
    assert commutator(g.evaluate(a), g.evaluate(b)) == power(g.evaluate(z), k)

    def witness(x):
        # least p <= bound with x < z^p, i.e. x^-1 z^p positive
        for p in range(1, bound + 1):
            if session.sign(x.inverse() * z ** p) is Sign.POSITIVE:
                return p
        return None

    p = witness(a)
    q = witness(b)
    if p is not None and q is not None:
        m = p + q + 1
        obs = ObstructionWitness(p, q, m, k)
        factors = ([b.inverse() * z ** q] * m + [a.inverse() * z ** p] * m
                   + [b] * m + [a] * m)
        word = GroupWord()
        for f in factors:
            word = word * f
        value = g.evaluate(word)
        target = z ** obs.exponent
        assert value == g.evaluate(target), "Heisenberg identity failed"
        for f in dict.fromkeys(factors):
            session.sign(f)
        _power_ladder(session, z, -obs.exponent)
        s = session.sign(target)
        notes = {"p": p, "q": q, "m": m, "k": k, "exponent": obs.exponent,
                 "normalization": norm.to_json(), "source": "heisenberg"}
        if s is not Sign.POSITIVE:
            return session.certificate(EvaluatedIdentityContradiction(
                tuple(factors), target, value, s), **notes)
        # z'^-N declared positive: then z'^N (recorded negative) is a product of N copies of z'
        n = -obs.exponent
        zn = z ** n
        s = session.sign(zn)
        return session.certificate(EvaluatedIdentityContradiction(
            (z,) * n, zn, g.evaluate(zn), s), **notes)

    # orient the result back to the caller's a / b
    small_vs_a, small_vs_b = p is None, q is None
    links = {}
    if small_vs_a:
        links["a"] = z.inverse() * a
    if small_vs_b:
        links["b"] = z.inverse() * b
    if swapped:
        small_vs_a, small_vs_b = small_vs_b, small_vs_a
        links = {{"a": "b", "b": "a"}[key]: v for key, v in links.items()}
    links = {("left" if key == "a" else "right"): v for key, v in links.items()}
    return Branch(small_vs_a, small_vs_b, bound, norm, links)


def _power_ladder(session, z, n):
    # z^(2^i) then partial sums up to z^n: each is a product of two earlier
    # queries, so a closure-respecting oracle has its answer forced
    pows, e = [], 1
    while e <= n:
        session.sign(z ** e)
        pows.append(e)
        e *= 2
    acc = 0
    for e in reversed(pows):
        if acc + e <= n:
            acc += e
            session.sign(z ** acc)


def heisenberg_contradiction(t: HeisenbergTriple, oracle, witness_bound: int):
    """ViolationCertificate, Branch, or Inconclusive for one Heisenberg triple."""
    if witness_bound < 1:
        raise ValueError("witness_bound must be >= 1")
    session = _session(oracle)
    try:
        return _heisenberg(t, session, witness_bound)
    except ViolationFound as exc:
        return exc.certificate
    except UndecidableQuery as exc:
        return Inconclusive(witness_bound, [exc.word], exc.reason)


# -- the hexagon ---------------------------------------------------------------

@dataclass
class WitteSystem:
    k: int
    generators: dict = field(init=False)
    relations: list = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        self.generators = {f"a{i + 1}": E(i_, j_, self.k)
                           for i, (i_, j_) in enumerate(WITTE_POSITIONS)}
        self.relations = []
        for i in range(1, 7):
            ai, nxt, prv = self.matrix(i), self.matrix(i + 1), self.matrix(i - 1)
            if not commutator(ai, nxt).is_identity():
                raise AssertionError(f"[a{i}, a{i % 6 + 1}] != e")
            c = commutator(prv, nxt)
            if c == power(ai, self.k):
                sign = 1
            elif c == power(ai, -self.k):
                sign = -1
            else:
                raise AssertionError(f"[a{(i - 2) % 6 + 1}, a{i % 6 + 1}] is not a power of a{i}")
            self.relations.append({"i": i, "commutes_with_next": True, "sign": sign})

    @staticmethod
    def name(i: int) -> str:
        return f"a{(i - 1) % 6 + 1}"

    def matrix(self, i: int):
        return self.generators[self.name(i)]

    def group(self) -> MatrixGroup:
        return MatrixGroup(dict(self.generators))

    def triple(self, i: int, group: MatrixGroup | None = None) -> HeisenbergTriple:
        group = group or self.group()
        sign = self.relations[(i - 1) % 6]["sign"]
        return HeisenbergTriple(group, GroupWord.gen(self.name(i - 1)),
                                GroupWord.gen(self.name(i + 1)),
                                GroupWord.gen(self.name(i)), sign * self.k)


def _chain_certificate(session: CheckedSession, branches: dict, normalized: dict, notes):
    # edge i -> j means a_i << a_j (bounded); every node has an out-edge
    succ = {}
    for i, br in branches.items():
        if br.right:
            succ[i] = (i % 6 + 1, br.links["right"])
        else:
            succ[i] = ((i - 2) % 6 + 1, br.links["left"])
    path, seen = [], {}
    i = 1
    while i not in seen:
        seen[i] = len(path)
        path.append(i)
        i = succ[i][0]
    cycle = path[seen[i]:]
    factors = []
    for node in cycle:
        j, link = succ[node]
        # link is a_node'^-1 a_j': positive by the recorded failed witness search
        assert link == normalized[node].inverse() * normalized[j]
        session.sign(link)
        factors.append(link)
    word = GroupWord()
    for f in factors:
        word = word * f
    s = session.sign(word)
    value = session.group.evaluate(word)
    chain = " << ".join(WitteSystem.name(c) for c in cycle + [cycle[0]])
    return session.certificate(EvaluatedIdentityContradiction(tuple(factors), word, value, s),
                               chain=chain, source="hexagon", **notes)


def witte_pipeline(k: int, oracle, witness_bound: int):
    """Refute ``oracle`` as a left order on <a_1, .., a_6>, or report Inconclusive.

    The oracle's group must name the generators "a1" .. "a6" with the
    matrices of :class:`WitteSystem`.
    """
    system = WitteSystem(k)
    group = oracle.group
    for name, m in system.generators.items():
        if group.generators.get(name) != m:
            raise ValueError(f"oracle generator {name} does not match the hexagon matrix")
    session = _session(oracle)
    names = list(system.generators)
    try:
        signs = {}
        for i, nm in enumerate(names, start=1):
            signs[i] = session.sign(GroupWord.gen(nm))
        for i in range(1, 7):
            # commuting neighbours: two spellings of one element
            u, v = GroupWord.gen(system.name(i)), GroupWord.gen(system.name(i + 1))
            session.sign(u * v)
            session.sign(v * u)
        normalized = {i: _signed(GroupWord.gen(system.name(i)), signs[i]) for i in range(1, 7)}
        branches = {}
        for i in range(1, 7):
            res = _heisenberg(system.triple(i, group), session, witness_bound)
            if isinstance(res, ViolationCertificate):
                res.notes["triple"] = i
                return res
            branches[i] = res
        return _chain_certificate(session, branches, normalized,
                                  {"k": k, "witnessBound": witness_bound})
    except ViolationFound as exc:
        return exc.certificate
    except UndecidableQuery as exc:
        return Inconclusive(witness_bound, [exc.word], exc.reason)
