"""Finite refutations of the left-order axioms.

A certificate is a transcript of oracle answers plus one violated axiom
instance.  Checking it needs nothing but the transcript and exact matrix
arithmetic; replaying it against a fresh oracle re-asks every recorded query
in order and compares the answers.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .exact import GroupWord, MatrixGroup, identity, multiply


class Sign(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    IDENTITY = "0"

    def __neg__(self):
        if self is Sign.POSITIVE:
            return Sign.NEGATIVE
        if self is Sign.NEGATIVE:
            return Sign.POSITIVE
        return self

    @classmethod
    def of_int(cls, x) -> "Sign":
        return cls.POSITIVE if x > 0 else cls.NEGATIVE if x < 0 else cls.IDENTITY


class UndecidableQuery(Exception):
    """Raised by an oracle that cannot (or will not) answer a query."""

    def __init__(self, word, reason=""):
        super().__init__(f"cannot decide sign of {word}: {reason}")
        self.word = word
        self.reason = reason


@dataclass(frozen=True)
class PartitionViolation:
    """Breach of P ⊔ {e} ⊔ P^-1: identity mislabeled, or w and w^-1 same sign."""
    words: tuple
    reason: str
    kind: str = "PartitionViolation"

    def check(self, group: MatrixGroup, answers: dict) -> bool:
        if len(self.words) == 1:
            (w,) = self.words
            s = answers[w]
            return group.is_identity(w) != (s is Sign.IDENTITY)
        u, v = self.words
        su, sv = answers[u], answers[v]
        mu, mv = group.evaluate(u), group.evaluate(v)
        if not multiply(mu, mv).is_identity() or mu.is_identity():
            return False
        return su is sv and su is not Sign.IDENTITY

    def to_json(self):
        return {"kind": self.kind, "words": [str(w) for w in self.words], "reason": self.reason}


@dataclass(frozen=True)
class LeftInvarianceViolation:
    """Two spellings of one element got different signs.

    Since (cu)^-1 (cv) and u^-1 v are the same element, an answer that
    depends on the spelling is exactly a failure of a < b => ca < cb.
    """
    words: tuple
    kind: str = "LeftInvarianceViolation"

    def check(self, group, answers) -> bool:
        u, v = self.words
        return group.evaluate(u) == group.evaluate(v) and answers[u] is not answers[v]

    def to_json(self):
        return {"kind": self.kind, "words": [str(w) for w in self.words]}


@dataclass(frozen=True)
class ClosureViolation:
    """u, v positive but the product uv was not declared positive."""
    u: GroupWord
    v: GroupWord
    product: GroupWord
    kind: str = "ClosureViolation"

    def check(self, group, answers) -> bool:
        if answers[self.u] is not Sign.POSITIVE or answers[self.v] is not Sign.POSITIVE:
            return False
        prod = multiply(group.evaluate(self.u), group.evaluate(self.v))
        return prod == group.evaluate(self.product) and answers[self.product] is not Sign.POSITIVE

    def to_json(self):
        return {"kind": self.kind, "u": str(self.u), "v": str(self.v), "product": str(self.product)}


@dataclass(frozen=True)
class EvaluatedIdentityContradiction:
    """A product of declared-positive factors whose value was not declared positive.

    ``word`` is a word for the product element, ``evaluation`` its matrix;
    the required sign is Positive (closure), ``recorded`` is what the oracle
    said.
    """
    factors: tuple
    word: GroupWord
    evaluation: object
    recorded: Sign
    kind: str = "EvaluatedIdentityContradiction"

    def check(self, group, answers) -> bool:
        if not all(answers[f] is Sign.POSITIVE for f in self.factors):
            return False
        prod = identity(group.n)
        for f in self.factors:
            prod = multiply(prod, group.evaluate(f))
        if prod != self.evaluation or group.evaluate(self.word) != prod:
            return False
        return answers[self.word] is self.recorded and self.recorded is not Sign.POSITIVE

    def to_json(self):
        return {"kind": self.kind, "factors": [str(f) for f in self.factors],
                "factorCount": len(self.factors), "word": str(self.word),
                "evaluation": self.evaluation.to_json(), "requiredSign": "+",
                "recordedSign": self.recorded.value}


@dataclass
class ViolationCertificate:
    transcript: list
    violation: object
    notes: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.violation.kind

    def answers(self) -> dict:
        out = {}
        for w, s in self.transcript:
            out.setdefault(w, s)
        return out

    def verify(self, group: MatrixGroup) -> bool:
        """Exact check of the violated axiom using only recorded answers."""
        ans = self.answers()
        try:
            return bool(self.violation.check(group, ans))
        except KeyError:
            return False

    def replay(self, oracle) -> bool:
        """Re-ask every recorded query in order; all answers must match."""
        for w, s in self.transcript:
            try:
                if oracle.sign(w) is not s:
                    return False
            except UndecidableQuery:
                return False
        return self.verify(oracle.group)

    def to_json(self) -> dict:
        return {"violation": self.violation.to_json(),
                "transcript": [{"word": str(w), "sign": s.value} for w, s in self.transcript],
                "notes": self.notes}


class ViolationFound(Exception):
    def __init__(self, certificate: ViolationCertificate):
        super().__init__(certificate.kind)
        self.certificate = certificate


class CheckedSession:
    """Wraps an oracle; records a transcript and checks each answer on arrival.

    Every query of ``w`` is followed by a query of ``w^-1`` so partition
    breaches surface immediately.  Answers are also cross-checked against
    earlier answers for the same element (by exact evaluation).
    """

    def __init__(self, oracle):
        self.oracle = oracle
        self.group = oracle.group
        self.transcript: list = []
        self._by_word: dict = {}
        self._by_elem: dict = {}

    def _ask(self, w: GroupWord) -> Sign:
        if w in self._by_word:
            return self._by_word[w]
        s = self.oracle.sign(w)
        self.transcript.append((w, s))
        self._by_word[w] = s
        m = self.group.evaluate(w)
        if m.is_identity() != (s is Sign.IDENTITY):
            reason = ("identity element declared non-identity" if m.is_identity()
                      else "non-identity element declared identity")
            self._fail(PartitionViolation((w,), reason))
        prev = self._by_elem.get(m.rows)
        if prev is not None and self._by_word[prev] is not s:
            self._fail(LeftInvarianceViolation((prev, w)))
        self._by_elem.setdefault(m.rows, w)
        return s

    def sign(self, w: GroupWord) -> Sign:
        s = self._ask(w)
        wi = w.inverse()
        si = self._ask(wi)
        if s is si and s is not Sign.IDENTITY:
            self._fail(PartitionViolation((w, wi), "w and w^-1 have the same sign"))
        return s

    def positive(self, w: GroupWord) -> bool:
        return self.sign(w) is Sign.POSITIVE

    def _fail(self, violation):
        raise ViolationFound(ViolationCertificate(list(self.transcript), violation))

    def certificate(self, violation, **notes) -> ViolationCertificate:
        return ViolationCertificate(list(self.transcript), violation, dict(notes))
