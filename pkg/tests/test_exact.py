from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, strategies as st

from orderlab.exact import (E, DimensionError, ElementaryMatrix, GroupWord, MatrixGroup,
                            NotSpecialLinear, SpecialLinearElement, as_rational, commutator,
                            determinant, diag, identity, inverse, make_matrix, matrix_from_json,
                            multiply, power, product, rational_to_str)
from orderlab.witte import WitteSystem

from strategies import elementary, sl_elements


def to_sympy(m):
    return sympy.Matrix([[sympy.Rational(str(Fraction(v))) for v in row] for row in m.rows])


def test_identity_times_m():
    m = make_matrix([[2, 1, 0], [1, 1, 0], [0, 0, 1]])
    assert multiply(identity(3), m) == m
    assert multiply(m, identity(3)) == m


def test_elementary_pair_does_not_commute():
    a, b = E(1, 2), E(2, 3)
    assert multiply(a, b) != multiply(b, a)
    # independent product
    assert to_sympy(multiply(a, b)) == to_sympy(a) * to_sympy(b)


def test_witte_generator_times_inverse():
    a1 = WitteSystem(2).matrix(1)
    assert multiply(a1, inverse(a1)).is_identity()


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        multiply(identity(2), identity(3))


def test_determinant_examples():
    assert determinant(identity(3)) == 1
    assert determinant(diag(2, 3, Fraction(1, 6))) == 1
    assert isinstance(diag(2, 3, Fraction(1, 6)), SpecialLinearElement)
    assert determinant(diag(2, 3, 1)) == 6


@given(elementary(4, "q"))
def test_elementary_unipotent(f):
    assert determinant(f.matrix()) == 1
    assert multiply(f.matrix(), f.inverse().matrix()).is_identity()


def test_inverse_examples():
    assert inverse(identity(3)) == identity(3)
    for k in (1, -3, 7):
        assert inverse(E(1, 2, k)) == E(1, 2, -k)


def test_not_special_linear_rejected():
    with pytest.raises(NotSpecialLinear):
        SpecialLinearElement(((2, 0), (0, 1)))


@given(sl_elements(3, "q", max_len=10))
def test_inverse_round_trip_rational(m):
    assert multiply(inverse(m), m).is_identity()
    assert multiply(m, inverse(m)).is_identity()
    assert to_sympy(inverse(m)) == to_sympy(m).inv()


@given(sl_elements(4, "z", max_len=10))
def test_determinant_matches_sympy(m):
    assert determinant(m) == 1
    assert to_sympy(m).det() == 1


@given(st.lists(st.lists(st.fractions(-4, 4, max_denominator=5), min_size=3, max_size=3),
                min_size=3, max_size=3))
def test_determinant_general(rows):
    m = make_matrix(rows)
    assert Fraction(str(to_sympy(m).det())) == Fraction(determinant(m))


@given(sl_elements(3, "q"), sl_elements(3, "q"))
def test_det_of_product_is_one(a, b):
    assert determinant(multiply(a, b)) == 1


@given(sl_elements(3, "q"))
def test_entries_stay_reduced(m):
    for row in m.rows:
        for v in row:
            if isinstance(v, Fraction):
                assert v.denominator > 1 and gcd(v.numerator, v.denominator) == 1
            else:
                assert isinstance(v, int)


def test_commutator_examples():
    a = E(1, 2, 3)
    assert commutator(a, power(a, 2)).is_identity()
    w = WitteSystem(1)
    # [a1, a3] = a2 and [a2, a3] = e
    assert commutator(w.matrix(1), w.matrix(3)) == w.matrix(2)
    assert commutator(w.matrix(2), w.matrix(3)).is_identity()


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_commutator_power_identity(k, m):
    a, b = E(1, 2), E(2, 3)
    c = commutator(a, b)
    assert commutator(power(b, k), power(a, m)) == power(c, -k * m)


@given(sl_elements(3, "z", max_len=8), sl_elements(3, "z", max_len=8))
def test_commutator_definition(a, b):
    expected = to_sympy(a).inv() * to_sympy(b).inv() * to_sympy(a) * to_sympy(b)
    assert to_sympy(commutator(a, b)) == expected


def test_random_product_of_ten_round_trip():
    import random
    rng = random.Random(5)
    fs = [ElementaryMatrix(3, *rng.sample(range(1, 4), 2), rng.randint(1, 3)) for _ in range(10)]
    m = product(f.matrix() for f in fs)
    assert multiply(m, inverse(m)).is_identity()


@given(st.integers(-6, 6))
def test_power_matches_repeated_product(k):
    m = make_matrix([[2, 1, 0], [1, 1, 0], [0, 0, 1]])
    expected = to_sympy(m) ** k
    assert to_sympy(power(m, k)) == expected


def test_rational_strings():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational("4/2") == 2 and isinstance(as_rational("4/2"), int)
    assert rational_to_str(Fraction(-2, 4)) == "-1/2"
    assert rational_to_str(5) == "5"
    with pytest.raises(TypeError):
        as_rational(True)


def test_matrix_json_round_trip():
    m = diag(2, Fraction(1, 3), Fraction(3, 2))
    data = m.to_json()
    assert all(isinstance(v, str) for row in data["rows"] for v in row)
    assert matrix_from_json(data) == m
    with pytest.raises(DimensionError):
        matrix_from_json({"n": 2, "rows": data["rows"]})
    with pytest.raises(ValueError):
        matrix_from_json({"rows": [[1.5, 0], [0, 1]]})


def test_group_word_reduction_and_parse():
    w = GroupWord.parse("a1^2 a1^-2 a3 a2^-1 a2")
    assert w == GroupWord.gen("a3")
    assert str(GroupWord()) == "e"
    assert GroupWord.parse("e").is_empty()
    u = GroupWord.parse("a1 a2^-3")
    assert (u * u.inverse()).is_empty()
    assert len(u) == 4
    assert GroupWord.from_json(u.to_json()) == u
    assert GroupWord.parse(str(u)) == u


@given(st.lists(st.tuples(st.sampled_from("xyz"), st.integers(-3, 3).filter(bool)), max_size=8))
def test_group_word_freely_reduced(letters):
    w = GroupWord(tuple(letters))
    gs = [g for g, _ in w.letters]
    assert all(a != b for a, b in zip(gs, gs[1:]))
    assert all(e != 0 for _, e in w.letters)
    assert (w * w.inverse()).is_empty()


@given(st.lists(st.tuples(st.sampled_from(["x", "y"]), st.integers(-2, 2).filter(bool)), max_size=6),
       st.lists(st.tuples(st.sampled_from(["x", "y"]), st.integers(-2, 2).filter(bool)), max_size=6))
def test_evaluation_is_a_homomorphism(l1, l2):
    g = MatrixGroup({"x": E(1, 2), "y": E(2, 1)})
    u, v = GroupWord(tuple(l1)), GroupWord(tuple(l2))
    assert g.evaluate(u * v) == multiply(g.evaluate(u), g.evaluate(v))
    assert multiply(g.evaluate(u), g.evaluate(u.inverse())).is_identity()


def test_bignum_entries_survive():
    m = power(make_matrix([[2, 1], [1, 1]]), 200)
    assert determinant(m) == 1
    assert max(abs(v) for row in m.rows for v in row) > 2 ** 64
