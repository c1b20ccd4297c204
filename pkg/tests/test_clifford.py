from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliffrad.clifford import (
    DimensionMismatch,
    Multivector,
    batch_product,
    conjugate,
    geometric_product,
    paravector_inverse,
    vectors_to_array,
)


def e(n, i):
    return Multivector.basis(n, i)


@pytest.mark.parametrize("n", range(2, 9))
def test_generator_relations(n):
    for i in range(1, n + 1):
        assert e(n, i) * e(n, i) == -1
        for j in range(i + 1, n + 1):
            assert e(n, i) * e(n, j) == -(e(n, j) * e(n, i))
            assert e(n, i) * e(n, j) + e(n, j) * e(n, i) == 0


def _brute_product(a: int, b: int, n: int):
    """Multiply blades by sorting generator lists and contracting e_i e_i = -1."""
    word = [i for i in range(n) if a >> i & 1] + [i for i in range(n) if b >> i & 1]
    sign = 1
    changed = True
    while changed:
        changed = False
        for t in range(len(word) - 1):
            if word[t] > word[t + 1]:
                word[t], word[t + 1] = word[t + 1], word[t]
                sign = -sign
                changed = True
            elif word[t] == word[t + 1]:
                del word[t : t + 2]
                sign = -sign
                changed = True
                break
    mask = 0
    for i in word:
        mask |= 1 << i
    return sign, mask


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sign_table_matches_brute_force(n):
    for a in range(1 << n):
        for b in range(1 << n):
            sign, mask = _brute_product(a, b, n)
            assert Multivector.blade(n, a) * Multivector.blade(n, b) == Multivector.blade(n, mask, Fraction(sign))


def test_identity_and_mixed_example():
    n = 3
    m = Multivector(n, {0: Fraction(2), 3: Fraction(-1, 3), 7: Fraction(5)})
    assert Multivector.scalar(n, 1) * m == m
    # (e1 + e2)(e1 - e2) = -1 + 1 - e1e2 + e2e1 = -2 e12
    assert (e(n, 1) + e(n, 2)) * (e(n, 1) - e(n, 2)) == Multivector.blade(n, 0b11, Fraction(-2))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def multivectors(n):
    return st.dictionaries(st.integers(0, (1 << n) - 1), rationals, max_size=1 << n).map(lambda d: Multivector(n, d))


@settings(max_examples=40, deadline=None)
@given(multivectors(4), multivectors(4), multivectors(4))
def test_associative_and_bilinear(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=40, deadline=None)
@given(multivectors(3), multivectors(3))
def test_conjugation_is_anti_automorphism(a, b):
    assert conjugate(a * b) == conjugate(b) * conjugate(a)
    assert conjugate(conjugate(a)) == a


def test_paravector_conjugate_and_norm():
    n = 3
    x = Multivector.paravector(n, Fraction(2), [Fraction(1), Fraction(-3), Fraction(1, 2)])
    assert conjugate(x) == Multivector.paravector(n, Fraction(2), [Fraction(-1), Fraction(3), Fraction(-1, 2)])
    assert conjugate(Multivector.scalar(n, 1)) == 1
    assert x * conjugate(x) == Multivector.scalar(n, Fraction(4 + 1 + 9) + Fraction(1, 4))
    assert x * paravector_inverse(x) == 1
    assert x * x**-1 == 1


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        geometric_product(Multivector.scalar(2, 1), Multivector.scalar(3, 1))
    with pytest.raises(ValueError):
        Multivector(9)


def test_batch_product_matches_exact():
    n = 3
    rng = np.random.default_rng(0)
    A = rng.standard_normal((5, 8))
    B = rng.standard_normal((5, 8))
    out = batch_product(A, B, n)
    for r in range(5):
        ref = Multivector.from_array(n, A[r]) * Multivector.from_array(n, B[r])
        assert np.allclose(out[r], ref.to_array())
    v = vectors_to_array(np.array([[1.0, 2.0, 3.0]]), n)
    assert np.allclose(v[0, [1, 2, 4]], [1, 2, 3])
