from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliffrad.clifford import Multivector
from cliffrad.polyspace import (
    MvPolynomial,
    NotHarmonic,
    NotHomogeneous,
    ck_extend,
    dirac_apply,
    embedding_bound_base,
    embedding_factor,
    fischer_decompose,
    fischer_reassemble,
    harmonic_decompose,
    harmonic_split,
    l2_inner,
    l2_norm,
    monogenic_basis,
    monogenic_dimension,
    monomials,
    sup_norm_estimate,
    xvec_power,
)

F = Fraction


def var(n, i, para=False):
    return MvPolynomial.variable(n, i, para)


def blade(n, mask):
    return Multivector.blade(n, mask)


def test_dirac_on_variables():
    n = 3
    assert dirac_apply(var(n, 0, True)) == MvPolynomial.constant(n, 1, True)
    for i in range(1, n + 1):
        assert dirac_apply(var(n, i, True)) == MvPolynomial.constant(n, blade(n, 1 << (i - 1)), True)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dirac_of_xvec_times_monogenic(n):
    xv = MvPolynomial.xvec(n)
    for k in range(4):
        for P in monogenic_basis(k, n):
            assert dirac_apply(xv * P) == P * (-(n + 2 * k))
            lifted = P.lift()
            assert dirac_apply(var(n, 0, True) * lifted * (n + 2 * k) + MvPolynomial.xvec(n, True) * lifted).is_zero()


def test_rational_dirac_cauchy_kernel():
    # xbar / |x|^(n+1) is monogenic away from 0
    for n in (2, 3):
        num = MvPolynomial.xpara(n).conjugate()
        kernel = MvPolynomial(n, num.terms, True, n + 1)
        assert dirac_apply(kernel).is_zero()
        assert not dirac_apply(MvPolynomial(n, num.terms, True, n)).is_zero()


def test_embedding_factor_closed_forms():
    for n in (2, 3, 4):
        for k in range(4):
            x0, xv, r2 = var(n, 0, True), MvPolynomial.xvec(n, True), MvPolynomial.norm2(n, True)
            assert embedding_factor(0, k, n) == MvPolynomial.constant(n, 1, True)
            assert embedding_factor(1, k, n) == x0 * (n + 2 * k) + xv
            xvec2 = r2 - x0 * x0
            assert embedding_factor(2, k, n) == x0 * x0 * (n + 2 * k) - xvec2 + x0 * xv * 2
            for j in range(7):
                assert embedding_factor(j, k, n).restrict_x0() == xvec_power(n, j)


def test_ck_extend_examples():
    n = 3
    for P in monogenic_basis(2, n):
        assert ck_extend(P) == P.lift()
        assert ck_extend(MvPolynomial.xvec(n) * P) == embedding_factor(1, 2, n) * P.lift()
    f0 = var(n, 1) * var(n, 2) + var(n, 3) * blade(n, 0b101)
    ext = ck_extend(f0)
    assert dirac_apply(ext).is_zero()
    assert ext.restrict_x0() == f0


def test_fischer_examples():
    for n in (2, 3, 4):
        parts = fischer_decompose(var(n, 1))
        e1 = blade(n, 1)
        assert parts[0] == var(n, 1) + MvPolynomial.xvec(n) * e1 * F(1, n)
        assert parts[1] == MvPolynomial.constant(n, -e1 / n)
    P = monogenic_basis(3, 3)[1]
    parts = fischer_decompose(P)
    assert parts[0] == P and all(p.is_zero() for p in parts[1:])
    with pytest.raises(NotHomogeneous):
        fischer_decompose(var(3, 1) + MvPolynomial.constant(3, 1))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(0, 5), st.data())
def test_fischer_roundtrip(n, k, data):
    mons = list(monomials(n, k))
    terms = {}
    for mono in data.draw(st.lists(st.sampled_from(mons), min_size=1, max_size=3)):
        b = data.draw(st.integers(0, (1 << n) - 1))
        terms[mono] = {b: data.draw(st.fractions(-3, 3, max_denominator=4))}
    f = MvPolynomial(n, terms)
    parts = fischer_decompose(f)
    assert fischer_reassemble(parts) == f
    for j, P in enumerate(parts):
        assert dirac_apply(P).is_zero()
        assert P.is_zero() or P.is_homogeneous(k - j)


def test_harmonic_split_example():
    n = 2
    x1, x2 = var(n, 1), var(n, 2)
    Y = x1 * x1 - x2 * x2
    Pk, Pk1 = harmonic_split(Y)
    e1, e2, e12 = blade(n, 1), blade(n, 2), blade(n, 3)
    assert Pk1 == (x1 * e1 - x2 * e2) * F(-1, 2)
    assert Pk == (x1 * x1 - x2 * x2) * F(1, 2) - x1 * x2 * e12
    assert dirac_apply(Pk).is_zero() and dirac_apply(Pk1).is_zero()
    assert Pk + MvPolynomial.xvec(n) * Pk1 == Y
    assert l2_inner(Pk, MvPolynomial.xvec(n) * Pk1).scalar_part() == 0
    with pytest.raises(NotHarmonic):
        harmonic_split(x1 * x1)


def test_harmonic_decompose():
    n = 3
    x1 = var(n, 1)
    parts = harmonic_decompose(x1 * x1)
    r2 = MvPolynomial.norm2(n)
    assert parts[0] == x1 * x1 - r2 * F(1, n)
    assert parts[1] == MvPolynomial.constant(n, F(1, n))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_monogenic_basis(n):
    assert monogenic_basis(0, n) == (MvPolynomial.constant(n, 1),)
    for k in range(4):
        basis = monogenic_basis(k, n)
        assert len(basis) == monogenic_dimension(k, n)
        for P in basis:
            assert dirac_apply(P).is_zero() and P.is_homogeneous(k)


def test_n2_degree_one_space():
    n = 2
    basis = monogenic_basis(1, n)
    assert len(basis) == 1
    target = var(n, 2) * blade(n, 1) + var(n, 1) * blade(n, 2)
    assert dirac_apply(target).is_zero()
    # target lies in the right span of the basis element
    P = basis[0]
    coeff = {}
    for mono, row in P.terms.items():
        coeff[mono] = Multivector(n, row)
    ratio = None
    for mono in coeff:
        inv = coeff[mono].conjugate() / coeff[mono].norm_squared()
        cand = inv * Multivector(n, target.terms.get(mono, {}))
        ratio = ratio or cand
        assert cand == ratio
    assert P * ratio == target


def test_l2_norms():
    for n in (2, 3, 4):
        one = MvPolynomial.constant(n, 1)
        assert l2_norm(one) == 1
        x1 = var(n, 1)
        assert l2_inner(x1, x1).scalar_part() == F(1, n)
        assert l2_inner(x1 * x1, x1 * x1).scalar_part() == F(3, n * (n + 2))
        with pytest.raises(ValueError):
            l2_inner(MvPolynomial.constant(n, 1, True), one)


def test_sup_norm_and_embedding_bound():
    n = 3
    assert sup_norm_estimate(MvPolynomial.constant(n, 1)) == pytest.approx(1)
    assert sup_norm_estimate(var(n, 1), count=20000) == pytest.approx(1, abs=2e-2)
    b = embedding_bound_base(6, 3, n)
    rng = np.random.default_rng(1)
    pts = rng.standard_normal((100, n + 1))
    r = np.linalg.norm(pts, axis=1)
    for j in range(7):
        for k in range(4):
            vals = np.linalg.norm(embedding_factor(j, k, n).evaluate_batch(pts), axis=1)
            assert np.all(vals <= b ** (j + k) * r**j * (1 + 1e-12))


def test_evaluate_exact_and_batch_agree():
    n = 3
    P = monogenic_basis(2, n)[2] * blade(n, 0b110)
    pt = [F(1, 2), F(-1, 3), F(2)]
    exact = P.evaluate(pt)
    batch = P.evaluate_batch(np.array([[float(v) for v in pt]]))[0]
    assert np.allclose(exact.to_float().to_array(), batch)
