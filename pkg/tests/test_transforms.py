from fractions import Fraction

import numpy as np
import pytest

from cliffrad.clifford import Multivector
from cliffrad.exactnum import A_const
from cliffrad.polyspace import MvPolynomial, monogenic_basis
from cliffrad.quadrature import build_sphere_quadrature
from cliffrad.series import (
    LAURENT,
    TAYLOR,
    MonogenicSeries,
    SeriesError,
    SliceSeries,
    monogenic_eval_batch,
    random_monogenic_series,
    random_slice_series,
    slice_eval,
)
from cliffrad.transforms import (
    dual_radon_harmonic,
    dual_radon_inverse,
    dual_radon_moment,
    dual_radon_numeric,
    dual_radon_symbolic,
    dual_term_report,
    intertwining_check,
    radon_harmonic_check,
    radon_inverse,
    radon_numeric,
    radon_numeric_xi,
    radon_symbolic,
    radon_term_report,
    split_S_infinity,
    theoremA_decompose,
)

F = Fraction


def one(n):
    return MvPolynomial.constant(n, 1)


def P1():
    # x2 e1 + x1 e2, monogenic in two variables
    return MvPolynomial(2, {(0, 1): {1: F(1)}, (1, 0): {2: F(1)}})


def rotation(n, seed):
    q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((n, n)))
    return q


# -- dual transform ------------------------------------------------------------

def test_dual_of_one():
    for n in (2, 3):
        assert dual_radon_symbolic(SliceSeries(n, {(0, 0): one(n)})) == MonogenicSeries(n, TAYLOR, {(0, 0): one(n)})


def test_dual_degree_one_term():
    f = SliceSeries(2, {(1, 1): P1()})
    g = dual_radon_symbolic(f)
    assert g == MonogenicSeries(2, TAYLOR, {(0, 1): P1() * F(-1, 2)})
    x = [F(2, 3), F(-1, 5)]
    for x0 in (F(0), F(1, 3)):
        moment = dual_radon_moment(f, x0, x)
        assert moment == P1().evaluate(x) * F(-1, 2)


def test_dual_kernel_term():
    f = SliceSeries(2, {(0, 1): P1()})
    assert dual_radon_symbolic(f).terms == {}
    assert dual_radon_moment(f, F(1, 2), [F(1, 3), F(3, 4)]) == 0


def test_dual_negative_power_rejected():
    with pytest.raises(SeriesError):
        dual_radon_symbolic(SliceSeries(2, {(-1, 0): one(2)}))


def test_dual_numeric_examples():
    rng = np.random.default_rng(1)
    for n in (2, 3):
        quad = build_sphere_quadrature(n, 12)
        x = rng.standard_normal(n)
        D = 1 << n
        const = dual_radon_numeric(lambda p, w: np.tile(np.eye(1, D)[0], (len(p), 1)), x, quad)
        assert np.allclose(const, np.eye(1, D)[0], atol=1e-14)
        odd = dual_radon_numeric(lambda p, w: np.column_stack([p * w[:, 0]**2 + w[:, 1]] + [np.zeros(len(p))] * (D - 1)), x, quad)
        assert np.abs(odd).max() <= 1e-14
        sq = dual_radon_numeric(lambda p, w: np.column_stack([p**2] + [np.zeros(len(p))] * (D - 1)), x, quad)
        assert abs(sq[0] - x @ x / n) <= 1e-12


def test_dual_harmonic_cases():
    r = dual_radon_harmonic(0, one(2), [F(1, 2), F(1, 3)])
    assert r["lhs"] == r["rhs"] == Multivector.scalar(2, 1)
    x1 = MvPolynomial.variable(2, 1)
    r = dual_radon_harmonic(0, x1, [F(3, 4), F(1, 5)])
    assert r["B"] == F(1, 2) and r["deviation"] == 0.0
    # alpha = -2 with k = 2 lies in the zero locus
    P2 = MvPolynomial.variable(3, 1) * MvPolynomial.variable(3, 2)
    r = dual_radon_harmonic(-2, P2, [0.3, 0.7, -0.2])
    assert r["B"].is_zero() and r["deviation"] <= 1e-12
    for alpha in (1, 3, -1):
        r = dual_radon_harmonic(alpha, x1, [0.3, -0.8])
        assert r["deviation"] <= 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_dual_term_float(n):
    quad = build_sphere_quadrature(n, 24)
    rng = np.random.default_rng(n)
    xs = rng.standard_normal((3, n)) * 0.8
    for j, k in [(2, 1), (3, 0), (4, 2), (1, 2)]:
        rep = dual_term_report(j, k, monogenic_basis(k, n)[0], xs, quad)
        assert rep.max_rel_deviation <= 1e-10


def test_s0_decomposition_parts():
    n = 2
    ker, sm = theoremA_decompose(SliceSeries(n, {(0, 1): P1()}))
    assert ker.support() == {(0, 1)} and not sm.terms
    ker, sm = theoremA_decompose(SliceSeries(n, {(3, 1): P1()}))
    assert sm.support() == {(3, 1)} and not ker.terms
    rng = np.random.default_rng(2)
    f = random_slice_series(3, rng, 0, 6, 3)
    ker, sm = theoremA_decompose(f)
    w = Multivector.vector(3, [F(2, 7), F(3, 7), F(6, 7)])
    for x0, p in [(F(1, 2), F(1, 3)), (F(-1), F(2))]:
        assert slice_eval(ker, x0, p, w) + slice_eval(sm, x0, p, w) == slice_eval(f, x0, p, w)


def test_dual_inverse():
    for n in (2, 3):
        assert dual_radon_inverse(MonogenicSeries(n, TAYLOR, {(0, 0): one(n)})) == SliceSeries(n, {(0, 0): one(n)})
    g = MonogenicSeries(2, TAYLOR, {(0, 1): P1()})
    assert dual_radon_inverse(g) == SliceSeries(2, {(1, 1): P1() * -2})
    rng = np.random.default_rng(7)
    for n in (2, 3):
        t = random_monogenic_series(n, rng, TAYLOR, 6, 3)
        assert dual_radon_symbolic(dual_radon_inverse(t)) == t


# -- Radon transform ------------------------------------------------------------

def test_radon_symbolic_examples():
    g = radon_symbolic(MonogenicSeries(2, LAURENT, {(0, 0): one(2)}))
    assert g == SliceSeries(2, {(-1, 0): one(2) * 2})
    g = radon_symbolic(MonogenicSeries(2, LAURENT, {(1, 0): one(2)}))
    assert g == SliceSeries(2, {(-2, 0): one(2) * -2})
    rng = np.random.default_rng(4)
    f = random_monogenic_series(3, rng, LAURENT, 4, 3)
    for (J, k) in f.terms:
        single = MonogenicSeries(3, LAURENT, {(J, k): f.terms[(J, k)]})
        (j, kk), = radon_symbolic(single).terms
        assert kk == k and j == -(J + 1 + k) < -k


def test_radon_kernel_line_integral():
    f = MonogenicSeries(2, LAURENT, {(0, 0): one(2)})
    val = radon_numeric(f, 1.0, 1.0, np.array([1.0, 0.0]), 2)
    assert np.allclose(val, [1, -1, 0, 0], atol=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_radon_evenness_and_homogeneity(n):
    rng = np.random.default_rng(20 + n)
    f = random_monogenic_series(n, rng, LAURENT, 2, 1)
    for _ in range(2):
        w = rng.standard_normal(n)
        w /= np.linalg.norm(w)
        x0, p = 0.4, 0.7
        a = radon_numeric(f, x0, p, w, n)
        b = radon_numeric(f, x0, -p, -w, n)
        assert np.allclose(a, b, atol=1e-10)
        # (p, xi) -> (lam p, lam xi) scales the transform by 1/lam
        lam = 1.7
        c = radon_numeric_xi(f, x0, lam * p, lam * w, n)
        assert np.allclose(lam * c, a, atol=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_radon_terms_match_symbolic(n):
    rng = np.random.default_rng(30 + n)
    samples = []
    for _ in range(2):
        w = rng.standard_normal(n)
        samples.append((float(rng.uniform(0.3, 1.0)), float(rng.uniform(-1, 1)), w / np.linalg.norm(w)))
    for J, k in [(0, 0), (1, 1), (2, 0), (0, 2)]:
        rep = radon_term_report(J, k, monogenic_basis(k, n)[-1], samples)
        assert rep.max_rel_deviation <= 1e-6


def test_radon_harmonic_examples():
    rep = radon_harmonic_check(2, one(2), [np.array([1.0, 0.0]), np.array([0.6, 0.8])])
    assert rep.constant == 2 and rep.max_rel_deviation <= 1e-8
    P2 = MvPolynomial.variable(2, 1) * MvPolynomial.variable(2, 2)
    assert A_const(3, 2, 2).is_zero()
    rep = radon_harmonic_check(3, P2, [np.array([0.6, 0.8])])
    assert rep.max_rel_deviation <= 1e-8
    P3 = MvPolynomial.variable(3, 1) * MvPolynomial.variable(3, 3)
    Q = rotation(3, 0)
    omegas = [np.array([0.0, 0.6, 0.8]), np.array([2, 3, 6]) / 7]
    plain = radon_harmonic_check(4, P3, [Q.T @ w for w in omegas])
    rotated = radon_harmonic_check(4, P3, omegas, rotation=Q)
    assert rotated.max_rel_deviation <= 1e-8
    for s, t in zip(plain.samples, rotated.samples):
        assert np.allclose(s["oracle"], t["oracle"], atol=1e-9)


def test_radon_inverse():
    g = SliceSeries(2, {(-1, 0): one(2) * 2})
    assert radon_inverse(g) == MonogenicSeries(2, LAURENT, {(0, 0): one(2)})
    rng = np.random.default_rng(9)
    for n in (2, 3):
        f = random_monogenic_series(n, rng, LAURENT, 6, 3)
        assert radon_inverse(radon_symbolic(f)) == f
    with pytest.raises(SeriesError):
        radon_inverse(SliceSeries(2, {(-1, 1): P1()}))


def test_split_S_infinity():
    f = SliceSeries(2, {(-1, 1): P1(), (-3, 1): P1()})
    a, b = split_S_infinity(f)
    assert a.support() == {(-1, 1)} and b.support() == {(-3, 1)}


# -- intertwining ------------------------------------------------------------

def test_dual_intertwining():
    f = SliceSeries(2, {(3, 1): P1(), (2, 0): one(2)})
    assert intertwining_check(f, "dual", [(0.3, [0.5, -0.2])]) <= 1e-7


def test_dual_derivative_moment_exact():
    # phi = p^2: S[w_j d_p phi] = S[2 p w_j] and d_(x_j) S[phi] are both 2 x_j / n
    n = 3
    x = [F(1, 2), F(-1, 3), F(2, 5)]
    wj = MvPolynomial.variable(n, 1)
    p = sum((MvPolynomial.variable(n, i + 1) * x[i] for i in range(n)), MvPolynomial.zero(n))
    from cliffrad.quadrature import sphere_moment

    acc = F(0)
    for m, c in (p * wj * 2).terms.items():
        acc += c.get(0, 0) * sphere_moment(m).rational()
    assert acc == 2 * x[0] / n


def test_radon_intertwining_kernel():
    f = MonogenicSeries(2, LAURENT, {(0, 0): one(2)})
    w = np.array([0.6, 0.8])
    assert intertwining_check(f, "radon", [(0.7, 0.4, w)]) <= 1e-7


def test_intertwining_mode_rejected():
    with pytest.raises(ValueError):
        intertwining_check(SliceSeries(2, {}), "other", [])


def test_monogenic_eval_of_image_matches_slice():
    # R[f] at x0 = 0 only depends on the slice image
    f = MonogenicSeries(3, LAURENT, {(0, 1): monogenic_basis(1, 3)[0]})
    g = radon_symbolic(f)
    w = np.array([2, 3, 6]) / 7
    num = radon_numeric(f, 0.5, 0.9, w, 3)
    from cliffrad.series import slice_eval_batch

    sym = slice_eval_batch(g, 0.5, np.array([0.9]), w[None, :])[0]
    assert np.allclose(num, sym, rtol=1e-8, atol=1e-10)
    assert monogenic_eval_batch(f, np.array([[0.5, 0.1, 0.2, 0.3]])).shape == (1, 8)
