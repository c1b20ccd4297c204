import math
from fractions import Fraction

import pytest

from cliffrad.exactnum import (
    A_const,
    B_const,
    ExactScalar,
    c_const,
    constant_growth_witness,
    d_const,
    gamma_half,
    gegenbauer,
    gegenbauer_at_one,
    mu_const,
    radon_pi_power,
    rgamma_half,
    verify_gamma_ratio_bounds,
)

F = Fraction


def test_exact_scalar_ring():
    a = ExactScalar(F(1, 2), 1)
    assert a * a == ExactScalar(F(1, 4), 2)
    assert a / a == 1
    assert ExactScalar(F(0), 3) == ExactScalar(F(0))
    assert ExactScalar(F(0), 3).h == 0
    with pytest.raises(ValueError):
        _ = ExactScalar(F(1), 1) + ExactScalar(F(1), 2)
    assert str(ExactScalar(F(-3, 4), 1)) == "-3/4·pi^(1/2)"
    assert float(ExactScalar(F(1), 2)) == pytest.approx(math.pi)


def test_gamma_half():
    assert gamma_half(1) == ExactScalar(F(1), 1)
    assert gamma_half(2) == 1
    assert gamma_half(5) == ExactScalar(F(3, 4), 1)
    for m in range(1, 30):
        assert float(gamma_half(m)) == pytest.approx(math.gamma(m / 2), rel=1e-14)
    with pytest.raises(ValueError):
        gamma_half(0)
    assert rgamma_half(-2).is_zero() and rgamma_half(0).is_zero()
    assert float(rgamma_half(-1)) == pytest.approx(1 / math.gamma(-0.5))


def test_gegenbauer_examples():
    nu = F(3, 2)
    assert gegenbauer(nu, 0).coeffs == (1,)
    assert gegenbauer(nu, 1).coeffs == (0, 2 * nu)
    assert gegenbauer(nu, 2).coeffs == (-nu, 0, 2 * nu * (nu + 1))
    for j in range(10):
        g = gegenbauer(nu, j)
        assert all(c == 0 for d, c in enumerate(g.coeffs) if (d - j) % 2)
        assert g(1) == gegenbauer_at_one(nu, j)
        ref = math.gamma(2 * float(nu) + j) / (math.gamma(j + 1) * math.gamma(2 * float(nu)))
        assert float(g(1)) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_mu_examples(n):
    for k in range(4):
        assert mu_const(0, k, n) == 1
        assert mu_const(1, k, n) == F(n + 2 * k, n + 2 * k - 1)
        assert mu_const(2, k, n) == F(2, n - 1 + 2 * k)


def test_B_examples():
    for n in (2, 3, 4, 5):
        assert B_const(0, 0, n) == 1
        assert B_const(2, 0, n) == F(1, n)
        for k in range(2, 5):
            assert B_const(-2, k, n).is_zero()
    assert B_const(0, 1, 2) == F(1, 2)
    with pytest.raises(ValueError):
        B_const(-3, 1, 2)


def test_A_examples():
    assert A_const(2, 0, 2) == 2
    assert A_const(2, 1, 2) == 2
    assert A_const(3, 2, 3).is_zero()
    with pytest.raises(ValueError):
        A_const(1, 1, 2)


def test_A_k0_matches_one_dimensional_integral():
    from scipy.integrate import quad

    for n in (2, 3, 4):
        area = 2 * math.pi ** ((n - 1) / 2) / math.gamma((n - 1) / 2)
        for alpha in (1, 2, 3, 4):
            val, _ = quad(lambda t: t ** (n - 2) * (1 + t * t) ** (-(alpha + n - 1) / 2), 0, math.inf)
            assert float(A_const(alpha, 0, n)) == pytest.approx(area * val, rel=1e-9)


def test_c_and_d_examples():
    assert c_const(0, 0, 2) == 1
    # S[(x0 + w p) w P1(w)] carries c_(1,0); c_(1,1) belongs to the (2, 1) slice term
    assert c_const(1, 0, 2) == F(-1, 2)
    assert c_const(1, 1, 2) == -B_const(0, 2, 2) == F(-1, 4)
    assert d_const(0, 0, 2) == 2
    assert d_const(0, 1, 2) == -2
    assert d_const(0, 0, 3) == ExactScalar(F(1), 2)
    for n in (2, 3, 4):
        h = radon_pi_power(n)
        assert all(d_const(k, J, n).h == h for k in range(6) for J in range(6))
        assert all(not c_const(k, j, n).is_zero() and not d_const(k, j, n).is_zero() for k in range(13) for j in range(13))


def test_gamma_ratio_report():
    rep = verify_gamma_ratio_bounds(12)
    assert rep["holds"] and 0 < rep["C1"] and math.isfinite(rep["C2"])
    # j = k = m = 0 gives ratio 1, so it bounds both witnesses at m = 0
    assert rep["per_m"]["0"]["C1"] <= 1 <= rep["per_m"]["0"]["C2"]
    with pytest.raises(ValueError):
        verify_gamma_ratio_bounds(0)
    with pytest.raises(ValueError):
        verify_gamma_ratio_bounds(3, a1=F(2))


def test_growth_witness():
    for which in ("c", "d"):
        rep = constant_growth_witness(which, 3, 12)
        assert rep["holds"]
