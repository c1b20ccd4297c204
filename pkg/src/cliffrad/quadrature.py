"""Integration backends: exact sphere moments, product sphere rules, circle rules,
and hyperplane integrals for the Radon oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import roots_jacobi

from .exactnum import ExactScalar, gamma_half


class NonConvergence(RuntimeError):
    pass


@lru_cache(maxsize=None)
def sphere_moment(a: tuple) -> ExactScalar:
    """(1/A_n) * integral over S^(n-1) of prod_i w_i^a_i, exactly."""
    a = tuple(int(v) for v in a)
    n = len(a)
    if any(v % 2 for v in a):
        return ExactScalar(Fraction(0))
    out = gamma_half(n) / gamma_half(sum(a) + n)
    for v in a:
        out = out * gamma_half(v + 1)
    return out / ExactScalar.pi_power(n)


def sphere_area(n: int) -> float:
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


@dataclass(frozen=True)
class SphereQuadrature:
    n: int
    nodes: np.ndarray  # (N, n), unit rows
    weights: np.ndarray  # (N,), sum to 1
    order: int

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Normalised integral of samples taken at ``nodes`` (leading axis N)."""
        return np.tensordot(self.weights, values, axes=(0, 0))


def _circle_rule(order: int):
    m = order + 1
    m += m % 2  # even count keeps the rule antipodally symmetric
    t = 2 * np.pi * np.arange(m) / m
    return np.stack([np.cos(t), np.sin(t)], axis=1), np.full(m, 1.0 / m)


def build_sphere_quadrature(n: int, order: int) -> SphereQuadrature:
    """Product rule on S^(n-1) exact for polynomials of degree <= order.

    n = 2 is the equiangular circle rule; for n >= 3 the first coordinate
    t = w_1 carries the weight (1 - t^2)^((n-3)/2), handled by Gauss-Jacobi,
    times a rule on S^(n-2) for the remaining directions.
    """
    if n not in (2, 3, 4, 5):
        raise ValueError(f"unsupported sphere dimension n={n}")
    if order < 1:
        raise ValueError("order must be >= 1")
    nodes, weights = _circle_rule(order)
    for dim in range(3, n + 1):
        a = (dim - 3) / 2
        t, w = roots_jacobi(order // 2 + 1, a, a)
        w = w / w.sum()
        s = np.sqrt(1 - t**2)
        new_nodes = np.concatenate(
            [np.column_stack([np.full(len(nodes), ti), si * nodes]) for ti, si in zip(t, s)]
        )
        weights = np.concatenate([wi * weights for wi in w])
        nodes = new_nodes
    return SphereQuadrature(n, nodes, weights, order)


def split_sphere_quadrature(n: int, axis, order: int) -> SphereQuadrature:
    """Sphere rule for integrands with a kink on the great sphere orthogonal to ``axis``.

    With w = cos(t) axis + sin(t) eta, Gauss-Legendre in t is applied on
    [0, pi/2] and [pi/2, pi] separately, times a rule on S^(n-2) for eta.
    Suited to |(x, w)|^alpha with odd alpha.
    """
    if n not in (2, 3, 4, 5):
        raise ValueError(f"unsupported sphere dimension n={n}")
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    g, gw = np.polynomial.legendre.leggauss(order // 2 + 8)
    t = np.concatenate([np.pi / 4 * (g + 1), np.pi / 4 * (g + 3)])
    tw = np.concatenate([gw, gw]) * np.pi / 4 * np.sin(t) ** (n - 2)
    if n == 2:
        # both half-circles: eta = +-1
        etas, ew = np.array([[1.0], [-1.0]]), np.array([0.5, 0.5])
    else:
        sub = build_sphere_quadrature(n - 1, order)
        etas, ew = sub.nodes, sub.weights
    local = np.concatenate([np.column_stack([np.full(len(etas), np.cos(ti)), np.sin(ti) * etas]) for ti in t])
    weights = np.concatenate([wi * ew for wi in tw])
    frame = np.vstack([axis, orthonormal_complement(axis)])
    return SphereQuadrature(n, local @ frame, weights / weights.sum(), order)


# -- circle rules for Cauchy integrals --------------------------------------

@dataclass(frozen=True)
class CircleQuadrature:
    """Nodes (cos t_l, sin t_l) with weights summing to 1, so sum w g(t_l) ~ (1/2pi) int g."""

    cos: tuple
    sin: tuple
    weights: tuple
    degree: int  # exact for trigonometric polynomials up to this degree


def circle_quadrature(j_max: int, count: int | None = None) -> CircleQuadrature:
    if j_max < 0:
        raise ValueError("j_max must be >= 0")
    m = count or 4 * (j_max + 1)
    t = 2 * np.pi * np.arange(m) / m
    return CircleQuadrature(tuple(np.cos(t)), tuple(np.sin(t)), (1.0 / m,) * m, m - 1)


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(A)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


@lru_cache(maxsize=None)
def rational_circle_quadrature(degree: int) -> CircleQuadrature:
    """Exact rule with rational nodes on the unit circle, exact up to trig degree ``degree``.

    Nodes come from the rational parametrisation ((1-u^2)/(1+u^2), 2u/(1+u^2))
    with u close to tan(t/2) for equispaced t; weights solve the moment
    equations in exact arithmetic.
    """
    count = 2 * degree + 1
    nodes = []
    seen = set()
    for l in range(count):
        t = 2 * math.pi * (l + 0.5) / count - math.pi
        u = Fraction(math.tan(t / 2)).limit_denominator(1000)
        while u in seen:
            u += Fraction(1, 997)
        seen.add(u)
        nodes.append(((1 - u * u) / (1 + u * u), 2 * u / (1 + u * u)))
    powers = [_trig_powers(c, s, degree) for c, s in nodes]
    A, b = [], []
    for m in range(degree + 1):
        A.append([p[m][0] for p in powers])
        b.append(Fraction(1 if m == 0 else 0))
        if m:
            A.append([p[m][1] for p in powers])
            b.append(Fraction(0))
    w = _solve_exact(A, b)
    return CircleQuadrature(tuple(c for c, _ in nodes), tuple(s for _, s in nodes), tuple(w), degree)


def _trig_powers(c, s, degree):
    """[(cos m t, sin m t) for m = 0..degree] by complex powers of c + i s."""
    out = [(c * 0 + 1, c * 0)]
    re, im = out[0]
    for _ in range(degree):
        re, im = re * c - im * s, re * s + im * c
        out.append((re, im))
    return out


# -- hyperplane integrals ---------------------------------------------------

def orthonormal_complement(omega: np.ndarray) -> np.ndarray:
    """Rows spanning the hyperplane orthogonal to the unit vector ``omega``."""
    omega = np.asarray(omega, dtype=float)
    n = len(omega)
    q, _ = np.linalg.qr(np.column_stack([omega, np.eye(n)]))
    return q[:, 1:n].T


def hyperplane_integrate(
    f,
    omega,
    p: float,
    n: int,
    epsabs: float = 1e-12,
    epsrel: float = 1e-11,
    angular_nodes: int = 96,
    fail_tol: float = 1e-7,
):
    """Integral of ``f`` over {x : (x, omega) = p} with Lebesgue measure.

    ``f`` maps an (N, n) array of points to an (N, D) array.  n = 2 integrates
    over the line with t = tan(theta); n = 3 uses polar coordinates on the
    plane, trapezoid in the angle and adaptive Gauss-Kronrod in
    r = tan(theta).  Raises :class:`NonConvergence` when the adaptive pass
    fails to reach its tolerance or its error estimate exceeds ``fail_tol``
    relative to the result.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (n,):
        raise ValueError("omega has the wrong dimension")
    omega = omega / np.linalg.norm(omega)
    basis = orthonormal_complement(omega)
    base = p * omega
    if n == 2:
        u = basis[0]

        def integrand(theta):
            t = np.tan(theta)
            val = f((base + t * u)[None, :])[0]
            return val / np.cos(theta) ** 2

    elif n == 3:
        phi = 2 * np.pi * np.arange(angular_nodes) / angular_nodes
        dirs = np.outer(np.cos(phi), basis[0]) + np.outer(np.sin(phi), basis[1])

        def integrand(theta):
            r = np.tan(theta)
            vals = f(base + r * dirs)
            return r * vals.mean(axis=0) * (2 * np.pi) / np.cos(theta) ** 2

    else:
        raise ValueError("hyperplane_integrate supports n in {2, 3}")
    lo = -np.pi / 2 if n == 2 else 0.0
    res, err, info = quad_vec(integrand, lo, np.pi / 2, epsabs=epsabs, epsrel=epsrel, limit=2000, full_output=True)
    scale = max(np.max(np.abs(res)), 1.0)
    if not np.all(np.isfinite(res)) or err > fail_tol * scale:
        raise NonConvergence(f"hyperplane integral error estimate {err:.3g} too large")
    if not info.success:
        # subdivision kept refining towards the tails: divergent or too slowly decaying
        raise NonConvergence(f"hyperplane integral did not converge ({info.message}); error estimate {err:.3g}")
    return res, err
