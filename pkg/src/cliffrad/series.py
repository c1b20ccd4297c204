"""Finitely supported expansions of monogenic and slice monogenic functions.

A :class:`SliceSeries` stores ``{(j, k): P}`` for the function
``sum (x0 + w p)^j w^k P(w)``; a :class:`MonogenicSeries` stores the same map
for either the Taylor form ``sum X^(j)_k(x) P(x_vec)`` or the Laurent form
``xbar/|x|^(n+1) sum X^(j)_k(-x0, x_vec) P(x_vec) / |x|^(2(j+k))``.

Both carry ``pi_pow``: the whole series is scaled by pi**(pi_pow/2).  The
Radon constants at a fixed dimension all share one pi-power, so this keeps
polynomial coefficients rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Callable

import numpy as np

from .clifford import Multivector, batch_product, vectors_to_array
from .polyspace import (
    MvPolynomial,
    dirac_apply,
    embedding_factor,
    fischer_decompose,
    harmonic_decompose,
    harmonic_split,
    monogenic_basis,
    xvec_power,
)
from .quadrature import CircleQuadrature, circle_quadrature, rational_circle_quadrature

TAYLOR = "taylor"
LAURENT = "laurent"


class SeriesError(ValueError):
    pass


def _check_terms(n, terms):
    out = {}
    for (j, k), P in terms.items():
        if k < 0:
            raise SeriesError(f"negative k in term {(j, k)}")
        if P.n != n or P.paravector:
            raise SeriesError(f"term {(j, k)} is not a vector-arity polynomial in dimension {n}")
        if P.is_zero():
            continue
        if not P.is_homogeneous(k):
            raise SeriesError(f"term {(j, k)} is not {k}-homogeneous")
        out[(int(j), int(k))] = P
    return out


def _pi_factor(pi_pow):
    return math.pi ** (pi_pow / 2) if pi_pow else 1


@dataclass(eq=False)
class SliceSeries:
    n: int
    terms: dict = field(default_factory=dict)
    pi_pow: int = 0

    def __post_init__(self):
        self.terms = _check_terms(self.n, self.terms)

    def support(self) -> set:
        return set(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def validate(self) -> None:
        for key, P in self.terms.items():
            if not dirac_apply(P).is_zero():
                raise SeriesError(f"term {key} is not monogenic")

    def __add__(self, other: SliceSeries) -> SliceSeries:
        if other.n != self.n:
            raise SeriesError("dimension mismatch")
        if self.terms and other.terms and self.pi_pow != other.pi_pow:
            raise SeriesError("cannot add series with different pi-powers")
        terms = dict(self.terms)
        for key, P in other.terms.items():
            terms[key] = terms[key] + P if key in terms else P
        pi_pow = self.pi_pow if self.terms else other.pi_pow
        return SliceSeries(self.n, terms, pi_pow)

    def restrict(self, keep: Callable[[int, int], bool]) -> SliceSeries:
        return SliceSeries(self.n, {key: P for key, P in self.terms.items() if keep(*key)}, self.pi_pow)

    def __eq__(self, other):
        if not isinstance(other, SliceSeries):
            return NotImplemented
        if self.n != other.n or self.terms.keys() != other.terms.keys():
            return False
        if self.terms and self.pi_pow != other.pi_pow:
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def __repr__(self):
        return f"SliceSeries(n={self.n}, support={sorted(self.terms)}, pi_pow={self.pi_pow})"


@dataclass(eq=False)
class MonogenicSeries:
    n: int
    part: str = TAYLOR
    terms: dict = field(default_factory=dict)
    pi_pow: int = 0

    def __post_init__(self):
        if self.part not in (TAYLOR, LAURENT):
            raise SeriesError(f"unknown part {self.part!r}")
        self.terms = _check_terms(self.n, self.terms)
        for (j, _k) in self.terms:
            if j < 0:
                raise SeriesError("monogenic series indices must be non-negative")
        self._cache: dict = {}

    def support(self) -> set:
        return set(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def validate(self) -> None:
        for key, P in self.terms.items():
            if not dirac_apply(P).is_zero():
                raise SeriesError(f"term {key} is not monogenic")

    def term_function(self, j: int, k: int) -> MvPolynomial:
        """The (j, k) summand as a (rational) polynomial in (x0, x_vec)."""
        key = (j, k)
        if key not in self._cache:
            P = self.terms[key]
            X = embedding_factor(j, k, self.n)
            if self.part == LAURENT:
                # X taken at (-x0, x_vec): the inversion argument is -x^-1
                X = _reflect_x0(X)
            num = X * P.lift()
            if self.part == LAURENT:
                num = MvPolynomial.xpara(self.n).conjugate() * num
                num = MvPolynomial(self.n, num.terms, True, self.n + 1 + 2 * (j + k))
            self._cache[key] = num
        return self._cache[key]

    def __eq__(self, other):
        if not isinstance(other, MonogenicSeries):
            return NotImplemented
        if self.n != other.n or self.part != other.part or self.terms.keys() != other.terms.keys():
            return False
        if self.terms and self.pi_pow != other.pi_pow:
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def __repr__(self):
        return f"MonogenicSeries(n={self.n}, part={self.part}, support={sorted(self.terms)}, pi_pow={self.pi_pow})"


# -- evaluation -------------------------------------------------------------

def _cpow(x0, p, j):
    """(x0 + i p)^j as a (re, im) pair; works for Fraction and float."""
    if j < 0:
        r2 = x0 * x0 + p * p
        if r2 == 0:
            raise ZeroDivisionError("negative power at the origin of the slice plane")
        x0, p, j = x0 / r2, -p / r2, -j
    re, im = x0 * 0 + 1, x0 * 0
    for _ in range(j):
        re, im = re * x0 - im * p, re * p + im * x0
    return re, im


def _times_i_power(re, im, k):
    for _ in range(k % 4):
        re, im = -im, re
    return re, im


class SymbolicOmega:
    """Stand-in for a generic unit vector w; left multiplication acts on :class:`OmegaForm`."""

    def __init__(self, n: int):
        self.n = n

    def __mul__(self, other):
        if isinstance(other, OmegaForm):
            return OmegaForm(-other.V, other.U)
        return NotImplemented


@dataclass
class OmegaForm:
    """The function U(w) + w V(w) on S^(n-1); U and V are vector-arity polynomials."""

    U: MvPolynomial
    V: MvPolynomial

    def __add__(self, other):
        return OmegaForm(self.U + other.U, self.V + other.V)

    def __sub__(self, other):
        return OmegaForm(self.U - other.U, self.V - other.V)

    def __mul__(self, s):
        if isinstance(s, Number):
            return OmegaForm(self.U.scale(s), self.V.scale(s))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1 / Fraction(s) if isinstance(s, int) else 1 / s)

    def to_polynomial(self) -> MvPolynomial:
        """A polynomial agreeing with the form on the unit sphere."""
        return self.U + MvPolynomial.xvec(self.U.n) * self.V


def slice_eval(f: SliceSeries, x0, p, omega):
    """Evaluate sum (x0 + w p)^j w^k P(w).

    ``omega`` is a unit 1-vector :class:`Multivector` (exact if its entries
    and x0, p are Fractions) or a :class:`SymbolicOmega`, in which case an
    :class:`OmegaForm` valid on the whole sphere is returned.
    """
    n = f.n
    if isinstance(omega, SymbolicOmega):
        U = MvPolynomial.zero(n)
        V = MvPolynomial.zero(n)
        for (j, k), P in f.terms.items():
            re, im = _times_i_power(*_cpow(x0, p, j), k)
            U = U + P.scale(re)
            V = V + P.scale(im)
        if f.pi_pow:
            U, V = U.scale(_pi_factor(f.pi_pow)), V.scale(_pi_factor(f.pi_pow))
        return OmegaForm(U, V)
    if not omega.grades() <= {1}:
        raise ValueError("omega must be a 1-vector")
    nrm = omega.norm_squared()
    if (nrm != 1) if isinstance(nrm, Fraction) else abs(nrm - 1) > 1e-12:
        raise ValueError("omega must be a unit vector")
    w = omega.vector_part()
    out = Multivector(n)
    for (j, k), P in f.terms.items():
        re, im = _times_i_power(*_cpow(x0, p, j), k)
        Pw = P.evaluate(w)
        out = out + Pw * re + omega * Pw * im
    return out * _pi_factor(f.pi_pow) if f.pi_pow else out


def slice_eval_batch(f: SliceSeries, x0, p, omegas) -> np.ndarray:
    """Float evaluation at arrays p (N,), omegas (N, n); x0 scalar or (N,)."""
    omegas = np.asarray(omegas, dtype=float)
    p = np.asarray(p, dtype=float)
    x0 = np.broadcast_to(np.asarray(x0, dtype=float), p.shape)
    q = x0 + 1j * p
    wv = vectors_to_array(omegas, f.n)
    out = np.zeros(p.shape + (1 << f.n,))
    for (j, k), P in f.terms.items():
        z = q.astype(complex) ** j * (1j) ** k
        Pw = P.evaluate_batch(omegas)
        out += z.real[..., None] * Pw + z.imag[..., None] * batch_product(wv, Pw, f.n)
    return out * _pi_factor(f.pi_pow)


def monogenic_eval(f: MonogenicSeries, x) -> Multivector:
    """Evaluate at a paravector (Multivector) or coordinate sequence (x0, x1, ..., xn)."""
    if isinstance(x, Multivector):
        point = [x.scalar_part()] + x.vector_part()
    else:
        point = list(x)
    if f.part == LAURENT and all(c == 0 for c in point):
        raise ZeroDivisionError("Laurent series is singular at the origin")
    out = Multivector(f.n)
    for (j, k) in f.terms:
        out = out + f.term_function(j, k).evaluate(point)
    return out * _pi_factor(f.pi_pow) if f.pi_pow else out


def monogenic_eval_batch(f: MonogenicSeries, points) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    out = np.zeros(points.shape[:-1] + (1 << f.n,))
    for (j, k) in f.terms:
        out += f.term_function(j, k).evaluate_batch(points)
    return out * _pi_factor(f.pi_pow)


def assemble(f: MonogenicSeries) -> MvPolynomial:
    """The whole series as one (rational) polynomial in (x0, x_vec); pi scale omitted."""
    out = MvPolynomial.zero(f.n, True)
    for (j, k) in f.terms:
        out = out + f.term_function(j, k)
    return out


# -- inversions and restrictions --------------------------------------------

def invert_I2(f: SliceSeries) -> SliceSeries:
    """Plane inversion: the term (j, k) moves to (-(j+1), k)."""
    return SliceSeries(f.n, {(-(j + 1), k): P for (j, k), P in f.terms.items()}, f.pi_pow)


def _reflect_x0(Q: MvPolynomial) -> MvPolynomial:
    terms = {m: {b: (-c if m[0] % 2 else c) for b, c in cs.items()} for m, cs in Q.terms.items()}
    return MvPolynomial(Q.n, terms, Q.paravector, Q.denom)


def invert_In1(f: MonogenicSeries) -> MonogenicSeries:
    """Paravector inversion f -> (xbar/|x|^(n+1)) f(-xbar/|x|^2).

    Swaps Taylor and Laurent with identical coefficients.  On x0 = 0 the
    argument is x_vec/|x_vec|^2; the sign on x0 keeps the image monogenic.
    """
    part = LAURENT if f.part == TAYLOR else TAYLOR
    return MonogenicSeries(f.n, part, dict(f.terms), f.pi_pow)


def restrict_x0(f: MonogenicSeries) -> MvPolynomial:
    """Initial datum sum x_vec^j P_(k,j)(x_vec) of a Taylor series."""
    if f.part != TAYLOR:
        raise SeriesError("restriction to x0 = 0 is a polynomial only for Taylor series")
    out = MvPolynomial.zero(f.n)
    for (j, k), P in f.terms.items():
        out = out + xvec_power(f.n, j) * P
    return out


def taylor_from_initial(f0: MvPolynomial, pi_pow: int = 0) -> MonogenicSeries:
    """Inverse of :func:`restrict_x0`: Fischer-decompose each homogeneous part."""
    terms = {}
    for d in sorted(f0.degrees()):
        for j, P in enumerate(fischer_decompose(f0.homogeneous_part(d))):
            if not P.is_zero():
                terms[(j, d - j)] = P
    return MonogenicSeries(f0.n, TAYLOR, terms, pi_pow)


def decompose_slice(f: SliceSeries) -> tuple[SliceSeries, SliceSeries]:
    """(S_0 part, S_infinity part) by the sign of j."""
    return f.restrict(lambda j, k: j >= 0), f.restrict(lambda j, k: j < 0)


@dataclass(frozen=True)
class Membership:
    in_SM0: bool
    in_SMinf: bool
    in_kerS: bool
    in_I2kerS: bool


def membership(f: SliceSeries) -> Membership:
    keys = f.terms.keys()
    return Membership(
        in_SM0=all(j >= k for j, k in keys),
        in_SMinf=all(j < -k for j, k in keys),
        in_kerS=all(0 <= j < k for j, k in keys),
        in_I2kerS=all(-k <= j <= -1 for j, k in keys),
    )


# -- coefficient extraction -------------------------------------------------

def extract_slice_coefficients(
    evaluator,
    omega,
    r,
    j_range,
    quadrature: CircleQuadrature | None = None,
) -> dict:
    """Cauchy-integral coefficients C_j(w) on the circle of radius r in the plane C_w.

    ``evaluator(x0, p, omega)`` returns values supporting scalar multiplication
    and left multiplication by ``omega``.  The default rule is the
    equispaced trapezoid with 4(|j|max + 1) nodes.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    j_list = list(j_range)
    j_max = max((abs(j) for j in j_list), default=0)
    if quadrature is None:
        quadrature = circle_quadrature(j_max)
    cos_acc = {j: None for j in j_list}
    sin_acc = {j: None for j in j_list}
    for c, s, w in zip(quadrature.cos, quadrature.sin, quadrature.weights):
        val = evaluator(r * c, r * s, omega)
        re, im = c * 0 + 1, c * 0
        table = {0: (re, im)}
        for m in range(1, j_max + 1):
            re, im = re * c - im * s, re * s + im * c
            table[m] = (re, im)
        for j in j_list:
            cj, sj = table[abs(j)]
            if j < 0:
                sj = -sj
            a, b = val * (w * cj), val * (w * sj)
            cos_acc[j] = a if cos_acc[j] is None else cos_acc[j] + a
            sin_acc[j] = b if sin_acc[j] is None else sin_acc[j] + b
    out = {}
    for j in j_list:
        scale = r**-j if not isinstance(r, int) else Fraction(r) ** -j
        out[j] = (cos_acc[j] - omega * sin_acc[j]) * scale
    return out


def project_harmonics(C: MvPolynomial) -> dict[int, MvPolynomial]:
    """Spherical-harmonic components {degree: Y} of a polynomial restricted to the sphere."""
    if not isinstance(C, MvPolynomial) or C.paravector or C.denom:
        raise ValueError("project_harmonics needs a vector-arity polynomial")
    out: dict[int, MvPolynomial] = {}
    for d in sorted(C.degrees()):
        for m, H in enumerate(harmonic_decompose(C.homogeneous_part(d))):
            if H.is_zero():
                continue
            deg = d - 2 * m
            out[deg] = out[deg] + H if deg in out else H
    return {d: Y for d, Y in sorted(out.items()) if not Y.is_zero()}


def coefficients_from_harmonics(Y: dict[int, MvPolynomial]) -> dict[int, MvPolynomial]:
    """Read off {k: P_k} with C = sum_k w^k P_k(w) from the harmonic components of C.

    On the sphere w^k P_k = +-P_k (k even) or +-w P_k (k odd), so an even
    harmonic Y_K = (-1)^(K/2) (P_K - w P_(K-1)); odd degrees cannot occur.
    """
    out = {}
    for K, YK in Y.items():
        if K % 2:
            raise SeriesError(f"odd harmonic degree {K}: function is not even")
        upper, lower = harmonic_split(YK)
        sign = -1 if (K // 2) % 2 else 1
        if not upper.is_zero():
            out[K] = upper * sign
        if not lower.is_zero():
            out[K - 1] = lower * (-sign)
    return out


def reconstruct_slice_series(evaluator, n: int, j_range, radius=Fraction(1), pi_pow: int = 0) -> SliceSeries:
    """Recover every P_(k,j) from an evaluator, exactly.

    Uses a rational circle rule, a symbolic w, exact harmonic projection and
    the monogenic split of each harmonic component.
    """
    j_list = list(j_range)
    j_max = max(abs(j) for j in j_list)
    rule = rational_circle_quadrature(2 * j_max)
    coeffs = extract_slice_coefficients(evaluator, SymbolicOmega(n), radius, j_list, rule)
    terms = {}
    for j, form in coeffs.items():
        for k, P in coefficients_from_harmonics(project_harmonics(form.to_polynomial())).items():
            terms[(j, k)] = P
    return SliceSeries(n, terms, pi_pow)


def slice_monogenic_check(f, samples, h: float = 1e-5) -> float:
    """Max |(d/dx0 + w d/dp) f / 2| at ``samples`` by central differences.

    ``f`` is a :class:`SliceSeries` or a callable ``(x0, p, omegas) -> (N, 2**n)``
    on float arrays; ``samples`` is a sequence of (x0, p, omega) with omega a
    float vector.
    """
    if isinstance(f, SliceSeries):
        n = f.n
        fn = lambda x0, p, w: slice_eval_batch(f, x0, p, w)  # noqa: E731
    else:
        fn = f
        n = len(samples[0][2])
    worst = 0.0
    for x0, p, w in samples:
        w = np.asarray(w, dtype=float)[None, :]
        d0 = (fn(np.array([x0 + h]), np.array([p]), w) - fn(np.array([x0 - h]), np.array([p]), w)) / (2 * h)
        dp = (fn(np.array([x0]), np.array([p + h]), w) - fn(np.array([x0]), np.array([p - h]), w)) / (2 * h)
        res = 0.5 * (d0 + batch_product(vectors_to_array(w, n), dp, n))
        worst = max(worst, float(np.linalg.norm(res)))
    return worst


# -- random generators for verification -------------------------------------

def _random_rational(rng, lo=-3, hi=3, max_den=3):
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, max_den + 1)))


def random_multivector(n, rng, density=0.5):
    coeffs = {b: _random_rational(rng) for b in range(1 << n) if rng.random() < density}
    if not any(coeffs.values()):
        coeffs[int(rng.integers(0, 1 << n))] = Fraction(1)
    return Multivector(n, coeffs)


def random_monogenic(k: int, n: int, rng) -> MvPolynomial:
    """A nonzero right R_n-combination of the spherical monogenic basis of degree k."""
    out = MvPolynomial.zero(n)
    while out.is_zero():
        for P in monogenic_basis(k, n):
            if rng.random() < 0.7:
                out = out + P * random_multivector(n, rng)
    return out


def random_slice_series(n, rng, j_min, j_max, k_max, n_terms=4) -> SliceSeries:
    terms = {}
    while len(terms) < n_terms:
        key = (int(rng.integers(j_min, j_max + 1)), int(rng.integers(0, k_max + 1)))
        if key not in terms:
            terms[key] = random_monogenic(key[1], n, rng)
    return SliceSeries(n, terms)


def random_monogenic_series(n, rng, part, j_max, k_max, n_terms=4) -> MonogenicSeries:
    terms = {}
    while len(terms) < n_terms:
        key = (int(rng.integers(0, j_max + 1)), int(rng.integers(0, k_max + 1)))
        if key not in terms:
            terms[key] = random_monogenic(key[1], n, rng)
    return MonogenicSeries(n, part, terms)
