"""Exact scalars of the form q * pi**(h/2) and the closed-form constants built on them.

Every Gamma value needed here is Gamma(m/2) for an integer m, so the ring
Q[pi**(1/2)] restricted to monomials is closed under the products and
quotients we take.  Addition is only defined between equal pi-powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


@dataclass(frozen=True)
class ExactScalar:
    q: Fraction
    h: int = 0

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if self.q == 0:
            object.__setattr__(self, "h", 0)

    @classmethod
    def pi_power(cls, h: int) -> ExactScalar:
        return cls(Fraction(1), h)

    def is_zero(self) -> bool:
        return self.q == 0

    def is_rational(self) -> bool:
        return self.h == 0

    def rational(self) -> Fraction:
        if self.h != 0:
            raise ValueError(f"{self} is not rational")
        return self.q

    def __mul__(self, other):
        if isinstance(other, ExactScalar):
            return ExactScalar(self.q * other.q, self.h + other.h)
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self.q * other, self.h)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar(Fraction(other))
        if not isinstance(other, ExactScalar):
            return NotImplemented
        if other.q == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactScalar(self.q / other.q, self.h - other.h)

    def __rtruediv__(self, other):
        return ExactScalar(Fraction(other)) / self

    def __neg__(self):
        return ExactScalar(-self.q, self.h)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar(Fraction(other))
        if not isinstance(other, ExactScalar):
            return NotImplemented
        if self.q == 0:
            return other
        if other.q == 0:
            return self
        if self.h != other.h:
            raise ValueError(f"cannot add pi-powers {self.h}/2 and {other.h}/2")
        return ExactScalar(self.q + other.q, self.h)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __float__(self):
        return float(self.q) * math.pi ** (self.h / 2)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.h == 0 and self.q == other
        if isinstance(other, ExactScalar):
            return self.q == other.q and self.h == other.h
        return NotImplemented

    def __hash__(self):
        return hash((self.q, self.h))

    def __str__(self):
        return f"{self.q.numerator}/{self.q.denominator}·pi^({self.h}/2)"


ONE = ExactScalar(Fraction(1))
ZERO = ExactScalar(Fraction(0))


def gamma_half(m: int) -> ExactScalar:
    """Gamma(m/2) for a positive integer m."""
    if m <= 0:
        raise ValueError(f"gamma_half needs m >= 1, got {m}")
    return _gamma_half(m)


@lru_cache(maxsize=None)
def _gamma_half(m: int) -> ExactScalar:
    # valid for every integer m except the poles m = 0, -2, -4, ...
    if m % 2 == 0:
        if m <= 0:
            raise ValueError(f"Gamma has a pole at {m}/2")
        return ExactScalar(Fraction(math.factorial(m // 2 - 1)))
    if m == 1:
        return ExactScalar(Fraction(1), 1)
    if m > 1:
        return _gamma_half(m - 2) * Fraction(m - 2, 2)
    # Gamma(z) = Gamma(z + 1) / z
    return _gamma_half(m + 2) / Fraction(m, 2)


def rgamma_half(m: int) -> ExactScalar:
    """1 / Gamma(m/2) for any integer m, zero at the poles."""
    if m <= 0 and m % 2 == 0:
        return ZERO
    return ONE / _gamma_half(m)


# -- Gegenbauer -------------------------------------------------------------

def pochhammer(x: Fraction, j: int) -> Fraction:
    out = Fraction(1)
    for i in range(j):
        out *= x + i
    return out


@dataclass(frozen=True)
class GegenbauerPoly:
    nu: Fraction
    j: int
    coeffs: tuple[Fraction, ...]  # coeffs[d] multiplies z**d

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc


@lru_cache(maxsize=None)
def gegenbauer(nu, j: int) -> GegenbauerPoly:
    """C^nu_j as exact monomial coefficients."""
    if j < 0:
        raise ValueError("degree must be non-negative")
    nu = Fraction(nu)
    coeffs = [Fraction(0)] * (j + 1)
    for i in range(j // 2 + 1):
        d = j - 2 * i
        coeffs[d] += (
            (-1) ** i * pochhammer(nu, j - i) / (math.factorial(i) * math.factorial(d)) * 2**d
        )
    return GegenbauerPoly(nu, j, tuple(coeffs))


def gegenbauer_at_one(nu, j: int) -> Fraction:
    """Closed form C^nu_j(1) = (2 nu)_j / j!."""
    return pochhammer(2 * Fraction(nu), j) / math.factorial(j)


# -- embedding-factor normalisation -----------------------------------------

@lru_cache(maxsize=None)
def mu_const(j: int, k: int, n: int) -> Fraction:
    if j < 0 or k < 0:
        raise ValueError("j and k must be non-negative")
    if j == 0:
        return Fraction(1)
    l, odd = divmod(j, 2)
    if not odd:
        return (-1) ** l / gegenbauer(Fraction(n - 1, 2) + k, 2 * l).coeffs[0]
    c0 = gegenbauer(Fraction(n + 1, 2) + k, 2 * l).coeffs[0]
    return (-1) ** l * Fraction(n + 2 * k + 2 * l, n + 2 * k - 1) / c0


# -- transform constants ----------------------------------------------------

@lru_cache(maxsize=None)
def B_const(alpha: int, k: int, n: int) -> ExactScalar:
    """Dual Radon multiplier on |p|^alpha P_k(p w) for integer alpha > -k-1."""
    if k < 0 or alpha <= -k - 1:
        raise ValueError(f"B(alpha={alpha}, k={k}) outside alpha > -k-1")
    out = ExactScalar(Fraction(1, 2) ** (alpha + k))
    out = out * math.factorial(alpha + k) * gamma_half(n)
    return out * rgamma_half(alpha + 2) * rgamma_half(alpha + 2 * k + n)


@lru_cache(maxsize=None)
def A_const(alpha: int, k: int, n: int) -> ExactScalar:
    """Radon multiplier on P_k(x)/|x|^(alpha+n-1) for integer alpha > k."""
    if k < 0 or alpha <= k:
        raise ValueError(f"A(alpha={alpha}, k={k}) outside alpha > k")
    out = ExactScalar(Fraction(2) ** (k - alpha + 1), n) * math.factorial(alpha - k - 1)
    return out * rgamma_half(alpha + n - 1) * rgamma_half(alpha - 2 * k + 1)


def c_const(k: int, j: int, n: int) -> ExactScalar:
    """S maps (x0+wp)^(j+k) w^k P to c_const * X^(j)_k P."""
    half, s = divmod(j, 2)
    return (-1) ** k * B_const(2 * half, k + s, n)


def d_const(k: int, J: int, n: int) -> ExactScalar:
    """R maps the Laurent term (J, k) to d_const * (x0+wp)^-(J+1+k) w^k P."""
    if J < 0 or k < 0:
        raise ValueError("J and k must be non-negative")
    s = 1 if J % 2 == 0 else 0
    j = (J + 1 - s) // 2
    return (-1) ** (s + 1) * A_const(2 * j + 2 * k + 2 * s, k + s, n)


def radon_pi_power(n: int) -> int:
    """The pi exponent (in halves) shared by every d_const at dimension n."""
    return d_const(0, 0, n).h


# -- finite witnesses for the growth estimates ------------------------------

def _half_grid(grid_max):
    return [Fraction(i, 2) for i in range(int(2 * grid_max) + 1)]


def gamma_ratio(j, k, m) -> float:
    j, k, m = float(j), float(k), float(m)
    return math.exp(math.lgamma(j + k + 1) - math.lgamma(j + 1) - math.lgamma(k + 1 + m))


def verify_gamma_ratio_bounds(grid_max, a1=Fraction(1, 2), a2=Fraction(3)) -> dict:
    """Witness constants C1, C2 with C1 a1^(j+k) <= ratio <= C2 a2^(j+k) on a half-integer grid.

    The constants are computed per m (they depend on m); the report carries
    the per-m witnesses and whether every grid point satisfies them.
    """
    if grid_max < 1:
        raise ValueError("grid_max must be >= 1")
    if not (0 < a1 < 1 and a2 > 2):
        raise ValueError("need a1 in (0,1) and a2 in (2,inf)")
    grid = _half_grid(grid_max)
    per_m = {}
    holds = True
    for m in grid:
        lo = math.inf
        hi = 0.0
        for j in grid:
            for k in grid:
                r = gamma_ratio(j, k, m)
                lo = min(lo, r / float(a1) ** float(j + k))
                hi = max(hi, r / float(a2) ** float(j + k))
        holds &= math.isfinite(lo) and lo > 0 and math.isfinite(hi)
        per_m[str(m)] = {"C1": lo, "C2": hi}
    return {
        "grid_max": float(grid_max),
        "a1": float(a1),
        "a2": float(a2),
        "C1": min(v["C1"] for v in per_m.values()),
        "C2": max(v["C2"] for v in per_m.values()),
        "per_m": per_m,
        "holds": bool(holds),
    }


def constant_growth_witness(which: str, n: int, grid_max: int, a1=0.5, a2=3.0) -> dict:
    """C1 a1^(j+k) <= |const_{k,j}| <= C2 a2^(j+k) witnesses for c_const or d_const."""
    fn = {"c": c_const, "d": d_const}[which]
    lo, hi = math.inf, 0.0
    for k in range(grid_max + 1):
        for j in range(grid_max + 1):
            v = abs(float(fn(k, j, n)))
            lo = min(lo, v / a1 ** (j + k))
            hi = max(hi, v / a2 ** (j + k))
    return {"C1": lo, "C2": hi, "holds": lo > 0 and math.isfinite(hi)}
