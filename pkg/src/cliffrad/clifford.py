"""Arithmetic in the real Clifford algebra R_n with e_i e_j + e_j e_i = -2 delta_ij.

Blades are encoded as bitmasks over {1, ..., n}: bit ``i - 1`` set means
``e_i`` is a factor.  Coefficients are either :class:`fractions.Fraction`
(exact backend) or ``float``; both share the same code paths.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Number

import numpy as np

MAX_DIM = 8


class DimensionMismatch(ValueError):
    pass


def _check_dim(n: int) -> None:
    if not 1 <= n <= MAX_DIM:
        raise ValueError(f"Clifford dimension must be in [1, {MAX_DIM}], got {n}")


def blade_sign(a: int, b: int) -> int:
    """Sign of e_A e_B relative to e_{A xor B} for negative-definite signature."""
    swaps = 0
    x = a >> 1
    while x:
        swaps += bin(x & b).count("1")
        x >>= 1
    # each shared generator contributes e_i^2 = -1
    swaps += bin(a & b).count("1")
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=None)
def sign_table(n: int) -> tuple[tuple[int, ...], ...]:
    size = 1 << n
    return tuple(tuple(blade_sign(a, b) for b in range(size)) for a in range(size))


@lru_cache(maxsize=None)
def _conj_signs(n: int) -> tuple[int, ...]:
    out = []
    for a in range(1 << n):
        r = bin(a).count("1")
        out.append(-1 if (r * (r + 1) // 2) & 1 else 1)
    return tuple(out)


def blade_name(a: int) -> str:
    if a == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(MAX_DIM) if a >> i & 1)


class Multivector:
    """Immutable element of R_n stored sparsely as ``{blade: coefficient}``."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict[int, object] | None = None):
        _check_dim(n)
        size = 1 << n
        clean = {}
        for blade, value in (coeffs or {}).items():
            if not 0 <= blade < size:
                raise ValueError(f"blade {blade} out of range for n={n}")
            if value != 0:
                clean[blade] = value
        self.n = n
        self.coeffs = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def scalar(cls, n: int, value) -> Multivector:
        return cls(n, {0: value})

    @classmethod
    def basis(cls, n: int, i: int) -> Multivector:
        """The generator e_i, 1 <= i <= n."""
        if not 1 <= i <= n:
            raise ValueError(f"basis index {i} out of range for n={n}")
        return cls(n, {1 << (i - 1): Fraction(1)})

    @classmethod
    def blade(cls, n: int, mask: int, value=Fraction(1)) -> Multivector:
        return cls(n, {mask: value})

    @classmethod
    def vector(cls, n: int, components) -> Multivector:
        components = list(components)
        if len(components) != n:
            raise DimensionMismatch(f"expected {n} components, got {len(components)}")
        return cls(n, {1 << i: c for i, c in enumerate(components)})

    @classmethod
    def paravector(cls, n: int, x0, xv) -> Multivector:
        coeffs = {1 << i: c for i, c in enumerate(xv)}
        coeffs[0] = x0
        if len(coeffs) - 1 > n:
            raise DimensionMismatch("too many vector components")
        return cls(n, coeffs)

    @classmethod
    def from_array(cls, n: int, arr) -> Multivector:
        return cls(n, {b: float(v) for b, v in enumerate(arr)})

    # -- accessors ---------------------------------------------------------
    def __getitem__(self, blade: int):
        return self.coeffs.get(blade, 0)

    def scalar_part(self):
        return self.coeffs.get(0, 0)

    def vector_part(self) -> list:
        return [self.coeffs.get(1 << i, 0) for i in range(self.n)]

    def grades(self) -> set[int]:
        return {bin(b).count("1") for b in self.coeffs}

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_paravector(self) -> bool:
        return self.grades() <= {0, 1}

    def norm_squared(self):
        return sum(v * v for v in self.coeffs.values())

    def norm(self) -> float:
        return float(self.norm_squared()) ** 0.5

    def to_array(self) -> np.ndarray:
        arr = np.zeros(1 << self.n)
        for b, v in self.coeffs.items():
            arr[b] = float(v)
        return arr

    def to_float(self) -> Multivector:
        return Multivector(self.n, {b: float(v) for b, v in self.coeffs.items()})

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> Multivector:
        if isinstance(other, Multivector):
            if other.n != self.n:
                raise DimensionMismatch(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, Number):
            return Multivector(self.n, {0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for b, v in other.coeffs.items():
            out[b] = out.get(b, 0) + v
        return Multivector(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.n, {b: -v for b, v in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Multivector(self.n, {b: v * other for b, v in self.coeffs.items()})
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return Multivector(self.n, {b: other * v for b, v in self.coeffs.items()})
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number):
            return Multivector(self.n, {b: v / other for b, v in self.coeffs.items()})
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return paravector_inverse(self) ** (-k)
        out = Multivector.scalar(self.n, Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Number):
            other = Multivector(self.n, {0: other})
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def conjugate(self) -> Multivector:
        return conjugate(self)

    def __repr__(self):
        if not self.coeffs:
            return f"Multivector({self.n}, 0)"
        parts = [f"{v}*{blade_name(b)}" if b else f"{v}" for b, v in sorted(self.coeffs.items())]
        return f"Multivector({self.n}, " + " + ".join(parts) + ")"


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    if a.n != b.n:
        raise DimensionMismatch(f"dimension mismatch: {a.n} vs {b.n}")
    table = sign_table(a.n)
    out: dict[int, object] = {}
    for ba, va in a.coeffs.items():
        row = table[ba]
        for bb, vb in b.coeffs.items():
            key = ba ^ bb
            term = va * vb if row[bb] > 0 else -(va * vb)
            out[key] = out.get(key, 0) + term
    return Multivector(a.n, out)


def conjugate(a: Multivector) -> Multivector:
    """Clifford conjugation; maps x0 + x_vec to x0 - x_vec."""
    signs = _conj_signs(a.n)
    return Multivector(a.n, {b: v if signs[b] > 0 else -v for b, v in a.coeffs.items()})


def paravector_inverse(x: Multivector) -> Multivector:
    if not x.is_paravector():
        raise ValueError("inverse only implemented for paravectors")
    r2 = x.norm_squared()
    if r2 == 0:
        raise ZeroDivisionError("paravector is zero")
    return conjugate(x) / r2


# -- batched float kernels ------------------------------------------------

@lru_cache(maxsize=None)
def _product_plan(n: int):
    size = 1 << n
    table = sign_table(n)
    return [(a, b, a ^ b, table[a][b]) for a in range(size) for b in range(size)]


def batch_product(A: np.ndarray, B: np.ndarray, n: int) -> np.ndarray:
    """Row-wise geometric product of coefficient arrays of shape (N, 2**n)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    out = np.zeros(np.broadcast_shapes(A.shape, B.shape))
    nz_a = [a for a in range(1 << n) if np.any(A[..., a])]
    nz_b = [b for b in range(1 << n) if np.any(B[..., b])]
    table = sign_table(n)
    for a in nz_a:
        for b in nz_b:
            out[..., a ^ b] += table[a][b] * A[..., a] * B[..., b]
    return out


def vectors_to_array(points: np.ndarray, n: int, x0=None) -> np.ndarray:
    """Embed rows of (N, n) vector components (plus optional x0) as (N, 2**n)."""
    points = np.asarray(points, dtype=float)
    out = np.zeros(points.shape[:-1] + (1 << n,))
    for i in range(n):
        out[..., 1 << i] = points[..., i]
    if x0 is not None:
        out[..., 0] = x0
    return out


def batch_conjugate(A: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(A) * np.array(_conj_signs(n), dtype=float)
