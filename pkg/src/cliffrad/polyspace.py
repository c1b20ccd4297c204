"""R_n-valued polynomials, Dirac operators and the monogenic decompositions.

A polynomial lives either on R^n (variables x_1..x_n, "vector arity") or on
R^{n+1} (variables x_0..x_n, "paravector arity").  In paravector arity a
polynomial may carry a denominator |x|^d, which is how elements of the
Laurent module are represented.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from numbers import Number

import numpy as np

from .clifford import Multivector, batch_product, sign_table
from .exactnum import gegenbauer, mu_const

Monomial = tuple


class NotHomogeneous(ValueError):
    pass


class NotHarmonic(ValueError):
    pass


def _clean(terms):
    out = {}
    for mono, coeffs in terms.items():
        c = {b: v for b, v in coeffs.items() if v != 0}
        if c:
            out[mono] = c
    return out


class MvPolynomial:
    """Polynomial with Multivector coefficients, optionally divided by |x|^denom."""

    __slots__ = ("n", "nvars", "terms", "denom", "_arrays")

    def __init__(self, n: int, terms=None, paravector: bool = False, denom: int = 0):
        self.n = n
        self.nvars = n + 1 if paravector else n
        if denom < 0:
            raise ValueError("denominator power must be non-negative")
        if denom and not paravector:
            raise ValueError("rational forms are only allowed in paravector arity")
        self.denom = denom
        terms = terms or {}
        for mono in terms:
            if len(mono) != self.nvars:
                raise ValueError(f"monomial {mono} has wrong arity for nvars={self.nvars}")
        self.terms = _clean(terms)
        self._arrays = None

    # -- constructors ------------------------------------------------------
    @property
    def paravector(self) -> bool:
        return self.nvars == self.n + 1

    def _new(self, terms, denom=None):
        return MvPolynomial(self.n, terms, self.paravector, self.denom if denom is None else denom)

    @classmethod
    def zero(cls, n, paravector=False):
        return cls(n, {}, paravector)

    @classmethod
    def constant(cls, n, value, paravector=False):
        if isinstance(value, Multivector):
            coeffs = dict(value.coeffs)
        else:
            coeffs = {0: value}
        nvars = n + 1 if paravector else n
        return cls(n, {(0,) * nvars: coeffs}, paravector)

    @classmethod
    def variable(cls, n, i, paravector=False):
        """The coordinate x_i (i = 0 only in paravector arity)."""
        nvars = n + 1 if paravector else n
        idx = i if paravector else i - 1
        if not 0 <= idx < nvars:
            raise ValueError(f"no variable x_{i} in this arity")
        mono = tuple(1 if t == idx else 0 for t in range(nvars))
        return cls(n, {mono: {0: Fraction(1)}}, paravector)

    @classmethod
    def xvec(cls, n, paravector=False):
        """The 1-vector x_1 e_1 + ... + x_n e_n."""
        nvars = n + 1 if paravector else n
        off = 1 if paravector else 0
        terms = {}
        for i in range(n):
            mono = tuple(1 if t == i + off else 0 for t in range(nvars))
            terms[mono] = {1 << i: Fraction(1)}
        return cls(n, terms, paravector)

    @classmethod
    def xpara(cls, n):
        """The paravector x = x_0 + x_vec in paravector arity."""
        return cls.variable(n, 0, True) + cls.xvec(n, True)

    @classmethod
    def norm2(cls, n, paravector=False):
        """|x|^2 summed over every variable of the arity."""
        nvars = n + 1 if paravector else n
        terms = {}
        for i in range(nvars):
            terms[tuple(2 if t == i else 0 for t in range(nvars))] = {0: Fraction(1)}
        return cls(n, terms, paravector)

    @classmethod
    def monomial(cls, n, exps, value=Fraction(1), paravector=False):
        if isinstance(value, Multivector):
            coeffs = dict(value.coeffs)
        else:
            coeffs = {0: value}
        return cls(n, {tuple(exps): coeffs}, paravector)

    # -- inspection --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def degree(self) -> int:
        """Total degree of the numerator (-1 for the zero polynomial)."""
        return max(self.degrees(), default=-1)

    def is_homogeneous(self, k: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (k is None or ds == {k})

    def homogeneous_degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise NotHomogeneous(f"polynomial has degrees {sorted(ds)}")
        return ds.pop() if ds else 0

    def homogeneous_part(self, d: int) -> MvPolynomial:
        return self._new({m: c for m, c in self.terms.items() if sum(m) == d})

    def coefficient(self, mono) -> Multivector:
        return Multivector(self.n, self.terms.get(tuple(mono), {}))

    def blades(self) -> set[int]:
        return {b for c in self.terms.values() for b in c}

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: MvPolynomial):
        if other.n != self.n or other.nvars != self.nvars:
            raise ValueError("polynomials live in different spaces")

    def _align(self, other: MvPolynomial):
        """Bring two rational forms to a common denominator."""
        if self.denom == other.denom:
            return self, other
        if not self.terms:
            return self._new({}, other.denom), other
        if not other.terms:
            return self, other._new({}, self.denom)
        diff = self.denom - other.denom
        if diff % 2:
            raise ValueError("denominator powers differ by an odd amount")
        r2 = MvPolynomial.norm2(self.n, True) ** (abs(diff) // 2)
        if diff > 0:
            return self, (r2 * other)._new((r2 * other).terms, self.denom)
        return (r2 * self)._new((r2 * self).terms, other.denom), other

    def __add__(self, other):
        if isinstance(other, (Number, Multivector)):
            other = MvPolynomial.constant(self.n, other, self.paravector)
        if not isinstance(other, MvPolynomial):
            return NotImplemented
        self._check(other)
        a, b = self._align(other)
        out = {m: dict(c) for m, c in a.terms.items()}
        for m, c in b.terms.items():
            slot = out.setdefault(m, {})
            for bl, v in c.items():
                slot[bl] = slot.get(bl, 0) + v
        return a._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: {b: -v for b, v in c.items()} for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> MvPolynomial:
        return self._new({m: {b: v * s for b, v in c.items()} for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        if isinstance(other, Multivector):
            return self * MvPolynomial.constant(self.n, other, self.paravector)
        if not isinstance(other, MvPolynomial):
            return NotImplemented
        self._check(other)
        table = sign_table(self.n)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                slot = out.setdefault(m, {})
                for b1, v1 in c1.items():
                    row = table[b1]
                    for b2, v2 in c2.items():
                        key = b1 ^ b2
                        prod = v1 * v2
                        slot[key] = slot.get(key, 0) + (prod if row[b2] > 0 else -prod)
        return MvPolynomial(self.n, out, self.paravector, self.denom + other.denom)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        if isinstance(other, Multivector):
            return MvPolynomial.constant(self.n, other, self.paravector) * self
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self.scale(Fraction(1) / other if isinstance(other, int) else 1 / other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomial")
        out = MvPolynomial.constant(self.n, Fraction(1), self.paravector)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MvPolynomial):
            return NotImplemented
        if self.n != other.n or self.nvars != other.nvars:
            return False
        if self.denom == other.denom:
            return self.terms == other.terms
        if not self.terms and not other.terms:
            return True
        try:
            a, b = self._align(other)
        except ValueError:
            return False
        return a.terms == b.terms

    def __hash__(self):
        return hash((self.n, self.nvars, self.denom, frozenset((m, frozenset(c.items())) for m, c in self.terms.items())))

    def map_coefficients(self, fn) -> MvPolynomial:
        return self._new({m: dict(fn(Multivector(self.n, c)).coeffs) for m, c in self.terms.items()})

    def conjugate(self) -> MvPolynomial:
        return self.map_coefficients(lambda mv: mv.conjugate())

    def to_float(self) -> MvPolynomial:
        return self._new({m: {b: float(v) for b, v in c.items()} for m, c in self.terms.items()})

    def component(self, blade: int) -> MvPolynomial:
        """Real-valued polynomial of one blade coefficient."""
        return self._new({m: {0: c[blade]} for m, c in self.terms.items() if blade in c})

    # -- calculus ----------------------------------------------------------
    def derivative(self, var: int) -> MvPolynomial:
        """Partial derivative with respect to slot ``var`` of the monomial tuple."""
        if self.denom:
            raise ValueError("use dirac_apply for rational forms")
        out = {}
        for m, c in self.terms.items():
            e = m[var]
            if e == 0:
                continue
            nm = m[:var] + (e - 1,) + m[var + 1 :]
            slot = out.setdefault(nm, {})
            for b, v in c.items():
                slot[b] = slot.get(b, 0) + e * v
        return self._new(out)

    def laplacian(self) -> MvPolynomial:
        out = self._new({})
        for var in range(self.nvars):
            out = out + self.derivative(var).derivative(var)
        return out

    def _dirac_numerator(self) -> MvPolynomial:
        table = sign_table(self.n)
        off = 1 if self.paravector else 0
        out: dict = {}
        for m, c in self.terms.items():
            for var in range(self.nvars):
                e = m[var]
                if e == 0:
                    continue
                nm = m[:var] + (e - 1,) + m[var + 1 :]
                slot = out.setdefault(nm, {})
                gen = 0 if var < off else 1 << (var - off)
                row = table[gen]
                for b, v in c.items():
                    key = gen ^ b
                    val = e * v
                    slot[key] = slot.get(key, 0) + (val if row[b] > 0 else -val)
        return MvPolynomial(self.n, out, self.paravector)

    # -- evaluation --------------------------------------------------------
    def evaluate(self, point) -> Multivector:
        """Evaluate at a point given as a sequence of ``nvars`` scalars."""
        point = list(point)
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates")
        acc: dict = {}
        for m, c in self.terms.items():
            w = 1
            for x, e in zip(point, m):
                if e:
                    w = w * x**e
            for b, v in c.items():
                acc[b] = acc.get(b, 0) + v * w
        out = Multivector(self.n, acc)
        if self.denom:
            r2 = sum(x * x for x in point)
            out = out / _abs_power(r2, self.denom)
        return out

    def _get_arrays(self):
        if self._arrays is None:
            monos = list(self.terms)
            exps = np.array(monos, dtype=float).reshape(len(monos), self.nvars)
            coefs = np.zeros((len(monos), 1 << self.n))
            for i, m in enumerate(monos):
                for b, v in self.terms[m].items():
                    coefs[i, b] = float(v)
            self._arrays = (exps, coefs)
        return self._arrays

    def evaluate_batch(self, points) -> np.ndarray:
        """Float evaluation at rows of ``points`` (N, nvars); returns (N, 2**n)."""
        points = np.asarray(points, dtype=float)
        exps, coefs = self._get_arrays()
        if not len(exps):
            return np.zeros(points.shape[:-1] + (1 << self.n,))
        maxe = int(exps.max()) if exps.size else 0
        # powers[..., v, e] = x_v ** e
        powers = points[..., :, None] ** np.arange(maxe + 1)
        iexps = exps.astype(int)
        mono = np.ones(points.shape[:-1] + (len(exps),))
        for v in range(self.nvars):
            mono = mono * powers[..., v, iexps[:, v]]
        out = mono @ coefs
        if self.denom:
            r = np.sqrt(np.sum(points**2, axis=-1))
            out = out / r[..., None] ** self.denom
        return out

    # -- arity changes -----------------------------------------------------
    def lift(self) -> MvPolynomial:
        """Vector-arity polynomial viewed as a function of (x_0, x_vec)."""
        if self.paravector:
            return self
        return MvPolynomial(self.n, {(0,) + m: c for m, c in self.terms.items()}, True)

    def restrict_x0(self) -> MvPolynomial:
        """Set x_0 = 0 (numerator only; the denominator becomes |x_vec|^d)."""
        if not self.paravector:
            return self
        if self.denom:
            raise ValueError("restriction of rational forms is not a polynomial")
        return MvPolynomial(self.n, {m[1:]: c for m, c in self.terms.items() if m[0] == 0}, False)

    def __repr__(self):
        if not self.terms:
            return "MvPolynomial(0)"
        names = (["x0"] if self.paravector else []) + [f"x{i + 1}" for i in range(self.n)]
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(names, m) if e) or "1"
            parts.append(f"({Multivector(self.n, c)!r})*{mono}")
        body = " + ".join(parts)
        if self.denom:
            body = f"[{body}] / |x|^{self.denom}"
        return f"MvPolynomial({body})"


def _abs_power(r2, d):
    """|x|^d from |x|^2, exact when possible."""
    if d % 2 == 0:
        return r2 ** (d // 2)
    if isinstance(r2, Fraction):
        num, den = math.isqrt(r2.numerator), math.isqrt(r2.denominator)
        if num * num == r2.numerator and den * den == r2.denominator:
            return Fraction(num, den) ** d
    return float(r2) ** (d / 2)


# -- operators --------------------------------------------------------------

def dirac_apply(P: MvPolynomial) -> MvPolynomial:
    """Left Dirac / Cauchy-Riemann operator.

    Vector arity gives sum_j e_j d/dx_j; paravector arity adds d/dx_0.  For a
    rational form Q/|x|^d the quotient rule gives
    (|x|^2 D Q - d x Q) / |x|^(d+2).
    """
    if not P.denom:
        return P._dirac_numerator()
    Q = MvPolynomial(P.n, P.terms, True)
    num = MvPolynomial.norm2(P.n, True) * Q._dirac_numerator()
    num = num - (MvPolynomial.xpara(P.n) * Q).scale(P.denom)
    return MvPolynomial(P.n, num.terms, True, P.denom + 2)


def is_monogenic(P: MvPolynomial) -> bool:
    return dirac_apply(P).is_zero()


@lru_cache(maxsize=None)
def embedding_factor(j: int, k: int, n: int) -> MvPolynomial:
    """X^(j)_k as a polynomial in (x_0, x_vec) with CK(x_vec^j P_k) = X^(j)_k P_k."""
    if j < 0 or k < 0:
        raise ValueError("j and k must be non-negative")
    one = MvPolynomial.constant(n, Fraction(1), True)
    if j == 0:
        return one
    x0 = MvPolynomial.variable(n, 0, True)
    r2 = MvPolynomial.norm2(n, True)
    nu = Fraction(n - 1, 2) + k

    def homogenized(poly_coeffs, degree):
        # |x|^degree C(x0/|x|) with only parity-matching powers present
        acc = MvPolynomial.zero(n, True)
        for d, c in enumerate(poly_coeffs):
            if c == 0:
                continue
            acc = acc + (x0**d) * (r2 ** ((degree - d) // 2)) * c
        return acc

    main = homogenized(gegenbauer(nu, j).coeffs, j)
    side = homogenized(gegenbauer(nu + 1, j - 1).coeffs, j - 1) * MvPolynomial.xvec(n, True)
    ratio = Fraction(n + 2 * k - 1, n + 2 * k + j - 1)
    return (main + side * ratio) * mu_const(j, k, n)


def ck_extend(f0: MvPolynomial) -> MvPolynomial:
    """Cauchy-Kovalevskaya extension sum_m x_0^m (-d_vec)^m f0 / m!."""
    if f0.paravector:
        raise ValueError("ck_extend expects a vector-arity polynomial")
    out = MvPolynomial.zero(f0.n, True)
    x0 = MvPolynomial.variable(f0.n, 0, True)
    term = f0
    m = 0
    x0_pow = MvPolynomial.constant(f0.n, Fraction(1), True)
    while not term.is_zero():
        out = out + x0_pow * term.lift() * Fraction(1, math.factorial(m))
        term = -dirac_apply(term)
        x0_pow = x0_pow * x0
        m += 1
    return out


def xvec_power(n: int, j: int, paravector=False) -> MvPolynomial:
    return MvPolynomial.xvec(n, paravector) ** j


def harmonic_decompose(R: MvPolynomial) -> list[MvPolynomial]:
    """Harmonic Fischer decomposition R = sum_m |x|^(2m) H[m] of a homogeneous polynomial."""
    if R.paravector:
        raise ValueError("harmonic_decompose works in vector arity")
    k = R.homogeneous_degree()
    if R.is_zero():
        return [R]
    if k < 2:
        return [R]
    inner = harmonic_decompose(R.laplacian())
    n = R.n
    H = [None]
    for m in range(1, k // 2 + 1):
        G = inner[m - 1] if m - 1 < len(inner) else MvPolynomial.zero(n)
        H.append(G * Fraction(1, 2 * m * (2 * k - 2 * m + n - 2)))
    r2 = MvPolynomial.norm2(n)
    rest = R
    for m in range(1, len(H)):
        rest = rest - (r2**m) * H[m]
    H[0] = rest
    return H


def harmonic_split(Y: MvPolynomial) -> tuple[MvPolynomial, MvPolynomial]:
    """Split a homogeneous harmonic Y as P_k + x_vec P_(k-1) with both parts monogenic."""
    if Y.paravector:
        raise ValueError("harmonic_split works in vector arity")
    k = Y.homogeneous_degree()
    if not Y.laplacian().is_zero():
        raise NotHarmonic("input is not harmonic")
    if k == 0 or Y.is_zero():
        return Y, MvPolynomial.zero(Y.n)
    lower = dirac_apply(Y) * Fraction(-1, Y.n + 2 * k - 2)
    upper = Y - MvPolynomial.xvec(Y.n) * lower
    return upper, lower


def fischer_decompose(f: MvPolynomial) -> list[MvPolynomial]:
    """Monogenic Fischer decomposition f = sum_j x_vec^j P[j], P[j] of degree k - j."""
    if f.paravector:
        raise ValueError("fischer_decompose works in vector arity")
    if not f.is_homogeneous():
        raise NotHomogeneous("fischer_decompose needs a homogeneous polynomial")
    k = f.homogeneous_degree()
    parts = [MvPolynomial.zero(f.n) for _ in range(k + 1)]
    for m, H in enumerate(harmonic_decompose(f)):
        if H.is_zero():
            continue
        upper, lower = harmonic_split(H)
        sign = -1 if m % 2 else 1
        # |x|^(2m) = (-1)^m x_vec^(2m)
        parts[2 * m] = upper * sign
        if 2 * m + 1 <= k:
            parts[2 * m + 1] = lower * sign
    return parts


def fischer_reassemble(parts: list[MvPolynomial]) -> MvPolynomial:
    n = parts[0].n
    out = MvPolynomial.zero(n)
    xv = MvPolynomial.xvec(n)
    power = MvPolynomial.constant(n, Fraction(1))
    for P in parts:
        out = out + power * P
        power = power * xv
    return out


def monomials(nvars: int, k: int):
    for combo in combinations_with_replacement(range(nvars), k):
        exps = [0] * nvars
        for v in combo:
            exps[v] += 1
        yield tuple(exps)


def monogenic_dimension(k: int, n: int) -> int:
    """Rank of the right R_n-module of k-homogeneous spherical monogenics."""
    return math.comb(k + n - 2, n - 2)


def _right_span_rows(P: MvPolynomial, index: dict) -> np.ndarray:
    n = P.n
    rows = []
    for blade in range(1 << n):
        Q = P * Multivector.blade(n, blade)
        row = np.zeros(len(index))
        for m, c in Q.terms.items():
            for b, v in c.items():
                row[index[(m, b)]] = float(v)
        rows.append(row)
    return np.array(rows)


@lru_cache(maxsize=None)
def monogenic_basis(k: int, n: int) -> tuple[MvPolynomial, ...]:
    """A right R_n-module basis of k-homogeneous spherical monogenics.

    Candidates are the monogenic Fischer components of the scalar monomials;
    a candidate is kept when its right R_n-span adds a full 2**n real
    dimensions to the span collected so far.  Order is implementation defined.
    """
    if k == 0:
        return (MvPolynomial.constant(n, Fraction(1)),)
    index = {(m, b): i for i, (m, b) in enumerate((m, b) for m in monomials(n, k) for b in range(1 << n))}
    target = monogenic_dimension(k, n)
    chosen: list[MvPolynomial] = []
    basis_rows = np.zeros((0, len(index)))
    for mono in monomials(n, k):
        cand = fischer_decompose(MvPolynomial.monomial(n, mono))[0]
        if cand.is_zero():
            continue
        rows = _right_span_rows(cand, index)
        stacked = np.vstack([basis_rows, rows])
        if np.linalg.matrix_rank(stacked) == basis_rows.shape[0] + rows.shape[0]:
            chosen.append(cand)
            basis_rows = stacked
            if len(chosen) == target:
                break
    if len(chosen) != target:
        raise RuntimeError(f"monogenic basis search stalled at {len(chosen)}/{target}")
    return tuple(chosen)


# -- sphere norms -----------------------------------------------------------

def l2_inner(f: MvPolynomial, g: MvPolynomial) -> Multivector:
    """Normalised Clifford inner product (1/A_n) int conj(f) g over S^(n-1), exact.

    The scalar part is the real inner product sum_A <f_A, g_A>.
    """
    from .quadrature import sphere_moment

    if f.paravector or g.paravector or f.denom or g.denom:
        raise ValueError("l2_inner needs vector-arity polynomials")
    prod = f.conjugate() * g
    acc: dict = {}
    for m, c in prod.terms.items():
        w = sphere_moment(m).rational()
        if w == 0:
            continue
        for b, v in c.items():
            acc[b] = acc.get(b, 0) + v * w
    return Multivector(f.n, acc)


def l2_norm(f: MvPolynomial) -> float:
    return float(l2_inner(f, f).scalar_part()) ** 0.5


def sphere_samples(n: int, count: int = 4096, seed: int = 0) -> np.ndarray:
    if n == 2:
        t = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((count, n))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def sup_norm_estimate(f: MvPolynomial, count: int = 4096, seed: int = 0) -> float:
    """Max of |f| over a sample of S^(n-1); a lower bound on the true sup norm."""
    if f.paravector:
        raise ValueError("sup_norm_estimate works in vector arity")
    vals = f.evaluate_batch(sphere_samples(f.n, count, seed))
    return float(np.max(np.linalg.norm(vals, axis=1))) if len(vals) else 0.0


def embedding_bound_base(j_max: int, k_max: int, n: int) -> float:
    """Smallest b with |mu|(C_j(1) + ratio C_(j-1)(1)) <= b^(j+k) over the grid."""
    from .exactnum import gegenbauer_at_one

    b = 1.0
    for j in range(1, j_max + 1):
        for k in range(k_max + 1):
            nu = Fraction(n - 1, 2) + k
            ratio = Fraction(n + 2 * k - 1, n + 2 * k + j - 1)
            M = abs(mu_const(j, k, n)) * (gegenbauer_at_one(nu, j) + ratio * gegenbauer_at_one(nu + 1, j - 1))
            b = max(b, float(M) ** (1.0 / (j + k)))
    return b
