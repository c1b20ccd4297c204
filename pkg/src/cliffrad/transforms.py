"""Dual Radon transform S and Radon transform R on series bases, with numeric oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .clifford import Multivector, batch_product, vectors_to_array
from .exactnum import A_const, B_const, ExactScalar, c_const, d_const, radon_pi_power
from .polyspace import MvPolynomial, dirac_apply
from .quadrature import (
    SphereQuadrature,
    build_sphere_quadrature,
    hyperplane_integrate,
    sphere_moment,
    split_sphere_quadrature,
)
from .series import (
    LAURENT,
    TAYLOR,
    MonogenicSeries,
    SeriesError,
    SliceSeries,
    assemble,
    invert_I2,
    membership,
    monogenic_eval,
    monogenic_eval_batch,
    slice_eval,
    slice_eval_batch,
)


@dataclass
class TransformReport:
    index: tuple
    symbolic: object
    constant: ExactScalar
    samples: list = field(default_factory=list)
    max_rel_deviation: float = 0.0

    def add_sample(self, point, oracle, symbolic) -> None:
        oracle = np.asarray(oracle, dtype=float)
        symbolic = np.asarray(symbolic, dtype=float)
        scale = np.linalg.norm(symbolic)
        # absolute deviation where the symbolic side vanishes
        dev = float(np.linalg.norm(oracle - symbolic) / (scale if scale > 0 else 1.0))
        self.samples.append({"point": point, "oracle": oracle.tolist(), "symbolic": symbolic.tolist(), "rel_dev": dev})
        self.max_rel_deviation = max(self.max_rel_deviation, dev)


# -- dual Radon transform ---------------------------------------------------

def dual_radon_symbolic(f: SliceSeries) -> MonogenicSeries:
    """S on an S_0 series: (j, k) with j < k vanishes, otherwise -> Taylor (j-k, k) times c_const."""
    if any(j < 0 for j, _ in f.terms):
        raise SeriesError("the dual Radon transform is defined on S_0 only (j >= 0)")
    terms = {}
    for (j, k), P in f.terms.items():
        if j < k:
            continue
        terms[(j - k, k)] = P * c_const(k, j - k, f.n).rational()
    return MonogenicSeries(f.n, TAYLOR, terms, f.pi_pow)


def dual_radon_inverse(g: MonogenicSeries) -> SliceSeries:
    """S^-1 on Taylor series, landing in SM_0."""
    if g.part != TAYLOR:
        raise SeriesError("dual_radon_inverse expects a Taylor series")
    terms = {(j + k, k): P * (1 / c_const(k, j, g.n).rational()) for (j, k), P in g.terms.items()}
    return SliceSeries(g.n, terms, g.pi_pow)


def theoremA_decompose(f: SliceSeries) -> tuple[SliceSeries, SliceSeries]:
    """S_0 = ker(S) + SM_0: split by j < k versus j >= k."""
    if any(j < 0 for j, _ in f.terms):
        raise SeriesError("theoremA_decompose expects an S_0 series")
    return f.restrict(lambda j, k: j < k), f.restrict(lambda j, k: j >= k)


def slice_phi(f: SliceSeries, x0):
    """The function (p, w) -> f(x0, p, w) as a batch evaluator."""
    return lambda p, omegas: slice_eval_batch(f, x0, p, omegas)


def dual_radon_numeric(phi, xvec, quad: SphereQuadrature) -> np.ndarray:
    """(1/A_n) int phi((x, w), w) dw by a sphere rule; phi maps (p (N,), w (N, n)) -> (N, D)."""
    xvec = np.asarray(xvec, dtype=float)
    p = quad.nodes @ xvec
    return quad.integrate(phi(p, quad.nodes))


def _symbolic_omega_poly(n):
    return MvPolynomial.xvec(n)


def dual_radon_moment(f: SliceSeries, x0, xvec) -> Multivector:
    """S[f](x0, x) exactly via sphere moments, for rational x0 and x.

    The integrand is expanded as a polynomial in w (valid on the sphere,
    where w^2 = -1) and each monomial is integrated exactly.
    """
    n = f.n
    if any(j < 0 for j, _ in f.terms):
        raise SeriesError("moment evaluation needs an S_0 series")
    w = _symbolic_omega_poly(n)
    p = MvPolynomial(n, {tuple(1 if t == i else 0 for t in range(n)): {0: Fraction(xvec[i])} for i in range(n)})
    q = MvPolynomial.constant(n, Fraction(x0)) + w * p
    integrand = MvPolynomial.zero(n)
    powers = {0: MvPolynomial.constant(n, Fraction(1))}
    for (j, k), P in sorted(f.terms.items()):
        while max(powers) < j:
            powers[max(powers) + 1] = powers[max(powers)] * q
        integrand = integrand + powers[j] * (w**k) * P
    acc: dict = {}
    for m, c in integrand.terms.items():
        wm = sphere_moment(m).rational()
        if wm:
            for b, v in c.items():
                acc[b] = acc.get(b, 0) + v * wm
    return Multivector(n, acc)


def dual_radon_harmonic(alpha: int, P: MvPolynomial, xvec, quad: SphereQuadrature | None = None) -> dict:
    """Both sides of S[|p|^alpha P(p w)] = B(alpha, k) |x|^alpha P(x).

    Even alpha: exact sphere moments against the exact right-hand side.
    Odd alpha: float product quadrature against the float right-hand side.
    """
    n = P.n
    k = P.homogeneous_degree()
    if not P.laplacian().is_zero():
        raise ValueError("P must be harmonic")
    B = B_const(alpha, k, n)
    r2 = sum(Fraction(v) ** 2 if alpha % 2 == 0 else float(v) ** 2 for v in xvec)
    if alpha % 2 == 0:
        # |p|^alpha P(p w) = p^(alpha+k) P(w) for even alpha
        pw = MvPolynomial(n, {tuple(1 if t == i else 0 for t in range(n)): {0: Fraction(xvec[i])} for i in range(n)})
        integrand = (pw ** (alpha + k)) * P
        acc: dict = {}
        for m, c in integrand.terms.items():
            wm = sphere_moment(m).rational()
            for b, v in c.items():
                acc[b] = acc.get(b, 0) + v * wm
        lhs = Multivector(n, acc)
        rhs = P.evaluate([Fraction(v) for v in xvec]) * (B.rational() * r2 ** Fraction(alpha, 2) if alpha >= 0 else B.rational() / r2 ** (-alpha // 2))
        return {"alpha": alpha, "k": k, "B": B, "lhs": lhs, "rhs": rhs, "exact": True, "deviation": float((lhs - rhs).norm())}
    x = np.asarray(xvec, dtype=float)
    quad = quad or split_sphere_quadrature(n, x, 2 * (abs(alpha) + k) + 24)
    p = quad.nodes @ x
    vals = (np.abs(p) ** alpha * p**k)[:, None] * P.evaluate_batch(quad.nodes)
    lhs = quad.integrate(vals)
    rhs = float(B) * float(r2) ** (alpha / 2) * P.to_float().evaluate([float(v) for v in x]).to_array()
    dev = float(np.linalg.norm(lhs - rhs))
    return {"alpha": alpha, "k": k, "B": B, "lhs": lhs, "rhs": rhs, "exact": False, "deviation": dev}


# -- Radon transform --------------------------------------------------------

def radon_symbolic(f: MonogenicSeries) -> SliceSeries:
    """R on a Laurent series: (J, k) -> (-(J+1+k), k) times d_const."""
    if f.part != LAURENT:
        raise SeriesError("the Radon transform is only applied to Laurent (M_infinity) series")
    h = radon_pi_power(f.n)
    terms = {}
    for (J, k), P in f.terms.items():
        d = d_const(k, J, f.n)
        terms[(-(J + 1 + k), k)] = P * ExactScalar(d.q, d.h - h).rational()
    return SliceSeries(f.n, terms, f.pi_pow + h)


def radon_inverse(g: SliceSeries) -> MonogenicSeries:
    """R^-1 on SM_infinity series."""
    if not membership(g).in_SMinf:
        raise SeriesError("radon_inverse needs support in j < -k")
    h = radon_pi_power(g.n)
    terms = {}
    for (j, k), P in g.terms.items():
        J = -j - 1 - k
        d = d_const(k, J, g.n)
        terms[(J, k)] = P * (1 / ExactScalar(d.q, d.h - h).rational())
    return MonogenicSeries(g.n, LAURENT, terms, g.pi_pow - h)


def split_S_infinity(f: SliceSeries) -> tuple[SliceSeries, SliceSeries]:
    """S_infinity = I_2(ker S) + SM_infinity: split by -k <= j <= -1 versus j < -k."""
    if any(j >= 0 for j, _ in f.terms):
        raise SeriesError("split_S_infinity expects an S_infinity series")
    return f.restrict(lambda j, k: j >= -k), f.restrict(lambda j, k: j < -k)


def radon_numeric(f, x0: float, p: float, omega, n: int, **quad_kw) -> np.ndarray:
    """R[f](x0, p, w) by hyperplane quadrature.

    ``f`` is a :class:`MonogenicSeries` or a batch evaluator on (N, n+1)
    paravector coordinates.
    """
    if isinstance(f, MonogenicSeries):
        series = f
        f = lambda pts: monogenic_eval_batch(series, pts)  # noqa: E731

    def on_plane(xs):
        pts = np.column_stack([np.full(len(xs), float(x0)), xs])
        return f(pts)

    res, _err = hyperplane_integrate(on_plane, omega, p, n, **quad_kw)
    return res


def radon_numeric_xi(f, x0: float, p: float, xi, n: int, **quad_kw) -> np.ndarray:
    """R[f](x0, p, xi) for a non-unit normal: (1/|xi|) times the unit-normal integral at p/|xi|."""
    xi = np.asarray(xi, dtype=float)
    s = np.linalg.norm(xi)
    return radon_numeric(f, x0, p / s, xi / s, n, **quad_kw) / s


def radon_harmonic_check(alpha: int, P: MvPolynomial, omegas, rotation=None, **quad_kw) -> TransformReport:
    """Compare R[P(x)/|x|^(alpha+n-1)](1, w) with A(alpha, k) P(w) at the given unit w.

    With ``rotation`` (an orthogonal matrix Q) the integrand is P(Q^T x) and
    the symbolic side is evaluated at Q^T w.
    """
    n = P.n
    k = P.homogeneous_degree()
    if not P.laplacian().is_zero():
        raise ValueError("P must be harmonic")
    A = A_const(alpha, k, n)
    Q = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
    Pf = P.to_float()

    def integrand(xs):
        r = np.linalg.norm(xs, axis=1)
        return Pf.evaluate_batch(xs @ Q) / r[:, None] ** (alpha + n - 1)

    report = TransformReport((alpha, k), P, A)
    for w in omegas:
        w = np.asarray(w, dtype=float)
        num, _ = hyperplane_integrate(integrand, w, 1.0, n, **quad_kw)
        sym = float(A) * Pf.evaluate(list(Q.T @ w)).to_array()
        report.add_sample(w.tolist(), num, sym)
    return report


def radon_term_report(J: int, k: int, P: MvPolynomial, samples, **quad_kw) -> TransformReport:
    """Numeric R of the single Laurent term (J, k) against its symbolic image."""
    n = P.n
    f = MonogenicSeries(n, LAURENT, {(J, k): P})
    g = radon_symbolic(f)
    report = TransformReport((J, k), g, d_const(k, J, n))
    for x0, p, w in samples:
        w = np.asarray(w, dtype=float)
        num = radon_numeric(f, x0, p, w, n, **quad_kw)
        sym = slice_eval_batch(g, x0, np.array([p]), w[None, :])[0]
        report.add_sample([x0, p, w.tolist()], num, sym)
    return report


def dual_term_report(j: int, k: int, P: MvPolynomial, xs, quad: SphereQuadrature, x0=Fraction(1, 3)) -> TransformReport:
    """Float-quadrature S of (x0 + w p)^j w^k P against the symbolic Taylor image."""
    n = P.n
    f = SliceSeries(n, {(j, k): P})
    g = dual_radon_symbolic(f)
    report = TransformReport((j, k), g, c_const(k, j - k, n) if j >= k else ExactScalar(Fraction(0)))
    for x in xs:
        num = dual_radon_numeric(slice_phi(f, float(x0)), np.asarray(x, dtype=float), quad)
        sym = monogenic_eval_batch(g, np.array([[float(x0)] + [float(v) for v in x]]))[0]
        report.add_sample([float(x0)] + [float(v) for v in x], num, sym)
    return report


# -- intertwining identities ------------------------------------------------

def intertwining_check(f, mode: str, samples, h: float | None = None, **quad_kw) -> float:
    """Max residual of the intertwining identities at sample points.

    mode="dual": ``f`` an S_0 SliceSeries; checks D(S[f]) = 0 symbolically and
    by finite differences, and S[w_j d_p f] = d_(x_j) S[f] by quadrature and
    finite differences.  ``samples`` are (x0, x_vec) pairs.

    mode="radon": ``f`` a Laurent MonogenicSeries (n in {2, 3}); checks the
    slice Cauchy-Riemann residual of R[f] and d_p R[x_j f] = -d_(xi_j) R[f]
    by finite differences.  ``samples`` are (x0, p, w) triples.

    Derivatives use the fourth-order central stencil.
    """
    if mode == "dual":
        return _dual_intertwining(f, samples, h or 1e-3)
    if mode == "radon":
        return _radon_intertwining(f, samples, h or 5e-3, **quad_kw)
    raise ValueError(f"unknown mode {mode!r}")


def _deriv(fn, h):
    """d/dt fn(t) at t = 0."""
    return (8 * (fn(h) - fn(-h)) - (fn(2 * h) - fn(-2 * h))) / (12 * h)


def _dual_intertwining(f: SliceSeries, samples, h):
    n = f.n
    worst = 0.0
    Sf = dual_radon_symbolic(f)
    if not dirac_apply(assemble(Sf)).is_zero():
        worst = float("inf")
    quad = build_sphere_quadrature(n, max((j + 2 * k for j, k in f.terms), default=1) + 8)
    one_hot = np.eye(n)
    for x0, xv in samples:
        x0 = float(x0)
        xv = np.asarray(xv, dtype=float)

        def S(x0_, x_):
            return dual_radon_numeric(slice_phi(f, x0_), x_, quad)

        D = _deriv(lambda t: S(x0 + t, xv), h)
        for i in range(n):
            e = one_hot[i]
            dxi = _deriv(lambda t: S(x0, xv + t * e), h)
            D = D + batch_product(vectors_to_array(e, n), dxi, n)

            # w_i d_p phi, with d_p taken inside the integrand
            def wdp(p, omegas, i=i):
                return omegas[:, i : i + 1] * _deriv(lambda t: slice_eval_batch(f, x0, p + t, omegas), h)

            lhs = dual_radon_numeric(wdp, xv, quad)
            worst = max(worst, float(np.linalg.norm(lhs - dxi)))
        worst = max(worst, float(np.linalg.norm(D)))
    return worst


def _radon_intertwining(f: MonogenicSeries, samples, h, **quad_kw):
    n = f.n
    worst = 0.0
    # x_j f is integrable on hyperplanes only when J + k >= 1
    decaying = MonogenicSeries(n, LAURENT, {jk: P for jk, P in f.terms.items() if sum(jk) >= 1}, f.pi_pow)
    for x0, p, w in samples:
        w = np.asarray(w, dtype=float)
        d0 = _deriv(lambda t: radon_numeric(f, x0 + t, p, w, n, **quad_kw), h)
        dp = _deriv(lambda t: radon_numeric(f, x0, p + t, w, n, **quad_kw), h)
        cr = 0.5 * (d0 + batch_product(vectors_to_array(w, n), dp, n))
        worst = max(worst, float(np.linalg.norm(cr)))
        for i in range(n if decaying.terms else 0):
            def xf(pts, i=i):
                return pts[:, i + 1 : i + 2] * monogenic_eval_batch(decaying, pts)

            e = np.eye(n)[i]
            lhs = _deriv(lambda t: radon_numeric_xi(xf, x0, p + t, w, n, **quad_kw), h)
            rhs = -_deriv(lambda t: radon_numeric_xi(decaying, x0, p, w + t * e, n, **quad_kw), h)
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst
