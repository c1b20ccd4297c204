"""Verification suites shared by ``cliffrad verify`` and the test-suite.

Each check returns a deviation; it passes when the deviation is within its
tolerance.  Exact identities report 0.0 on equality and the float size of the
discrepancy otherwise (never below the smallest positive double).
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .exactnum import (
    A_const,
    B_const,
    c_const,
    constant_growth_witness,
    d_const,
    gamma_ratio,
    gegenbauer,
    gegenbauer_at_one,
    verify_gamma_ratio_bounds,
)
from .polyspace import (
    MvPolynomial,
    ck_extend,
    dirac_apply,
    embedding_bound_base,
    embedding_factor,
    monogenic_basis,
    monogenic_dimension,
    xvec_power,
)
from .quadrature import build_sphere_quadrature, hyperplane_integrate
from .series import (
    LAURENT,
    TAYLOR,
    MonogenicSeries,
    SliceSeries,
    assemble,
    invert_I2,
    invert_In1,
    membership,
    random_monogenic_series,
    random_slice_series,
    reconstruct_slice_series,
    slice_eval,
    slice_eval_batch,
    slice_monogenic_check,
)
from .transforms import (
    dual_radon_inverse,
    dual_radon_moment,
    dual_radon_numeric,
    dual_radon_symbolic,
    dual_term_report,
    intertwining_check,
    radon_inverse,
    radon_symbolic,
    radon_term_report,
    slice_phi,
    split_S_infinity,
    theoremA_decompose,
)

SUITES = ("constants", "dual-radon", "radon", "roundtrip", "monogenicity", "intertwine")


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail"
    max_deviation: float
    tolerance: float
    wall_time: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _exact_dev(a, b) -> float:
    if a == b:
        return 0.0
    try:
        return max(abs(float(a - b)), 5e-324)
    except (TypeError, ValueError):
        return math.inf


def run_check(name: str, fn, tolerance: float) -> CheckResult:
    t0 = time.perf_counter()
    try:
        out = fn()
        dev, detail = out if isinstance(out, tuple) else (out, "")
        dev = float(dev)
        status = "pass" if dev <= tolerance else "fail"
    except Exception as exc:  # a crashing check is a failing check
        dev, detail, status = math.inf, f"{type(exc).__name__}: {exc}", "fail"
    return CheckResult(name, status, dev, tolerance, time.perf_counter() - t0, detail)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("CLIFFRAD_THREADS", "1")))
    except ValueError:
        return 1


# -- constants ---------------------------------------------------------------

def check_constant_identities(ns=(2, 3, 4, 5), total: int = 12):
    """B and A recurrences and zero loci over alpha + k <= total."""
    dev, bad = 0.0, []
    for n in ns:
        for k in range(0, total + 1):
            for alpha in range(-k, total - k + 1):
                B = B_const(alpha, k, n)
                if k >= 1:
                    d = _exact_dev(B, B_const(alpha + 2, k - 1, n) * Fraction(alpha + 2, alpha + k + 1))
                    if d:
                        bad.append(f"B rec n={n} a={alpha} k={k}")
                    dev = max(dev, d)
                if B.is_zero() != (alpha < 0 and alpha % 2 == 0):
                    bad.append(f"B zero n={n} a={alpha} k={k}")
                    dev = math.inf
            for alpha in range(k + 1, total - k + 1):
                A = A_const(alpha, k, n)
                if k >= 1:
                    d = _exact_dev(A, A_const(alpha, k - 1, n) * Fraction(alpha - 2 * k + 1, alpha - k))
                    if d:
                        bad.append(f"A rec n={n} a={alpha} k={k}")
                    dev = max(dev, d)
                if A.is_zero() != (alpha % 2 == 1 and alpha <= 2 * k - 1):
                    bad.append(f"A zero n={n} a={alpha} k={k}")
                    dev = math.inf
    return dev, "; ".join(bad[:5])


def check_constants_nonzero(n: int, grid: int = 12):
    zeros = [(k, j) for k in range(grid + 1) for j in range(grid + 1) if c_const(k, j, n).is_zero() or d_const(k, j, n).is_zero()]
    return (0.0 if not zeros else math.inf), f"zero at {zeros[:5]}" if zeros else ""


def check_gegenbauer_at_one(max_degree: int = 12):
    dev = 0.0
    for twice_nu in range(1, 12):
        nu = Fraction(twice_nu, 2)
        for j in range(max_degree + 1):
            dev = max(dev, _exact_dev(gegenbauer(nu, j)(1), gegenbauer_at_one(nu, j)))
    return dev


def check_gamma_ratio_grid(grid_max: int = 12):
    """Witness constants exist on the grid, and m = 0 reduces to binomial bounds."""
    rep = verify_gamma_ratio_bounds(grid_max)
    dev = 0.0 if rep["holds"] else math.inf
    for j in range(grid_max + 1):
        for k in range(grid_max + 1):
            r = gamma_ratio(j, k, 0)
            dev = max(dev, abs(r - math.comb(j + k, j)) / math.comb(j + k, j))
            if not 1 <= round(r) <= 2 ** (j + k):
                dev = math.inf
    return dev, f"C1={rep['C1']:.3g} C2={rep['C2']:.3g}"


def check_constant_growth(n: int, grid_max: int = 12):
    c = constant_growth_witness("c", n, grid_max)
    d = constant_growth_witness("d", n, grid_max)
    ok = c["holds"] and d["holds"]
    return (0.0 if ok else math.inf), f"c: C1={c['C1']:.3g} C2={c['C2']:.3g}; d: C1={d['C1']:.3g} C2={d['C2']:.3g}"


def check_embedding_bound(ns=(2, 3, 4), j_max: int = 8, k_max: int = 3, samples: int = 200, seed: int = 0):
    """|X^(j)_k(x)| <= b^(j+k) |x|^j on random points; returns the max of lhs/rhs - 1 clipped at 0."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in ns:
        b = embedding_bound_base(j_max, k_max, n)
        pts = rng.standard_normal((samples, n + 1))
        r = np.linalg.norm(pts, axis=1)
        for j in range(j_max + 1):
            for k in range(k_max + 1):
                vals = np.linalg.norm(embedding_factor(j, k, n).evaluate_batch(pts), axis=1)
                worst = max(worst, float(np.max(vals / (b ** (j + k) * r**j))))
    return max(worst - 1.0, 0.0), f"max ratio {worst:.4g}"


# -- polynomial spaces -------------------------------------------------------

def check_ck_identity(ns=(2, 3, 4), j_max: int = 6, k_max: int = 3):
    dev = 0.0
    for n in ns:
        for k in range(k_max + 1):
            basis = monogenic_basis(k, n)
            if len(basis) != monogenic_dimension(k, n):
                return math.inf, f"basis size n={n} k={k}"
            for j in range(j_max + 1):
                X = embedding_factor(j, k, n)
                xj = xvec_power(n, j)
                for P in basis:
                    dev = max(dev, _exact_dev(ck_extend(xj * P), X * P.lift()))
    return dev


def check_basis_monogenic(ns=(2, 3, 4), k_max: int = 4):
    bad = [(n, k) for n in ns for k in range(k_max + 1) for P in monogenic_basis(k, n) if not dirac_apply(P).is_zero()]
    return (0.0 if not bad else math.inf), f"{bad[:5]}" if bad else ""


def check_assembled_monogenic(n: int, count: int = 10, j_max: int = 5, k_max: int = 3, seed: int = 0):
    rng = np.random.default_rng(seed)
    bad = 0
    for part in (TAYLOR, LAURENT):
        for _ in range(count):
            f = random_monogenic_series(n, rng, part, j_max, k_max)
            if not dirac_apply(assemble(f)).is_zero():
                bad += 1
    return float(bad), f"{bad} series not annihilated" if bad else ""


def check_slice_monogenic(n: int, count: int = 10, seed: int = 0, h: float = 1e-5):
    """Finite-difference slice residual on random series, relative to max(1, |f|) per sample.

    Rounding in the difference quotient grows like eps |f| / h, so the
    residual is scaled by the local size of f.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        f = random_slice_series(n, rng, -4, 6, 3)
        for _ in range(5):
            # annulus 0.8 <= |x0 + i p| <= 1.2 keeps negative powers well conditioned
            w = rng.standard_normal(n)
            w /= np.linalg.norm(w)
            r, t = rng.uniform(0.8, 1.2), rng.uniform(0, 2 * np.pi)
            x0, p = r * np.cos(t), r * np.sin(t)
            size = float(np.linalg.norm(slice_eval_batch(f, x0, np.array([p]), w[None, :])))
            worst = max(worst, slice_monogenic_check(f, [(x0, p, w)], h) / max(1.0, size))
    return worst


def check_slice_fd_order(n: int, seed: int = 0):
    """Residual ratio under step halving; returns |log2(ratio) - 2|."""
    rng = np.random.default_rng(seed)
    P = monogenic_basis(1, n)[0]
    f = SliceSeries(n, {(3, 1): P, (-2, 0): MvPolynomial.constant(n, 1)})
    w = rng.standard_normal(n)
    samples = [(0.7, 0.4, w / np.linalg.norm(w))]
    r1 = slice_monogenic_check(f, samples, 1e-2)
    r2 = slice_monogenic_check(f, samples, 5e-3)
    order = math.log2(r1 / r2)
    return abs(order - 2.0), f"observed order {order:.3f}"


def check_non_slice_flagged(n: int):
    # f = x0 is not slice monogenic: residual 1/2
    fn = lambda x0, p, w: np.column_stack([np.asarray(x0, float), np.zeros((len(w), (1 << n) - 1))])  # noqa: E731
    w = np.eye(n)[0]
    return abs(slice_monogenic_check(fn, [(0.3, 0.2, w)]) - 0.5)


# -- dual Radon --------------------------------------------------------------

def check_dual_moment(n: int, j_max: int = 8, k_max: int = 3):
    """Symbolic S against exact sphere-moment evaluation at a rational point."""
    x0 = Fraction(1, 3)
    xv = [Fraction(1, 2), Fraction(-2, 3), Fraction(1, 5), Fraction(3, 7), Fraction(-1, 4)][:n]
    dev = 0.0
    for k in range(k_max + 1):
        for P in monogenic_basis(k, n):
            for j in range(j_max + 1):
                f = SliceSeries(n, {(j, k): P})
                lhs = dual_radon_moment(f, x0, xv)
                g = dual_radon_symbolic(f)
                rhs = assemble(g).evaluate([x0] + xv) if not g.is_zero() else lhs * 0
                dev = max(dev, _exact_dev(lhs, rhs))
    return dev


def check_dual_float(n: int, j_max: int = 8, k_max: int = 3, points: int = 10, seed: int = 0, pool=None):
    """Relative deviation of quadrature against symbolic S over j >= k basis terms."""
    rng = np.random.default_rng(seed)
    quad = build_sphere_quadrature(n, j_max + 2 * k_max + 2)
    xs = rng.standard_normal((points, n))
    jobs = [(j, k, P) for k in range(k_max + 1) for P in monogenic_basis(k, n) for j in range(k, j_max + 1)]
    run = lambda job: dual_term_report(*job, xs, quad).max_rel_deviation  # noqa: E731
    devs = list(pool.map(run, jobs)) if pool else [run(job) for job in jobs]
    return max(devs, default=0.0)


def check_dual_kernel(n: int, k_max: int = 3, points: int = 10, seed: int = 0):
    rng = np.random.default_rng(seed)
    quad = build_sphere_quadrature(n, 3 * k_max + 2)
    worst = 0.0
    for k in range(k_max + 1):
        for P in monogenic_basis(k, n):
            for j in range(k):
                f = SliceSeries(n, {(j, k): P})
                for x in rng.standard_normal((points, n)):
                    val = dual_radon_numeric(slice_phi(f, 1 / 3), x, quad)
                    worst = max(worst, float(np.linalg.norm(val)))
                if not dual_radon_symbolic(f).is_zero():
                    return math.inf, f"kernel term {(j, k)} has nonzero symbolic image"
    return worst


# -- Radon -------------------------------------------------------------------

def radon_samples(n: int, rng, count: int = 5):
    out = []
    for _ in range(count):
        w = rng.standard_normal(n)
        out.append((float(rng.uniform(-1.0, 1.0)), float(rng.uniform(0.3, 1.5)) * rng.choice([-1, 1]), w / np.linalg.norm(w)))
    return out


def check_radon_terms(n: int, total: int = 5, samples: int = 5, seed: int = 0, pool=None):
    """Relative deviation of hyperplane quadrature against d_const images for J + k <= total."""
    rng = np.random.default_rng(seed)
    jobs = []
    for J in range(total + 1):
        for k in range(total + 1 - J):
            basis = monogenic_basis(k, n)
            P = basis[int(rng.integers(len(basis)))]
            jobs.append((J, k, P, radon_samples(n, rng, samples)))
    run = lambda job: radon_term_report(*job).max_rel_deviation  # noqa: E731
    devs = list(pool.map(run, jobs)) if pool else [run(job) for job in jobs]
    return max(devs, default=0.0)


def check_radon_closed_form():
    """n = 2: int_R (x0 - p e1 - t e2)/(x0^2+p^2+t^2)^(3/2) dt = 2 (x0 + e1 p)^-1, e.g. 1 - e1 at (1, 1)."""
    worst = 0.0
    for x0, p in [(1.0, 1.0), (0.5, -2.0), (2.0, 0.25)]:
        def f(xs):
            r3 = (x0**2 + np.sum(xs**2, axis=1)) ** 1.5
            out = np.zeros((len(xs), 4))
            out[:, 0], out[:, 1], out[:, 2] = x0 / r3, -xs[:, 0] / r3, -xs[:, 1] / r3
            return out

        num, _ = hyperplane_integrate(f, np.array([1.0, 0.0]), p, 2)
        s = x0**2 + p**2
        exact = np.array([2 * x0 / s, -2 * p / s, 0.0, 0.0])
        worst = max(worst, float(np.max(np.abs(num - exact))))
    closed = radon_symbolic(MonogenicSeries(2, LAURENT, {(0, 0): MvPolynomial.constant(2, 1)}))
    if closed.terms[(-1, 0)] != MvPolynomial.constant(2, 2) or closed.pi_pow != 0:
        return math.inf, "symbolic image of the n=2 kernel is not 2 (x0 + w p)^-1"
    return worst


# -- decompositions and isomorphisms -----------------------------------------

def check_s0_decomposition(n: int, count: int = 100, j_max: int = 8, k_max: int = 3, seed: int = 0):
    rng = np.random.default_rng(seed)
    quad = build_sphere_quadrature(n, j_max + 2 * k_max + 2)
    numeric = 0.0
    for i in range(count):
        f = random_slice_series(n, rng, 0, j_max, k_max, n_terms=int(rng.integers(1, 6)))
        ker, sm = theoremA_decompose(f)
        if ker.support() & sm.support():
            return math.inf, f"series {i}: overlapping supports"
        if ker + sm != f:
            return math.inf, f"series {i}: parts do not sum to input"
        if not membership(ker).in_kerS or not membership(sm).in_SM0:
            return math.inf, f"series {i}: membership flags"
        if not dual_radon_symbolic(ker).is_zero():
            return math.inf, f"series {i}: kernel part has a nonzero image"
        if dual_radon_inverse(dual_radon_symbolic(sm)) != sm:
            return math.inf, f"series {i}: inverse does not recover the SM0 part"
        g = dual_radon_symbolic(sm)
        if dual_radon_symbolic(dual_radon_inverse(g)) != g:
            return math.inf, f"series {i}: S after S^-1 is not the identity"
        if ker.terms:
            x = rng.standard_normal(n)
            numeric = max(numeric, float(np.linalg.norm(dual_radon_numeric(slice_phi(ker, 0.5), x, quad))))
    return numeric, f"kernel numeric max {numeric:.3g}"


def check_radon_isomorphism(n: int, count: int = 100, j_max: int = 6, k_max: int = 3, seed: int = 0):
    rng = np.random.default_rng(seed)
    for i in range(count):
        f = random_monogenic_series(n, rng, LAURENT, j_max, k_max, n_terms=int(rng.integers(1, 6)))
        g = radon_symbolic(f)
        if not membership(g).in_SMinf:
            return math.inf, f"series {i}: image outside j < -k"
        if g.is_zero():
            return math.inf, f"series {i}: nonzero input with zero image"
        if radon_inverse(g) != f:
            return math.inf, f"series {i}: inverse does not recover the input"
        if radon_symbolic(radon_inverse(g)) != g:
            return math.inf, f"series {i}: R after R^-1 is not the identity"
        h = random_slice_series(n, rng, -(j_max + k_max + 2), -1, k_max, n_terms=int(rng.integers(1, 6)))
        i2ker, sminf = split_S_infinity(h)
        if i2ker.support() & sminf.support() or i2ker + sminf != h:
            return math.inf, f"series {i}: S_inf split not a disjoint cover"
        if not membership(i2ker).in_I2kerS or not membership(sminf).in_SMinf:
            return math.inf, f"series {i}: S_inf split membership"
        if not membership(invert_I2(i2ker)).in_kerS:
            return math.inf, f"series {i}: I2 of the first part is not in ker S"
    return 0.0


def check_reconstruction(n: int, count: int = 2, j_abs: int = 6, k_max: int = 4, seed: int = 0):
    """Exact coefficient recovery of random slice series through the Cauchy-integral pipeline."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        f = random_slice_series(n, rng, -j_abs, j_abs, k_max, n_terms=6)
        g = reconstruct_slice_series(lambda x0, p, w, f=f: slice_eval(f, x0, p, w), n, range(-j_abs, j_abs + 1))
        if g != f:
            return math.inf, f"series {i}: reconstruction differs on {sorted(f.support() ^ g.support())}"
    return 0.0


# -- roundtrips and intertwining ---------------------------------------------

def check_roundtrips(n: int, max_degree: int = 6, count: int = 10, seed: int = 0):
    rng = np.random.default_rng(seed)
    for i in range(count):
        t = random_monogenic_series(n, rng, TAYLOR, max_degree, min(max_degree, 3))
        if dual_radon_symbolic(dual_radon_inverse(t)) != t:
            return math.inf, f"S S^-1 failed on Taylor series {i}"
        l = random_monogenic_series(n, rng, LAURENT, max_degree, min(max_degree, 3))
        if radon_inverse(radon_symbolic(l)) != l or radon_symbolic(radon_inverse(radon_symbolic(l))) != radon_symbolic(l):
            return math.inf, f"R R^-1 failed on Laurent series {i}"
        if invert_In1(invert_In1(t)) != t:
            return math.inf, f"I_(n+1) is not an involution on series {i}"
        s = random_slice_series(n, rng, -max_degree, max_degree, min(max_degree, 3))
        if invert_I2(invert_I2(s)) != s:
            return math.inf, f"I_2 is not an involution on series {i}"
    return 0.0


def check_dual_intertwining(n: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    f = random_slice_series(n, rng, 0, 5, 2, n_terms=3)
    samples = [(rng.uniform(-1, 1), rng.standard_normal(n)) for _ in range(3)]
    return intertwining_check(f, "dual", samples)


def check_radon_intertwining(n: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    f = MonogenicSeries(n, LAURENT, {(0, 0): MvPolynomial.constant(n, 1), (1, 1): monogenic_basis(1, n)[0]})
    return intertwining_check(f, "radon", radon_samples(n, rng, 2))


# -- suites ------------------------------------------------------------------

def suite_checks(suite: str, n: int, max_degree: int, seed: int, pool=None):
    """(name, callable, tolerance) triples for one suite."""
    k_max = min(3, max_degree)
    radon_ok = n in (2, 3)
    table = {
        "constants": [
            ("constants.recurrences_zero_loci", lambda: check_constant_identities((n,), max(max_degree, 1)), 0.0),
            ("constants.c_d_nonzero", lambda: check_constants_nonzero(n, max_degree), 0.0),
            ("constants.gegenbauer_at_one", lambda: check_gegenbauer_at_one(max_degree), 0.0),
            ("constants.gamma_ratio_grid", lambda: check_gamma_ratio_grid(max(max_degree, 1)), 1e-12),
            ("constants.c_d_growth", lambda: check_constant_growth(n, max_degree), 0.0),
        ],
        "dual-radon": [
            ("dual-radon.moment_exact", lambda: check_dual_moment(n, max_degree, k_max), 0.0),
            ("dual-radon.float_quadrature", lambda: check_dual_float(n, max_degree, k_max, seed=seed, pool=pool), 1e-10),
            ("dual-radon.kernel", lambda: check_dual_kernel(n, k_max, seed=seed), 1e-12),
            ("dual-radon.s0_decomposition", lambda: check_s0_decomposition(n, 20, max_degree, k_max, seed), 1e-12),
        ],
        "radon": [
            ("radon.isomorphism", lambda: check_radon_isomorphism(n, 20, max_degree, k_max, seed), 0.0),
        ]
        + (
            [
                ("radon.hyperplane_terms", lambda: check_radon_terms(n, min(max_degree, 5), 5, seed, pool), 1e-6),
                ("radon.closed_form_n2", check_radon_closed_form, 1e-12),
            ]
            if radon_ok
            else []
        ),
        "roundtrip": [
            ("roundtrip.inverses", lambda: check_roundtrips(n, max_degree, 10, seed), 0.0),
            ("roundtrip.reconstruction", lambda: check_reconstruction(n, 1, min(max_degree, 6), min(max_degree, 4), seed), 0.0),
        ],
        "monogenicity": [
            ("monogenicity.basis", lambda: check_basis_monogenic((n,), min(max_degree, 5)), 0.0),
            ("monogenicity.ck_identity", lambda: check_ck_identity((n,), max_degree, k_max), 0.0),
            ("monogenicity.assembled_series", lambda: check_assembled_monogenic(n, 5, max_degree, k_max, seed), 0.0),
            ("monogenicity.slice_residual", lambda: check_slice_monogenic(n, 5, seed), 1e-8),
            ("monogenicity.slice_fd_order", lambda: check_slice_fd_order(n, seed), 0.1),
            ("monogenicity.embedding_bound", lambda: check_embedding_bound((n,), max_degree, k_max, seed=seed), 0.0),
        ],
        "intertwine": [("intertwine.dual", lambda: check_dual_intertwining(n, seed), 1e-7)]
        + ([("intertwine.radon", lambda: check_radon_intertwining(n, seed), 1e-6)] if radon_ok else []),
    }
    if suite == "all":
        return [c for s in SUITES for c in table[s]]
    if suite not in table:
        raise ValueError(f"unknown suite {suite!r}")
    return table[suite]


def _finite(d: dict) -> dict:
    # JSON has no infinity; a crashed or unbounded check reports null
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in d.items()}


def run_suite(suite: str, n: int, max_degree: int, seed: int = 0, threads: int | None = None) -> dict:
    threads = threads or thread_count()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        inner = pool if threads > 1 else None
        checks = suite_checks(suite, n, max_degree, seed, inner)
        # outer checks run sequentially when the pool is shared with inner fan-out
        results = [run_check(name, fn, tol) for name, fn, tol in checks]
    results.sort(key=lambda r: r.name)
    return {
        "suite": suite,
        "n": n,
        "max_degree": max_degree,
        "seed": seed,
        "threads": threads,
        "passed": all(r.passed for r in results),
        "checks": [_finite(asdict(r)) for r in results],
    }
