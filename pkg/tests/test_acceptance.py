"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly:
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import pytest

from cliffrad import verify as V


def _both(fn):
    return [(f"n={n}", functools.partial(fn, n)) for n in (2, 3)]


def _criteria(pool):
    # number -> (title, [(label, callable, tolerance)], runtime limit in seconds or None)
    return {
        1: ("constant recurrences and zero loci, n=2..5, alpha+k<=12",
            [("identities", lambda: V.check_constant_identities((2, 3, 4, 5), 12), 0.0)], 1.0),
        2: ("CK identity j<=6, k<=3, n=2..4 over a spanning basis",
            [("ck", lambda: V.check_ck_identity((2, 3, 4), 6, 3), 0.0)], 30.0),
        3: ("dual transform: exact moments, float rel 1e-10, kernel 1e-12",
            [(f"moment n={n}", functools.partial(V.check_dual_moment, n, 8, 3), 0.0) for n in (2, 3)]
            + [(f"float n={n}", functools.partial(V.check_dual_float, n, 8, 3, 10, 0, pool), 1e-10) for n in (2, 3)]
            + [(f"kernel n={n}", functools.partial(V.check_dual_kernel, n, 3, 10), 1e-12) for n in (2, 3)], 60.0),
        4: ("Radon constants vs hyperplane quadrature rel 1e-6, closed form 1e-12",
            [(f"terms n={n}", functools.partial(V.check_radon_terms, n, 5, 5, 0, pool), 1e-6) for n in (2, 3)]
            + [("closed form n=2", V.check_radon_closed_form, 1e-12)], 120.0),
        5: ("S_0 decomposition on 100 random series per n",
            [(f"n={n}", functools.partial(V.check_s0_decomposition, n, 100, 8, 3), 1e-12) for n in (2, 3)], None),
        6: ("Radon isomorphism and S_inf split on 100 random series per n",
            [(f"n={n}", functools.partial(V.check_radon_isomorphism, n, 100, 6, 3), 0.0) for n in (2, 3)], None),
        7: ("exact coefficient recovery |j|<=6, k<=4",
            [(f"n={n}", functools.partial(V.check_reconstruction, n, 2, 6, 4), 0.0) for n in (2, 3)], None),
        8: ("exact D-annihilation, slice residual <= 1e-8, second-order convergence",
            [(f"assembled n={n}", functools.partial(V.check_assembled_monogenic, n, 10, 6, 3), 0.0) for n in (2, 3)]
            + [(f"residual n={n}", functools.partial(V.check_slice_monogenic, n, 10), 1e-8) for n in (2, 3)]
            + [(f"order n={n}", functools.partial(V.check_slice_fd_order, n), 0.1) for n in (2, 3)], None),
        9: ("growth bounds on the 12-grid and embedding-factor bound",
            [("gamma ratio", lambda: V.check_gamma_ratio_grid(12), 1e-12)]
            + [(f"c/d growth n={n}", functools.partial(V.check_constant_growth, n, 12), 0.0) for n in (2, 3, 4)]
            + [("embedding bound", lambda: V.check_embedding_bound((2, 3, 4), 8, 3), 0.0)], None),
    }


@functools.cache
def results() -> dict:
    threads = V.thread_count()
    out = {}
    with ThreadPoolExecutor(max_workers=threads) as ex:
        pool = ex if threads > 1 else None
        for num, (title, checks, limit) in _criteria(pool).items():
            t0 = time.perf_counter()
            rs = [V.run_check(label, fn, tol) for label, fn, tol in checks]
            elapsed = time.perf_counter() - t0
            ok = all(r.passed for r in rs) and (limit is None or elapsed < limit)
            worst = max(rs, key=lambda r: r.max_deviation / r.tolerance if r.tolerance else (r.max_deviation > 0) * r.max_deviation)
            parts = [f"worst {worst.name}: dev={worst.max_deviation:.3g} tol={worst.tolerance:.3g}"]
            parts.append(f"{elapsed:.2f}s" + (f" (limit {limit:g}s)" if limit else ""))
            failed = [f"{r.name} {r.detail}".strip() for r in rs if not r.passed]
            if failed:
                parts.append("failed: " + "; ".join(failed))
            out[num] = (ok, f"criterion {num} {'PASS' if ok else 'FAIL'} - {title} - " + ", ".join(parts))
    return out


def report_lines() -> list[str]:
    return [line for _, line in results().values()]


@pytest.mark.parametrize("num", range(1, 10))
def test_criterion(num):
    ok, line = results()[num]
    print(line)
    assert ok, line


if __name__ == "__main__":
    for line in report_lines():
        print(line)
    sys.exit(0 if all(ok for ok, _ in results().values()) else 1)
