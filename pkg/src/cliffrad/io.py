"""JSON series files.

Layout::

    {"n": 2, "kind": "slice" | "taylor" | "laurent", "pi_power": 0,
     "terms": [{"j": 0, "k": 1, "poly": {"1,0": {"2": "1/2"}}}]}

Monomial keys are comma-joined exponents of x_1..x_n, blade keys are the
bitmask in decimal, coefficients are exact rational strings.  ``pi_power``
is optional (default 0) and scales the whole series by pi**(pi_power/2).
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .clifford import MAX_DIM
from .polyspace import MvPolynomial
from .series import LAURENT, TAYLOR, MonogenicSeries, SeriesError, SliceSeries

KINDS = ("slice", TAYLOR, LAURENT)


class SeriesFileError(ValueError):
    """Malformed document or wrong kind."""


class SeriesValidationError(ValueError):
    """Well-formed document whose polynomials are not k-homogeneous monogenic."""


def _fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def poly_to_json(P: MvPolynomial) -> dict:
    out = {}
    for mono, coeffs in P.terms.items():
        out[",".join(str(e) for e in mono)] = {str(b): _fraction_str(Fraction(c)) for b, c in coeffs.items()}
    return out


def poly_from_json(n: int, data: dict) -> MvPolynomial:
    if not isinstance(data, dict):
        raise SeriesFileError("poly must be an object")
    terms = {}
    for key, coeffs in data.items():
        try:
            mono = tuple(int(e) for e in key.split(","))
        except ValueError as exc:
            raise SeriesFileError(f"bad monomial key {key!r}") from exc
        if len(mono) != n or any(e < 0 for e in mono):
            raise SeriesFileError(f"monomial {key!r} does not have {n} non-negative exponents")
        if not isinstance(coeffs, dict):
            raise SeriesFileError(f"coefficients of {key!r} must be an object")
        row = {}
        for b, v in coeffs.items():
            try:
                blade = int(b)
            except ValueError as exc:
                raise SeriesFileError(f"bad blade key {b!r}") from exc
            if not 0 <= blade < (1 << n):
                raise SeriesFileError(f"blade {blade} out of range for n={n}")
            if not isinstance(v, str):
                raise SeriesFileError("coefficients must be rational strings, not numbers")
            try:
                row[blade] = Fraction(v)
            except (ValueError, ZeroDivisionError) as exc:
                raise SeriesFileError(f"bad rational {v!r}") from exc
        terms[mono] = row
    return MvPolynomial(n, terms)


def series_to_json(series, kind: str | None = None) -> dict:
    if isinstance(series, SliceSeries):
        kind = "slice"
    elif isinstance(series, MonogenicSeries):
        kind = series.part
    else:
        raise TypeError("expected a SliceSeries or MonogenicSeries")
    doc = {
        "n": series.n,
        "kind": kind,
        "terms": [{"j": j, "k": k, "poly": poly_to_json(P)} for (j, k), P in sorted(series.terms.items())],
    }
    if series.pi_pow:
        doc["pi_power"] = series.pi_pow
    return doc


def dumps(series) -> str:
    return json.dumps(series_to_json(series), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def series_from_json(doc: dict, validate: bool = True):
    if not isinstance(doc, dict):
        raise SeriesFileError("document must be a JSON object")
    n, kind = doc.get("n"), doc.get("kind")
    if not isinstance(n, int) or not 1 <= n <= MAX_DIM:
        raise SeriesFileError(f"n must be an integer in 1..{MAX_DIM}")
    if kind not in KINDS:
        raise SeriesFileError(f"kind must be one of {KINDS}")
    pi_pow = doc.get("pi_power", 0)
    if not isinstance(pi_pow, int):
        raise SeriesFileError("pi_power must be an integer")
    raw = doc.get("terms", [])
    if not isinstance(raw, list):
        raise SeriesFileError("terms must be a list")
    terms = {}
    for t in raw:
        if not isinstance(t, dict) or not isinstance(t.get("j"), int) or not isinstance(t.get("k"), int):
            raise SeriesFileError("each term needs integer j and k")
        key = (t["j"], t["k"])
        if key in terms:
            raise SeriesFileError(f"duplicate term {key}")
        terms[key] = poly_from_json(n, t.get("poly", {}))
    try:
        if kind == "slice":
            series = SliceSeries(n, terms, pi_pow)
        else:
            series = MonogenicSeries(n, kind, terms, pi_pow)
        if validate:
            series.validate()
    except SeriesError as exc:
        raise SeriesValidationError(str(exc)) from exc
    return series


def loads(text: str, validate: bool = True):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SeriesFileError(f"invalid JSON: {exc}") from exc
    return series_from_json(doc, validate)


def load(path, validate: bool = True):
    return loads(Path(path).read_text(encoding="utf-8"), validate)


def save(series, path) -> None:
    Path(path).write_text(dumps(series), encoding="utf-8")
