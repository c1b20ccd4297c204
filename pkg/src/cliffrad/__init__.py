"""Radon and dual Radon transforms between monogenic and slice monogenic series in R_n."""

from .clifford import Multivector
from .exactnum import A_const, B_const, ExactScalar, c_const, d_const
from .polyspace import MvPolynomial, ck_extend, embedding_factor, fischer_decompose, monogenic_basis
from .series import LAURENT, TAYLOR, MonogenicSeries, SliceSeries, monogenic_eval, slice_eval
from .transforms import (
    dual_radon_inverse,
    dual_radon_symbolic,
    radon_inverse,
    radon_symbolic,
    split_S_infinity,
    theoremA_decompose,
)

__version__ = "0.1.0"

__all__ = [
    "A_const",
    "B_const",
    "ExactScalar",
    "LAURENT",
    "MonogenicSeries",
    "Multivector",
    "MvPolynomial",
    "SliceSeries",
    "TAYLOR",
    "c_const",
    "ck_extend",
    "d_const",
    "dual_radon_inverse",
    "dual_radon_symbolic",
    "embedding_factor",
    "fischer_decompose",
    "monogenic_basis",
    "monogenic_eval",
    "radon_inverse",
    "radon_symbolic",
    "slice_eval",
    "split_S_infinity",
    "theoremA_decompose",
]
