"""Certified numerical verification of theta-Bessel summation identities."""

from __future__ import annotations

from .arith import (
    DirichletCharacter,
    Divisor,
    RamanujanTau,
    SumOfSquares,
    bernoulli,
    gauss_sum,
    legendre,
    r_k,
    riemann_zeta,
    sigma,
    tau,
    zeta_like,
)
from .errors import (
    DomainError,
    DomainNotCovered,
    FailedToFindTau0,
    HorizonOverflow,
    InvalidSpec,
    NoConvergence,
    PoleAt,
    RangeExceeded,
    TolUnreachable,
    VerificationError,
)
from .identities import CATALOG, EvaluationReport, IdentityCase
from .series import BesselSeriesSpec, IndexMap, Kernel, Oscillator, ValueWithBound, eval_series
from .specfun import SpecialValue, bessel_i, bessel_j, bessel_k, gamma, hyp1f1, hyp2f1, humbert_phi3

__version__ = "0.1.0"

__all__ = [
    "BesselSeriesSpec",
    "CATALOG",
    "DirichletCharacter",
    "Divisor",
    "DomainError",
    "DomainNotCovered",
    "EvaluationReport",
    "FailedToFindTau0",
    "HorizonOverflow",
    "IdentityCase",
    "IndexMap",
    "InvalidSpec",
    "Kernel",
    "NoConvergence",
    "Oscillator",
    "PoleAt",
    "RamanujanTau",
    "RangeExceeded",
    "SpecialValue",
    "SumOfSquares",
    "TolUnreachable",
    "ValueWithBound",
    "VerificationError",
    "bernoulli",
    "bessel_i",
    "bessel_j",
    "bessel_k",
    "eval_series",
    "gamma",
    "gauss_sum",
    "humbert_phi3",
    "hyp1f1",
    "hyp2f1",
    "legendre",
    "r_k",
    "riemann_zeta",
    "sigma",
    "tau",
    "zeta_like",
]
