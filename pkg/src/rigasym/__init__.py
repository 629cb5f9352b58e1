"""Rigorous asymptotic expansions with explicit error constants.

Submodules: :mod:`~rigasym.expansion` (B-term calculus), :mod:`~rigasym.taylor`
(kernels with Lagrange remainders), :mod:`~rigasym.interval`,
:mod:`~rigasym.special` and :mod:`~rigasym.quadrature` (certified numerics),
:mod:`~rigasym.mellin` and :mod:`~rigasym.case_study`.
"""

from .expansion import AsymptoticRing, BTerm, Expansion, KPolynomial
from .interval import ComplexInterval, Interval
from .taylor import taylor_with_explicit_error

__version__ = "0.1.0"

__all__ = [
    "AsymptoticRing",
    "BTerm",
    "Expansion",
    "KPolynomial",
    "Interval",
    "ComplexInterval",
    "taylor_with_explicit_error",
]
