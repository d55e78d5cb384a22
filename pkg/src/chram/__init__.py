"""Exact symbolic engine for free nilpotent Lie algebras of class < p over
finite fields: Hall/PBW bases, the truncated Campbell-Hausdorff group law,
canonical splitting operators for twisted recurrences, ramification-ideal
generators, lift solvers, and an arithmeticality criterion."""

from .gf import FieldCtx
from .freelie import LieAlgebra, RowSpace, IdealBasis, minimal_sigma_ideal, witt_dimension
from .series import SeriesCtx, AutSpec
from .config import RunConfig

__all__ = [
    "FieldCtx", "LieAlgebra", "RowSpace", "IdealBasis", "minimal_sigma_ideal",
    "witt_dimension", "SeriesCtx", "AutSpec", "RunConfig",
]
