"""Bethe roots, fused transfer matrices, master tau-functions and the
Ruijsenaars-Schneider dynamics of their zeros, at exact-diagonalization
desk scale."""

from .spinchain import ChainSpec
from .symfun import MiwaPoint, Partition, TimesVector, partition, schur, shift_times

__all__ = [
    "ChainSpec",
    "MiwaPoint",
    "Partition",
    "TimesVector",
    "partition",
    "schur",
    "shift_times",
]

__version__ = "0.1.0"
