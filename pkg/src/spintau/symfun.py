"""Partitions, Schur functions in power-sum times, Miwa variables.

Times convention
----------------
A TimesVector carries the distinguished slot t_0 plus a sparse tail
{t_k, k >= 1}.  The complete-homogeneous generating series is

    exp( sum_{k>=1} t_k z^k ) = sum_{k>=0} h_k(t) z^k,

and Schur functions are Jacobi-Trudi determinants of the h_k.  t_0
never enters the h_k: it only moves under explicit shifts t + [z],
where it acts as a discrete lattice slot (downstream it is realized as
the spectral parameter).  A Miwa configuration {(z, u_z)} maps to times
by t_k = (1/k) sum_z u_z z^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

Partition = tuple[int, ...]


def partition(parts: Iterable[int]) -> Partition:
    """Normalize to a weakly decreasing tuple with trailing zeros trimmed."""
    p = tuple(int(x) for x in parts)
    if any(x < 0 for x in p):
        raise ValueError(f"negative part in {p}")
    if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError(f"parts not weakly decreasing: {p}")
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def weight(lam: Partition) -> int:
    return sum(lam)


def partitions(max_weight: int, max_rows: int | None = None) -> Iterator[Partition]:
    """All partitions with |lambda| <= max_weight, optionally row-bounded.

    Deterministic order: by weight, then reverse-lexicographic.
    """

    def of_weight(n: int, largest: int, rows: int) -> Iterator[Partition]:
        if n == 0:
            yield ()
            return
        if rows == 0:
            return
        for first in range(min(n, largest), 0, -1):
            for rest in of_weight(n - first, first, rows - 1):
                yield (first,) + rest

    rows = max_rows if max_rows is not None else max_weight
    for n in range(max_weight + 1):
        yield from of_weight(n, n, rows)


def two_row_partitions(max_weight: int) -> list[Partition]:
    return [lam for lam in partitions(max_weight, max_rows=2)]


@dataclass(frozen=True)
class MiwaPoint:
    z: complex
    u_z: complex


class TimesVector:
    """t_0 plus a sparse map {k >= 1: t_k}; absent indices are exactly zero."""

    __slots__ = ("t0", "_higher")

    def __init__(self, t0: complex = 0.0, higher: Mapping[int, complex] | None = None):
        self.t0 = complex(t0)
        items = {}
        if higher:
            for k, v in higher.items():
                k = int(k)
                if k < 1:
                    raise ValueError(f"higher time index {k} < 1")
                v = complex(v)
                if v != 0:
                    items[k] = v
        self._higher = items

    @classmethod
    def zero(cls) -> "TimesVector":
        return cls()

    @classmethod
    def from_list(cls, tail: Iterable[complex], t0: complex = 0.0) -> "TimesVector":
        """tail = [t_1, t_2, ...]."""
        return cls(t0, {k + 1: v for k, v in enumerate(tail)})

    @property
    def kmax(self) -> int:
        return max(self._higher, default=0)

    def get(self, k: int) -> complex:
        if k == 0:
            return self.t0
        return self._higher.get(k, 0.0 + 0j)

    def items(self):
        return sorted(self._higher.items())

    def key(self):
        """Hashable identity key: equal keys give bit-identical evaluations."""
        return (self.t0, tuple(self.items()))

    def __eq__(self, other):
        return isinstance(other, TimesVector) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"TimesVector(t0={self.t0}, {dict(self.items())})"


def h_from_times(t: TimesVector, n: int) -> np.ndarray:
    """h_0..h_n of exp(sum_{k>=1} t_k z^k), via k h_k = sum_m m t_m h_{k-m}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    h = np.zeros(n + 1, dtype=complex)
    h[0] = 1.0
    tk = np.zeros(n + 1, dtype=complex)
    for k, v in t.items():
        if k <= n:
            tk[k] = v
    for k in range(1, n + 1):
        acc = 0.0 + 0j
        for m in range(1, k + 1):
            if tk[m] != 0:
                acc += m * tk[m] * h[k - m]
        h[k] = acc / k
    return h


def schur_from_h(lam: Partition, h: np.ndarray) -> complex:
    """Jacobi-Trudi determinant det h_{lam_i - i + j}, with h_{<0} = 0."""
    ell = len(lam)
    if ell == 0:
        return 1.0 + 0j
    if ell == 1:
        return complex(h[lam[0]])
    mat = np.zeros((ell, ell), dtype=complex)
    for i in range(ell):
        for j in range(ell):
            idx = lam[i] - (i + 1) + (j + 1)
            if 0 <= idx < len(h):
                mat[i, j] = h[idx]
    return complex(np.linalg.det(mat))


def schur(lam: Partition, t: TimesVector) -> complex:
    lam = partition(lam)
    need = (lam[0] + len(lam)) if lam else 0
    return schur_from_h(lam, h_from_times(t, need))


def schur_values(lams: Iterable[Partition], t: TimesVector) -> dict[Partition, complex]:
    """Schur values for many diagrams off one shared h-vector."""
    lams = [partition(l) for l in lams]
    need = max(((l[0] + len(l)) for l in lams if l), default=0)
    h = h_from_times(t, need)
    return {l: schur_from_h(l, h) for l in lams}


def miwa_times(points: Iterable[MiwaPoint], kmax: int) -> TimesVector:
    """t_k = (1/k) sum_z u_z z^k for 1 <= k <= kmax; t_0 = weight at z = 0."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    pts = list(points)
    t0 = sum((p.u_z for p in pts if p.z == 0), 0.0 + 0j)
    higher = {}
    for k in range(1, kmax + 1):
        v = sum(p.u_z * p.z**k for p in pts)
        if v != 0:
            higher[k] = v / k
    return TimesVector(t0, higher)


def shift_times(t: TimesVector, z: complex, step: complex = 1.0) -> TimesVector:
    """t + [z]: t_0 += step, t_k += z^k / k.

    The tail is extended far enough that truncation error in any
    consumer reading k <= kmax is below roundoff for |z| < 1; consumers
    declare their kmax and never read beyond it.
    """
    z = complex(z)
    higher = dict(t._higher)
    if z != 0:
        # fill range depends on z alone, so shifts commute exactly
        for k in range(1, _shift_kmax(abs(z)) + 1):
            higher[k] = higher.get(k, 0.0 + 0j) + z**k / k
    return TimesVector(t.t0 + step, higher)


def _shift_kmax(r: float) -> int:
    # |z|^k/k below 1e-18 is invisible at the tolerances used anywhere here
    if r >= 1.0:
        return 64
    k = 1
    while r**k / k > 1e-18 and k < 64:
        k += 1
    return k
