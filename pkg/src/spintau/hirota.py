"""Residual evaluators for the bilinear Hirota equation.

Continuous-shift form: for a tau-function tau(t),

    (z2-z3) tau(t+[z1]) tau(t+[z2]+[z3])
  + (z3-z1) tau(t+[z2]) tau(t+[z1]+[z3])
  + (z1-z2) tau(t+[z3]) tau(t+[z1]+[z2])  =  0,

with t + [z] = {t_0+step, t_k + z^k/k}.  The t_0 increment unit (step)
is an explicit parameter everywhere: the unit-1 convention of the
continuous form has to be reconciled with the spin-chain shift
conventions downstream.  The lattice form lives on integer Miwa
coordinates (u_1, u_2, u_3) where a unit step in u_i is a [z_i] shift.

Residuals are reported raw and normalized by the largest of the three
bilinear-product magnitudes, so tolerances are scale-free.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .symfun import MiwaPoint, TimesVector, shift_times


class IncompleteStencilError(KeyError):
    """A lattice residual was requested with a missing neighbor."""


@dataclass(frozen=True)
class TauFn:
    """Deterministic evaluation t -> complex, with the highest time index read."""

    fn: Callable[[TimesVector], complex]
    kmax: int
    label: str = ""

    def __call__(self, t: TimesVector) -> complex:
        return complex(self.fn(t))


# ---------------------------------------------------------------------------
# analytic fixtures
# ---------------------------------------------------------------------------

def constant_tau(c: complex = 1.0) -> TauFn:
    return TauFn(lambda t: complex(c), kmax=0, label=f"constant({c})")


def exponential_tau(p: complex, c: complex = 1.0) -> TauFn:
    """tau(t) = c * p^{t_0} exp(sum_k t_k p^k); a plane-wave tau-function."""

    def fn(t: TimesVector) -> complex:
        s = sum(v * p**k for k, v in t.items())
        return c * p**t.t0 * np.exp(s)

    return TauFn(fn, kmax=64, label=f"exponential(p={p})")


def superposition_tau(terms) -> TauFn:
    """Sum of plane waves c_i * p_i^{t_0} exp(sum t_k p_i^k); still a tau."""
    terms = [(complex(c), complex(p)) for c, p in terms]

    def fn(t: TimesVector) -> complex:
        out = 0.0 + 0j
        for c, p in terms:
            s = sum(v * p**k for k, v in t.items())
            out += c * p**t.t0 * np.exp(s)
        return out

    return TauFn(fn, kmax=64, label="superposition")


def linear_t1_tau() -> TauFn:
    """tau(t) = t_1: NOT a tau-function; its residual has a closed form."""
    return TauFn(lambda t: t.get(1), kmax=1, label="t1")


def linear_t1_residual_exact(z1: complex, z2: complex, z3: complex) -> complex:
    """Hand expansion of residual_shift for tau = t_1 (t-independent)."""
    return z1 * z2 * (z2 - z1) + z1 * z3 * (z1 - z3) + z2 * z3 * (z3 - z2)


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------

def bilinear_terms(tau: TauFn, t: TimesVector, z1, z2, z3, step: complex = 1.0):
    """The three products tau(t+[zi]) tau(t+[zj]+[zk]) in cyclic order."""
    s1 = shift_times(t, z1, step)
    s2 = shift_times(t, z2, step)
    s3 = shift_times(t, z3, step)
    t23 = shift_times(s2, z3, step)
    t13 = shift_times(s1, z3, step)
    t12 = shift_times(s1, z2, step)
    return (
        tau(s1) * tau(t23),
        tau(s2) * tau(t13),
        tau(s3) * tau(t12),
    )


def residual_shift(tau: TauFn, t: TimesVector, z1, z2, z3, step: complex = 1.0) -> complex:
    p1, p2, p3 = bilinear_terms(tau, t, z1, z2, z3, step)
    return (z2 - z3) * p1 + (z3 - z1) * p2 + (z1 - z2) * p3


def residual_shift_normalized(tau, t, z1, z2, z3, step: complex = 1.0):
    """(raw, normalized) residual; normalized by max |bilinear product|."""
    p1, p2, p3 = bilinear_terms(tau, t, z1, z2, z3, step)
    raw = (z2 - z3) * p1 + (z3 - z1) * p2 + (z1 - z2) * p3
    scale = max(abs(p1), abs(p2), abs(p3), 1e-300)
    return raw, abs(raw) / scale


LatticePoint = tuple[int, int, int]


def residual_lattice(
    tau_grid: Mapping[LatticePoint, complex],
    p: LatticePoint,
    z1: complex,
    z2: complex,
    z3: complex,
) -> complex:
    """Lattice Hirota residual at p; all six stencil neighbors must exist."""
    u1, u2, u3 = p

    def g(a, b, c):
        try:
            return tau_grid[(a, b, c)]
        except KeyError as exc:
            raise IncompleteStencilError(
                f"missing grid point {(a, b, c)} for stencil at {p}"
            ) from exc

    return (
        (z2 - z3) * g(u1, u2 + 1, u3 + 1) * g(u1 + 1, u2, u3)
        + (z3 - z1) * g(u1 + 1, u2, u3 + 1) * g(u1, u2 + 1, u3)
        + (z1 - z2) * g(u1 + 1, u2 + 1, u3) * g(u1, u2, u3 + 1)
    )


def lattice_from_tau(
    tau: TauFn,
    base: TimesVector,
    z1: complex,
    z2: complex,
    z3: complex,
    window: int,
    step: complex = 1.0,
) -> dict[LatticePoint, complex]:
    """Sample tau on the Miwa lattice: unit step in u_i adds [z_i].

    Grid covers 0 <= u_i <= window.
    """
    zs = (z1, z2, z3)
    grid: dict[LatticePoint, complex] = {}
    for n1 in range(window + 1):
        for n2 in range(window + 1):
            for n3 in range(window + 1):
                t = base
                for z, n in zip(zs, (n1, n2, n3)):
                    for _ in range(n):
                        t = shift_times(t, z, step)
                grid[(n1, n2, n3)] = tau(t)
    return grid


# ---------------------------------------------------------------------------
# seeded sweep
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    n_samples: int = 200
    seed: int = 0
    t_radius: float = 0.05
    t_kmax: int = 4
    z_radius: float = 0.1
    step: complex = 1.0
    t0: complex = 0.0


@dataclass
class SweepReport:
    max_residual: float
    max_normalized: float
    n_samples: int
    seed: int
    worst_sample: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "max_residual": self.max_residual,
            "normalized": self.max_normalized,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "worst_sample": self.worst_sample,
        }
        return json.dumps(payload, sort_keys=True)


def _uniform_disk(rng: np.random.Generator, radius: float) -> complex:
    r = radius * math.sqrt(rng.uniform())
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return r * complex(math.cos(phi), math.sin(phi))


def sweep_samples(config: SweepConfig):
    """Deterministic (t, z1, z2, z3) stream for a given seed."""
    rng = np.random.default_rng(config.seed)
    for _ in range(config.n_samples):
        higher = {
            k: _uniform_disk(rng, config.t_radius)
            for k in range(1, config.t_kmax + 1)
        }
        t = TimesVector(config.t0, higher)
        zs = tuple(_uniform_disk(rng, config.z_radius) for _ in range(3))
        yield t, zs


def sweep_check(tau: TauFn, config: SweepConfig) -> SweepReport:
    """Worst raw/normalized residual_shift over seeded random samples."""
    worst_raw = 0.0
    worst_norm = -1.0
    worst: dict = {}
    for t, (z1, z2, z3) in sweep_samples(config):
        raw, norm = residual_shift_normalized(tau, t, z1, z2, z3, config.step)
        worst_raw = max(worst_raw, abs(raw))
        if norm > worst_norm:
            worst_norm = norm
            worst = {
                "t0": [t.t0.real, t.t0.imag],
                "t": {str(k): [v.real, v.imag] for k, v in t.items()},
                "z": [[z.real, z.imag] for z in (z1, z2, z3)],
                "raw": [raw.real, raw.imag],
            }
    return SweepReport(
        max_residual=worst_raw,
        max_normalized=max(worst_norm, 0.0),
        n_samples=config.n_samples,
        seed=config.seed,
        worst_sample=worst,
    )
