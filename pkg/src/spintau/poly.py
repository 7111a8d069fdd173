"""Dense complex polynomials as ascending coefficient arrays.

Everything downstream (Q-polynomials, fused T's, the master T at fixed
times) is a univariate polynomial over C of small degree, stored as a
1-d complex ndarray ``c`` with ``p(u) = sum_k c[k] u^k``.  Thin wrappers
over numpy.polynomial.polynomial plus the few operations it lacks
(argument shift, exact division with a remainder check, Aberth root
refinement, interpolation on a circle).
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npp


class PolynomialError(Exception):
    """Structural failure: inexact division, degenerate degree, bad roots."""


def aspoly(c) -> np.ndarray:
    return np.atleast_1d(np.asarray(c, dtype=complex))


def trim(c, tol: float = 0.0) -> np.ndarray:
    """Drop trailing coefficients with |c_k| <= tol (keeps at least [0])."""
    c = aspoly(c)
    k = len(c)
    while k > 1 and abs(c[k - 1]) <= tol:
        k -= 1
    return c[:k]


def degree(c) -> int:
    return len(trim(c)) - 1


def coeff_scale(c) -> float:
    """Max |coefficient|; the natural scale for relative tolerances."""
    c = aspoly(c)
    return float(np.max(np.abs(c))) if len(c) else 0.0


def polyval(c, u):
    return npp.polyval(u, aspoly(c))


def polyadd(a, b) -> np.ndarray:
    return npp.polyadd(aspoly(a), aspoly(b))


def polysub(a, b) -> np.ndarray:
    return npp.polysub(aspoly(a), aspoly(b))


def polymul(a, b) -> np.ndarray:
    return npp.polymul(aspoly(a), aspoly(b))


def polyder(c) -> np.ndarray:
    return npp.polyder(aspoly(c))


def from_roots(roots) -> np.ndarray:
    """Monic polynomial prod (u - r)."""
    roots = np.asarray(roots, dtype=complex)
    if len(roots) == 0:
        return np.array([1.0 + 0j])
    return npp.polyfromroots(roots)


def shift_arg(c, a: complex) -> np.ndarray:
    """Coefficients of p(u + a) (Taylor shift, Horner form)."""
    c = aspoly(c)
    out = np.zeros(1, dtype=complex)
    for ck in c[::-1]:
        # out(u) <- out(u)*(u + a) + ck
        shifted = np.zeros(len(out) + 1, dtype=complex)
        shifted[1:] += out
        shifted[:-1] += a * out
        shifted[0] += ck
        out = shifted
    return trim(out)


def divide_exact(num, den, rtol: float = 1e-9) -> np.ndarray:
    """Quotient of an exact polynomial division; remainder must vanish.

    Raises PolynomialError when |remainder| exceeds rtol * scale(num):
    used as the pole-cancellation / normalization-exactness contract.
    """
    num, den = aspoly(num), aspoly(den)
    q, r = npp.polydiv(num, den)
    scale = max(coeff_scale(num), 1e-300)
    rnorm = coeff_scale(r)
    if rnorm > rtol * scale:
        raise PolynomialError(
            f"inexact division: |remainder| = {rnorm:.3e} > {rtol:.1e} * {scale:.3e}"
        )
    return trim(q, tol=0.0)


def roots(c) -> np.ndarray:
    return npp.polyroots(aspoly(c))


def aberth(c, warm, tol: float = 1e-13, max_iter: int = 200) -> np.ndarray:
    """Simultaneous (Aberth-Ehrlich) refinement of all roots of c.

    warm supplies one start per root; degree(c) must equal len(warm).
    Raises PolynomialError with the coefficient dump on non-convergence.
    """
    c = trim(aspoly(c))
    n = len(c) - 1
    z = np.asarray(warm, dtype=complex).copy()
    if len(z) != n:
        raise PolynomialError(f"warm start has {len(z)} points for degree {n}")
    if n == 0:
        return z
    dc = polyder(c)
    scale = max(np.max(np.abs(z)), 1.0)
    # tiny deterministic splay so coincident warm points do not lock together
    z = z + 1e-9 * scale * np.exp(2j * np.pi * np.arange(n) / max(n, 1))
    for _ in range(max_iter):
        p = npp.polyval(z, c)
        dp = npp.polyval(z, dc)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            denom = 1.0 - newton * inv.sum(axis=1)
            step = newton / denom
        bad = ~np.isfinite(step)
        step[bad] = newton[bad] if np.all(np.isfinite(newton)) else 0.0
        z = z - step
        if np.max(np.abs(step)) < tol * max(np.max(np.abs(z)), 1.0):
            return z
    raise PolynomialError(f"Aberth did not converge; coefficients: {c.tolist()}")


def root_residual_ok(c, z, rtol: float = 1e-9) -> bool:
    """|p(z_j)| <= rtol * scale for every claimed root."""
    c = aspoly(c)
    z = np.asarray(z, dtype=complex)
    scale = coeff_scale(c) * np.maximum(1.0, np.abs(z)) ** degree(c)
    return bool(np.all(np.abs(npp.polyval(z, c)) <= rtol * scale))


def fit_exact_degree(nodes, values, deg: int) -> np.ndarray:
    """Interpolate a degree<=deg polynomial through len(nodes) >= deg+1 points."""
    nodes = np.asarray(nodes, dtype=complex)
    values = np.asarray(values, dtype=complex)
    v = np.vander(nodes, deg + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(v, values, rcond=None)
    return coef


def circle_interpolate(f, deg: int, radius: float, center: complex = 0.0) -> np.ndarray:
    """Coefficients of a degree<=deg polynomial from FFT samples on a circle.

    f is evaluated at center + radius*omega^j, j = 0..n-1 with n = deg+1;
    returns ascending coefficients in the original variable.
    """
    n = deg + 1
    w = np.exp(2j * np.pi * np.arange(n) / n)
    samples = np.array([f(center + radius * wk) for wk in w], dtype=complex)
    c_scaled = np.fft.fft(samples) / n  # coefficients in (u-center)/radius
    c_scaled /= radius ** np.arange(n)
    return shift_arg(c_scaled, -center) if center != 0 else c_scaled
