"""Heisenberg chain operators and the exact-diagonalization oracle.

Conventions
-----------
H = J sum_{n=1..L} (sx_n sx_{n+1} + sy_n sy_{n+1} + sz_n sz_{n+1}),
periodic, Pauli (not spin-1/2) normalization; the all-up state has
energy J*L.

Transfer matrix: per-site R on (aux x site), both C^2,

    R(u) = (u - i) Id + 2i P,          P = swap,

T(u) = tr_aux R_{a,L}(u - theta_L) ... R_{a,1}(u - theta_1).  With this
normalization the ferromagnetic vacuum eigenvalue is a(u) + d(u) with
a(u) = prod_j (u - theta_j + i), d(u) = prod_j (u - theta_j - i), which
pins the +-i / +-2i shift pattern used by every other module.

Basis: site 1 is the most significant bit of the computational index;
bit 1 = spin up.  Magnetization sectors count down-spins (magnons M).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from . import poly


class InvalidSpecError(ValueError):
    pass


class SectorError(ValueError):
    """Operator does not respect the requested magnetization sector."""


class DegeneracyError(RuntimeError):
    """Joint eigenbasis could not be resolved with the samples provided."""


@dataclass(frozen=True)
class ChainSpec:
    L: int
    J: float = 1.0
    theta: tuple[complex, ...] = ()

    def __post_init__(self):
        if self.L < 2:
            raise InvalidSpecError(f"chain needs L >= 2 sites, got {self.L}")
        if self.theta and len(self.theta) != self.L:
            raise InvalidSpecError(
                f"{len(self.theta)} inhomogeneities for L = {self.L} sites"
            )
        object.__setattr__(self, "theta", tuple(complex(x) for x in self.theta))

    @property
    def thetas(self) -> np.ndarray:
        if self.theta:
            return np.array(self.theta, dtype=complex)
        return np.zeros(self.L, dtype=complex)

    @property
    def homogeneous(self) -> bool:
        return bool(np.all(self.thetas == 0))

    def phi(self) -> np.ndarray:
        """phi(u) = prod_j (u - theta_j), ascending coefficients."""
        return poly.from_roots(self.thetas)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

_R_SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]], dtype=complex,
)


def r_matrix(u: complex) -> np.ndarray:
    """R(u) = (u - i) Id + 2i P on aux (x) site."""
    return (u - 1j) * np.eye(4, dtype=complex) + 2j * _R_SWAP


def hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Dense 2^L x 2^L Heisenberg Hamiltonian (theta-independent)."""
    L, J = spec.L, spec.J
    dim = 1 << L
    h = np.zeros((dim, dim), dtype=complex)
    for s in range(dim):
        diag = 0.0
        for n in range(L):
            b1 = (s >> (L - 1 - n)) & 1
            b2 = (s >> (L - 1 - (n + 1) % L)) & 1
            if b1 == b2:
                diag += J
            else:
                diag -= J
                flipped = s ^ (1 << (L - 1 - n)) ^ (1 << (L - 1 - (n + 1) % L))
                h[flipped, s] += 2 * J
        h[s, s] += diag
    return h


def _apply_r_factor(mat: np.ndarray, r4: np.ndarray, site: int, L: int) -> np.ndarray:
    """Left-multiply by R acting on (aux, site); site is 1-based, 1 = MSB."""
    dim = 1 << L
    cols = mat.shape[1]
    left = 1 << (site - 1)
    right = dim // (2 * left)
    m = mat.reshape(2, left, 2, right, cols)
    r = r4.reshape(2, 2, 2, 2)  # (aux_out, site_out, aux_in, site_in)
    out = np.einsum("xyab,albrc->xlyrc", r, m)
    return out.reshape(2 * dim, cols)


def monodromy(thetas: Sequence[complex], u: complex) -> np.ndarray:
    """R_{a,L}(u-theta_L) ... R_{a,1}(u-theta_1) on aux (x) chain."""
    thetas = np.asarray(thetas, dtype=complex)
    L = len(thetas)
    dim = 1 << L
    mat = np.eye(2 * dim, dtype=complex)
    for j in range(1, L + 1):
        mat = _apply_r_factor(mat, r_matrix(u - thetas[j - 1]), j, L)
    return mat


def transfer_matrix_kernel(thetas: Sequence[complex], u: complex) -> np.ndarray:
    """tr_aux of the monodromy; works for any L >= 1 (unit-test surface)."""
    L = len(thetas)
    dim = 1 << L
    m = monodromy(thetas, u).reshape(2, dim, 2, dim)
    return m[0, :, 0, :] + m[1, :, 1, :]


def transfer_matrix(spec: ChainSpec, u: complex) -> np.ndarray:
    return transfer_matrix_kernel(spec.thetas, u)


def translation_operator(L: int, direction: int = 1) -> np.ndarray:
    """Cyclic shift of sites; direction=+1 sends site n to site n+1."""
    dim = 1 << L
    op = np.zeros((dim, dim), dtype=complex)
    for s in range(dim):
        if direction >= 0:
            t = ((s >> 1) | ((s & 1) << (L - 1))) & (dim - 1)
        else:
            t = ((s << 1) & (dim - 1)) | (s >> (L - 1))
        op[t, s] = 1.0
    return op


# ---------------------------------------------------------------------------
# magnetization sectors
# ---------------------------------------------------------------------------

def sector_basis(L: int, M: int) -> np.ndarray:
    """Computational-basis indices with M down spins, ascending."""
    if not 0 <= M <= L:
        raise SectorError(f"M = {M} outside 0..{L}")
    dim = 1 << L
    states = [s for s in range(dim) if bin(s).count("1") == L - M]
    assert len(states) == comb(L, M)
    return np.array(states, dtype=int)


def project_sector(op: np.ndarray, L: int, M: int, tol: float = 1e-9) -> np.ndarray:
    """Restrict op to the M-magnon block, checking it is actually a block."""
    idx = sector_basis(L, M)
    scale = max(float(np.max(np.abs(op))), 1e-300)
    comp = np.setdiff1d(np.arange(op.shape[0]), idx)
    if len(comp):
        leak = max(
            float(np.max(np.abs(op[np.ix_(comp, idx)]))),
            float(np.max(np.abs(op[np.ix_(idx, comp)]))),
        )
        if leak > tol * scale:
            raise SectorError(
                f"operator leaks out of the M={M} sector: {leak:.3e} vs scale {scale:.3e}"
            )
    return op[np.ix_(idx, idx)]


def _fix_phase(vecs: np.ndarray) -> np.ndarray:
    """Deterministic gauge: largest-magnitude component real positive."""
    out = vecs.copy()
    for j in range(out.shape[1]):
        k = int(np.argmax(np.abs(out[:, j])))
        ph = out[k, j]
        if ph != 0:
            out[:, j] *= abs(ph) / ph
    return out


def diagonalize_sector(op: np.ndarray, L: int, M: int, tol: float = 1e-9):
    """Full spectrum of the C(L, M) block, deterministically ordered.

    Returns (eigenvalues, eigenvectors-as-columns) in sector coordinates.
    Hermitian blocks go through eigh; general blocks through eig.
    """
    block = project_sector(op, L, M, tol=tol)
    scale = max(float(np.max(np.abs(block))), 1e-300)
    if np.max(np.abs(block - block.conj().T)) <= 1e-12 * scale:
        vals, vecs = np.linalg.eigh(block)
        vals = vals.astype(complex)
    else:
        vals, vecs = np.linalg.eig(block)
    order = np.lexsort((vals.imag, vals.real))
    return vals[order], _fix_phase(vecs[:, order])


# ---------------------------------------------------------------------------
# joint eigenbasis of the commuting family
# ---------------------------------------------------------------------------

@dataclass
class StateLabel:
    M: int
    index: int
    energy: complex
    energy_is_eigenvalue: bool
    t_values: np.ndarray          # T(u) eigenvalue at each sample
    vector: np.ndarray            # sector coordinates
    resolved: bool = True
    group: int = -1


class _TransferCache:
    """Sector blocks of T(u), built once per (u, M)."""

    def __init__(self, spec: ChainSpec):
        self.spec = spec
        self._blocks: dict[tuple[complex, int], np.ndarray] = {}

    def block(self, u: complex, basis_idx: np.ndarray) -> np.ndarray:
        key = (complex(u), int(basis_idx[0]))
        if key not in self._blocks:
            self._blocks[key] = transfer_matrix(self.spec, u)[
                np.ix_(basis_idx, basis_idx)
            ]
        return self._blocks[key]


def _split_by_transfer(cache, vecs, u_samples, basis_idx, tol):
    """Refine a degenerate block by diagonalizing restricted T(u*) in turn."""
    groups = [vecs]
    for u in u_samples:
        tmat = cache.block(u, basis_idx)
        new_groups = []
        for g in groups:
            if g.shape[1] == 1:
                new_groups.append(g)
                continue
            # restriction of T to the invariant span (columns need not be
            # orthonormal when they came from a non-Hermitian eig)
            small, *_ = np.linalg.lstsq(g, tmat @ g, rcond=None)
            vals, w = np.linalg.eig(small)
            order = np.lexsort((vals.imag, vals.real))
            vals, w = vals[order], w[:, order]
            rotated = g @ w
            start = 0
            scale = max(np.max(np.abs(vals)), 1e-300)
            for j in range(1, len(vals) + 1):
                if j == len(vals) or abs(vals[j] - vals[start]) > tol * scale:
                    new_groups.append(rotated[:, start:j])
                    start = j
        groups = new_groups
        if all(g.shape[1] == 1 for g in groups):
            break
    return groups


def _transfer_value(cache, u, vec, basis_idx, rtol=1e-8):
    """Eigenvalue of T(u) on a (joint) eigenvector, with a residual check."""
    tmat = cache.block(u, basis_idx)
    tv = tmat @ vec
    lam = complex(vec.conj() @ tv) / complex(vec.conj() @ vec)
    resid = np.linalg.norm(tv - lam * vec)
    scale = max(np.linalg.norm(tmat), 1e-300)
    if resid > rtol * scale:
        raise DegeneracyError(
            f"vector is not a T({u}) eigenvector: residual {resid:.3e} vs {scale:.3e}"
        )
    return lam


def simultaneous_labels(
    spec: ChainSpec,
    u_samples: Sequence[complex],
    sectors: Sequence[int] | None = None,
    tol: float = 1e-9,
) -> list[StateLabel]:
    """Joint (H, T(u)) labels per eigenstate.

    Homogeneous specs: eigh(H) per sector, degenerate blocks resolved by
    restricted T(u*) over successive samples; unresolved groups flagged.
    Inhomogeneous specs: T(u) is diagonalized directly ([H, T] != 0 when
    inhomogeneities are on) and the energy column holds <psi|H|psi>.
    """
    u_samples = [complex(u) for u in u_samples]
    if sectors is None:
        sectors = range(spec.L + 1)
    ham = hamiltonian(spec)
    cache = _TransferCache(spec)
    labels: list[StateLabel] = []
    for M in sectors:
        idx = sector_basis(spec.L, M)
        if spec.homogeneous:
            evals, evecs = diagonalize_sector(ham, spec.L, M, tol=tol)
            groups = []
            scale = max(np.max(np.abs(evals)), 1.0)
            start = 0
            for j in range(1, len(evals) + 1):
                if j == len(evals) or abs(evals[j] - evals[start]) > tol * scale:
                    groups.append((evals[start], evecs[:, start:j]))
                    start = j
            gid = 0
            per_sector = []
            for energy, block in groups:
                split = _split_by_transfer(cache, block, u_samples, idx, tol)
                for g in split:
                    resolved = g.shape[1] == 1
                    for col in range(g.shape[1]):
                        vec = g[:, col]
                        tvals = np.array(
                            [_transfer_value(cache, u, vec, idx) for u in u_samples]
                        )
                        per_sector.append(
                            StateLabel(M, -1, complex(energy), True, tvals, vec,
                                       resolved, gid)
                        )
                    gid += 1
        else:
            hblock = ham[np.ix_(idx, idx)]
            tmat0 = cache.block(u_samples[0], idx)
            vals, vecs = np.linalg.eig(tmat0)
            order = np.lexsort((vals.imag, vals.real))
            vals, vecs = vals[order], _fix_phase(vecs[:, order])
            groups = []
            scale = max(np.max(np.abs(vals)), 1e-300)
            start = 0
            for j in range(1, len(vals) + 1):
                if j == len(vals) or abs(vals[j] - vals[start]) > 1e-8 * scale:
                    groups.append(vecs[:, start:j])
                    start = j
            per_sector = []
            gid = 0
            for block in groups:
                split = _split_by_transfer(cache, block, u_samples[1:], idx, tol)
                for g in split:
                    resolved = g.shape[1] == 1
                    for col in range(g.shape[1]):
                        vec = g[:, col]
                        nrm = complex(vec.conj() @ vec)
                        energy = complex(vec.conj() @ hblock @ vec) / nrm
                        tvals = np.array(
                            [_transfer_value(cache, u, vec, idx) for u in u_samples]
                        )
                        per_sector.append(
                            StateLabel(M, -1, energy, False, tvals, vec,
                                       resolved, gid)
                        )
                    gid += 1
        order = np.lexsort(
            (
                [lab.t_values[0].imag for lab in per_sector],
                [lab.t_values[0].real for lab in per_sector],
                [lab.energy.imag for lab in per_sector],
                [lab.energy.real for lab in per_sector],
            )
        )
        for rank, k in enumerate(order):
            per_sector[k].index = rank
        labels.extend(per_sector[k] for k in order)
    return labels


def t_polynomial(label: StateLabel, u_samples: Sequence[complex], L: int) -> np.ndarray:
    """Degree-L coefficient vector of the state's T(u) through L+1 samples."""
    if len(u_samples) < L + 1:
        raise ValueError(f"need {L + 1} samples for degree {L}")
    return poly.fit_exact_degree(u_samples, label.t_values, L)


def generic_nodes(spec: ChainSpec, n: int | None = None) -> np.ndarray:
    """Deterministic generic complex sample points for interpolation."""
    n = spec.L + 1 if n is None else n
    scale = 1.0 + float(np.max(np.abs(spec.thetas)))
    base = 0.2117 + 0.3513j
    step = 0.7309 - 0.1476j
    return scale * (base + step * np.arange(n))


# ---------------------------------------------------------------------------
# multiplet enumeration (input to the fusion/master pipelines)
# ---------------------------------------------------------------------------

@dataclass
class Multiplet:
    """One distinguishable joint eigenvalue family of the commuting family."""

    M_hw: int
    t_coeffs: np.ndarray          # degree-L T_1(u) coefficients (ascending)
    energy: complex               # exact H eigenvalue when homogeneous
    vector: np.ndarray            # representative HW-sector eigenvector
    label: StateLabel = field(repr=False, default=None)


def enumerate_multiplets(spec: ChainSpec, tol: float = 1e-6) -> list[Multiplet]:
    """Distinct T(u)-polynomials with their highest-weight sector.

    A multiplet of spin S shows up in every sector L/2-S <= M <= L/2+S;
    its highest-weight member sits at the smallest such M, which is
    where the Q-polynomial of degree M lives.
    """
    nodes = generic_nodes(spec)
    labels = simultaneous_labels(spec, nodes)
    seen: list[tuple[np.ndarray, int]] = []   # (coeffs, sector of appearance)
    multiplets: list[Multiplet] = []
    for M in range(spec.L + 1):
        for lab in (l for l in labels if l.M == M):
            coeffs = t_polynomial(lab, nodes, spec.L)
            scale = max(poly.coeff_scale(coeffs), 1e-300)
            is_new = True
            for prev, _ in seen:
                if poly.coeff_scale(poly.polysub(prev, coeffs)) <= tol * scale:
                    is_new = False
                    break
            seen.append((coeffs, M))
            if is_new and M <= spec.L // 2:
                multiplets.append(
                    Multiplet(M_hw=M, t_coeffs=coeffs, energy=lab.energy,
                              vector=lab.vector, label=lab)
                )
    multiplets.sort(key=lambda m: (m.M_hw, m.energy.real, m.energy.imag,
                                   m.t_coeffs[0].real, m.t_coeffs[0].imag))
    return multiplets


def spectrum_rows(spec: ChainSpec, u_samples: Sequence[complex] | None = None):
    """CSV-ready rows: (L, M, index, energy, T-sample re/im pairs)."""
    nodes = generic_nodes(spec) if u_samples is None else list(u_samples)
    labels = simultaneous_labels(spec, nodes)
    rows = []
    for lab in labels:
        row = [spec.L, lab.M, lab.index, lab.energy.real]
        for tv in lab.t_values:
            row.extend([tv.real, tv.imag])
        rows.append(row)
    return nodes, rows
