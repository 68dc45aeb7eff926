"""Hermitian commutants, irreducibility, and orthogonal splitting.

A matrix is irreducible (in the unitary sense) iff the only selfadjoint
matrices commuting with it are real multiples of the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SplitResidualTooLarge
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    ToleranceConfig,
    adjoint,
    as_matrix,
    block_diag,
    fro,
    null_space,
)


@dataclass(frozen=True)
class CommutantBasis:
    """Real-orthonormal basis of {Q = Q*, QT = TQ}."""

    dim_real: int
    elements: tuple
    cutoff_margin: float = np.inf


@dataclass(frozen=True)
class Split:
    p: Subspace
    t1: np.ndarray
    t2: np.ndarray
    w: np.ndarray


@lru_cache(maxsize=32)
def _hermitian_basis(n: int) -> np.ndarray:
    """Columns are vec(E) for a real-orthonormal basis E of n x n Hermitian matrices."""
    basis = np.zeros((n * n, n * n), dtype=complex)
    col = 0
    for i in range(n):
        basis[i * n + i, col] = 1
        col += 1
    r = 2**-0.5
    for i in range(n):
        for j in range(i + 1, n):
            basis[i * n + j, col] = r
            basis[j * n + i, col] = r
            basis[i * n + j, col + 1] = 1j * r
            basis[j * n + i, col + 1] = -1j * r
            col += 2
    basis.setflags(write=False)
    return basis


def _normalized(t: np.ndarray) -> np.ndarray:
    # the commutant is unchanged by t -> alpha t + beta I
    n = t.shape[0]
    t0 = t - np.trace(t) / n * np.eye(n)
    scale = fro(t0)
    return t0 / scale if scale > 0 else t0


def hermitian_commutant(t, tol: ToleranceConfig = DEFAULT_TOL) -> CommutantBasis:
    t = _normalized(as_matrix(t))
    n = t.shape[0]
    herm = _hermitian_basis(n)
    eye = np.eye(n)
    lift = (np.kron(eye, t.T) - np.kron(t, eye)) @ herm
    real_system = np.vstack([lift.real, lift.imag])
    if not np.any(real_system):
        kernel = Subspace(n * n, np.eye(n * n))
    else:
        kernel = null_space(real_system, tol)
    coeffs = kernel.frame.real
    elements = tuple((herm @ c).reshape(n, n) for c in coeffs.T)
    return CommutantBasis(len(elements), elements, kernel.cutoff_margin)


def is_irreducible(t, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return hermitian_commutant(t, tol).dim_real == 1


def _traceless(q: np.ndarray) -> np.ndarray:
    n = q.shape[0]
    return q - np.trace(q).real / n * np.eye(n)


def spectral_split(t: np.ndarray, q: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> Split:
    """Split ``t`` along a spectral subspace of a selfadjoint ``q`` commuting with it.

    The spectrum of ``q`` is cut at its largest gap; the side whose mean lies
    farther from the mean eigenvalue becomes ``p``.
    """
    n = t.shape[0]
    q = _traceless((q + adjoint(q)) / 2)
    evals, vecs = np.linalg.eigh(q)
    spread = evals[-1] - evals[0]
    gaps = np.diff(evals)
    if spread <= 0 or gaps.max() <= tol.eps_cluster * max(spread, 1.0):
        raise SplitResidualTooLarge("commutant element has no separated eigenvalue cluster")
    cut = int(np.argmax(gaps)) + 1
    low, high = vecs[:, :cut], vecs[:, cut:]
    if abs(evals[cut:].mean()) > abs(evals[:cut].mean()):
        low, high = high, low
    w = np.hstack([low, high])
    k = low.shape[1]
    tw = adjoint(w) @ t @ w
    leak = max(fro(tw[:k, k:]), fro(tw[k:, :k]))
    if leak > tol.eps_residual * max(fro(t), np.finfo(float).tiny):
        raise SplitResidualTooLarge(f"off-diagonal mass {leak:.3e} after spectral split")
    return Split(Subspace(n, low), tw[:k, :k], tw[k:, k:], w)


def split_once(t, tol: ToleranceConfig = DEFAULT_TOL, basis: CommutantBasis | None = None):
    """One orthogonal splitting ``w^* t w = t1 (+) t2``, or ``None`` if irreducible."""
    t = as_matrix(t)
    if basis is None:
        basis = hermitian_commutant(t, tol)
    if basis.dim_real == 1:
        return None
    q = max(basis.elements, key=lambda e: fro(_traceless(e)))
    return spectral_split(t, q, tol)


def decompose_irreducibles(t, tol: ToleranceConfig = DEFAULT_TOL):
    """``(w, blocks)`` with ``w^* t w`` the direct sum of irreducible ``blocks``."""
    t = as_matrix(t)
    split = split_once(t, tol)
    if split is None:
        return np.eye(t.shape[0], dtype=complex), [t]
    w1, b1 = decompose_irreducibles(split.t1, tol)
    w2, b2 = decompose_irreducibles(split.t2, tol)
    return split.w @ block_diag(w1, w2), b1 + b2
