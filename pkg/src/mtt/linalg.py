"""Dense complex kernels used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; helpers here
validate shape and finiteness once at the boundary so downstream code can
assume a square, finite input.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import InvalidMatrix, NoConvergence, NotNormal


@dataclass(frozen=True)
class ToleranceConfig:
    """All numerical thresholds in one place.

    Parameters
    ----------
    eps_rank : float
        Singular values below ``eps_rank * s_max`` count as zero.
    eps_residual : float
        Frobenius-relative acceptance threshold for certificates and
        structural checks.
    eps_cluster : float
        Eigenvalue grouping radius (unit-circle spectra, principal angles).
    max_iter, restarts : int
        Budget for the alternating-projection search.
    seed : int
        Seed of every random draw made on behalf of a computation.
    """

    eps_rank: float = 1e-9
    eps_residual: float = 1e-6
    eps_cluster: float = 1e-7
    max_iter: int = 500
    restarts: int = 32
    seed: int = 0

    def __post_init__(self):
        for name in ("eps_rank", "eps_residual", "eps_cluster"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if self.max_iter < 1 or self.restarts < 1:
            raise ValueError("max_iter and restarts must be >= 1")

    def replace(self, **changes) -> "ToleranceConfig":
        return dataclasses.replace(self, **changes)

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, stream])

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class Subspace:
    """Subspace of C^ambient_dim described by an orthonormal column frame.

    ``cutoff_margin`` records, in decades, how far the nearest singular value
    was from the rank cutoff when the subspace came out of :func:`null_space`
    (``inf`` when it was not produced by a rank decision).
    """

    ambient_dim: int
    frame: np.ndarray
    cutoff_margin: float = field(default=np.inf, compare=False)

    def __post_init__(self):
        frame = np.asarray(self.frame)
        if frame.ndim != 2 or frame.shape[0] != self.ambient_dim:
            raise ValueError(f"frame must have {self.ambient_dim} rows, got shape {frame.shape}")
        object.__setattr__(self, "frame", frame)

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def complement(self) -> "Subspace":
        return Subspace(self.ambient_dim, orthogonal_complement(self.frame))

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.conj().T

    def orthonormality_error(self) -> float:
        k = self.dim
        return fro(self.frame.conj().T @ self.frame - np.eye(k))


def as_matrix(x, name: str = "matrix") -> np.ndarray:
    """Validate ``x`` as a finite square matrix and return a complex copy."""
    m = np.array(x, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InvalidMatrix(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidMatrix(f"{name} has non-finite entries")
    return m


def fro(x) -> float:
    return float(np.linalg.norm(x))


def adjoint(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def is_unitary(m: np.ndarray, tol: float = 1e-9) -> bool:
    n = m.shape[0]
    return m.shape == (n, n) and fro(adjoint(m) @ m - np.eye(n)) <= tol * np.sqrt(n)


def relative_residual(residual: np.ndarray, scale: float) -> float:
    """Frobenius norm of ``residual`` divided by ``scale`` (absolute if scale is 0)."""
    r = fro(residual)
    return r / scale if scale > 0 else r


def block_diag(*blocks) -> np.ndarray:
    blocks = [b for b in blocks if b.size]
    if not blocks:
        return np.zeros((0, 0), dtype=complex)
    return scipy.linalg.block_diag(*blocks).astype(complex)


def omega(d: int) -> np.ndarray:
    """The 2d x 2d symplectic form [[0, I], [-I, 0]]."""
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([[zero, eye], [-eye, zero]]).astype(complex)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary: QR of a complex Gaussian with the phases of diag(R) removed."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def eig_normal(m, tol: ToleranceConfig = DEFAULT_TOL):
    """Unitary diagonalization of a normal matrix.

    Returns ``(eigenvalues, p)`` with ``m = p @ diag(eigenvalues) @ p^*`` and
    ``p`` unitary, also inside degenerate eigenspaces.
    """
    m = as_matrix(m)
    scale = fro(m)
    if fro(m @ adjoint(m) - adjoint(m) @ m) > tol.eps_residual * scale**2:
        raise NotNormal("matrix is not normal within eps_residual")
    try:
        # complex Schur form of a normal matrix is diagonal
        t, p = scipy.linalg.schur(m, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NoConvergence(str(exc)) from exc
    eigenvalues = np.diag(t).copy()
    if fro(m - (p * eigenvalues) @ adjoint(p)) > tol.eps_residual * max(scale, 1.0):
        raise NoConvergence("Schur form of a normal matrix is not diagonal within tolerance")
    return eigenvalues, p


def svd(m):
    """``m = u @ diag(s) @ w^*`` with ``s`` descending."""
    m = np.asarray(m, dtype=complex)
    try:
        u, s, wh = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return u, s, adjoint(wh)


def polar_unitary(m) -> np.ndarray:
    """Nearest unitary to ``m`` in Frobenius norm (unitary polar factor)."""
    u, _, w = svd(m)
    return u @ adjoint(w)


def _rank_cutoff(s: np.ndarray, eps_rank: float) -> tuple[int, float]:
    if s.size == 0 or s[0] == 0:
        return 0, np.inf
    rel = s / s[0]
    rank = int(np.count_nonzero(rel > eps_rank))
    with np.errstate(divide="ignore"):
        decades = np.abs(np.log10(rel) - np.log10(eps_rank))
    return rank, float(np.min(decades))


def null_space(a, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the numerical kernel of a (possibly rectangular) map."""
    a = np.asarray(a)
    p, q = a.shape
    if p == 0:
        return Subspace(q, np.eye(q, dtype=a.dtype))
    try:
        _, s, vh = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    rank, margin = _rank_cutoff(s, tol.eps_rank)
    return Subspace(q, vh[rank:].conj().T, cutoff_margin=margin)


def orthogonal_complement(frame: np.ndarray) -> np.ndarray:
    n, k = frame.shape
    if k == 0:
        return np.eye(n, dtype=complex)
    u, _, _ = np.linalg.svd(frame, full_matrices=True)
    return u[:, k:]


def orthonormalize(vectors: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis for the column span of ``vectors`` (rank-revealing)."""
    if vectors.shape[1] == 0:
        return vectors
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    rank, _ = _rank_cutoff(s, tol.eps_rank)
    return u[:, :rank]


def subspace_intersect(a: Subspace, b: Subspace, tol: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Intersection via principal angles: keep directions with cosine >= 1 - eps_cluster."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace(n, np.zeros((n, 0), dtype=complex))
    u, s, _ = np.linalg.svd(adjoint(a.frame) @ b.frame)
    k = int(np.count_nonzero(s >= 1 - tol.eps_cluster))
    return Subspace(n, a.frame @ u[:, :k])
