"""Conjugations and anticonjugations stored by their unitary factor.

A conjugation is ``C = U J`` with ``U`` a symmetric unitary and ``J`` the
entrywise complex conjugation; an anticonjugation is ``K = S J`` with ``S`` a
skew-symmetric unitary.  ``C`` is involutive, ``K`` squares to ``-I``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidConjugation,
    NotAntiSymmetricWithRespectToK,
    NotCSymmetricWithRespectToC,
)
from .linalg import DEFAULT_TOL, ToleranceConfig, adjoint, as_matrix, fro, omega

_FACTOR_TOL = 1e-6


def _check_factor(u: np.ndarray, sign: int, what: str) -> np.ndarray:
    u = as_matrix(u, what)
    n = u.shape[0]
    scale = np.sqrt(n)
    if fro(adjoint(u) @ u - np.eye(n)) > _FACTOR_TOL * scale:
        raise InvalidConjugation(f"{what} factor is not unitary")
    if fro(u - sign * u.T) > _FACTOR_TOL * scale:
        kind = "symmetric" if sign > 0 else "skew-symmetric"
        raise InvalidConjugation(f"{what} factor is not {kind}")
    return u


@dataclass(frozen=True)
class Conjugation:
    """``C = u J`` for a symmetric unitary ``u``."""

    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", _check_factor(self.u, +1, "conjugation"))

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @classmethod
    def canonical(cls, n: int) -> "Conjugation":
        return cls(np.eye(n, dtype=complex))

    def apply(self, x):
        return apply_conjugation(self, x)

    def operator_image(self, m: np.ndarray) -> np.ndarray:
        """Matrix of the linear map ``C m C``."""
        return self.u @ m.conj() @ adjoint(self.u)

    def restrict(self, frame: np.ndarray) -> "Conjugation":
        """Conjugation induced on a C-invariant subspace, in the coordinates of ``frame``."""
        return Conjugation(adjoint(frame) @ self.u @ frame.conj())


@dataclass(frozen=True)
class Anticonjugation:
    """``K = s J`` for a skew-symmetric unitary ``s`` (even dimension only)."""

    s: np.ndarray

    def __post_init__(self):
        s = as_matrix(self.s, "anticonjugation")
        if s.shape[0] % 2:
            raise InvalidConjugation("anticonjugations exist only in even dimension")
        object.__setattr__(self, "s", _check_factor(s, -1, "anticonjugation"))

    @property
    def n(self) -> int:
        return self.s.shape[0]

    @classmethod
    def canonical(cls, d: int) -> "Anticonjugation":
        return cls(omega(d))

    def apply(self, x):
        return apply_anticonjugation(self, x)

    def operator_image(self, m: np.ndarray) -> np.ndarray:
        """Matrix of ``K m K^{-1} = -K m K``."""
        return self.s @ m.conj() @ adjoint(self.s)

    def restrict(self, frame: np.ndarray) -> "Anticonjugation":
        return Anticonjugation(adjoint(frame) @ self.s @ frame.conj())


@dataclass(frozen=True)
class AsmShape:
    """Blocks of the antiskewsymmetric matrix [[a, b], [dd, a^t]]."""

    d: int
    a: np.ndarray
    b: np.ndarray
    dd: np.ndarray

    def __post_init__(self):
        for name in ("a", "b", "dd"):
            block = np.asarray(getattr(self, name), dtype=complex)
            if block.shape != (self.d, self.d):
                raise ValueError(f"block {name} must be {self.d}x{self.d}")
            object.__setattr__(self, name, block)
        scale = max(1.0, fro(self.b), fro(self.dd))
        if fro(self.b + self.b.T) > _FACTOR_TOL * scale or fro(self.dd + self.dd.T) > _FACTOR_TOL * scale:
            raise ValueError("off-diagonal blocks must be skew-symmetric")

    def assemble(self) -> np.ndarray:
        return np.block([[self.a, self.b], [self.dd, self.a.T]])


def asm_identity_residual(m: np.ndarray) -> float:
    """``|| m - Omega m^t Omega^* ||_F``; zero exactly for antiskewsymmetric ``m``."""
    n = m.shape[0]
    if n % 2:
        return np.inf
    w = omega(n // 2)
    return fro(m - w @ m.T @ adjoint(w))


def _check_vector(n: int, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape[0] != n:
        raise DimensionMismatch(f"expected a vector of length {n}, got shape {x.shape}")
    return x


def apply_conjugation(c: Conjugation, x) -> np.ndarray:
    x = _check_vector(c.n, x)
    return c.u @ x.conj()


def apply_anticonjugation(k: Anticonjugation, x) -> np.ndarray:
    x = _check_vector(k.n, x)
    return k.s @ x.conj()


def _deflate(rest: np.ndarray, taken: np.ndarray) -> np.ndarray:
    """Orthonormal frame of span(rest) minus the directions in ``taken``."""
    coeffs = adjoint(rest) @ taken
    u, _, _ = np.linalg.svd(coeffs, full_matrices=True)
    return rest @ u[:, taken.shape[1]:]


def fixed_basis(c: Conjugation) -> np.ndarray:
    """Unitary ``q`` whose columns satisfy ``C q_j = q_j``."""
    n = c.n
    rest = np.eye(n, dtype=complex)
    columns = []
    while rest.shape[1]:
        v = rest[:, 0]
        cv = apply_conjugation(c, v)
        w = v + cv
        if np.linalg.norm(w) <= 0.5:
            w = 1j * (v - cv)
        e = w / np.linalg.norm(w)
        columns.append(e)
        rest = _deflate(rest, e[:, None])
    return np.column_stack(columns)


def realize_csm(t, c: Conjugation, tol: ToleranceConfig = DEFAULT_TOL):
    """Unitary ``q`` and symmetric ``s = q^* t q`` for ``t = C t^* C``."""
    t = as_matrix(t)
    if t.shape != c.u.shape:
        raise DimensionMismatch("matrix and conjugation sizes differ")
    scale = max(fro(t), np.finfo(float).tiny)
    if fro(t - c.u @ t.T @ adjoint(c.u)) > tol.eps_residual * scale:
        raise NotCSymmetricWithRespectToC("t != C t* C within eps_residual")
    q = fixed_basis(c)
    s = adjoint(q) @ t @ q
    if fro(s - s.T) > tol.eps_residual * scale:
        raise NotCSymmetricWithRespectToC("realized matrix is not symmetric within eps_residual")
    return (s + s.T) / 2, q


def canonical_anti_basis(k: Anticonjugation) -> np.ndarray:
    """Unitary ``[e_1..e_d | f_1..f_d]`` with ``f_i = -K e_i``.

    Then ``K e_i = -f_i`` and ``K f_i = e_i``, the action of ``Omega J`` on the
    standard basis, so ``K = Omega J`` gets the identity back.
    """
    n = k.n
    heads, tails = [], []
    chosen = np.zeros((n, 0), dtype=complex)
    while chosen.shape[1] < n:
        # seed from the standard basis vector that survives projection best;
        # the orthogonal complement of the chosen K-pairs is K-invariant
        residual = np.eye(n) - chosen @ adjoint(chosen)
        norms = np.linalg.norm(residual, axis=0)
        j = int(np.flatnonzero(norms >= norms.max() - 1e-12)[0])
        e = residual[:, j] / norms[j]
        f = -apply_anticonjugation(k, e)
        heads.append(e)
        tails.append(f)
        chosen = np.column_stack([chosen, e, f])
    return np.column_stack(heads + tails)


def realize_asm(t, k: Anticonjugation, tol: ToleranceConfig = DEFAULT_TOL):
    """Unitary ``q`` with ``q^* t q`` antiskewsymmetric, for ``t = -K t^* K``."""
    t = as_matrix(t)
    if t.shape != k.s.shape:
        raise DimensionMismatch("matrix and anticonjugation sizes differ")
    scale = max(fro(t), np.finfo(float).tiny)
    if fro(t - k.s @ t.T @ adjoint(k.s)) > tol.eps_residual * scale:
        raise NotAntiSymmetricWithRespectToK("t != -K t* K within eps_residual")
    q = canonical_anti_basis(k)
    s = adjoint(q) @ t @ q
    if asm_identity_residual(s) > tol.eps_residual * scale:
        raise NotAntiSymmetricWithRespectToK("realized matrix is not antiskewsymmetric")
    d = k.n // 2
    a = (s[:d, :d] + s[d:, d:].T) / 2
    b = (s[:d, d:] - s[:d, d:].T) / 2
    dd = (s[d:, :d] - s[d:, :d].T) / 2
    return AsmShape(d, a, b, dd), q
