"""Sylvester kernels, unitary search, and the UET / UECSM / UEASM deciders.

Every unitary ``U`` with ``T U = U T^t`` also satisfies ``T* U = U conj(T)``
(take adjoints).  The deciders therefore search the *joint* kernel of both
relations.  That space is closed under taking polar factors of its invertible
elements, so one polar step from a generic element already lands on a
witness whenever one exists; for irreducible ``T`` it is at most
one-dimensional.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotScalar, OddDimensionSkew
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    ToleranceConfig,
    adjoint,
    as_matrix,
    fro,
    null_space,
    polar_unitary,
)
from .words import default_budget, specht_bounded, uecsm_sides_3x3, uecsm_test_3x3

YES, NO, UNDETERMINED = "yes", "no", "undetermined"


@dataclass
class UetCertificate:
    """Witness ``u`` for ``t = u t^t u^*``.

    ``residual`` is ``||t u - u t^t||_F / (||t||_F ||u||_F)``.
    """

    u: np.ndarray
    residual: float
    symmetry_class: str
    alpha: int | None = None
    kind: str = "uet"
    evidence: str = ""


@dataclass
class Decision:
    verdict: str
    certificate: UetCertificate | None = None
    evidence: str = ""
    violating_word: str | None = None
    kernel_dim: int | None = None
    cutoff_margin: float = field(default=np.inf, repr=False)

    def __bool__(self):
        return self.verdict == YES


def sylvester_lift(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix of X -> aX - Xb acting on row-major vec(X)."""
    eye = np.eye(a.shape[0])
    return np.kron(a, eye) - np.kron(eye, b.T)


def _kernel(a, b, tol: ToleranceConfig, with_adjoint: bool) -> Subspace:
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise ValueError("sylvester_kernel needs matrices of equal size")
    scale = max(fro(a), fro(b))
    if scale > 0:
        a, b = a / scale, b / scale
    lift = sylvester_lift(a, b)
    if with_adjoint:
        lift = np.vstack([lift, sylvester_lift(adjoint(a), adjoint(b))])
    return null_space(lift, tol)


def sylvester_kernel(a, b, tol: ToleranceConfig = DEFAULT_TOL, with_adjoint: bool = False) -> list:
    """Frobenius-orthonormal basis of {X : aX = Xb}.

    With ``with_adjoint=True`` the basis spans {X : aX = Xb, a*X = Xb*}, the
    intertwiners of the two *-algebras; it contains every unitary solution of
    the plain equation.
    """
    n = np.shape(a)[0]
    kernel = _kernel(a, b, tol, with_adjoint)
    return [v.reshape(n, n) for v in kernel.frame.T]


def find_unitary_in_span(basis, tol: ToleranceConfig = DEFAULT_TOL, rng=None):
    """Alternating projections between span(basis) and the unitary group.

    ``basis`` must be Frobenius-orthonormal.  Returns ``(u, residual)`` for the
    first unitary within ``eps_residual`` (relative) of the span, else ``None``.
    """
    basis = [np.asarray(b, dtype=complex) for b in basis]
    if not basis:
        return None
    n = basis[0].shape[0]
    frame = np.column_stack([b.ravel() for b in basis])
    k = frame.shape[1]
    rng = tol.rng(1) if rng is None else rng
    norm_u = np.sqrt(n)
    for _ in range(tol.restarts):
        coeffs = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        x = (frame @ coeffs).reshape(n, n)
        best, stale = np.inf, 0
        for _ in range(tol.max_iter):
            u = polar_unitary(x)
            x = (frame @ (adjoint(frame) @ u.ravel())).reshape(n, n)
            dist = fro(u - x) / norm_u
            if dist <= tol.eps_residual:
                return u, dist
            if dist < 0.999 * best:
                best, stale = dist, 0
            else:
                stale += 1
                if stale >= 25:
                    break
    return None


def _slice(basis: list, sign: int, tol: ToleranceConfig) -> list:
    """Orthonormal basis of the (sign)-symmetric part of a transpose-closed span.

    ``basis`` is Frobenius-orthonormal, so the rank cutoff is absolute: a
    slice made only of rounding noise must come out empty.
    """
    if not basis:
        return []
    n = basis[0].shape[0]
    parts = np.column_stack([((x + sign * x.T) / 2).ravel() for x in basis])
    u, s, _ = np.linalg.svd(parts, full_matrices=False)
    rank = int(np.count_nonzero(s > tol.eps_rank))
    return [v.reshape(n, n) for v in u[:, :rank].T]


def symmetry_class(u: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> str:
    bound = tol.eps_residual * fro(u)
    if fro(u - u.T) <= bound:
        return "symmetric"
    if fro(u + u.T) <= bound:
        return "skew"
    return "neither"


def scalar_alpha(u: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> int | None:
    """+1 or -1 when ``u conj(u)`` is that multiple of the identity, else ``None``."""
    n = u.shape[0]
    v = u @ u.conj()
    for alpha in (1, -1):
        if fro(v - alpha * np.eye(n)) <= tol.eps_residual * np.sqrt(n):
            return alpha
    return None


def certificate_residual(t: np.ndarray, u: np.ndarray) -> float:
    scale = fro(t) * fro(u)
    r = fro(t @ u - u @ t.T)
    return r / scale if scale > 0 else r


def make_certificate(t, u, kind: str = "uet", evidence: str = "", tol: ToleranceConfig = DEFAULT_TOL):
    t = np.asarray(t, dtype=complex)
    return UetCertificate(
        u=u,
        residual=certificate_residual(t, u),
        symmetry_class=symmetry_class(u, tol),
        alpha=scalar_alpha(u, tol),
        kind=kind,
        evidence=evidence,
    )


def verify_certificate(t, cert: UetCertificate, tol: ToleranceConfig = DEFAULT_TOL) -> list[str]:
    """Recheck every claim of ``cert`` by direct multiplication; return violated bounds."""
    t = as_matrix(t)
    u = np.asarray(cert.u, dtype=complex)
    n = t.shape[0]
    problems = []
    if u.shape != t.shape:
        return [f"witness has shape {u.shape}, matrix has shape {t.shape}"]
    unitarity = fro(adjoint(u) @ u - np.eye(n)) / np.sqrt(n)
    if unitarity > tol.eps_residual:
        problems.append(f"witness not unitary: ||U*U - I||_F/sqrt(n) = {unitarity:.3e} > {tol.eps_residual:.1e}")
    residual = certificate_residual(t, u)
    if residual > tol.eps_residual:
        problems.append(f"residual ||TU - UT^t||_F/(||T|| ||U||) = {residual:.3e} > {tol.eps_residual:.1e}")
    actual_class = symmetry_class(u, tol)
    if cert.kind == "uecsm" and actual_class != "symmetric":
        problems.append("uecsm certificate needs a symmetric witness")
    if cert.kind == "ueasm" and actual_class != "skew":
        problems.append("ueasm certificate needs a skew-symmetric witness")
    if cert.alpha is not None and scalar_alpha(u, tol) != cert.alpha:
        problems.append(f"claimed U conj(U) = {cert.alpha:+d} I does not hold")
    return problems


def find_intertwining_unitary(a, b, tol: ToleranceConfig = DEFAULT_TOL, sign: int = 0):
    """Search for unitary ``u`` with ``a u = u b``.

    ``sign`` restricts the search to symmetric (+1) or skew-symmetric (-1)
    witnesses; that slice is only meaningful when ``b = a^t``.
    Returns ``(result, kernel_dim, cutoff_margin)`` with ``result`` either
    ``(u, residual)`` or ``None``.
    """
    kernel = _kernel(a, b, tol, with_adjoint=True)
    n = np.shape(a)[0]
    basis = [v.reshape(n, n) for v in kernel.frame.T]
    if sign:
        basis = _slice(basis, sign, tol)
    if not basis:
        return None, 0, kernel.cutoff_margin
    return find_unitary_in_span(basis, tol), len(basis), kernel.cutoff_margin


def _disproof(t: np.ndarray, tol: ToleranceConfig, budget: int | None):
    """Cheap proofs that ``t`` is not UET: returns a Decision or None."""
    n = t.shape[0]
    if n == 3 and not uecsm_test_3x3(t, tol):
        lhs, rhs = uecsm_sides_3x3(t)
        ok, word = specht_bounded(t, t.T, budget or default_budget(3), tol)
        evidence = f"3x3 trace identity fails: tr(*xx**x) = {lhs:.6g}, tr(x**xx*) = {rhs:.6g}"
        if not ok:
            evidence += f"; first violating trace word '{word}'"
        return Decision(NO, evidence=evidence, violating_word=word)
    if n >= 4:
        ok, word = specht_bounded(t, t.T, budget or default_budget(n), tol)
        if not ok:
            return Decision(NO, evidence=f"trace word '{word}' differs between T and T^t", violating_word=word)
    return None


def _search(t: np.ndarray, tol: ToleranceConfig, sign: int, kind: str) -> Decision:
    found, dim, margin = find_intertwining_unitary(t, t.T, tol, sign)
    what = {0: "joint Sylvester kernel", 1: "symmetric slice of the joint kernel", -1: "skew slice of the joint kernel"}[sign]
    if dim == 0:
        return Decision(NO, evidence=f"{what} is empty", kernel_dim=0, cutoff_margin=margin)
    if found is None:
        return Decision(
            UNDETERMINED,
            evidence=f"no unitary found in the {dim}-dimensional {what}",
            kernel_dim=dim,
            cutoff_margin=margin,
        )
    u, _ = found
    evidence = f"unitary found in the {dim}-dimensional {what}"
    cert = make_certificate(t, u, kind, evidence, tol)
    if cert.residual > tol.eps_residual:
        return Decision(UNDETERMINED, evidence=f"witness residual {cert.residual:.2e} too large",
                        kernel_dim=dim, cutoff_margin=margin)
    return Decision(YES, cert, evidence, kernel_dim=dim, cutoff_margin=margin)


def _trivial(t: np.ndarray, kind: str, tol: ToleranceConfig) -> Decision:
    u = np.eye(1, dtype=complex)
    return Decision(YES, make_certificate(t, u, kind, "1x1 matrices are symmetric", tol), "1x1 matrices are symmetric")


def is_uet(t, tol: ToleranceConfig = DEFAULT_TOL, budget: int | None = None) -> Decision:
    """Is ``t`` unitarily equivalent to its transpose?"""
    t = as_matrix(t)
    n = t.shape[0]
    if n == 1:
        return _trivial(t, "uet", tol)
    if n == 2:
        # every 2x2 matrix is UECSM; the search only supplies the witness
        return _search(t, tol, 0, "uet")
    disproof = _disproof(t, tol, budget)
    if disproof is not None:
        return disproof
    return _search(t, tol, 0, "uet")


def is_uecsm(t, tol: ToleranceConfig = DEFAULT_TOL, budget: int | None = None) -> Decision:
    """Is ``t`` unitarily equivalent to a complex symmetric matrix?"""
    t = as_matrix(t)
    if t.shape[0] == 1:
        return _trivial(t, "uecsm", tol)
    disproof = _disproof(t, tol, budget)
    if disproof is not None:
        disproof.evidence = "not UET: " + disproof.evidence
        return disproof
    return _search(t, tol, 1, "uecsm")


def is_ueasm(t, tol: ToleranceConfig = DEFAULT_TOL, budget: int | None = None) -> Decision:
    """Is ``t`` unitarily equivalent to an antiskewsymmetric matrix?"""
    t = as_matrix(t)
    if t.shape[0] % 2:
        return Decision(NO, evidence="odd dimension admits no skew-symmetric unitary")
    disproof = _disproof(t, tol, budget)
    if disproof is not None:
        disproof.evidence = "not UET: " + disproof.evidence
        return disproof
    return _search(t, tol, -1, "ueasm")


def classify_irreducible_uet(t, cert: UetCertificate, tol: ToleranceConfig = DEFAULT_TOL) -> str:
    """``"uecsm"`` or ``"ueasm"`` from the sign of ``U conj(U)`` for irreducible ``t``."""
    t = as_matrix(t)
    n = t.shape[0]
    u = np.asarray(cert.u, dtype=complex)
    v = u @ u.conj()
    alpha = np.trace(v) / n
    if fro(v - alpha * np.eye(n)) > tol.eps_residual * np.sqrt(n):
        raise NotScalar("U conj(U) is not scalar: matrix reducible or certificate invalid")
    if abs(alpha - 1) <= tol.eps_residual * 10:
        return "uecsm"
    if abs(alpha + 1) <= tol.eps_residual * 10:
        if n % 2:
            raise OddDimensionSkew("U conj(U) = -I is impossible in odd dimension")
        return "ueasm"
    raise NotScalar(f"U conj(U) = {alpha:.6g} I with alpha not in {{+1, -1}}")
