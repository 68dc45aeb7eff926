"""Canonical decomposition of a UET matrix into type I / II / III summands.

Pipeline, starting from a witness ``U`` with ``T = U T^t U^*``:

1. ``V = U conj(U)`` is unitary, commutes with ``T`` and has spectrum
   {+1, -1 (even multiplicity), conjugate pairs}.  Diagonalize it with the
   blocks ordered +1, -1, then (lambda, conj(lambda)) pairs.
2. In that basis ``Q = W U W^t`` is block structured: symmetric on +1,
   skew on -1, and anti-diagonal ``[[0, lambda X^t], [X, 0]]`` on each pair.
3. ``W T W^*`` is block diagonal along the same partition.  The +1 block
   carries the conjugation ``Q_+ J``, the -1 block the anticonjugation
   ``Q_- J``, and each pair slot is ``A (+) X A^t X^*``.
4. Blocks are refined recursively into irreducible symmetric matrices
   (type I), irreducible antiskewsymmetric matrices (type II) and
   ``A (+) A^t`` with ``A`` irreducible and not UET (type III).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .antilinear import (
    Anticonjugation,
    Conjugation,
    asm_identity_residual,
    realize_asm,
    realize_csm,
)
from .commutant import decompose_irreducibles, hermitian_commutant, is_irreducible, spectral_split, split_once
from .errors import (
    BlockLeakage,
    DecompositionInvalid,
    InvalidConjugation,
    MttError,
    NotUET,
    QStructureViolated,
    RefinementStalled,
    SpectrumNotConjugateSymmetric,
    Undetermined,
)
from .intertwiner import (
    NO,
    UNDETERMINED,
    YES,
    UetCertificate,
    classify_irreducible_uet,
    find_intertwining_unitary,
    is_uet,
    make_certificate,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    ToleranceConfig,
    adjoint,
    as_matrix,
    block_diag,
    eig_normal,
    fro,
    null_space,
    omega,
    subspace_intersect,
)

KIND_ORDER = {"I": 0, "II": 1, "III": 2}


@dataclass
class SpectralBlockStructure:
    """Block layout of ``V = U conj(U) = w^* D w``."""

    plus_dim: int
    minus_dim: int
    pairs: list
    w: np.ndarray

    def slots(self):
        """``[(label, start, size)]`` in the order of the diagonal of D."""
        out, start = [], 0
        for label, size in (("+", self.plus_dim), ("-", self.minus_dim)):
            out.append((label, start, size))
            start += size
        for i, (_, size) in enumerate(self.pairs):
            out.append((f"l{i}", start, size))
            out.append((f"c{i}", start + size, size))
            start += 2 * size
        return out

    def diagonal(self) -> np.ndarray:
        parts = [np.ones(self.plus_dim), -np.ones(self.minus_dim)]
        for lam, size in self.pairs:
            parts += [np.full(size, lam), np.full(size, np.conj(lam))]
        return np.concatenate(parts).astype(complex)


@dataclass
class StructuredQ:
    q_plus: np.ndarray
    q_minus: np.ndarray
    x_blocks: list
    q: np.ndarray


@dataclass
class ExtractedBlocks:
    t_plus: np.ndarray | None
    t_minus: np.ndarray | None
    a_blocks: list
    x_blocks: list

    def __iter__(self):
        return iter((self.t_plus, self.t_minus, self.a_blocks))


@dataclass
class Summand:
    kind: str
    matrix: np.ndarray
    certificate: UetCertificate
    factor: np.ndarray | None = None
    provisional: bool = False

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass
class CanonicalDecomposition:
    global_w: np.ndarray
    summands: list
    residual: float = field(default=np.nan)
    certificate: UetCertificate | None = None

    def kinds(self) -> list:
        return sorted(((s.kind, s.size) for s in self.summands), key=lambda ks: (KIND_ORDER[ks[0]], ks[1]))

    def assembled(self) -> np.ndarray:
        return block_diag(*[s.matrix for s in self.summands])


# -- spectral structure --------------------------------------------------------------


def _clusters(values: np.ndarray, radius: float) -> list:
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def spectral_structure(u, tol: ToleranceConfig = DEFAULT_TOL) -> SpectralBlockStructure:
    u = as_matrix(u)
    n = u.shape[0]
    evals, p = eig_normal(u @ u.conj(), tol)
    if abs(np.prod(evals) - 1) > tol.eps_residual:
        raise SpectrumNotConjugateSymmetric(f"det(U conj U) = {np.prod(evals):.6g} != 1")
    plus, minus, upper, lower = [], [], [], []
    for group in _clusters(evals, tol.eps_cluster):
        mean = evals[group].mean()
        if abs(mean.imag) <= tol.eps_cluster:
            if abs(mean - 1) <= 0.5:
                plus += group
            elif abs(mean + 1) <= 0.5:
                minus += group
            else:
                raise SpectrumNotConjugateSymmetric(f"real eigenvalue {mean:.6g} of U conj(U) is not +-1")
        elif mean.imag > 0:
            upper.append((mean, group))
        else:
            lower.append((mean, group))
    if len(minus) % 2:
        raise SpectrumNotConjugateSymmetric("eigenvalue -1 has odd multiplicity")
    if len(upper) != len(lower):
        raise SpectrumNotConjugateSymmetric("unpaired non-real eigenvalues")
    upper.sort(key=lambda mg: np.angle(mg[0]))
    order = list(plus) + list(minus)
    pairs = []
    remaining = list(lower)
    for lam, group in upper:
        j = int(np.argmin([abs(m - np.conj(lam)) for m, _ in remaining]))
        mate_mean, mate = remaining.pop(j)
        if len(mate) != len(group) or abs(mate_mean - np.conj(lam)) > 10 * tol.eps_cluster:
            raise SpectrumNotConjugateSymmetric(f"eigenvalue {lam:.6g} has no conjugate partner of equal size")
        pairs.append((complex(lam), len(group)))
        order += group + mate
    assert len(order) == n
    return SpectralBlockStructure(len(plus), len(minus), pairs, adjoint(p[:, order]))


def _slot_index(s: SpectralBlockStructure) -> dict:
    return {label: slice(start, start + size) for label, start, size in s.slots()}


def structure_q(u, s: SpectralBlockStructure, tol: ToleranceConfig = DEFAULT_TOL) -> StructuredQ:
    u = as_matrix(u)
    n = u.shape[0]
    q = s.w @ u @ s.w.T
    idx = _slot_index(s)
    allowed = [("+", "+"), ("-", "-")]
    for i in range(len(s.pairs)):
        allowed += [(f"l{i}", f"c{i}"), (f"c{i}", f"l{i}")]
    mask = np.zeros((n, n), dtype=bool)
    for r, c in allowed:
        mask[idx[r], idx[c]] = True
    bound = tol.eps_residual * np.sqrt(n)
    off = fro(np.where(mask, 0, q))
    if off > bound:
        raise QStructureViolated(f"Q has {off:.3e} mass outside the block pattern")
    q_plus = q[idx["+"], idx["+"]]
    q_minus = q[idx["-"], idx["-"]]
    if fro(q_plus - q_plus.T) > bound or fro(q_minus + q_minus.T) > bound:
        raise QStructureViolated("Q_+ not symmetric or Q_- not skew-symmetric")
    x_blocks = []
    for i, (lam, _) in enumerate(s.pairs):
        y = q[idx[f"l{i}"], idx[f"c{i}"]]
        x = q[idx[f"c{i}"], idx[f"l{i}"]]
        if fro(y - lam * x.T) > bound:
            raise QStructureViolated(f"pair {i}: Y != lambda X^t")
        x_blocks.append((x, lam))
    return StructuredQ((q_plus + q_plus.T) / 2, (q_minus - q_minus.T) / 2, x_blocks, q)


def extract_blocks(t, s: SpectralBlockStructure, q: StructuredQ, tol: ToleranceConfig = DEFAULT_TOL) -> ExtractedBlocks:
    t = as_matrix(t)
    n = t.shape[0]
    tt = s.w @ t @ adjoint(s.w)
    idx = _slot_index(s)
    bound = tol.eps_residual * max(fro(t), np.finfo(float).tiny)
    diag_mask = np.zeros((n, n), dtype=bool)
    for sl in idx.values():
        diag_mask[sl, sl] = True
    leak = fro(np.where(diag_mask, 0, tt))
    if leak > bound:
        raise BlockLeakage(f"W T W* has {leak:.3e} mass off the block diagonal")
    a_blocks = []
    for i, (x, _) in enumerate(q.x_blocks):
        a = tt[idx[f"l{i}"], idx[f"l{i}"]]
        partner = tt[idx[f"c{i}"], idx[f"c{i}"]]
        if fro(partner - x @ a.T @ adjoint(x)) > bound:
            raise BlockLeakage(f"pair {i}: partner block != X A^t X*")
        a_blocks.append(a)
    t_plus = tt[idx["+"], idx["+"]] if s.plus_dim else None
    t_minus = tt[idx["-"], idx["-"]] if s.minus_dim else None
    return ExtractedBlocks(t_plus, t_minus, a_blocks, q.x_blocks)


# -- refinement ----------------------------------------------------------------------


def _swap(d: int) -> np.ndarray:
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([[zero, eye], [eye, zero]]).astype(complex)


def _type_i(s: np.ndarray, tol, evidence="irreducible complex symmetric") -> Summand:
    n = s.shape[0]
    return Summand("I", s, make_certificate(s, np.eye(n, dtype=complex), "uecsm", evidence, tol))


def _type_ii(m: np.ndarray, tol, evidence="irreducible antiskewsymmetric") -> Summand:
    n = m.shape[0]
    return Summand("II", m, make_certificate(m, omega(n // 2), "ueasm", evidence, tol))


def _type_iii(a: np.ndarray, evidence: str, provisional: bool, tol) -> Summand:
    d = a.shape[0]
    m = block_diag(a, a.T)
    cert = make_certificate(m, _swap(d), "uecsm", evidence, tol)
    return Summand("III", m, cert, factor=a, provisional=provisional)


def _frame_image(op, frame: np.ndarray) -> np.ndarray:
    factor = op.u if isinstance(op, Conjugation) else op.s
    return factor @ frame.conj()


def _invariant_reducing_subspace(t, op, basis, tol) -> Subspace | None:
    """A proper reducing subspace of ``t`` mapped onto itself by ``op``, if any."""
    n = t.shape[0]
    split = split_once(t, tol, basis)
    for m in (split.p, split.p.complement()):
        image = Subspace(n, _frame_image(op, m.frame))
        h = subspace_intersect(m, image, tol)
        if 0 < h.dim < n:
            return h
    # the op-fixed part of the commutant yields invariant spectral subspaces
    elements = basis.elements
    gram = np.array([[np.real(np.vdot(ei, op.operator_image(ej))) for ej in elements] for ei in elements])
    fixed = null_space(gram - np.eye(len(elements)), tol).frame.real
    for c in fixed.T:
        q = sum(ci * ei for ci, ei in zip(c, elements))
        q0 = q - np.trace(q).real / n * np.eye(n)
        if fro(q0) > tol.eps_residual * max(fro(q), 1e-300) * 1e3:
            try:
                return spectral_split(t, q0, tol).p
            except MttError:
                continue
    return None


def _refine(t: np.ndarray, op, tol: ToleranceConfig):
    """Shared recursion for conjugation (type I leaves) and anticonjugation (type II leaves)."""
    n = t.shape[0]
    basis = hermitian_commutant(t, tol)
    if basis.dim_real == 1:
        if isinstance(op, Conjugation):
            s, q = realize_csm(t, op, tol)
            return [_type_i(s, tol)], q
        shape, q = realize_asm(t, op, tol)
        return [_type_ii(shape.assemble(), tol)], q

    h1 = _invariant_reducing_subspace(t, op, basis, tol)
    if h1 is not None:
        f1 = h1.frame
        f2 = h1.complement().frame
        w = np.hstack([f1, f2])
        tw = adjoint(w) @ t @ w
        k = f1.shape[1]
        if max(fro(tw[:k, k:]), fro(tw[k:, :k])) > tol.eps_residual * fro(t):
            raise RefinementStalled("invariant subspace does not reduce the block")
        try:
            op1, op2 = op.restrict(f1), op.restrict(f2)
        except InvalidConjugation as exc:
            raise RefinementStalled(f"restricted antilinear map invalid: {exc}") from exc
        s1, w1 = _refine(tw[:k, :k], op1, tol)
        s2, w2 = _refine(tw[k:, k:], op2, tol)
        return s1 + s2, w @ block_diag(w1, w2)

    # every reducing subspace meets its image trivially: t is A (+) A^t
    split = split_once(t, tol, basis)
    if 2 * split.p.dim != n:
        raise RefinementStalled(f"reducing subspace of dimension {split.p.dim} in the A (+) A^t branch (n = {n})")
    a, b = split.t1, split.t2
    found, _, _ = find_intertwining_unitary(b, a.T, tol)
    if found is None:
        raise RefinementStalled("complementary block is not unitarily equivalent to A^t")
    z = found[0]
    w0 = split.w @ block_diag(np.eye(a.shape[0], dtype=complex), z)
    summands, wa = refine_aat_block(a, tol)
    return summands, w0 @ wa


def refine_csm_block(t, c: Conjugation, tol: ToleranceConfig = DEFAULT_TOL):
    """Split ``t = C t^* C`` into type I summands and A (+) A^t pieces.

    Returns ``(summands, w)`` with ``w^* t w`` the direct sum of the summand matrices.
    """
    return _refine(as_matrix(t), c, tol)


def refine_asm_block(t, k: Anticonjugation, tol: ToleranceConfig = DEFAULT_TOL):
    """Same as :func:`refine_csm_block` for ``t = -K t^* K``; leaves are type II."""
    return _refine(as_matrix(t), k, tol)


def refine_aat_block(a, tol: ToleranceConfig = DEFAULT_TOL):
    """Summands of ``a (+) a^t``; returns ``(summands, w)`` like the other refiners."""
    a = as_matrix(a)
    d = a.shape[0]
    wd, blocks = decompose_irreducibles(a, tol)
    base = block_diag(wd, wd.conj())
    order, start = [], 0
    for blk in blocks:
        k = blk.shape[0]
        order += list(range(start, start + k)) + list(range(d + start, d + start + k))
        start += k
    base = base[:, order]
    summands, subs = [], []
    for blk in blocks:
        k = blk.shape[0]
        decision = is_uet(blk, tol)
        if decision.verdict == YES:
            cls = classify_irreducible_uet(blk, decision.certificate, tol)
            if cls == "uecsm":
                s, q = realize_csm(blk, Conjugation(decision.certificate.u), tol)
                summands += [_type_i(s, tol), _type_i(s, tol)]
            else:
                shape, q = realize_asm(blk, Anticonjugation(decision.certificate.u), tol)
                m = shape.assemble()
                summands += [_type_ii(m, tol), _type_ii(m.T, tol)]
            subs.append(block_diag(q, q.conj()))
        else:
            provisional = decision.verdict == UNDETERMINED
            note = ("provisional: UET status of factor undetermined; " if provisional else "factor not UET: ")
            summands.append(_type_iii(blk, note + decision.evidence, provisional, tol))
            subs.append(np.eye(2 * k, dtype=complex))
    return summands, base @ block_diag(*subs)


# -- full pipeline -------------------------------------------------------------------


def _sort_key(summand: Summand):
    m = np.round(summand.matrix, 12)
    return (KIND_ORDER[summand.kind], summand.size, tuple(np.column_stack([m.real.ravel(), m.imag.ravel()]).ravel()))


def validate_decomposition(t, dec: CanonicalDecomposition, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Check every structural invariant; returns the reconstruction residual."""
    t = as_matrix(t)
    n = t.shape[0]
    w = dec.global_w
    if fro(adjoint(w) @ w - np.eye(n)) > tol.eps_residual * np.sqrt(n):
        raise DecompositionInvalid("global_w is not unitary")
    scale = max(fro(t), np.finfo(float).tiny)
    residual = fro(adjoint(w) @ t @ w - dec.assembled()) / scale
    if residual > tol.eps_residual:
        raise DecompositionInvalid(f"reconstruction residual {residual:.3e}")
    for s in dec.summands:
        m = s.matrix
        local = tol.eps_residual * max(fro(m), 1.0)
        if s.certificate.residual > tol.eps_residual:
            raise DecompositionInvalid(f"type {s.kind} certificate residual {s.certificate.residual:.3e}")
        if s.kind == "I":
            if fro(m - m.T) > local:
                raise DecompositionInvalid("type I summand is not symmetric")
            if s.size > 1 and not is_irreducible(m, tol):
                raise DecompositionInvalid("type I summand is reducible")
        elif s.kind == "II":
            if s.size % 2 or s.size < 8:
                raise DecompositionInvalid(f"type II summand of size {s.size}")
            if asm_identity_residual(m) > local:
                raise DecompositionInvalid("type II summand is not antiskewsymmetric")
            if not is_irreducible(m, tol):
                raise DecompositionInvalid("type II summand is reducible")
        else:
            d = s.size // 2
            if s.size % 2 or s.size < 6:
                raise DecompositionInvalid(f"type III summand of size {s.size}")
            if fro(m - block_diag(m[:d, :d], m[:d, :d].T)) > local:
                raise DecompositionInvalid("type III summand is not of the form A (+) A^t")
    return residual


def decompose_canonical(t, tol: ToleranceConfig = DEFAULT_TOL, budget: int | None = None) -> CanonicalDecomposition:
    t = as_matrix(t)
    decision = is_uet(t, tol, budget)
    if decision.verdict == NO:
        raise NotUET(decision.evidence)
    if decision.verdict == UNDETERMINED:
        raise Undetermined(decision.evidence)
    u = decision.certificate.u

    failure = None
    for attempt in range(4):
        ctol = tol.replace(eps_cluster=tol.eps_cluster / 10**attempt)
        try:
            structure = spectral_structure(u, ctol)
            q = structure_q(u, structure, ctol)
            blocks = extract_blocks(t, structure, q, ctol)
            break
        except (QStructureViolated, BlockLeakage, SpectrumNotConjugateSymmetric) as exc:
            failure = exc
    else:
        raise failure

    parts = []
    if blocks.t_plus is not None:
        parts.append(refine_csm_block(blocks.t_plus, Conjugation(q.q_plus), tol))
    if blocks.t_minus is not None:
        parts.append(refine_asm_block(blocks.t_minus, Anticonjugation(q.q_minus), tol))
    for a, (x, _) in zip(blocks.a_blocks, blocks.x_blocks):
        summands, wa = refine_aat_block(a, tol)
        slot = block_diag(np.eye(a.shape[0], dtype=complex), x)
        parts.append((summands, slot @ wa))

    summands = [s for part, _ in parts for s in part]
    global_w = adjoint(structure.w) @ block_diag(*[w for _, w in parts])

    # deterministic output order; permute the basis columns to match
    starts = np.cumsum([0] + [s.size for s in summands])
    order = sorted(range(len(summands)), key=lambda i: _sort_key(summands[i]))
    columns = np.concatenate([np.arange(starts[i], starts[i + 1]) for i in order])
    dec = CanonicalDecomposition(global_w[:, columns], [summands[i] for i in order], certificate=decision.certificate)
    dec.residual = validate_decomposition(t, dec, tol)
    return dec


def global_symmetric_realization(t, dec: CanonicalDecomposition, tol: ToleranceConfig = DEFAULT_TOL):
    """Symmetric form of ``t`` assembled from a decomposition without type II summands.

    Type I summands are symmetric already; each type III summand ``A (+) A^t``
    is symmetric for the swap conjugation.  Returns ``(s, q)`` from
    :func:`realize_csm` with ``s = q^* t q`` symmetric.
    """
    if any(s.kind == "II" for s in dec.summands):
        raise ValueError("type II summands are not UECSM")
    factors = [np.eye(s.size, dtype=complex) if s.kind == "I" else _swap(s.size // 2) for s in dec.summands]
    u = dec.global_w @ block_diag(*factors) @ dec.global_w.T
    return realize_csm(t, Conjugation(u), tol)
