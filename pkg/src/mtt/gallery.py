"""Named matrices and seeded random instances of each structural class."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz

from .antilinear import Anticonjugation, AsmShape, Conjugation
from .errors import InvalidSpec
from .linalg import block_diag, omega, random_unitary

KINDS = (
    "halmos",
    "george",
    "asm_irreducible",
    "random_csm",
    "random_asm",
    "random_unitary",
    "random_conjugation",
    "random_anticonjugation",
    "toeplitz_random",
    "direct_sum",
    "scrambled",
)

HALMOS = np.array([[0, 1, 0], [0, 0, 2], [0, 0, 0]], dtype=complex)
GEORGE = np.array([[1, 0, 0], [4, 3, 0], [0, 2, 5]], dtype=complex)

# a selfadjoint matrix commuting with the d = 3 member of the asm_irreducible family
_X3 = np.array([[-1, 1, 0.5], [1, 0.5, 1], [0.5, 1, -1]])
COMMUTING_6X6 = np.block([[_X3, np.eye(3)], [np.eye(3), -_X3.T]]).astype(complex)


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate.

    ``d`` is the block size for ``asm_irreducible`` / ``random_asm`` /
    ``random_anticonjugation``; ``n`` the size for the other random kinds.
    ``operands`` holds nested specs for ``direct_sum`` and ``scrambled``.
    """

    kind: str
    d: int | None = None
    n: int | None = None
    seed: int = 0
    operands: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "operands", tuple(self.operands))
        for op in self.operands:
            if not isinstance(op, GeneratorSpec):
                raise InvalidSpec("operands must be GeneratorSpec instances")
        if self.kind == "asm_irreducible" and (self.d is None or self.d < 4):
            raise InvalidSpec("asm_irreducible needs d >= 4")
        if self.kind in ("random_asm", "random_anticonjugation"):
            size = self.n if self.d is None else 2 * self.d
            if size is None or size < 2 or size % 2:
                raise InvalidSpec(f"{self.kind} needs an even size (give d, or an even n)")
        if self.kind in ("random_csm", "random_unitary", "random_conjugation", "toeplitz_random"):
            if self.n is None or self.n < 1:
                raise InvalidSpec(f"{self.kind} needs n >= 1")
        if self.kind in ("direct_sum", "scrambled") and not self.operands:
            raise InvalidSpec(f"{self.kind} needs at least one operand")

    @property
    def half(self) -> int:
        return self.d if self.d is not None else self.n // 2


def _gaussian(rng, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def asm_irreducible(d: int) -> np.ndarray:
    """``[[A, B], [0, A]]`` with ``A = diag(1..d)`` and ``B`` = +1 above, -1 below the diagonal."""
    a = np.diag(np.arange(1, d + 1)).astype(complex)
    b = np.triu(np.ones((d, d)), 1) - np.tril(np.ones((d, d)), -1)
    return np.block([[a, b], [np.zeros((d, d)), a]]).astype(complex)


def _matrix(spec: GeneratorSpec, what: str) -> np.ndarray:
    out = generate(spec)
    if not isinstance(out, np.ndarray):
        raise InvalidSpec(f"{what} operands must generate matrices, got {spec.kind}")
    return out


def generate(spec: GeneratorSpec):
    """Matrix for ``spec``; a Conjugation / Anticonjugation for those two kinds."""
    kind = spec.kind
    if kind == "halmos":
        return HALMOS.copy()
    if kind == "george":
        return GEORGE.copy()
    if kind == "asm_irreducible":
        return asm_irreducible(spec.d)

    rng = np.random.default_rng(spec.seed)
    if kind == "random_csm":
        g = _gaussian(rng, (spec.n, spec.n))
        return (g + g.T) / 2
    if kind == "random_asm":
        d = spec.half
        a = _gaussian(rng, (d, d))
        b = _gaussian(rng, (d, d))
        dd = _gaussian(rng, (d, d))
        return AsmShape(d, a, b - b.T, dd - dd.T).assemble()
    if kind == "random_unitary":
        return random_unitary(spec.n, rng)
    if kind == "random_conjugation":
        w = random_unitary(spec.n, rng)
        return Conjugation(w @ w.T)
    if kind == "random_anticonjugation":
        w = random_unitary(2 * spec.half, rng)
        return Anticonjugation(w @ omega(spec.half) @ w.T)
    if kind == "toeplitz_random":
        col = _gaussian(rng, spec.n)
        row = _gaussian(rng, spec.n)
        row[0] = col[0]
        return toeplitz(col, row)

    parts = [_matrix(op, kind) for op in spec.operands]
    total = block_diag(*parts)
    if kind == "direct_sum":
        return total
    # scrambled: one shared unitary from a stream independent of the operands' seeds
    scrambler = np.random.default_rng(np.random.SeedSequence(spec.seed).spawn(1)[0])
    u = random_unitary(total.shape[0], scrambler)
    return u @ total @ u.conj().T


def reversal(n: int) -> np.ndarray:
    """The permutation matrix reversing coordinate order; it transposes every Toeplitz matrix."""
    return np.eye(n, dtype=complex)[::-1]


def regression_vectors() -> list:
    """Fixed test pairs ``(matrix, expected)`` with ``expected`` a dict of claims."""
    d3 = np.diag([1, 2, 3]).astype(complex)
    b3 = np.triu(np.ones((3, 3)), 1) - np.tril(np.ones((3, 3)), -1)
    t3 = np.block([[d3, b3], [np.zeros((3, 3)), d3]]).astype(complex)
    return [
        (t3, {"commutes_with": COMMUTING_6X6, "commutation_tol": 1e-12}),
        (HALMOS.copy(), {"is_uet": "no"}),
        (GEORGE.copy(), {"is_uet": "no"}),
    ]
