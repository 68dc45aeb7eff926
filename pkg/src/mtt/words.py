"""Trace-word invariants of unitary similarity.

A word is a string over ``{"x", "*"}``: ``"x"`` stands for the matrix X and
``"*"`` for its adjoint, read left to right, so ``"*xx**x"`` is
X* X X X* X* X.  Traces of words are unchanged by ``X -> W X W*``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetTooLarge, WrongDimension
from .linalg import DEFAULT_TOL, ToleranceConfig, adjoint, as_matrix, fro

LETTERS = ("x", "*")
WORD_CAP = 2**20

TWO_BY_TWO_WORDS = ("x", "xx", "*x")
THREE_BY_THREE_WORDS = ("x", "xx", "xxx", "*x", "*xx", "**xx", "*xx**x")
UECSM_LHS_WORD = "*xx**x"
UECSM_RHS_WORD = "x**xx*"


@dataclass(frozen=True)
class TraceProfile:
    dim_class: str
    values: tuple
    word_set: tuple

    def __post_init__(self):
        expected = {"2": 3, "3": 7}.get(self.dim_class)
        if expected is not None and len(self.values) != expected:
            raise ValueError(f"a {self.dim_class}x{self.dim_class} profile has {expected} entries")

    def max_difference(self, other: "TraceProfile") -> float:
        return float(np.max(np.abs(np.subtract(self.values, other.values))))


def word_matrix(x, word: str) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    letters = {"x": x, "*": adjoint(x)}
    out = np.eye(x.shape[0], dtype=complex)
    for ch in word:
        out = out @ letters[ch]
    return out


def trace_word(x, word: str) -> complex:
    return complex(np.trace(word_matrix(x, word)))


def _require(x, n: int) -> np.ndarray:
    x = as_matrix(x)
    if x.shape[0] != n:
        raise WrongDimension(f"expected a {n}x{n} matrix, got {x.shape[0]}x{x.shape[0]}")
    return x


def profile_2x2(x) -> TraceProfile:
    """(tr X, tr X^2, tr X*X)."""
    x = _require(x, 2)
    return TraceProfile("2", tuple(trace_word(x, w) for w in TWO_BY_TWO_WORDS), TWO_BY_TWO_WORDS)


def profile_3x3(x) -> TraceProfile:
    """The seven-word complete invariant of 3x3 unitary similarity."""
    x = _require(x, 3)
    return TraceProfile("3", tuple(trace_word(x, w) for w in THREE_BY_THREE_WORDS), THREE_BY_THREE_WORDS)


def uecsm_sides_3x3(x) -> tuple[complex, complex]:
    x = _require(x, 3)
    return trace_word(x, UECSM_LHS_WORD), trace_word(x, UECSM_RHS_WORD)


def uecsm_test_3x3(x, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """A 3x3 matrix is UECSM (equivalently UET) iff the two length-6 words agree."""
    x = _require(x, 3)
    lhs, rhs = uecsm_sides_3x3(x)
    return abs(lhs - rhs) <= tol.eps_residual * (1 + fro(x) ** 6)


def words_of_length(length: int):
    """All words of a given length, lexicographic with x < *."""
    level = [""]
    for _ in range(length):
        level = [w + ch for w in level for ch in LETTERS]
    return level


def default_budget(n: int) -> int:
    return 6 if n == 3 else 8


def specht_bounded(a, b, max_len: int, tol: ToleranceConfig = DEFAULT_TOL, cap: int = WORD_CAP):
    """Compare trace words of ``a`` and ``b`` up to ``max_len`` letters.

    Returns ``(equal_so_far, first_violating_word)``.  A mismatch proves the
    two matrices are not unitarily similar; agreement below the 2n^2 bound is
    only evidence.  Both matrices are rescaled by the larger Frobenius norm so
    the comparison threshold is ``eps_residual * ||.||_F^len`` in the
    original scale.
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise WrongDimension("specht_bounded needs matrices of equal size")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if 2 ** (max_len + 1) > cap:
        raise BudgetTooLarge(f"2^{max_len + 1} words exceeds the cap of {cap}")
    scale = max(fro(a), fro(b))
    if scale == 0:
        return True, None
    a = a / scale
    b = b / scale
    letters_a = {"x": a, "*": adjoint(a)}
    letters_b = {"x": b, "*": adjoint(b)}
    n = a.shape[0]
    level = [("", np.eye(n, dtype=complex), np.eye(n, dtype=complex))]
    for _ in range(max_len):
        nxt = []
        for word, pa, pb in level:
            for ch in LETTERS:
                wa = pa @ letters_a[ch]
                wb = pb @ letters_b[ch]
                if abs(np.trace(wa) - np.trace(wb)) > tol.eps_residual:
                    return False, word + ch
                nxt.append((word + ch, wa, wb))
        level = nxt
    return True, None
