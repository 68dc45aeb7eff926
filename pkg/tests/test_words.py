import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtt.errors import BudgetTooLarge, WrongDimension
from mtt.gallery import GEORGE, HALMOS
from mtt.intertwiner import NO, is_uet
from mtt.linalg import random_unitary
from mtt.words import (
    UECSM_LHS_WORD,
    UECSM_RHS_WORD,
    default_budget,
    profile_2x2,
    profile_3x3,
    specht_bounded,
    trace_word,
    uecsm_sides_3x3,
    uecsm_test_3x3,
    words_of_length,
)

seeds = st.integers(0, 2**32 - 1)


def gauss(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def naive_trace(m, word):
    """Independent oracle: explicit left-to-right product."""
    out = np.eye(m.shape[0], dtype=complex)
    for ch in word:
        out = out @ (m if ch == "x" else np.conj(m).T)
    return np.trace(out)


def test_profile_2x2_examples():
    assert profile_2x2(np.eye(2)).values == (2, 2, 2)
    assert profile_2x2(np.zeros((2, 2))).values == (0, 0, 0)
    assert profile_2x2(np.array([[0, 1], [0, 0]])).values == (0, 0, 1)


def test_profile_3x3_examples():
    assert profile_3x3(np.eye(3)).values == (3,) * 7
    assert profile_3x3(HALMOS).values[6] == naive_trace(HALMOS, "*xx**x") == 4


def test_profiles_check_dimension():
    with pytest.raises(WrongDimension):
        profile_2x2(np.eye(3))
    with pytest.raises(WrongDimension):
        profile_3x3(np.eye(2))
    with pytest.raises(WrongDimension):
        uecsm_test_3x3(np.eye(4))


def test_word_notation():
    rng = np.random.default_rng(0)
    m = gauss(rng, 3)
    for word in ("x", "*", "x*xx**x", UECSM_LHS_WORD, UECSM_RHS_WORD):
        assert trace_word(m, word) == pytest.approx(naive_trace(m, word))


def test_uecsm_test_examples():
    lhs, rhs = uecsm_sides_3x3(HALMOS)
    assert (lhs, rhs) == (4, 16)
    assert not uecsm_test_3x3(HALMOS)
    assert not uecsm_test_3x3(GEORGE)
    g = gauss(np.random.default_rng(1), 3)
    assert uecsm_test_3x3(g + g.T)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_profiles_are_unitary_invariants(seed):
    rng = np.random.default_rng(seed)
    for n, profile in ((2, profile_2x2), (3, profile_3x3)):
        x = gauss(rng, n)
        w = random_unitary(n, rng)
        a, b = profile(x), profile(w @ x @ w.conj().T)
        assert a.max_difference(b) <= 1e-8 * (1 + np.linalg.norm(x) ** 6)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_first_six_profile_words_are_transpose_invariant(seed):
    x = gauss(np.random.default_rng(seed), 3)
    a, b = profile_3x3(x).values, profile_3x3(x.T).values
    assert np.allclose(a[:6], b[:6], rtol=1e-9, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_uecsm_test_is_similarity_invariant(seed):
    rng = np.random.default_rng(seed)
    x = gauss(rng, 3)
    if rng.random() < 0.5:
        x = x + x.T
    w = random_unitary(3, rng)
    assert uecsm_test_3x3(x) == uecsm_test_3x3(w @ x @ w.conj().T)


def test_word_order():
    assert words_of_length(2) == ["xx", "x*", "*x", "**"]
    assert len(words_of_length(5)) == 32


def test_default_budget():
    assert default_budget(3) == 6 and default_budget(5) == 8


def test_specht_examples():
    rng = np.random.default_rng(2)
    a = gauss(rng, 4)
    assert specht_bounded(a, a, 6) == (True, None)
    w = random_unitary(4, rng)
    assert specht_bounded(a, w @ a @ w.conj().T, 6)[0]


def test_specht_halmos_first_violation():
    ok, word = specht_bounded(HALMOS, HALMOS.T, 6)
    assert not ok and len(word) == 6
    # oracle: brute-force enumeration in the same order
    first = next(
        w for length in range(1, 7) for w in words_of_length(length)
        if abs(naive_trace(HALMOS, w) - naive_trace(HALMOS.T, w)) > 1e-9
    )
    assert word == first
    # the two-word identity is itself a witness, through cyclic rotation
    assert naive_trace(HALMOS, UECSM_LHS_WORD) != naive_trace(HALMOS.T, UECSM_LHS_WORD)


def test_specht_budget_cap():
    with pytest.raises(BudgetTooLarge):
        specht_bounded(np.eye(2), np.eye(2), 20)
    with pytest.raises(ValueError):
        specht_bounded(np.eye(2), np.eye(2), 0)
    with pytest.raises(WrongDimension):
        specht_bounded(np.eye(2), np.eye(3), 3)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(3, 5))
def test_word_disproof_implies_not_uet(seed, n):
    a = gauss(np.random.default_rng(seed), n)
    ok, _ = specht_bounded(a, a.T, 6)
    if not ok:
        assert is_uet(a).verdict == NO
