import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from mtt.errors import NotScalar
from mtt.gallery import HALMOS, GeneratorSpec, asm_irreducible, generate, reversal
from mtt.intertwiner import (
    NO,
    YES,
    UetCertificate,
    classify_irreducible_uet,
    find_unitary_in_span,
    is_ueasm,
    is_uecsm,
    is_uet,
    make_certificate,
    sylvester_kernel,
    sylvester_lift,
    verify_certificate,
)
from mtt.linalg import block_diag, omega, random_unitary

seeds = st.integers(0, 2**32 - 1)


def gauss(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def test_sylvester_kernel_examples():
    assert len(sylvester_kernel(np.eye(3), np.eye(3))) == 9
    assert len(sylvester_kernel(np.diag([1, 2]), np.diag([3, 4]))) == 0
    raw = sylvester_kernel(HALMOS, HALMOS.T)
    oracle = scipy.linalg.null_space(sylvester_lift(HALMOS, HALMOS.T))
    assert len(raw) == oracle.shape[1] > 0
    for x in raw:
        assert np.linalg.norm(HALMOS @ x - x @ HALMOS.T) < 1e-12


def test_sylvester_basis_is_orthonormal():
    basis = sylvester_kernel(np.eye(2), np.eye(2))
    gram = np.array([[np.vdot(a, b) for b in basis] for a in basis])
    assert np.allclose(gram, np.eye(4))


def test_find_unitary_examples():
    # the span is complex, so any unimodular multiple of the identity is a valid answer
    u, res = find_unitary_in_span([np.eye(2) / np.sqrt(2)])
    assert np.allclose(u, u[0, 0] * np.eye(2)) and abs(abs(u[0, 0]) - 1) < 1e-12 and res < 1e-12
    u, _ = find_unitary_in_span([np.diag([1.0, 0]), np.diag([0, 1.0])])
    assert np.allclose(np.abs(np.diag(u)), 1) and np.allclose(u, np.diag(np.diag(u)))
    assert find_unitary_in_span([np.diag([1.0, 0])]) is None
    assert find_unitary_in_span([]) is None


def test_halmos_is_not_uet():
    d = is_uet(HALMOS)
    assert d.verdict == NO and d.certificate is None and d.evidence


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_toeplitz_is_uet(n):
    t = generate(GeneratorSpec("toeplitz_random", n=n, seed=n))
    d = is_uet(t)
    assert d.verdict == YES and d.certificate.residual <= 1e-6
    assert verify_certificate(t, make_certificate(t, reversal(n))) == []


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(2, 4))
def test_a_plus_a_transpose_is_uecsm_and_ueasm(seed, d):
    a = gauss(np.random.default_rng(seed), d)
    t = block_diag(a, a.T)
    for decider, cls in ((is_uet, None), (is_uecsm, "symmetric"), (is_ueasm, "skew")):
        dec = decider(t)
        assert dec.verdict == YES
        assert verify_certificate(t, dec.certificate) == []
        if cls:
            assert dec.certificate.symmetry_class == cls


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_two_by_two_is_uecsm(seed):
    t = gauss(np.random.default_rng(seed), 2)
    dec = is_uecsm(t)
    assert dec.verdict == YES and dec.certificate.symmetry_class == "symmetric"


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(3, 6))
def test_irreducible_csm_is_not_ueasm(seed, n):
    rng = np.random.default_rng(seed)
    g = gauss(rng, n)
    w = random_unitary(n, rng)
    t = w @ (g + g.T) @ w.conj().T
    assert is_uecsm(t).verdict == YES
    assert is_ueasm(t).verdict == NO


def test_ueasm_needs_even_dimension():
    assert is_ueasm(np.eye(3)).verdict == NO


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(3, 6))
def test_verdict_is_unitarily_invariant(seed, n):
    rng = np.random.default_rng(seed)
    t = gauss(rng, n)
    if rng.random() < 0.5:
        t = t + t.T
    w = random_unitary(n, rng)
    assert is_uet(t).verdict == is_uet(w @ t @ w.conj().T).verdict


def test_classify_examples():
    g = gauss(np.random.default_rng(5), 4)
    s = g + g.T
    cert = make_certificate(s, np.eye(4, dtype=complex))
    assert classify_irreducible_uet(s, cert) == "uecsm"
    t = asm_irreducible(4)
    cert = make_certificate(t, omega(4), "ueasm")
    assert cert.alpha == -1 and cert.symmetry_class == "skew"
    assert classify_irreducible_uet(t, cert) == "ueasm"


def test_odd_irreducible_is_uecsm():
    g = gauss(np.random.default_rng(6), 5)
    t = g + g.T
    assert classify_irreducible_uet(t, is_uet(t).certificate) == "uecsm"


def test_classify_rejects_non_scalar():
    a = gauss(np.random.default_rng(7), 2)
    t = block_diag(a, a.T)
    u = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]]) @ np.diag([1, 1, 1j, 1j])
    with pytest.raises(NotScalar):
        classify_irreducible_uet(t, make_certificate(t, u))


def test_verify_rejects_forgery():
    forged = UetCertificate(np.eye(3, dtype=complex), 0.0, "symmetric", 1, "uecsm")
    problems = verify_certificate(HALMOS, forged)
    assert any("residual" in p for p in problems)
    assert verify_certificate(HALMOS, UetCertificate(2 * np.eye(3), 0.0, "symmetric"))
