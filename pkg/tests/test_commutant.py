import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtt.commutant import decompose_irreducibles, hermitian_commutant, is_irreducible, split_once
from mtt.gallery import HALMOS, GeneratorSpec, asm_irreducible, generate
from mtt.linalg import block_diag, random_unitary

seeds = st.integers(0, 2**32 - 1)


def gauss(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def oracle_commutant_dim(t):
    """Dense real solve over all n^2 real Hermitian parameters, written independently."""
    n = t.shape[0]
    cols = []
    for i in range(n):
        for j in range(n):
            for val in ((1, 1j) if i < j else (1,) if i == j else ()):
                q = np.zeros((n, n), dtype=complex)
                q[i, j] = val
                q[j, i] = np.conj(val)
                c = q @ t - t @ q
                cols.append(np.concatenate([c.real.ravel(), c.imag.ravel()]))
    s = np.linalg.svd(np.array(cols).T, compute_uv=False)
    return int(np.sum(s <= 1e-9 * s[0])) if s[0] > 0 else n * n


def test_commutant_examples():
    assert hermitian_commutant(np.eye(3)).dim_real == 9
    assert hermitian_commutant(HALMOS).dim_real == 1 == oracle_commutant_dim(HALMOS)
    a = gauss(np.random.default_rng(0), 3)
    assert hermitian_commutant(block_diag(a, a)).dim_real == 4 == oracle_commutant_dim(block_diag(a, a))


def test_commutant_elements_commute_and_are_hermitian():
    rng = np.random.default_rng(1)
    t = block_diag(gauss(rng, 2), gauss(rng, 3))
    basis = hermitian_commutant(t)
    assert basis.dim_real == 2
    for q in basis.elements:
        assert np.linalg.norm(q - q.conj().T) < 1e-12
        assert np.linalg.norm(q @ t - t @ q) < 1e-9 * np.linalg.norm(t)
    # the identity lies in the span
    coeffs = [np.vdot(q, np.eye(5)).real for q in basis.elements]
    recon = sum(c * q for c, q in zip(coeffs, basis.elements))
    assert np.allclose(recon, np.eye(5))


def test_irreducibility_examples():
    assert is_irreducible(asm_irreducible(4))
    assert not is_irreducible(generate(GeneratorSpec("random_asm", d=2, seed=3)))
    assert not is_irreducible(generate(GeneratorSpec("random_asm", d=3, seed=3)))


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_commutant_dim_invariances(seed):
    rng = np.random.default_rng(seed)
    t = block_diag(gauss(rng, 2), gauss(rng, 2)) if rng.random() < 0.5 else gauss(rng, 4)
    w = random_unitary(4, rng)
    k = hermitian_commutant(t).dim_real
    assert hermitian_commutant(w @ t @ w.conj().T).dim_real == k
    assert hermitian_commutant(3j * t + 2 * np.eye(4)).dim_real == k
    assert hermitian_commutant(t.conj().T).dim_real == k


def test_split_examples():
    split = split_once(np.diag([1.0, 2.0]))
    assert split.t1.shape == split.t2.shape == (1, 1)
    assert split_once(HALMOS) is None
    a = gauss(np.random.default_rng(2), 3)
    t = block_diag(a, a.T)
    split = split_once(t)
    assert split.t1.shape == (3, 3)
    assert np.linalg.norm(split.w @ block_diag(split.t1, split.t2) @ split.w.conj().T - t) < 1e-10


def test_decompose_irreducibles_examples():
    w, blocks = decompose_irreducibles(np.diag([1.0, 2.0, 3.0]))
    assert [b.shape[0] for b in blocks] == [1, 1, 1]
    assert len(decompose_irreducibles(asm_irreducible(5))[1]) == 1
    rng = np.random.default_rng(4)
    g = gauss(rng, 3)
    t = block_diag(g + g.T, asm_irreducible(4))
    u = random_unitary(11, rng)
    ts = u @ t @ u.conj().T
    w, blocks = decompose_irreducibles(ts)
    assert sorted(b.shape[0] for b in blocks) == [3, 8]
    assert np.linalg.norm(w @ block_diag(*blocks) @ w.conj().T - ts) < 1e-9 * np.linalg.norm(ts)
    assert all(is_irreducible(b) for b in blocks)
