import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtt.antilinear import Anticonjugation, Conjugation, asm_identity_residual
from mtt.errors import InvalidSpec
from mtt.gallery import GeneratorSpec, generate, regression_vectors, reversal
from mtt.intertwiner import is_uet, make_certificate, verify_certificate

seeds = st.integers(0, 2**32 - 1)


def test_named_matrices_exact():
    assert np.array_equal(generate(GeneratorSpec("halmos")), [[0, 1, 0], [0, 0, 2], [0, 0, 0]])
    assert np.array_equal(generate(GeneratorSpec("george")), [[1, 0, 0], [4, 3, 0], [0, 2, 5]])


def test_asm_irreducible_shape():
    t = generate(GeneratorSpec("asm_irreducible", d=4))
    assert t.shape == (8, 8)
    assert np.array_equal(t[:4, :4], np.diag([1, 2, 3, 4]))
    assert np.array_equal(t[4:, 4:], np.diag([1, 2, 3, 4]))
    b = t[:4, 4:]
    assert np.all(b[np.triu_indices(4, 1)] == 1) and np.all(b[np.tril_indices(4, -1)] == -1)
    assert np.all(np.diag(b) == 0) and not np.any(t[4:, :4])


@pytest.mark.parametrize("spec", [
    dict(kind="asm_irreducible", d=3),
    dict(kind="random_asm", n=5),
    dict(kind="random_anticonjugation", n=3),
    dict(kind="random_csm"),
    dict(kind="direct_sum"),
    dict(kind="nonsense"),
])
def test_invalid_specs(spec):
    with pytest.raises(InvalidSpec):
        GeneratorSpec(**spec)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 6))
def test_random_classes_exact(seed, k):
    g = generate(GeneratorSpec("random_csm", n=k, seed=seed))
    assert np.array_equal(g, g.T)
    m = generate(GeneratorSpec("random_asm", d=k, seed=seed))
    assert asm_identity_residual(m) == 0
    u = generate(GeneratorSpec("random_unitary", n=k, seed=seed))
    assert np.linalg.norm(u.conj().T @ u - np.eye(k)) < 1e-12
    assert isinstance(generate(GeneratorSpec("random_conjugation", n=k, seed=seed)), Conjugation)
    assert isinstance(generate(GeneratorSpec("random_anticonjugation", d=k, seed=seed)), Anticonjugation)


def test_generation_is_deterministic():
    inner = (GeneratorSpec("random_csm", n=2, seed=1), GeneratorSpec("halmos"))
    for spec in (GeneratorSpec("random_csm", n=4, seed=3), GeneratorSpec("scrambled", seed=9, operands=inner),
                 GeneratorSpec("toeplitz_random", n=5, seed=2)):
        assert np.array_equal(generate(spec), generate(spec))
    assert not np.array_equal(generate(GeneratorSpec("random_csm", n=4, seed=3)),
                              generate(GeneratorSpec("random_csm", n=4, seed=4)))


def test_composition():
    ops = (GeneratorSpec("halmos"), GeneratorSpec("random_csm", n=2, seed=1))
    t = generate(GeneratorSpec("direct_sum", operands=ops))
    assert t.shape == (5, 5) and np.array_equal(t[:3, :3], generate(ops[0]))
    s = generate(GeneratorSpec("scrambled", seed=4, operands=ops))
    assert np.allclose(np.sort(np.linalg.svd(s, compute_uv=False)), np.sort(np.linalg.svd(t, compute_uv=False)))


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 8))
def test_toeplitz_reversal_witness(seed, n):
    t = generate(GeneratorSpec("toeplitz_random", n=n, seed=seed))
    assert verify_certificate(t, make_certificate(t, reversal(n))) == []


def test_regression_vectors():
    (t3, claims), (h, hc), (g, gc) = regression_vectors()
    q = claims["commutes_with"]
    assert np.linalg.norm(q @ t3 - t3 @ q) <= claims["commutation_tol"]
    assert np.linalg.norm(q - q.conj().T) == 0
    assert np.linalg.norm(q - np.trace(q) / 6 * np.eye(6)) > 1
    assert is_uet(h).verdict == hc["is_uet"] == "no"
    assert is_uet(g).verdict == gc["is_uet"] == "no"
