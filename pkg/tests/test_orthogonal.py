import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from pauli_designs.orthogonal import (
    GIVENS_FLOPS_PER_ENTRY,
    ElementaryRotation,
    OrthoSamplerConfig,
    apply_givens,
    benchmark,
    givens_matrix,
    gram_schmidt_haar,
    heuristic_steps,
    sample_orthogonal,
    sample_orthogonal_batch,
)
from pauli_designs.pauli import enumerate_skew_paulis, to_matrix
from pauli_designs.sampling import ElementaryGenerator, iter_walk, rotation_matrix


def orth_err(o):
    return np.max(np.abs(o.T @ o - np.eye(len(o))))


def test_givens_quarter_turn():
    m = apply_givens(np.eye(3), ElementaryRotation(0, 1, math.pi / 2))
    np.testing.assert_allclose(m, [[0, 1, 0], [-1, 0, 0], [0, 0, 1]], atol=1e-15)


def test_givens_zero_angle():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((4, 4))
    np.testing.assert_array_equal(apply_givens(m.copy(), ElementaryRotation(1, 3, 0.0)), m)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, n - 2))).flatmap(lambda na: st.tuples(
        st.just(na[0]), st.just(na[1]), st.integers(na[1] + 1, na[0] - 1))),
    st.floats(-math.pi, math.pi), st.integers(0, 1000))
def test_givens_matches_expm(nab, theta, seed):
    n, a, b = nab
    m = np.random.default_rng(seed).standard_normal((n, 3))
    rot = ElementaryRotation(a, b, theta)
    ref = expm(theta * ElementaryGenerator(n, a, b).matrix()) @ m
    np.testing.assert_allclose(apply_givens(m.copy(), rot), ref, atol=1e-12)
    np.testing.assert_allclose(givens_matrix(n, rot) @ m, ref, atol=1e-12)


def test_givens_validation():
    with pytest.raises(ValueError):
        ElementaryRotation(2, 1, 0.1)
    with pytest.raises(IndexError):
        apply_givens(np.eye(3), ElementaryRotation(0, 3, 0.1))


@pytest.mark.parametrize("N", [3, 4, 5])
def test_elementary_commutators(N):
    E = {(a, b): ElementaryGenerator(N, a, b).matrix()
         for a, b in itertools.permutations(range(N), 2) if a < b}

    def e(a, b):
        return E[(a, b)] if a < b else -E[(b, a)]

    for a, b, c in itertools.permutations(range(N), 3):
        np.testing.assert_array_equal(e(a, b) @ e(b, c) - e(b, c) @ e(a, b), e(a, c))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_skew_rotations_are_real(n):
    for p in enumerate_skew_paulis(n):
        u = expm(0.5j * 0.77 * to_matrix(p))
        assert np.max(np.abs(u.imag)) <= 1e-12


def test_sampler_k0_identity():
    np.testing.assert_array_equal(sample_orthogonal(OrthoSamplerConfig(4, 0)), np.eye(4))


@pytest.mark.parametrize("basis,N", [("elementary", 5), ("skew_pauli", 8)])
def test_sampler_matches_dense_product(basis, N):
    cfg = OrthoSamplerConfig(N, 30, basis, seed=2)
    ref = np.eye(N, dtype=complex)
    for s in iter_walk(cfg.walk_config()):
        if basis == "elementary":
            g = s.generator
            ref = expm(s.angle * g.matrix()) @ ref
        else:
            ref = rotation_matrix(s) @ ref
    o = sample_orthogonal(cfg)
    assert o.dtype == np.float64
    np.testing.assert_allclose(o, ref.real, atol=1e-12)
    assert np.max(np.abs(ref.imag)) < 1e-12
    assert abs(np.linalg.det(o) - 1) < 1e-12


def test_sampler_angle_ranges():
    assert OrthoSamplerConfig(3, 1).walk_config().angle_mode.half_width == math.pi
    cfg = OrthoSamplerConfig(8, 1, "skew_pauli").walk_config()
    assert cfg.angle_mode.half_width == 2 * math.pi


def test_sampler_deterministic():
    cfg = OrthoSamplerConfig(6, 200, seed=9)
    np.testing.assert_array_equal(sample_orthogonal(cfg), sample_orthogonal(cfg))


def test_sampler_validation():
    with pytest.raises(ValueError):
        OrthoSamplerConfig(1, 1)
    with pytest.raises(ValueError):
        OrthoSamplerConfig(6, 1, "skew_pauli")
    with pytest.raises(ValueError):
        OrthoSamplerConfig(4, 1, "skew_pauli")
    with pytest.raises(ValueError):
        OrthoSamplerConfig(4, -1)
    with pytest.raises(ValueError):
        OrthoSamplerConfig(4, 1, "householder")


def test_long_walk_stays_orthogonal():
    o, flops = sample_orthogonal(OrthoSamplerConfig(64, 100_000, seed=1), return_flops=True)
    assert orth_err(o) <= 1e-10
    assert abs(np.linalg.det(o) - 1) < 1e-8
    assert flops == GIVENS_FLOPS_PER_ENTRY * 100_000 * 64


def test_flops_linear_in_k_and_n():
    f = {(N, k): sample_orthogonal(OrthoSamplerConfig(N, k), return_flops=True)[1]
         for N in (4, 8) for k in (10, 20)}
    assert f[(4, 20)] == 2 * f[(4, 10)]
    assert f[(8, 10)] == 2 * f[(4, 10)]


def test_batch_orthogonal():
    batch = sample_orthogonal_batch(5, 40, 200, seed=3)
    assert batch.shape == (200, 5, 5)
    err = np.abs(np.einsum("sji,sjk->sik", batch, batch) - np.eye(5)).max()
    assert err < 1e-12
    np.testing.assert_allclose(np.linalg.det(batch), 1, atol=1e-12)


def test_first_moment_contraction_n3():
    # E[O] after k steps is (1/3)^k times the identity for N = 3
    samples = 100_000
    for k in (1, 2, 3):
        batch = sample_orthogonal_batch(3, k, samples, seed=k)
        mean = batch.mean(axis=0)
        sigma = batch.std(axis=0) / math.sqrt(samples)
        assert np.all(np.abs(mean - np.eye(3) / 3**k) <= 5 * sigma + 1e-12)


def test_walk_matches_haar_moments_n3():
    samples = 10_000
    walk = sample_orthogonal_batch(3, 30, samples, seed=4)
    haar = np.array([gram_schmidt_haar(3, np.random.default_rng(100 + i)) for i in range(samples)])
    for stat in (lambda o: o[:, 0, 0], lambda o: np.trace(o, axis1=1, axis2=2)):
        a, b = stat(walk), stat(haar)
        se = math.sqrt(a.var() / samples + b.var() / samples)
        assert abs(a.mean() - b.mean()) <= 4 * se
    assert abs(walk[:, 0, 0].mean()) <= 4 * walk[:, 0, 0].std() / math.sqrt(samples)


def test_gram_schmidt_basics():
    np.testing.assert_array_equal(gram_schmidt_haar(1), [[1.0]])
    for seed in range(20):
        q = gram_schmidt_haar(6, seed)
        assert orth_err(q) <= 1e-10
        assert abs(np.linalg.det(q) - 1) < 1e-10
    with pytest.raises(ValueError):
        gram_schmidt_haar(0)


@pytest.mark.parametrize("N", [2, 5])
def test_gram_schmidt_first_column(N):
    samples = 20_000
    rng = np.random.default_rng(N)
    sq = np.array([gram_schmidt_haar(N, rng)[0, 0] ** 2 for _ in range(samples)])
    assert abs(sq.mean() - 1 / N) <= 4 * sq.std() / math.sqrt(samples)


def test_benchmark_report():
    a = benchmark(8, 50, repeats=2, seed=1)
    assert a["N"] == 8 and a["k"] == 50
    assert set(a["timing"]) == {"givens_ns_per_sample", "gs_ns_per_sample"}
    assert all(v >= 0 for v in a["timing"].values())
    b = benchmark(8, 50, repeats=2, seed=1)
    assert {k: v for k, v in a.items() if k != "timing"} == \
        {k: v for k, v in b.items() if k != "timing"}


def test_heuristic_steps_cheaper_than_qr():
    N = 1024
    k = heuristic_steps(N)
    assert k < N * N
    assert k * N < N**3
    report = benchmark(N, 10, repeats=1)
    assert report["crossover_k"] > k
    with pytest.raises(ValueError):
        heuristic_steps(2)
