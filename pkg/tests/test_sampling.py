import io
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats
from scipy.linalg import expm

from pauli_designs.pauli import PauliString, to_matrix
from pauli_designs.sampling import (
    AngleMode,
    ElementaryGenerator,
    RotationSample,
    WalkConfig,
    discrete_angles,
    iter_walk,
    read_transcript,
    required_steps,
    rotation_matrix,
    sample_step,
    walk_unitary,
    write_transcript,
)


def test_step_is_deterministic():
    cfg = WalkConfig(3, 10, seed=42)
    assert sample_step(cfg, 7) == sample_step(cfg, 7)
    assert list(iter_walk(cfg))[7] == sample_step(cfg, 7)
    other = WalkConfig(3, 10, seed=43)
    assert [sample_step(cfg, i) for i in range(10)] != [sample_step(other, i) for i in range(10)]


def test_step_independent_of_walk_length():
    short, long = WalkConfig(2, 5, seed=1), WalkConfig(2, 50, seed=1)
    assert list(iter_walk(short)) == list(iter_walk(long))[:5]


def test_full_pauli_uniform_n1():
    # seed 0 lands at 3.1 sigma on Z (about a 1% event); see the chi-square test too
    cfg = WalkConfig(1, 30000, seed=1)
    counts = Counter(s.pauli.label for s in iter_walk(cfg))
    assert set(counts) == {"X", "Y", "Z"}
    sigma = math.sqrt(30000 * (1 / 3) * (2 / 3))
    for c in counts.values():
        assert abs(c - 10000) <= 3 * sigma


def test_full_pauli_chi_square_n2():
    cfg = WalkConfig(2, 15000, seed=5)
    counts = Counter(s.pauli.label for s in iter_walk(cfg))
    assert len(counts) == 15
    assert stats.chisquare(list(counts.values())).pvalue > 1e-3


def test_continuous_angles_uniform():
    cfg = WalkConfig(1, 5000, AngleMode.continuous(2 * math.pi), seed=9)
    angles = np.array([s.angle for s in iter_walk(cfg)])
    assert np.all(np.abs(angles) < 2 * math.pi)
    assert stats.kstest(angles, stats.uniform(-2 * math.pi, 4 * math.pi).cdf).pvalue > 1e-3


def test_discrete_angles_t2():
    np.testing.assert_allclose(discrete_angles(2), [-math.pi, -math.pi / 2, 0, math.pi / 2])
    cfg = WalkConfig(1, 400, AngleMode.discrete(2), seed=3)
    seen = {round(s.angle / (math.pi / 2)) for s in iter_walk(cfg)}
    assert seen == {-2, -1, 0, 1}
    for s in iter_walk(cfg):
        assert s.angle in set(discrete_angles(2).tolist())


@pytest.mark.parametrize("t", [1, 2, 3, 5])
def test_discrete_average_matches_continuous(t):
    # the average of exp(i m theta) vanishes for 0 < |m| <= t on both sides
    grid = np.linspace(-math.pi, math.pi, 20001)[:-1]
    for m in range(-t, t + 1):
        disc = np.mean(np.exp(1j * m * discrete_angles(t)))
        cont = np.mean(np.exp(1j * m * grid))
        assert abs(disc - cont) < 1e-12
        assert abs(disc - (m == 0)) < 1e-12


def test_angle_mode_validation():
    with pytest.raises(ValueError):
        AngleMode("discrete", math.pi, None)
    with pytest.raises(ValueError):
        AngleMode("gaussian")
    with pytest.raises(ValueError):
        AngleMode.continuous(0.0)
    with pytest.raises(ValueError):
        discrete_angles(0)


def test_walk_config_validation():
    with pytest.raises(ValueError):
        WalkConfig(1, -1)
    with pytest.raises(ValueError):
        WalkConfig(0, 1)
    with pytest.raises(ValueError):
        WalkConfig(1, 1, generator_set="cliffords")
    with pytest.raises(ValueError):
        WalkConfig(1, 1, generator_set="elementary")
    with pytest.raises(ValueError):
        sample_step(WalkConfig(1, 1), -1)


def test_generator_sets():
    skew = WalkConfig(3, 200, generator_set="skew_pauli", seed=1)
    assert all(s.pauli.label.count("Y") % 2 == 1 for s in iter_walk(skew))
    elem = WalkConfig(5, 200, generator_set="elementary", seed=1)
    gens = {(s.generator.a, s.generator.b) for s in iter_walk(elem)}
    assert gens == {(a, b) for a in range(5) for b in range(a + 1, 5)}
    with pytest.raises(AttributeError):
        sample_step(elem, 0).pauli


def test_elementary_generator():
    e = ElementaryGenerator(3, 0, 2)
    assert e.label == "E0,2"
    np.testing.assert_array_equal(e.matrix(), [[0, 0, 1], [0, 0, 0], [-1, 0, 0]])
    with pytest.raises(ValueError):
        ElementaryGenerator(3, 2, 1)


def test_walk_unitary_k0_identity():
    np.testing.assert_array_equal(walk_unitary(WalkConfig(2, 0)), np.eye(4))


def test_rotation_closed_form():
    u = rotation_matrix(RotationSample(PauliString.from_label("Z"), math.pi))
    np.testing.assert_allclose(u, np.diag([1j, -1j]), atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32), st.floats(-6, 6))
def test_rotation_matches_expm(n, seed, theta):
    p = sample_step(WalkConfig(n, 1, seed=seed), 0).pauli
    u = rotation_matrix(RotationSample(p, theta))
    np.testing.assert_allclose(u, expm(0.5j * theta * to_matrix(p)), atol=1e-12)


@pytest.mark.parametrize("n,k", [(1, 5), (2, 40), (3, 100)])
def test_walk_unitary_is_unitary_and_ordered(n, k):
    cfg = WalkConfig(n, k, seed=n * k)
    u = walk_unitary(cfg)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(2**n), atol=1e-12)
    ref = np.eye(2**n, dtype=complex)
    for s in iter_walk(cfg):
        ref = rotation_matrix(s) @ ref
    np.testing.assert_allclose(u, ref, atol=1e-12)


def test_walk_unitary_dense_limit():
    with pytest.raises(MemoryError):
        walk_unitary(WalkConfig(13, 1))


def test_required_steps_examples():
    assert required_steps(1, 2, 0.01) == 48
    assert required_steps(1, 1, 1.0) == 3
    for n, t, eps in [(1, 1, 0.5), (3, 4, 1e-3), (10, 2, 0.1)]:
        assert required_steps(n, t, eps, "relative") >= required_steps(n, t, eps)


@pytest.mark.parametrize("eps", [0.0, -0.1, 1.5])
def test_required_steps_rejects_eps(eps):
    with pytest.raises(ValueError):
        required_steps(1, 1, eps)


def test_required_steps_rejects_target():
    with pytest.raises(ValueError):
        required_steps(1, 1, 0.5, "trace")


def test_transcript_roundtrip():
    cfg = WalkConfig(3, 20, AngleMode.discrete(3), seed=8)
    buf = io.StringIO()
    write_transcript(cfg, buf)
    buf.seek(0)
    rows = read_transcript(buf)
    assert [(i, s.pauli.label, s.angle) for i, s in enumerate(iter_walk(cfg))] == rows
