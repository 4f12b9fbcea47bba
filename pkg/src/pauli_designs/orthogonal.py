"""Approximately Haar-random special orthogonal matrices from random rotations.

The elementary walk multiplies by plane rotations ``exp(theta E_ab)`` with
``E_ab = |a><b| - |b><a|`` (0-based ``a < b``), touching two rows per step.
The skew-Pauli walk multiplies by ``exp(i theta P / 2)`` for ``P`` with an
odd number of ``Y`` factors; ``iP`` is a real signed permutation, so each
step is applied in ``O(N^2)`` without forming a dense matrix.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, _phases
from .sampling import AngleMode, ElementaryGenerator, WalkConfig, iter_walk

__all__ = [
    "ElementaryRotation",
    "OrthoSamplerConfig",
    "apply_givens",
    "givens_matrix",
    "sample_orthogonal",
    "sample_orthogonal_batch",
    "gram_schmidt_haar",
    "benchmark",
    "heuristic_steps",
    "GIVENS_FLOPS_PER_ENTRY",
]

# one Givens step: 4 multiplies and 2 adds per column
GIVENS_FLOPS_PER_ENTRY = 6


@dataclass(frozen=True)
class ElementaryRotation:
    a: int
    b: int
    theta: float

    def __post_init__(self):
        if not 0 <= self.a < self.b:
            raise ValueError(f"need 0 <= a < b, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class OrthoSamplerConfig:
    N: int
    k: int
    basis: str = "elementary"
    seed: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.basis == "elementary":
            if self.N < 2:
                raise ValueError("elementary rotations need N >= 2")
        elif self.basis == "skew_pauli":
            n = self.N.bit_length() - 1
            if self.N < 1 or 2**n != self.N:
                raise ValueError(f"skew Pauli basis needs N = 2^n, got {self.N}")
            if self.N <= 4:
                raise ValueError("skew Pauli basis needs N > 4")
        else:
            raise ValueError(f"unknown basis {self.basis!r}")

    def walk_config(self) -> WalkConfig:
        if self.basis == "elementary":
            return WalkConfig(self.N, self.k, AngleMode.continuous(math.pi),
                              "elementary", self.seed)
        return WalkConfig(self.N.bit_length() - 1, self.k,
                          AngleMode.continuous(2 * math.pi), "skew_pauli", self.seed)


def givens_matrix(N: int, rot: ElementaryRotation) -> np.ndarray:
    """Dense ``exp(theta E_ab)``."""
    g = np.eye(N)
    c, s = math.cos(rot.theta), math.sin(rot.theta)
    g[rot.a, rot.a] = g[rot.b, rot.b] = c
    g[rot.a, rot.b] = s
    g[rot.b, rot.a] = -s
    return g


def apply_givens(m: np.ndarray, rot: ElementaryRotation) -> np.ndarray:
    """Left-multiply ``m`` by ``exp(theta E_ab)`` in place; returns ``m``."""
    if rot.b >= m.shape[0]:
        raise IndexError(f"rotation plane ({rot.a}, {rot.b}) outside {m.shape[0]} rows")
    c, s = math.cos(rot.theta), math.sin(rot.theta)
    ra = m[rot.a].copy()
    m[rot.a] *= c
    m[rot.a] += s * m[rot.b]
    m[rot.b] *= c
    m[rot.b] -= s * ra
    return m


def _apply_skew_pauli(m: np.ndarray, p: PauliString, theta: float) -> np.ndarray:
    # exp(i theta P/2) m = cos(theta/2) m + sin(theta/2) (iP) m, with iP real
    signs = (1j * _phases(p)).real
    rows = np.arange(m.shape[0])
    out = math.cos(theta / 2) * m
    out[rows ^ p.x_mask] += math.sin(theta / 2) * signs[:, None] * m
    return out


def sample_orthogonal(cfg: OrthoSamplerConfig, return_flops: bool = False):
    """Apply ``cfg.k`` random rotations to the identity.

    Steps are drawn with :func:`pauli_designs.sampling.sample_step`, so the
    result is a deterministic function of ``cfg``.  With ``return_flops``
    also returns the arithmetic operation count of the update steps.
    """
    o = np.eye(cfg.N)
    flops = 0
    for s in iter_walk(cfg.walk_config()):
        g = s.generator
        if isinstance(g, ElementaryGenerator):
            apply_givens(o, ElementaryRotation(g.a, g.b, s.angle))
            flops += GIVENS_FLOPS_PER_ENTRY * cfg.N
        else:
            o = _apply_skew_pauli(o, g, s.angle)
            flops += 3 * cfg.N * cfg.N
    return (o, flops) if return_flops else o


def sample_orthogonal_batch(N: int, k: int, size: int, seed: int = 0) -> np.ndarray:
    """``size`` independent elementary-walk samples, vectorized over the batch.

    Uses its own ``numpy.random.default_rng(seed)`` stream; intended for
    Monte Carlo statistics rather than reproducing :func:`sample_orthogonal`.
    """
    rng = np.random.default_rng(seed)
    out = np.broadcast_to(np.eye(N), (size, N, N)).copy()
    a_idx, b_idx = np.triu_indices(N, k=1)
    rows = np.arange(size)
    for _ in range(k):
        pick = rng.integers(len(a_idx), size=size)
        theta = rng.uniform(-math.pi, math.pi, size=size)
        a, b = a_idx[pick], b_idx[pick]
        c, s = np.cos(theta)[:, None], np.sin(theta)[:, None]
        ra, rb = out[rows, a].copy(), out[rows, b].copy()
        out[rows, a] = c * ra + s * rb
        out[rows, b] = c * rb - s * ra
    return out


def gram_schmidt_haar(N: int, seed: int | np.random.Generator = 0) -> np.ndarray:
    """Haar-random ``SO(N)`` matrix from QR of a Gaussian matrix.

    Columns are sign-fixed by ``diag(R)`` and the last column is flipped when
    the determinant is ``-1``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((N, N)))
    q = q * np.where(np.diag(r) < 0, -1.0, 1.0)
    if np.linalg.det(q) < 0:
        q[:, -1] = -q[:, -1]
    return q


def heuristic_steps(N: int, eps: float = 1e-3, t: int = 2) -> int:
    """Smallest ``k`` with ``bound**k <= eps`` for the elementary walk.

    Uses the ``t``-th moment gap bound as a per-step contraction factor; there
    is no sharper rule for picking ``k`` in the orthogonal case.
    """
    from .moments import orthogonal_bound

    if N < 3:
        raise ValueError("need N >= 3 for a nontrivial gap bound")
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return math.ceil(math.log(eps) / math.log(orthogonal_bound(N, t, "elementary")))


def benchmark(N: int, k: int, repeats: int = 3, seed: int = 0) -> dict:
    """Per-sample cost of the Givens walk against the Gram-Schmidt baseline."""
    cfg = OrthoSamplerConfig(N, k, "elementary", seed)
    # draw the steps once so both timings measure only the matrix work
    rots = [ElementaryRotation(s.generator.a, s.generator.b, s.angle)
            for s in iter_walk(cfg.walk_config())]
    givens_ns = []
    for _ in range(repeats):
        o = np.eye(N)
        t0 = time.perf_counter_ns()
        for r in rots:
            apply_givens(o, r)
        givens_ns.append(time.perf_counter_ns() - t0)
    gs_ns = []
    for i in range(repeats):
        t0 = time.perf_counter_ns()
        gram_schmidt_haar(N, seed + i)
        gs_ns.append(time.perf_counter_ns() - t0)
    givens_flops = GIVENS_FLOPS_PER_ENTRY * N * k
    gs_flops = 2 * N**3
    return {
        "N": N,
        "k": k,
        "givens_flops": givens_flops,
        "gs_flops": gs_flops,
        "givens_cheaper_in_flops": givens_flops < gs_flops,
        # k below which the Givens path does fewer flops than QR
        "crossover_k": gs_flops // (GIVENS_FLOPS_PER_ENTRY * N),
        "timing": {
            "givens_ns_per_sample": min(givens_ns),
            "gs_ns_per_sample": min(gs_ns),
        },
    }
