"""Quadratic Casimir values and the closed-form gap bounds built on them.

Weights are integer vectors summing to zero, paired by the coordinate dot
product; ``delta = (N-1, N-3, ..., -(N-1))`` is the sum of positive roots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .moments import casimir_bound, improved_bound

__all__ = [
    "HighestWeight",
    "casimir_ratio",
    "casimir_value",
    "casimir_lower_bound",
    "casimir_upper_bound",
    "gap_bound",
    "small_t_minimizer",
    "casimir_operator",
    "irrep_blocks",
]


@dataclass(frozen=True)
class HighestWeight:
    mu: tuple[int, ...]

    def __post_init__(self):
        mu = tuple(int(m) for m in self.mu)
        object.__setattr__(self, "mu", mu)
        if len(mu) < 2:
            raise ValueError("a weight of su(N) needs N >= 2 entries")
        if any(a < b for a, b in zip(mu, mu[1:])):
            raise ValueError(f"weight {mu} is not nonincreasing")
        if sum(mu) != 0:
            raise ValueError(f"weight {mu} does not sum to zero")

    @property
    def N(self) -> int:
        return len(self.mu)

    @property
    def delta(self) -> np.ndarray:
        return np.arange(self.N - 1, -self.N, -2)

    def cartan_split(self) -> int:
        """``mu_1 + ... + mu_{N/2} - mu_{N/2+1} - ... - mu_N``, equal to ``2 ell``."""
        if self.N % 2:
            raise ValueError("the Pauli Cartan element needs even N")
        h = self.N // 2
        return sum(self.mu[:h]) - sum(self.mu[h:])

    @property
    def ell(self) -> float:
        return self.cartan_split() / 2

    def appears_in_tensor_power(self, t: int) -> bool:
        """Whether this irrep occurs in ``(U (x) conj U)^{(x)t}``."""
        return sum(abs(m) for m in self.mu) <= 2 * t


def casimir_value(mu: HighestWeight) -> float:
    """The scalar ``sum_P J_P^2 = N (<mu,mu> + <mu,delta>) / 4``."""
    m = np.array(mu.mu)
    return mu.N * (m @ m + m @ mu.delta) / 4


def casimir_ratio(mu: HighestWeight) -> float:
    """``(1/ell^2) sum_P J_P^2`` as a scalar."""
    split = mu.cartan_split()
    if split == 0:
        raise ValueError(f"weight {mu.mu} has ell = 0")
    m = np.array(mu.mu)
    return float(mu.N * (m @ m + m @ mu.delta) / split**2)


def casimir_lower_bound(N: int, ell: float) -> float:
    return N * N * ell / 4 + ell * ell


def casimir_upper_bound(N: int, ell: float) -> float:
    return N * (N - 1) * ell / 2 + (N - 1) * ell * ell


def small_t_minimizer(N: int, t: int) -> HighestWeight:
    """``(1^t, 0^{N-2t}, (-1)^t)``, the weight minimizing the ratio when ``t <= N/2``."""
    if 2 * t > N:
        raise ValueError("minimizer defined only for t <= N/2")
    return HighestWeight((1,) * t + (0,) * (N - 2 * t) + (-1,) * t)


def gap_bound(n: int, t: int) -> tuple[float, float | None]:
    """``(main, small_t)`` bounds on ``||C_t - H_t||``; ``small_t`` needs ``t <= N/2``."""
    if n < 1 or t < 1:
        raise ValueError("n and t must be >= 1")
    return casimir_bound(n, t), improved_bound(n, t)


def casimir_operator(generators) -> np.ndarray:
    """``sum_P J_P^2`` for a list of dense represented generators."""
    return sum(g @ g for g in generators)


def _orth_complement(basis: np.ndarray, sub: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``span(basis)`` minus ``span(sub)`` (both orthonormal)."""
    rest = basis - sub @ (sub.conj().T @ basis)
    u, s, _ = np.linalg.svd(rest, full_matrices=False)
    return u[:, s > 1e-8]


def _cyclic_span(v: np.ndarray, gens: list[np.ndarray], tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of the smallest ``gens``-invariant subspace containing ``v``."""
    basis = [v / np.linalg.norm(v)]
    frontier = [basis[0]]
    while frontier:
        new = []
        for w in frontier:
            for g in gens:
                u = g @ w
                for b in basis:
                    u = u - np.vdot(b, u) * b
                for b in basis:
                    u = u - np.vdot(b, u) * b
                nrm = np.linalg.norm(u)
                if nrm > tol:
                    u = u / nrm
                    basis.append(u)
                    new.append(u)
        frontier = new
    return np.column_stack(basis)


def irrep_blocks(generators: list[np.ndarray], probe: np.ndarray,
                 tol: float = 1e-8) -> list[dict]:
    """Split a representation into invariant blocks of uniform Casimir and ``ell``.

    Each Casimir eigenspace is peeled: a top eigenvector of ``probe`` (the
    represented Cartan generator) generates an invariant subspace whose
    irreducible pieces all share ``ell = ||probe restricted||``; that subspace
    is recorded and removed.  Returns dicts with ``casimir``, ``ell``, ``dim``.
    """
    cas = casimir_operator(generators)
    w, v = np.linalg.eigh(cas)
    out = []
    start = 0
    while start < len(w):
        stop = start
        while stop < len(w) and abs(w[stop] - w[start]) < 1e-6:
            stop += 1
        space = v[:, start:stop]
        value = float(np.mean(w[start:stop]))
        while space.shape[1]:
            local = space.conj().T @ probe @ space
            lw, lv = np.linalg.eigh(local)
            ell = float(lw[-1])
            if ell < tol:
                # trivial representations: probe and every generator vanish
                out.append({"casimir": value, "ell": 0.0, "dim": space.shape[1]})
                break
            block = _cyclic_span(space @ lv[:, -1], generators, tol)
            out.append({"casimir": value, "ell": ell, "dim": block.shape[1]})
            space = _orth_complement(space, block)
        start = stop
    return out
