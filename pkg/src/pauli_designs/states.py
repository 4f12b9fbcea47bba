"""t-th moments of random Pauli rotation walks acting on pure states.

States are stored in coordinates of the symmetric subspace ``Sym^t(C^N)``,
spanned by normalized symmetrizations of occupation-number basis vectors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .moments import BoundViolation
from .pauli import enumerate_paulis, to_matrix
from .sampling import discrete_angles

__all__ = [
    "SymmetricState",
    "symmetric_isometry",
    "haar_state_moment",
    "product_state",
    "channel_unitaries",
    "apply_channel_power",
    "state_design_bound",
    "state_design_distance",
    "trace_norm",
]


@lru_cache(maxsize=None)
def symmetric_isometry(N: int, t: int) -> np.ndarray:
    """Isometry ``Sym^t(C^N) -> (C^N)^{(x)t}``, shape ``(N**t, C(N+t-1, t))``."""
    combos = list(itertools.combinations_with_replacement(range(N), t))
    v = np.zeros((N**t, len(combos)))
    for c, combo in enumerate(combos):
        for word in set(itertools.permutations(combo)):
            idx = 0
            for letter in word:
                idx = idx * N + letter
            v[idx, c] = 1.0
        v[:, c] /= np.linalg.norm(v[:, c])
    v.setflags(write=False)
    return v


@dataclass
class SymmetricState:
    N: int
    t: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return math.comb(self.N + self.t - 1, self.t)

    def full(self) -> np.ndarray:
        """The state as an operator on ``(C^N)^{(x)t}``."""
        v = symmetric_isometry(self.N, self.t)
        return v @ self.matrix @ v.T


def haar_state_moment(N: int, t: int) -> SymmetricState:
    """Maximally mixed state on ``Sym^t(C^N)``."""
    d = math.comb(N + t - 1, t)
    return SymmetricState(N, t, np.eye(d, dtype=complex) / d)


def product_state(alpha: np.ndarray, t: int) -> SymmetricState:
    """``(|alpha><alpha|)^{(x)t}`` in symmetric coordinates."""
    alpha = np.asarray(alpha, dtype=complex)
    alpha = alpha / np.linalg.norm(alpha)
    vec = alpha
    for _ in range(t - 1):
        vec = np.kron(vec, alpha)
    sym = symmetric_isometry(len(alpha), t).T @ vec
    return SymmetricState(len(alpha), t, np.outer(sym, sym.conj()))


@lru_cache(maxsize=None)
def channel_unitaries(n: int, t: int) -> np.ndarray:
    """``V^T (e^{i theta P/2})^{(x)t} V`` for every Pauli and every angle in ``Theta_2t``.

    The conjugation action has integer spectrum in ``[-t, t]``, so averaging
    over these ``4t`` angles reproduces the uniform average over ``(-pi, pi)``
    exactly.
    """
    N = 2**n
    v = symmetric_isometry(N, t)
    out = []
    for p in enumerate_paulis(n):
        pm = to_matrix(p)
        for theta in discrete_angles(2 * t):
            u = math.cos(theta / 2) * np.eye(N) + 1j * math.sin(theta / 2) * pm
            ut = u
            for _ in range(t - 1):
                ut = np.kron(ut, u)
            out.append(v.T @ ut @ v)
    arr = np.array(out)
    arr.setflags(write=False)
    return arr


def _check_qubit_state(state: SymmetricState) -> int:
    n = state.N.bit_length() - 1
    if 2**n != state.N:
        raise ValueError(f"dimension must be a power of two, got {state.N}")
    return n


def apply_channel_power(state: SymmetricState, k: int) -> SymmetricState:
    """Apply the one-step walk channel ``k`` times."""
    if k < 0:
        raise ValueError("k must be >= 0")
    n = _check_qubit_state(state)
    us = channel_unitaries(n, state.t)
    rho = state.matrix
    for _ in range(k):
        rho = np.einsum("kij,jl,kml->im", us, rho, us.conj(), optimize=True) / len(us)
    return SymmetricState(state.N, state.t, rho)


def trace_norm(a: np.ndarray) -> float:
    """Schatten 1-norm of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh((a + a.conj().T) / 2))))


def state_design_bound(N: int, t: int, k: int) -> float:
    """``C(N+t-1, t)^{1/2} (1 - N/(2t(N+1)) - N/(2(N^2-1)))^k``."""
    factor = 1 - N / (2 * t * (N + 1)) - N / (2 * (N * N - 1))
    return math.sqrt(math.comb(N + t - 1, t)) * factor**k


def state_design_distance(n: int, t: int, k: int, alpha: np.ndarray,
                          check: bool = True, tol: float = 1e-8) -> float:
    """Trace-norm distance of the walked ``t``-copy state from the Haar moment."""
    N = 2**n
    if len(alpha) != N:
        raise ValueError(f"state vector must have length {N}")
    out = apply_channel_power(product_state(alpha, t), k)
    dist = trace_norm(out.matrix - haar_state_moment(N, t).matrix)
    bound = state_design_bound(N, t, k)
    if check and dist > bound + tol:
        raise BoundViolation(
            f"distance <= C(N+t-1,t)^(1/2) (1 - N/(2t(N+1)) - N/(2(N^2-1)))^k "
            f"violated: {dist!r} > {bound!r}"
        )
    return dist
