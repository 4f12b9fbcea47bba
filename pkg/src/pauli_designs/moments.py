"""Moment operators of random Pauli rotations and their spectral gaps.

The represented Pauli ``tau(P/2)`` acts on ``(C^N)^{2t}`` with tensor slots
ordered ``ket_1, bra_1, ..., ket_t, bra_t``.  Its spectrum is integral, so the
angle average of ``exp(i theta tau(P/2))`` is the kernel projector, and the
moment operator of the walk is the mean kernel projector ``M``.  The Haar
moment is the projector ``H`` onto the span of permutation operators.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from . import __version__
from .pauli import PauliString, enumerate_paulis, enumerate_skew_paulis, to_matrix
from .sampling import ElementaryGenerator

__all__ = [
    "BoundViolation",
    "GapReport",
    "DENSE_DIM_LIMIT",
    "KERNEL_THRESHOLD",
    "build_tau_star",
    "build_rho_star",
    "hermitian_eigvalsh",
    "kernel_projector",
    "mean_kernel_projector",
    "orthogonal_mean_kernel_projector",
    "haar_projector",
    "permutation_gram",
    "spectral_gap_report",
    "orthogonal_moment_gap",
    "theorem_bound",
    "casimir_bound",
    "improved_bound",
    "orthogonal_bound",
]

DENSE_DIM_LIMIT = 4096
# nonzero eigenvalues are integers, or half-integers for skew Paulis on an odd
# number of copies; cut halfway between 0 and the smallest possible magnitude
KERNEL_THRESHOLD = 0.25
BOUND_SLACK = 1e-9
GRAM_RCOND = 1e-8
TRIVIAL_EIG_THRESHOLD = 1 - 1e-9


class BoundViolation(AssertionError):
    """A computed gap exceeded the closed-form bound it is checked against."""


def _check_dim(dim: int, limit: int) -> None:
    if dim > limit:
        raise MemoryError(f"moment dimension {dim} exceeds the dense limit {limit}")


def _embed_slots(term: sp.spmatrix, slot_dim: int, slots: int, width: int) -> sp.csr_matrix:
    """Sum over positions ``j`` of ``I^(j) (x) term (x) I^(slots - j - width)``."""
    total = None
    for j in range(0, slots, width):
        left = sp.identity(slot_dim**j, format="csr")
        right = sp.identity(slot_dim ** (slots - j - width), format="csr")
        piece = sp.kron(sp.kron(left, term, format="csr"), right, format="csr")
        total = piece if total is None else total + piece
    return total.tocsr()


def build_tau_star(p: PauliString, t: int, dense_limit: int = DENSE_DIM_LIMIT,
                   sparse: bool = False):
    """Represented operator ``tau(P/2)`` on ``(C^N)^{2t}``.

    Returns a dense array unless ``sparse=True``.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    n_dim = 2**p.num_qubits
    dim = n_dim ** (2 * t)
    _check_dim(dim, dense_limit)
    pm = sp.csr_matrix(to_matrix(p))
    eye = sp.identity(n_dim, format="csr")
    pair = (sp.kron(pm, eye) - sp.kron(eye, pm.conj())) * 0.5
    tau = _embed_slots(pair, n_dim, 2 * t, 2)
    return tau if sparse else tau.toarray()


def build_rho_star(generator, t: int, dense_limit: int = DENSE_DIM_LIMIT,
                   sparse: bool = False):
    """Hermitian generator of ``O -> O^{(x)t}`` on ``(C^N)^t``.

    For a skew Pauli ``P`` this is ``rho(P/2)``; for an elementary
    ``E_ab`` it is ``i rho(E_ab)``, which has the same kernel and an integer
    spectrum.
    """
    if isinstance(generator, PauliString):
        single = sp.csr_matrix(to_matrix(generator)) * 0.5
        n_dim = 2**generator.num_qubits
    elif isinstance(generator, ElementaryGenerator):
        single = sp.csr_matrix(1j * generator.matrix())
        n_dim = generator.dim
    else:
        raise TypeError(f"unsupported generator {generator!r}")
    _check_dim(n_dim**t, dense_limit)
    rho = _embed_slots(single, n_dim, t, 1)
    return rho if sparse else rho.toarray()


def _blocks(h) -> list[np.ndarray]:
    """Index sets of the connected components of the sparsity pattern of ``h``."""
    pattern = abs(sp.csr_matrix(h))
    pattern.eliminate_zeros()
    _, labels = connected_components(pattern, directed=False)
    order = np.argsort(labels, kind="stable")
    cuts = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(order, cuts)


def _check_hermitian(h, tol: float = 1e-12) -> None:
    if sp.issparse(h):
        diff = abs(h - h.conj().T)
        err = diff.max() if diff.nnz else 0.0
    else:
        err = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    if err > tol:
        raise ValueError(f"operator is not Hermitian (max deviation {err:.3g})")


def _block_eigh(h):
    """Yield ``(indices, eigenvalues, eigenvectors)`` per sparsity block."""
    hs = sp.csr_matrix(h)
    for idx in _blocks(hs):
        sub = hs[idx][:, idx].toarray()
        w, v = np.linalg.eigh(sub)
        yield idx, w, v


def hermitian_eigvalsh(h) -> np.ndarray:
    """Sorted eigenvalues of a Hermitian matrix, solved block by block."""
    _check_hermitian(h)
    return np.sort(np.concatenate([w for _, w, _ in _block_eigh(h)]))


def _accumulate_kernel(acc: np.ndarray, h, weight: float) -> None:
    for idx, w, v in _block_eigh(h):
        keep = np.abs(w) < KERNEL_THRESHOLD
        if keep.any():
            vk = v[:, keep]
            acc[np.ix_(idx, idx)] += weight * (vk @ vk.conj().T)


def kernel_projector(h) -> np.ndarray:
    """Orthogonal projector onto the eigenvectors of ``h`` with ``|eig| < 0.25``.

    Exact for operators whose nonzero eigenvalues are at least 1/2 in
    magnitude, which holds for every represented Pauli here.
    """
    _check_hermitian(h)
    dim = h.shape[0]
    acc = np.zeros((dim, dim), dtype=complex)
    _accumulate_kernel(acc, h, 1.0)
    return acc


def mean_kernel_projector(n: int, t: int, dense_limit: int = DENSE_DIM_LIMIT) -> np.ndarray:
    """Uniform average of ``K(tau(P/2))`` over all non-identity Paulis."""
    paulis = enumerate_paulis(n)
    dim = 4 ** (n * t)
    _check_dim(dim, dense_limit)
    acc = np.zeros((dim, dim), dtype=complex)
    w = 1.0 / len(paulis)
    for p in paulis:
        _accumulate_kernel(acc, build_tau_star(p, t, dense_limit, sparse=True), w)
    return acc


def orthogonal_generators(dim: int, generator_set: str) -> list:
    if generator_set == "skew_pauli":
        n = dim.bit_length() - 1
        if dim < 1 or 2**n != dim:
            raise ValueError(f"skew Pauli generators need a power-of-two dimension, got {dim}")
        if dim <= 4:
            raise ValueError("skew Pauli designs need N > 4 (SO(2), SO(4) are not simple)")
        return list(enumerate_skew_paulis(n))
    if generator_set == "elementary":
        if dim < 3:
            raise ValueError("elementary generators need N >= 3")
        return [ElementaryGenerator(dim, a, b) for a in range(dim) for b in range(a + 1, dim)]
    raise ValueError(f"unknown orthogonal generator set {generator_set!r}")


def orthogonal_mean_kernel_projector(dim: int, t: int, generator_set: str,
                                     dense_limit: int = DENSE_DIM_LIMIT) -> np.ndarray:
    gens = orthogonal_generators(dim, generator_set)
    size = dim**t
    _check_dim(size, dense_limit)
    acc = np.zeros((size, size), dtype=complex)
    for g in gens:
        _accumulate_kernel(acc, build_rho_star(g, t, dense_limit, sparse=True), 1.0 / len(gens))
    return acc


def _cycle_count(perm: tuple[int, ...]) -> int:
    seen, cycles = set(), 0
    for start in range(len(perm)):
        if start not in seen:
            cycles += 1
            j = start
            while j not in seen:
                seen.add(j)
                j = perm[j]
    return cycles


def permutation_gram(dim: int, t: int) -> np.ndarray:
    """``G[a, b] = dim ** cycles(a^-1 b)`` over the permutations of ``t`` slots."""
    perms = list(itertools.permutations(range(t)))
    g = np.empty((len(perms), len(perms)))
    for i, a in enumerate(perms):
        inv = np.argsort(a)
        for j, b in enumerate(perms):
            g[i, j] = float(dim) ** _cycle_count(tuple(inv[list(b)]))
    return g


def _vectorized_permutations(dim: int, t: int) -> np.ndarray:
    """Columns are the permutation operators, flattened in ket/bra interleaved order."""
    perms = list(itertools.permutations(range(t)))
    cols = np.zeros((dim ** (2 * t), len(perms)))
    for c, perm in enumerate(perms):
        for js in itertools.product(range(dim), repeat=t):
            idx = 0
            for k in range(t):
                idx = (idx * dim + js[perm[k]]) * dim + js[k]
            cols[idx, c] = 1.0
    return cols


def haar_projector(n: int, t: int, dense_limit: int = DENSE_DIM_LIMIT) -> np.ndarray:
    """Haar average of ``(U (x) conj(U))^{(x)t}``, from the permutation Gram matrix."""
    if t > 6:
        raise MemoryError("permutation Gram matrix limited to t <= 6")
    dim = 2**n
    _check_dim(dim ** (2 * t), dense_limit)
    v = _vectorized_permutations(dim, t)
    g = v.T @ v
    return (v @ np.linalg.pinv(g, rcond=GRAM_RCOND, hermitian=True) @ v.T).astype(complex)


def theorem_bound(n: int, t: int) -> float:
    """``1 - 1/(4t) - 1/(4^n - 1)``."""
    return 1 - 1 / (4 * t) - 1 / (4**n - 1)


def casimir_bound(n: int, t: int) -> float:
    """``1 - N^2/(4t(N^2 - 1)) - 1/(N^2 - 1)``; sharper than :func:`theorem_bound`."""
    n2 = 4**n
    return 1 - n2 / (4 * t * (n2 - 1)) - 1 / (n2 - 1)


def improved_bound(n: int, t: int) -> float | None:
    """``1 - N(N - t + 1) / (2t (N^2 - 1))`` when ``t <= N/2``."""
    big = 2**n
    if 2 * t > big:
        return None
    return 1 - big * (big - t + 1) / (2 * t * (big * big - 1))


def orthogonal_bound(dim: int, t: int, generator_set: str) -> float:
    pairs = dim * (dim - 1)
    if generator_set == "skew_pauli":
        return 1 - (dim - 2) / (2 * t * (dim - 1)) - 2 / pairs
    if generator_set == "elementary":
        return 1 - 2 * (dim - 2) / (t * pairs) - 2 / pairs
    raise ValueError(f"unknown orthogonal generator set {generator_set!r}")


_FORMULAS = {
    "unitary": "gap_norm <= 1 - 1/(4t) - 1/(4^n - 1)",
    "unitary_casimir": "gap_norm <= 1 - N^2/(4t(N^2-1)) - 1/(N^2-1)",
    "unitary_small_t": "gap_norm <= 1 - N(N-t+1)/(2t(N^2-1)) for t <= N/2",
    "skew_pauli": "gap_norm <= 1 - (N-2)/(2t(N-1)) - 2/(N(N-1))",
    "elementary": "gap_norm <= 1 - 2(N-2)/(t N(N-1)) - 2/(N(N-1))",
}


@dataclass
class GapReport:
    n: int | None
    t: int
    group: str
    generator_set: str
    gap_norm: float
    theorem_bound: float
    improved_bound: float | None
    trivial_dim: int
    dim: int
    casimir_bound: float | None = None
    tol: float = BOUND_SLACK
    seed: int | None = None
    N: int | None = None
    bound_formulas: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    version: str = __version__

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def check(self) -> "GapReport":
        """Raise ``BoundViolation`` if a bound is exceeded by more than ``tol``."""
        if self.gap_norm > self.theorem_bound + self.tol:
            raise BoundViolation(
                f"{self.bound_formulas[0]} violated: "
                f"{self.gap_norm!r} > {self.theorem_bound!r}"
            )
        if self.casimir_bound is not None and self.gap_norm > self.casimir_bound + self.tol:
            raise BoundViolation(
                f"{_FORMULAS['unitary_casimir']} violated: "
                f"{self.gap_norm!r} > {self.casimir_bound!r}"
            )
        if self.improved_bound is not None and self.gap_norm > self.improved_bound + self.tol:
            raise BoundViolation(
                f"{_FORMULAS['unitary_small_t']} violated: "
                f"{self.gap_norm!r} > {self.improved_bound!r}"
            )
        return self


def spectral_gap_report(n: int, t: int, dense_limit: int = DENSE_DIM_LIMIT,
                        check: bool = True) -> GapReport:
    """Exact ``||C_t - H_t||`` for the uniform random Pauli rotation."""
    m = mean_kernel_projector(n, t, dense_limit)
    h = haar_projector(n, t, dense_limit)
    trivial = int(round(np.trace(h).real))
    m -= h
    gap = float(max(np.linalg.eigvalsh(m)[-1], 0.0))
    small = improved_bound(n, t)
    formulas = [_FORMULAS["unitary"], _FORMULAS["unitary_casimir"]] + ([_FORMULAS["unitary_small_t"]] if small is not None else [])
    report = GapReport(
        n=n, t=t, group="unitary", generator_set="full_pauli", gap_norm=gap,
        theorem_bound=theorem_bound(n, t), improved_bound=small,
        casimir_bound=casimir_bound(n, t),
        trivial_dim=trivial, dim=4 ** (n * t), N=2**n, bound_formulas=formulas,
        notes=["bound over all finite-dimensional representations not numerically verified"],
    )
    return report.check() if check else report


def orthogonal_moment_gap(dim: int, t: int, generator_set: str,
                          dense_limit: int = DENSE_DIM_LIMIT,
                          check: bool = True) -> GapReport:
    """Exact ``||E O^{(x)t} - Haar||`` for the skew-Pauli or elementary walk.

    The Haar projector is read off as the eigenvalue-one eigenspace of ``M``.
    """
    m = orthogonal_mean_kernel_projector(dim, t, generator_set, dense_limit)
    w = np.linalg.eigvalsh(m)
    trivial = int(np.sum(w >= TRIVIAL_EIG_THRESHOLD))
    rest = w[w < TRIVIAL_EIG_THRESHOLD]
    gap = float(max(rest[-1], 0.0)) if rest.size else 0.0
    n = dim.bit_length() - 1 if generator_set == "skew_pauli" else None
    report = GapReport(
        n=n, t=t, group="orthogonal", generator_set=generator_set, gap_norm=gap,
        theorem_bound=orthogonal_bound(dim, t, generator_set), improved_bound=None,
        trivial_dim=trivial, dim=dim**t, N=dim, bound_formulas=[_FORMULAS[generator_set]],
    )
    return report.check() if check else report


def pair_partition_count(t: int) -> int:
    """Number of perfect matchings of ``t`` points, ``(t-1)!!`` for even ``t``."""
    if t % 2:
        return 0
    return math.prod(range(t - 1, 0, -2))
