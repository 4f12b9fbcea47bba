"""Closed-form SU(2) quantities and a spin-matrix oracle for them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "SpinIrrep",
    "kernel_overlap",
    "kernel_overlap_exact",
    "irrep_gap_norm",
    "su2_design_gap",
    "build_spin_irrep",
    "kernel_vector",
    "numerical_overlaps",
]


def kernel_overlap_exact(ell: int) -> Fraction:
    """Common overlap of the kernel vectors of ``Jx, Jy, Jz`` in the spin-ell irrep.

    ``(-1)**(ell/2) * C(ell, ell/2) / 2**ell`` for even ``ell``, else 0.
    """
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    if ell % 2:
        return Fraction(0)
    sign = -1 if (ell // 2) % 2 else 1
    return Fraction(sign * math.comb(ell, ell // 2), 2**ell)


def kernel_overlap(ell: int) -> float:
    return float(kernel_overlap_exact(ell))


def irrep_gap_norm(ell: int) -> float:
    """``||K(Jx) + K(Jy) + K(Jz)|| / 3 = max(1 - f, 1 + 2f) / 3``."""
    f = kernel_overlap_exact(ell)
    return float(max(1 - f, 1 + 2 * f) / 3)


def su2_design_gap(t: int) -> float:
    """``||C_t - H_t||`` for the single-qubit walk: the worst spin ``ell <= t``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return max(irrep_gap_norm(ell) for ell in range(1, t + 1))


@dataclass
class SpinIrrep:
    ell: int
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.ell + 1

    def ladder_coefficient(self, k: int) -> float:
        """``a_k = sqrt(ell(ell+1) - k(k+1))``, so that ``J+ |k> = a_k |k+1>``."""
        return math.sqrt(self.ell * (self.ell + 1) - k * (k + 1))

    def casimir(self) -> np.ndarray:
        return self.jx @ self.jx + self.jy @ self.jy + self.jz @ self.jz


def build_spin_irrep(ell: int, dense_limit: int = 4097) -> SpinIrrep:
    """Spin matrices in the basis ``|ell>, |ell-1>, ..., |-ell>``."""
    if ell < 0 or int(ell) != ell:
        raise ValueError("only integer ell >= 0 is supported")
    ell = int(ell)
    dim = 2 * ell + 1
    if dim > dense_limit:
        raise MemoryError(f"spin-{ell} irrep exceeds the dense limit")
    ms = ell - np.arange(dim)
    jz = np.diag(ms).astype(complex)
    jp = np.zeros((dim, dim), dtype=complex)
    for i in range(1, dim):
        k = ms[i]
        # J+ |k> = a_k |k+1>, row i-1 holds m = k + 1
        jp[i - 1, i] = math.sqrt(ell * (ell + 1) - k * (k + 1))
    jm = jp.conj().T
    return SpinIrrep(ell, (jp + jm) / 2, (jp - jm) / 2j, jz)


def kernel_vector(j: np.ndarray) -> np.ndarray:
    """Unit kernel vector of ``j``, phased so its largest entry is real positive."""
    w, v = np.linalg.eigh(j)
    i = int(np.argmin(np.abs(w)))
    if abs(w[i]) > 1e-8:
        raise ValueError("operator has a trivial kernel")
    vec = v[:, i]
    top = vec[np.argmax(np.abs(vec))]
    return vec * (abs(top) / top)


def numerical_overlaps(ell: int) -> dict[str, complex]:
    """Overlaps of numerically extracted kernel vectors of ``Jx, Jy, Jz``."""
    s = build_spin_irrep(ell)
    x, y, z = (kernel_vector(j) for j in (s.jx, s.jy, s.jz))
    xy, yz, zx = np.vdot(x, y), np.vdot(y, z), np.vdot(z, x)
    projectors = [np.outer(v, v.conj()) for v in (x, y, z)]
    norm = np.linalg.norm(sum(projectors), 2) / 3
    return {"xy": xy, "yz": yz, "zx": zx, "triple": xy * yz * zx, "gap_norm": norm}
