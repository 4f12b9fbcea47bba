"""Exact n-qubit Pauli string arithmetic on bit masks.

A Pauli string is stored as two n-bit integers ``x`` and ``z``.  Qubit ``j``
(the ``j``-th letter of the label, counted from the left) lives at bit
``n - 1 - j`` of each mask, so the masks read left to right like the label
and like the row index of the Kronecker-product matrix.

The single-qubit factor is ``I, X, Z, Y`` for ``(x_j, z_j) = (0,0), (1,0),
(0,1), (1,1)`` and the full operator is ``i**popcount(x & z) * X**x Z**z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

__all__ = [
    "PauliString",
    "PauliProduct",
    "enumerate_paulis",
    "enumerate_skew_paulis",
    "multiply",
    "commutes",
    "to_matrix",
    "y_parity",
    "apply_pauli_left",
    "DENSE_QUBIT_LIMIT",
    "ENUMERATION_QUBIT_LIMIT",
]

DENSE_QUBIT_LIMIT = 12
ENUMERATION_QUBIT_LIMIT = 12

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LETTERS.items()}


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True, order=True)
class PauliString:
    """An n-qubit Pauli operator without phase.

    Parameters
    ----------
    num_qubits : int
        Number of qubits ``n``.
    x_mask, z_mask : int
        n-bit masks; qubit ``j`` sits at bit ``n - 1 - j``.

    The identity string (both masks zero) is representable because products
    of Paulis can produce it, but it is not an element of the enumerated set.
    """

    num_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        top = 1 << self.num_qubits
        if not (0 <= self.x_mask < top and 0 <= self.z_mask < top):
            raise ValueError(
                f"masks must fit in {self.num_qubits} bits, "
                f"got x={self.x_mask}, z={self.z_mask}"
            )

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a letter string over ``{I, X, Y, Z}``, leftmost letter = qubit 0."""
        label = label.strip().upper()
        if not label or any(c not in "IXYZ" for c in label):
            raise ValueError(f"invalid Pauli label {label!r}")
        x = z = 0
        for c in label:
            bx, bz = _BITS[c]
            x = (x << 1) | bx
            z = (z << 1) | bz
        return cls(len(label), x, z)

    @property
    def label(self) -> str:
        n = self.num_qubits
        return "".join(
            _LETTERS[((self.x_mask >> (n - 1 - j)) & 1, (self.z_mask >> (n - 1 - j)) & 1)]
            for j in range(n)
        )

    def __str__(self) -> str:
        return self.label

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def letter(self, qubit: int) -> str:
        return self.label[qubit]

    @property
    def support(self) -> list[int]:
        """Qubits carrying a non-identity factor, in increasing order."""
        m = self.x_mask | self.z_mask
        n = self.num_qubits
        return [j for j in range(n) if (m >> (n - 1 - j)) & 1]

    @property
    def weight(self) -> int:
        return _popcount(self.x_mask | self.z_mask)


class PauliProduct(NamedTuple):
    """``phase * string`` with ``phase = 1j ** phase_exponent``."""

    phase_exponent: int
    string: PauliString

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase_exponent % 4]


def _check_same_size(a: PauliString, b: PauliString) -> None:
    if a.num_qubits != b.num_qubits:
        raise ValueError(
            f"qubit count mismatch: {a.num_qubits} vs {b.num_qubits}"
        )


def multiply(a: PauliString, b: PauliString) -> PauliProduct:
    """Return the phase and string of the matrix product ``a @ b``."""
    _check_same_size(a, b)
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    # X^xa Z^za X^xb Z^zb = (-1)^{|za & xb|} X^x Z^z
    e = (
        _popcount(a.x_mask & a.z_mask)
        + _popcount(b.x_mask & b.z_mask)
        - _popcount(x & z)
        + 2 * _popcount(a.z_mask & b.x_mask)
    )
    return PauliProduct(e % 4, PauliString(a.num_qubits, x, z))


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_same_size(a, b)
    return (_popcount(a.x_mask & b.z_mask) + _popcount(a.z_mask & b.x_mask)) % 2 == 0


def y_parity(p: PauliString) -> int:
    """Parity (0 or 1) of the number of ``Y`` factors."""
    return _popcount(p.x_mask & p.z_mask) % 2


def _check_enumerable(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"number of qubits must be a positive integer, got {n!r}")
    if n > ENUMERATION_QUBIT_LIMIT:
        raise ValueError(
            f"enumeration of {4 ** n - 1} Pauli strings exceeds the limit "
            f"n <= {ENUMERATION_QUBIT_LIMIT}"
        )


@lru_cache(maxsize=None)
def enumerate_paulis(n: int) -> tuple[PauliString, ...]:
    """All ``4**n - 1`` non-identity strings, ordered by ``(x_mask, z_mask)``."""
    _check_enumerable(n)
    dim = 1 << n
    return tuple(
        PauliString(n, x, z) for x in range(dim) for z in range(dim) if x or z
    )


@lru_cache(maxsize=None)
def enumerate_skew_paulis(n: int) -> tuple[PauliString, ...]:
    """Strings with an odd number of ``Y`` factors, in canonical order."""
    _check_enumerable(n)
    dim = 1 << n
    return tuple(
        PauliString(n, x, z)
        for x in range(dim)
        for z in range(dim)
        if _popcount(x & z) % 2 == 1
    )


def _phases(p: PauliString) -> np.ndarray:
    """Column phases: ``P |b> = phases[b] |b ^ x>``."""
    dim = 1 << p.num_qubits
    b = np.arange(dim)
    zb = np.bitwise_and(b, p.z_mask)
    parity = np.zeros(dim, dtype=np.int64)
    for k in range(p.num_qubits):
        parity ^= (zb >> k) & 1
    base = (1, 1j, -1, -1j)[_popcount(p.x_mask & p.z_mask) % 4]
    return base * (1 - 2 * parity)


def to_matrix(p: PauliString, dense_limit: int = DENSE_QUBIT_LIMIT) -> np.ndarray:
    """Dense ``2**n x 2**n`` complex matrix of ``p``."""
    if p.num_qubits > dense_limit:
        raise MemoryError(
            f"{p.num_qubits}-qubit dense matrix exceeds dense limit {dense_limit}"
        )
    dim = 1 << p.num_qubits
    cols = np.arange(dim)
    out = np.zeros((dim, dim), dtype=complex)
    out[cols ^ p.x_mask, cols] = _phases(p)
    return out


def apply_pauli_left(p: PauliString, m: np.ndarray) -> np.ndarray:
    """Return ``to_matrix(p) @ m`` in O(size of m) without forming the matrix."""
    dim = 1 << p.num_qubits
    if m.shape[0] != dim:
        raise ValueError(f"expected leading dimension {dim}, got {m.shape[0]}")
    ph = _phases(p)
    rows = np.arange(dim)
    out = np.empty_like(m, dtype=np.result_type(m.dtype, complex))
    out[rows ^ p.x_mask] = ph.reshape((-1,) + (1,) * (m.ndim - 1)) * m
    return out
