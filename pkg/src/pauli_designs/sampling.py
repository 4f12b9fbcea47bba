"""Random Pauli rotation walks.

Every step of a walk is a deterministic function of ``(seed, step_index)``:
the step's randomness comes from ``numpy.random.SeedSequence([seed, step])``,
so any step can be regenerated without replaying the ones before it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union

import numpy as np

from .pauli import (
    DENSE_QUBIT_LIMIT,
    PauliString,
    apply_pauli_left,
    enumerate_skew_paulis,
)

__all__ = [
    "AngleMode",
    "ElementaryGenerator",
    "RotationSample",
    "WalkConfig",
    "discrete_angles",
    "sample_step",
    "iter_walk",
    "walk_unitary",
    "required_steps",
    "write_transcript",
    "read_transcript",
]

GENERATOR_SETS = ("full_pauli", "skew_pauli", "elementary")


@dataclass(frozen=True)
class AngleMode:
    """Angle distribution of a single step.

    ``kind="continuous"`` draws uniformly from ``(-half_width, half_width)``;
    ``kind="discrete"`` draws uniformly from ``{m*pi/t : m = -t, ..., t-1}``.
    """

    kind: str = "continuous"
    half_width: float = math.pi
    t: int | None = None

    def __post_init__(self):
        if self.kind == "continuous":
            if not self.half_width > 0:
                raise ValueError("half_width must be positive")
        elif self.kind == "discrete":
            if self.t is None or self.t < 1:
                raise ValueError("discrete angle mode needs t >= 1")
        else:
            raise ValueError(f"unknown angle mode {self.kind!r}")

    @classmethod
    def continuous(cls, half_width: float = math.pi) -> "AngleMode":
        return cls("continuous", half_width)

    @classmethod
    def discrete(cls, t: int) -> "AngleMode":
        return cls("discrete", math.pi, t)

    def angle(self, u: float) -> float:
        """Map a uniform ``u`` in ``(0, 1)`` to an angle."""
        if self.kind == "continuous":
            return self.half_width * (2.0 * u - 1.0)
        m = min(int(u * 2 * self.t), 2 * self.t - 1) - self.t
        return m * math.pi / self.t


def discrete_angles(t: int) -> np.ndarray:
    """The ``2t`` angles ``m*pi/t`` for integer ``m`` in ``[-t, t-1]``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return np.arange(-t, t) * math.pi / t


@dataclass(frozen=True)
class ElementaryGenerator:
    """The skew-symmetric matrix ``|a><b| - |b><a|`` (0-based, ``a < b``)."""

    dim: int
    a: int
    b: int

    def __post_init__(self):
        if not 0 <= self.a < self.b < self.dim:
            raise ValueError(
                f"need 0 <= a < b < dim, got a={self.a}, b={self.b}, dim={self.dim}"
            )

    @property
    def label(self) -> str:
        return f"E{self.a},{self.b}"

    def matrix(self) -> np.ndarray:
        e = np.zeros((self.dim, self.dim))
        e[self.a, self.b] = 1.0
        e[self.b, self.a] = -1.0
        return e


Generator = Union[PauliString, ElementaryGenerator]


@dataclass(frozen=True)
class RotationSample:
    generator: Generator
    angle: float

    @property
    def pauli(self) -> PauliString:
        if not isinstance(self.generator, PauliString):
            raise AttributeError("elementary rotations carry no Pauli string")
        return self.generator


@dataclass(frozen=True)
class WalkConfig:
    """A k-step random walk.

    ``n`` is the qubit count for the Pauli generator sets and the matrix
    dimension ``N`` for ``generator_set="elementary"``.
    """

    n: int
    k: int
    angle_mode: AngleMode = field(default_factory=AngleMode)
    generator_set: str = "full_pauli"
    seed: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.generator_set not in GENERATOR_SETS:
            raise ValueError(f"unknown generator set {self.generator_set!r}")
        if self.generator_set == "elementary":
            if self.n < 2:
                raise ValueError("elementary generators need dimension >= 2")
        elif self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def dim(self) -> int:
        return self.n if self.generator_set == "elementary" else 2**self.n


@lru_cache(maxsize=None)
def _pair_table(dim: int) -> tuple[np.ndarray, np.ndarray]:
    a, b = np.triu_indices(dim, k=1)
    return a, b


def _generator_count(cfg: WalkConfig) -> int:
    if cfg.generator_set == "full_pauli":
        return 4**cfg.n - 1
    if cfg.generator_set == "skew_pauli":
        return 2 ** (cfg.n - 1) * (2**cfg.n - 1)
    return cfg.n * (cfg.n - 1) // 2


def _generator(cfg: WalkConfig, index: int) -> Generator:
    if cfg.generator_set == "full_pauli":
        x, z = divmod(index + 1, 2**cfg.n)
        return PauliString(cfg.n, x, z)
    if cfg.generator_set == "skew_pauli":
        return enumerate_skew_paulis(cfg.n)[index]
    a, b = _pair_table(cfg.n)
    return ElementaryGenerator(cfg.n, int(a[index]), int(b[index]))


def sample_step(cfg: WalkConfig, step_index: int) -> RotationSample:
    """Draw step ``step_index`` of the walk described by ``cfg``."""
    count = _generator_count(cfg)
    if count == 0:
        raise ValueError("empty generator set")
    if step_index < 0:
        raise ValueError("step_index must be >= 0")
    w0, w1 = np.random.SeedSequence([cfg.seed, step_index]).generate_state(
        2, np.uint64
    )
    index = (int(w0) * count) >> 64
    u = ((int(w1) >> 11) + 0.5) * 2.0**-53
    return RotationSample(_generator(cfg, index), cfg.angle_mode.angle(u))


def iter_walk(cfg: WalkConfig) -> Iterator[RotationSample]:
    for i in range(cfg.k):
        yield sample_step(cfg, i)


def rotation_matrix(sample: RotationSample) -> np.ndarray:
    """Dense matrix of a single step: ``exp(i angle P / 2)`` or ``exp(angle E)``."""
    g = sample.generator
    if isinstance(g, ElementaryGenerator):
        return apply_rotation_left(sample, np.eye(g.dim))
    return apply_rotation_left(sample, np.eye(2**g.num_qubits, dtype=complex))


def apply_rotation_left(sample: RotationSample, m: np.ndarray) -> np.ndarray:
    """Return ``R @ m`` for the step's rotation ``R`` without building ``R``."""
    g = sample.generator
    if isinstance(g, ElementaryGenerator):
        c, s = math.cos(sample.angle), math.sin(sample.angle)
        out = m.copy()
        ra, rb = m[g.a].copy(), m[g.b].copy()
        out[g.a] = c * ra + s * rb
        out[g.b] = c * rb - s * ra
        return out
    half = sample.angle / 2.0
    return math.cos(half) * m + 1j * math.sin(half) * apply_pauli_left(g, m)


def walk_unitary(cfg: WalkConfig, dense_limit: int = DENSE_QUBIT_LIMIT) -> np.ndarray:
    """Product of the k step rotations, step 1 applied first (rightmost)."""
    if cfg.generator_set != "elementary" and cfg.n > dense_limit:
        raise MemoryError(f"{cfg.n} qubits exceeds the dense limit {dense_limit}")
    u = np.eye(cfg.dim, dtype=complex)
    for sample in iter_walk(cfg):
        u = apply_rotation_left(sample, u)
    return u


def required_steps(n: int, t: int, eps: float, target: str = "diamond") -> int:
    """Walk length that guarantees an ``eps``-approximate t-design.

    ``target="diamond"`` bounds the diamond-norm distance between the k-step
    channel and the Haar channel; ``"relative"`` gives the multiplicative
    ``(1 +- eps)`` sandwich.  Logarithms are natural.
    """
    if n < 1 or t < 1:
        raise ValueError("n and t must be >= 1")
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    if target == "diamond":
        c = 4 * math.log(2)
    elif target == "relative":
        c = 4 * math.log(8)
    else:
        raise ValueError(f"unknown target {target!r}")
    return math.ceil(c * n * t * t + 4 * t * math.log(1 / eps))


def write_transcript(cfg: WalkConfig, fh) -> None:
    """Write the walk as JSON lines ``{"step", "pauli", "angle"}``."""
    for i, s in enumerate(iter_walk(cfg)):
        rec = {"step": i, "pauli": s.generator.label, "angle": s.angle}
        fh.write(json.dumps(rec) + "\n")


def read_transcript(fh) -> list[tuple[int, str, float]]:
    out = []
    for line in fh:
        line = line.strip()
        if line:
            rec = json.loads(line)
            out.append((int(rec["step"]), rec["pauli"], float(rec["angle"])))
    return out
