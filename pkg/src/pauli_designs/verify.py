"""Acceptance checks, shared by ``pauli-designs verify`` and the test suite.

Each check returns a :class:`CheckResult`; ``scale="slow"`` adds the
4096-dimensional and Monte Carlo cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .casimir import casimir_lower_bound, casimir_upper_bound, irrep_blocks
from .circuits import (
    ConnectivityGraph,
    circuit_to_unitary,
    compile_log_depth,
    compile_spanning_tree,
    gate_counts,
)
from .moments import (
    build_tau_star,
    hermitian_eigvalsh,
    improved_bound,
    kernel_projector,
    orthogonal_mean_kernel_projector,
    orthogonal_moment_gap,
    spectral_gap_report,
    theorem_bound,
)
from .orthogonal import (
    GIVENS_FLOPS_PER_ENTRY,
    OrthoSamplerConfig,
    sample_orthogonal,
    sample_orthogonal_batch,
)
from .pauli import PauliString, enumerate_paulis, enumerate_skew_paulis, to_matrix
from .sampling import discrete_angles
from .states import state_design_bound, state_design_distance
from .su2 import kernel_overlap, numerical_overlaps

__all__ = ["CheckResult", "CHECKS", "run_checks", "pauli_exponential"]

SCALES = ("fast", "slow")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"


def pauli_exponential(p: PauliString, theta: float) -> np.ndarray:
    """Dense ``exp(i theta P / 2)`` from ``P^2 = 1``."""
    return math.cos(theta / 2) * np.eye(2**p.num_qubits) + 1j * math.sin(theta / 2) * to_matrix(p)


def _tensor_power_pair(u: np.ndarray, t: int) -> np.ndarray:
    pair = np.kron(u, u.conj())
    out = pair
    for _ in range(t - 1):
        out = np.kron(out, pair)
    return out


def check_su2_values(scale: str = "fast") -> CheckResult:
    """Criterion 1: n=1 gaps are 4, 6, 6, 7 twelfths."""
    expected = {1: 4 / 12, 2: 6 / 12, 3: 6 / 12, 4: 7 / 12}
    got = {t: spectral_gap_report(1, t).gap_norm for t in expected}
    err = max(abs(got[t] - expected[t]) for t in expected)
    return CheckResult("1 su(2) exact gap values {4,6,6,7}/12", err <= 1e-9,
                       {"gaps": got, "max_err": err, "tol": 1e-9})


def check_kernel_overlaps(scale: str = "fast") -> CheckResult:
    """Criterion 2: spin-matrix kernels reproduce the overlap law, ell = 1..8."""
    errs = {}
    for ell in range(1, 9):
        ov = numerical_overlaps(ell)
        f = kernel_overlap(ell)
        e = max(abs(abs(ov[k]) - abs(f)) for k in ("xy", "yz", "zx"))
        e = max(e, abs(ov["triple"] - f**3))
        errs[ell] = e
    worst = max(errs.values())
    return CheckResult("2 kernel overlap law ell=1..8", worst <= 1e-10,
                       {"max_err": worst, "tol": 1e-10})


def check_theorem_bound(scale: str = "fast") -> CheckResult:
    """Criterion 3: exact gaps obey the main bound, and the small-t bound where stated."""
    cases = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (3, 1)]
    if scale == "slow":
        cases.append((2, 3))
    rows, ok = [], True
    for n, t in cases:
        r = spectral_gap_report(n, t, check=False)
        good = r.gap_norm <= theorem_bound(n, t) + 1e-9
        if (n, t) in ((2, 2), (3, 1)):
            good = good and r.gap_norm <= improved_bound(n, t) + 1e-9
        ok = ok and good
        rows.append({"n": n, "t": t, "gap": r.gap_norm, "bound": r.theorem_bound,
                     "small_t": r.improved_bound})
    return CheckResult("3 main gap bound holds (and small-t bound at (2,2), (3,1))", ok,
                       {"cases": rows})


def check_integer_spectrum(scale: str = "fast") -> CheckResult:
    """Criterion 4: spectra of tau(P/2) are exactly the integers -t..t."""
    worst, full = 0.0, True
    for n in (1, 2):
        for t in (1, 2, 3):
            for p in enumerate_paulis(n):
                w = hermitian_eigvalsh(build_tau_star(p, t, sparse=True))
                worst = max(worst, float(np.max(np.abs(w - np.round(w)))))
                present = set(np.round(w).astype(int).tolist())
                full = full and present == set(range(-t, t + 1))
    return CheckResult("4 integer spectrum of tau(P/2), n<=2, t<=3",
                       worst <= 1e-9 and full, {"max_err": worst, "all_integers_present": full})


def check_discrete_angles(scale: str = "fast") -> CheckResult:
    """Criterion 5: the Theta_t average equals the kernel projector."""
    worst = 0.0
    for n in (1, 2):
        for t in (1, 2, 3):
            for p in enumerate_paulis(n):
                k = kernel_projector(build_tau_star(p, t, sparse=True))
                for theta in discrete_angles(t):
                    k -= _tensor_power_pair(pauli_exponential(p, theta), t) / (2 * t)
                worst = max(worst, float(np.max(np.abs(k))))
                del k
    return CheckResult("5 discrete angle average equals kernel projector", worst <= 1e-12,
                       {"max_err": worst, "tol": 1e-12})


def _random_connected_graph(n: int, rng: np.random.Generator) -> ConnectivityGraph:
    # random tree plus a few extra edges
    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        j = int(rng.integers(i))
        u, v = int(order[i]), int(order[j])
        edges.add((min(u, v), max(u, v)))
    for _ in range(int(rng.integers(0, n))):
        u, v = rng.choice(n, 2, replace=False)
        edges.add((int(min(u, v)), int(max(u, v))))
    return ConnectivityGraph(n, tuple(sorted(edges)))


def _random_pauli(n: int, rng: np.random.Generator) -> PauliString:
    while True:
        x, z = (int(v) for v in rng.integers(0, 2**n, size=2))
        if x or z:
            return PauliString(n, x, z)


def check_circuits(scale: str = "fast", seed: int = 7) -> CheckResult:
    """Criterion 6: compiled circuits are exact and within the gate and depth bounds."""
    rng = np.random.default_rng(seed)
    worst, counts_ok = 0.0, True
    for _ in range(200):
        n = int(rng.integers(1, 7))
        p = _random_pauli(n, rng)
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        c = compile_spanning_tree(p, theta, _random_connected_graph(n, rng))
        worst = max(worst, float(np.max(np.abs(circuit_to_unitary(c) - pauli_exponential(p, theta)))))
        cnt = gate_counts(c)
        counts_ok = counts_ok and cnt["clifford_1q"] <= 2 * n and cnt["two_qubit"] <= 2 * n - 2 and cnt["rx"] == 1
    depth_ok = True
    for _ in range(100):
        n = int(rng.integers(1, 11))
        p = _random_pauli(n, rng)
        theta = float(rng.uniform(-math.pi, math.pi))
        c = compile_log_depth(p, theta)
        w = p.weight
        depth_ok = depth_ok and c.depth <= 2 * math.ceil(math.log2(w)) + 3
        if n <= 8:
            worst = max(worst, float(np.max(np.abs(circuit_to_unitary(c) - pauli_exponential(p, theta)))))
    ok = worst <= 1e-10 and counts_ok and depth_ok
    return CheckResult("6 circuit compiler exactness, gate counts, log depth", ok,
                       {"max_err": worst, "counts_ok": counts_ok, "depth_ok": depth_ok})


def check_casimir(scale: str = "fast") -> CheckResult:
    """Criterion 7: the quadratic sum is central and its block scalars obey the bounds."""
    worst, bounds_ok = 0.0, True
    for n in (1, 2):
        N = 2**n
        for t in (1, 2):
            gens = [build_tau_star(p, t) for p in enumerate_paulis(n)]
            cas = sum(g @ g for g in gens)
            worst = max(worst, max(float(np.max(np.abs(cas @ g - g @ cas))) for g in gens))
            probe = build_tau_star(PauliString(n, 0, 1 << (n - 1)), t)
            for b in irrep_blocks(gens, probe):
                if b["ell"] > 0.5:
                    ell = round(b["ell"])
                    lo, hi = casimir_lower_bound(N, ell), casimir_upper_bound(N, ell)
                    bounds_ok = bounds_ok and lo - 1e-9 <= b["casimir"] <= hi + 1e-9
    return CheckResult("7 Casimir invariance and per-block bounds", worst <= 1e-9 and bounds_ok,
                       {"max_commutator": worst, "bounds_ok": bounds_ok})


def check_orthogonal(scale: str = "fast") -> CheckResult:
    """Criterion 8: orthogonal gaps obey their bounds; |Y_n| counts."""
    rows, ok = [], True
    cases = [(8, t, "skew_pauli") for t in (1, 2)]
    cases += [(N, t, "elementary") for N in (3, 4, 5) for t in (1, 2)]
    for N, t, g in cases:
        r = orthogonal_moment_gap(N, t, g, check=False)
        ok = ok and r.gap_norm <= r.theorem_bound + 1e-9
        rows.append({"N": N, "t": t, "set": g, "gap": r.gap_norm, "bound": r.theorem_bound})
    sat = orthogonal_moment_gap(3, 1, "elementary", check=False).gap_norm
    ok = ok and abs(sat - 1 / 3) <= 1e-9
    counts = all(len(enumerate_skew_paulis(n)) == 2 ** (n - 1) * (2**n - 1) for n in range(1, 11))
    return CheckResult("8 orthogonal design bounds, N=3 saturation, |Y_n| counts", ok and counts,
                       {"cases": rows, "saturation": sat, "counts_ok": counts})


def check_state_designs(scale: str = "fast", seed: int = 11) -> CheckResult:
    """Criterion 9: walked t-copy states lie within the trace-distance bound."""
    rng = np.random.default_rng(seed)
    rows, ok = [], True
    cases = [(1, t, k) for t in (1, 2) for k in range(11)] + [(2, 2, k) for k in (0, 1, 3, 5)]
    for n, t, k in cases:
        a = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
        d = state_design_distance(n, t, k, a, check=False)
        b = state_design_bound(2**n, t, k)
        ok = ok and d <= b + 1e-8
        rows.append({"N": 2**n, "t": t, "k": k, "distance": d, "bound": b})
    return CheckResult("9 state design trace distance bound", ok, {"cases": rows})


def check_fast_orthogonal(scale: str = "fast", seed: int = 3) -> CheckResult:
    """Criterion 10: O(kN) Givens cost, long-chain orthogonality, 1/3 contraction at N=3."""
    N, k = 64, 100_000
    o, flops = sample_orthogonal(OrthoSamplerConfig(N, k, "elementary", seed), return_flops=True)
    orth_err = float(np.max(np.abs(o.T @ o - np.eye(N))))
    flops_ok = flops == GIVENS_FLOPS_PER_ENTRY * N * k

    size = 100_000
    m = np.real(orthogonal_mean_kernel_projector(3, 1, "elementary"))
    contraction = []
    stat_ok = True
    for steps in (1, 2, 3):
        batch = sample_orthogonal_batch(3, steps, size, seed + steps)
        mean = batch.mean(axis=0)
        se = batch.std(axis=0) / math.sqrt(size)
        expected = np.linalg.matrix_power(m, steps)
        z = float(np.max(np.abs(mean - expected) / se))
        stat_ok = stat_ok and z <= 5.0
        contraction.append({"k": steps, "mean_trace": float(np.trace(mean)),
                            "expected_trace": float(np.trace(expected)), "max_z": z})
    ok = orth_err <= 1e-10 and flops_ok and stat_ok
    return CheckResult("10 fast orthogonal sampler cost, stability, contraction", ok,
                       {"orth_err": orth_err, "flops": flops, "contraction": contraction})


CHECKS = [
    check_su2_values,
    check_kernel_overlaps,
    check_theorem_bound,
    check_integer_spectrum,
    check_discrete_angles,
    check_circuits,
    check_casimir,
    check_orthogonal,
    check_state_designs,
    check_fast_orthogonal,
]


def run_checks(scale: str = "fast") -> list[CheckResult]:
    if scale not in SCALES:
        raise ValueError(f"unknown scale {scale!r}; choose from {SCALES}")
    return [check(scale) for check in CHECKS]
