"""Compile a Pauli rotation ``exp(i theta P / 2)`` into elementary gates.

Both compilers produce ``C^dagger . RX(theta) . C`` where the Clifford ``C``
maps ``P`` to a single ``X`` on one qubit by conjugation.  ``RX(theta)``
here is ``exp(+i theta X / 2)``, the sign convention of the walk itself.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString

__all__ = [
    "ConnectivityGraph",
    "Gate",
    "CompiledCircuit",
    "compile_spanning_tree",
    "compile_log_depth",
    "circuit_to_unitary",
    "layer_gates",
    "gate_counts",
    "format_circuit",
    "parse_circuit",
    "read_graph",
    "format_graph",
]

ONE_QUBIT_CLIFFORDS = ("H", "S", "SDG")
TWO_QUBIT = ("CNOT", "SWAP")
KINDS = ONE_QUBIT_CLIFFORDS + TWO_QUBIT + ("RX",)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_S = np.diag([1, 1j])
_SDG = np.diag([1, -1j])
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
_INVERSE = {"H": "H", "S": "SDG", "SDG": "S", "CNOT": "CNOT", "SWAP": "SWAP"}


@dataclass(frozen=True)
class ConnectivityGraph:
    num_qubits: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("graph needs at least one qubit")
        seen = set()
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self loop at qubit {u}")
            if not (0 <= u < self.num_qubits and 0 <= v < self.num_qubits):
                raise ValueError(f"edge ({u}, {v}) out of range")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def complete(cls, n: int) -> "ConnectivityGraph":
        return cls(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def path(cls, n: int) -> "ConnectivityGraph":
        return cls(n, tuple((u, u + 1) for u in range(n - 1)))

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_qubits)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in set(self.edges)

    def is_connected(self) -> bool:
        return len(_bfs_order(self.neighbors(), 0)[0]) == self.num_qubits


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind in TWO_QUBIT else 1
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} acts on {arity} qubit(s)")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{self.kind} needs two distinct qubits")
        if (self.kind == "RX") != (self.theta is not None):
            raise ValueError("exactly the RX gate carries an angle")

    def inverse(self) -> "Gate":
        if self.kind == "RX":
            return Gate("RX", self.qubits, -self.theta)
        return Gate(_INVERSE[self.kind], self.qubits)

    def matrix(self) -> np.ndarray:
        if self.kind == "RX":
            c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
            return np.array([[c, 1j * s], [1j * s, c]])
        return {"H": _H, "S": _S, "SDG": _SDG, "CNOT": _CNOT, "SWAP": _SWAP}[self.kind]


@dataclass
class CompiledCircuit:
    """Gates grouped into layers of mutually disjoint gates.

    ``gates`` is always the concatenation of ``layers``.
    """

    num_qubits: int
    layers: list[list[Gate]] = field(default_factory=list)

    @property
    def gates(self) -> list[Gate]:
        return [g for layer in self.layers for g in layer]

    @property
    def depth(self) -> int:
        return len(self.layers)

    @classmethod
    def from_gates(cls, num_qubits: int, gates) -> "CompiledCircuit":
        return cls(num_qubits, layer_gates(gates))


def layer_gates(gates) -> list[list[Gate]]:
    """As-soon-as-possible layering that preserves the order on each qubit."""
    layers: list[list[Gate]] = []
    ready: dict[int, int] = {}
    for g in gates:
        at = max((ready.get(q, 0) for q in g.qubits), default=0)
        if at == len(layers):
            layers.append([])
        layers[at].append(g)
        for q in g.qubits:
            ready[q] = at + 1
    return layers


def gate_counts(c: CompiledCircuit) -> dict[str, int]:
    counts = {"clifford_1q": 0, "two_qubit": 0, "rx": 0}
    for g in c.gates:
        if g.kind in ONE_QUBIT_CLIFFORDS:
            counts["clifford_1q"] += 1
        elif g.kind in TWO_QUBIT:
            counts["two_qubit"] += 1
        else:
            counts["rx"] += 1
    return counts


def _basis_changes(p: PauliString) -> list[Gate]:
    # Conjugation maps Z -> X under H and Y -> X under SDG.
    out = []
    for q in p.support:
        letter = p.letter(q)
        if letter == "Z":
            out.append(Gate("H", (q,)))
        elif letter == "Y":
            out.append(Gate("SDG", (q,)))
    return out


def _sandwich(n: int, prefix: list[Gate], root: int, theta: float) -> CompiledCircuit:
    gates = prefix + [Gate("RX", (root,), float(theta))]
    gates += [g.inverse() for g in reversed(prefix)]
    return CompiledCircuit.from_gates(n, gates)


def _check_pauli(p: PauliString) -> None:
    if p.is_identity:
        raise ValueError("cannot compile the identity Pauli string")


def _bfs_order(adj: list[list[int]], root: int) -> tuple[list[int], dict[int, int]]:
    order, parent = [root], {root: -1}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                order.append(v)
                queue.append(v)
    return order, parent


def compile_spanning_tree(
    p: PauliString, theta: float, graph: ConnectivityGraph
) -> CompiledCircuit:
    """Compile over a connectivity graph with at most ``2n - 2`` CNOT/SWAP gates.

    A BFS spanning tree rooted at the lowest supported qubit collects the X
    support toward the root, deepest edges first: a CNOT when both ends carry
    X, a SWAP when only the child does.
    """
    _check_pauli(p)
    if graph.num_qubits != p.num_qubits:
        raise ValueError("graph and Pauli string disagree on the qubit count")
    if not graph.is_connected():
        raise ValueError("connectivity graph is not connected")
    n = p.num_qubits
    support = p.support
    root = support[0]
    order, parent = _bfs_order(graph.neighbors(), root)
    depth = {root: 0}
    for v in order[1:]:
        depth[v] = depth[parent[v]] + 1

    active = set(support)
    prefix = _basis_changes(p)
    for child in sorted(order[1:], key=lambda v: (-depth[v], v)):
        if child not in active:
            continue
        par = parent[child]
        if par in active:
            prefix.append(Gate("CNOT", (par, child)))
        else:
            prefix.append(Gate("SWAP", (par, child)))
            active.add(par)
        active.discard(child)
    return _sandwich(n, prefix, root, theta)


def compile_log_depth(p: PauliString, theta: float) -> CompiledCircuit:
    """Compile with all-to-all CNOTs in depth at most ``2*ceil(log2 w) + 3``.

    ``w`` is the support size.  The X support is folded pairwise in
    ``ceil(log2 w)`` parallel CNOT rounds onto the lowest supported qubit.
    """
    _check_pauli(p)
    active = p.support
    prefix = _basis_changes(p)
    while len(active) > 1:
        keep = active[0::2]
        for i in range(len(active) // 2):
            prefix.append(Gate("CNOT", (active[2 * i], active[2 * i + 1])))
        active = keep
    return _sandwich(p.num_qubits, prefix, active[0], theta)


def _apply_gate(state: np.ndarray, g: Gate, n: int) -> np.ndarray:
    """Left-multiply ``state`` (shape ``(2,)*n + (cols,)``) by a gate."""
    k = len(g.qubits)
    mat = g.matrix().reshape((2,) * (2 * k))
    out = np.tensordot(mat, state, axes=(list(range(k, 2 * k)), list(g.qubits)))
    return np.moveaxis(out, list(range(k)), list(g.qubits))


def circuit_to_unitary(c: CompiledCircuit, num_qubits: int | None = None,
                       dense_limit: int = 12) -> np.ndarray:
    n = c.num_qubits if num_qubits is None else num_qubits
    if n > dense_limit:
        raise MemoryError(f"{n} qubits exceeds the dense limit {dense_limit}")
    dim = 2**n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        if max(g.qubits) >= n:
            raise ValueError(f"gate {g} acts outside {n} qubits")
        state = _apply_gate(state, g, n)
    return state.reshape(dim, dim)


def format_circuit(c: CompiledCircuit) -> str:
    blocks = []
    for layer in c.layers:
        lines = []
        for g in layer:
            if g.kind == "RX":
                lines.append(f"RX {g.theta!r} {g.qubits[0]}")
            else:
                lines.append(" ".join([g.kind, *map(str, g.qubits)]))
        blocks.append("\n".join(lines))
    return "\n---\n".join(blocks) + "\n"


def parse_circuit(text: str, num_qubits: int) -> CompiledCircuit:
    layers: list[list[Gate]] = [[]]
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line == "---":
            layers.append([])
            continue
        parts = line.split()
        kind = parts[0].upper()
        if kind == "RX":
            if len(parts) != 3:
                raise ValueError(f"bad RX line {raw!r}")
            gate = Gate("RX", (int(parts[2]),), float(parts[1]))
        else:
            gate = Gate(kind, tuple(int(q) for q in parts[1:]))
        layers[-1].append(gate)
    layers = [layer for layer in layers if layer]
    for layer in layers:
        used = [q for g in layer for q in g.qubits]
        if len(used) != len(set(used)):
            raise ValueError("a layer contains two gates on the same qubit")
    return CompiledCircuit(num_qubits, layers)


def read_graph(text: str) -> ConnectivityGraph:
    """Parse ``n <num_qubits>`` followed by one ``u v`` edge per line."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "n" or len(lines[0]) != 2:
        raise ValueError("graph file must start with 'n <num_qubits>'")
    n = int(lines[0][1])
    return ConnectivityGraph(n, tuple((int(u), int(v)) for u, v in lines[1:]))


def format_graph(g: ConnectivityGraph) -> str:
    return "".join([f"n {g.num_qubits}\n"] + [f"{u} {v}\n" for u, v in g.edges])
