"""Command-line front end: ``pauli-designs <command> ...``.

JSON reports are written with sorted keys so identical inputs give identical
bytes; wall-clock measurements live under a separate ``"timing"`` key.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import __version__
from .casimir import gap_bound
from .circuits import (
    ConnectivityGraph,
    circuit_to_unitary,
    compile_log_depth,
    compile_spanning_tree,
    format_circuit,
    gate_counts,
    read_graph,
)
from .moments import (
    DENSE_DIM_LIMIT,
    BoundViolation,
    orthogonal_bound,
    orthogonal_moment_gap,
    spectral_gap_report,
)
from .orthogonal import OrthoSamplerConfig, benchmark, heuristic_steps, sample_orthogonal
from .pauli import PauliString
from .sampling import AngleMode, WalkConfig, walk_unitary, write_transcript
from .states import (
    apply_channel_power,
    haar_state_moment,
    product_state,
    state_design_bound,
    trace_norm,
)
from .su2 import irrep_gap_norm, kernel_overlap, su2_design_gap
from .verify import pauli_exponential, run_checks

COMMANDS = ("gap", "su2", "casimir", "compile", "sample-unitary", "ortho-sample",
            "state-design", "verify", "bench")


class CliError(Exception):
    def __init__(self, kind: str, message: str, status: int):
        super().__init__(message)
        self.kind = kind
        self.status = status


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_json(obj: dict, path: str | None) -> None:
    with _output(path) as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _meta(args, **extra) -> dict:
    meta = {"version": __version__, "command": args.command, "seed": args.seed}
    meta.update(extra)
    return meta


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_gap(args) -> int:
    if args.dim is not None:
        basis = args.basis.replace("-", "_")
        report = orthogonal_moment_gap(args.dim, args.t, basis, args.dense_limit, check=False)
    else:
        if args.qubits is None:
            raise CliError("usage", "gap needs --qubits (or --dim for orthogonal groups)", 2)
        report = spectral_gap_report(args.qubits, args.t, args.dense_limit, check=False)
    report.seed = args.seed
    out = report.to_dict()
    out["meta"] = _meta(args)
    _emit_json(out, args.out)
    report.check()
    return 0


def cmd_su2(args) -> int:
    if args.max_ell < 1:
        raise CliError("usage", "--max-ell must be >= 1", 2)
    rows = [(ell, repr(kernel_overlap(ell)), repr(irrep_gap_norm(ell)))
            for ell in range(1, args.max_ell + 1)]
    with _output(args.out) as fh:
        fh.write(_csv_text(["ell", "f", "norm"], rows))
    return 0


def cmd_casimir(args) -> int:
    main, small = gap_bound(args.qubits, args.t)
    exact = None
    if args.exact:
        exact = spectral_gap_report(args.qubits, args.t, args.dense_limit, check=False).gap_norm
    elif args.qubits == 1:
        exact = su2_design_gap(args.t)
    if args.format == "csv":
        with _output(args.out) as fh:
            fh.write(_csv_text(["n", "t", "main_bound", "small_t_bound", "exact_gap"],
                               [(args.qubits, args.t, main, "" if small is None else small,
                                 "" if exact is None else exact)]))
    else:
        _emit_json({"n": args.qubits, "t": args.t, "main_bound": main,
                    "small_t_bound": small, "exact_gap": exact,
                    "meta": _meta(args, formulas=[
                        "main = 1 - N^2/(4t(N^2-1)) - 1/(N^2-1)",
                        "small_t = 1 - N(N-t+1)/(2t(N^2-1)) for t <= N/2"])}, args.out)
    return 0


def cmd_compile(args) -> int:
    p = PauliString.from_label(args.pauli)
    if args.mode == "log-depth":
        circ = compile_log_depth(p, args.theta)
    else:
        if args.graph:
            with open(args.graph) as fh:
                graph = read_graph(fh.read())
        else:
            graph = ConnectivityGraph.path(p.num_qubits)
        circ = compile_spanning_tree(p, args.theta, graph)
    with _output(args.out) as fh:
        fh.write(format_circuit(circ))
    summary = {"pauli": p.label, "theta": args.theta, "mode": args.mode,
               "depth": circ.depth, **gate_counts(circ)}
    if p.num_qubits <= args.verify_limit:
        err = float(np.max(np.abs(circuit_to_unitary(circ) - pauli_exponential(p, args.theta))))
        summary["verified_max_err"] = err
        if err > 1e-10:
            raise CliError("verification_failed",
                           f"||circuit - exp(i theta P/2)||_max = {err} > 1e-10", 1)
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return 0


def _angle_mode(args) -> AngleMode:
    if args.angles == "discrete":
        if args.t is None:
            raise CliError("usage", "--angles discrete needs --t", 2)
        return AngleMode.discrete(args.t)
    return AngleMode.continuous(math.pi * args.half_width)


def cmd_sample_unitary(args) -> int:
    cfg = WalkConfig(args.qubits, args.steps, _angle_mode(args), "full_pauli", args.seed)
    with _output(args.out) as fh:
        write_transcript(cfg, fh)
    if args.unitary_out:
        u = walk_unitary(cfg)
        with open(args.unitary_out, "w") as fh:
            fh.write(_csv_text([f"c{j}" for j in range(u.shape[1])],
                               [[repr(complex(v)) for v in row] for row in u]))
    return 0


def cmd_ortho_sample(args) -> int:
    basis = args.basis.replace("-", "_")
    cfg = OrthoSamplerConfig(args.dim, args.steps, basis, args.seed)
    o = sample_orthogonal(cfg)
    with _output(args.out) as fh:
        fh.write(_csv_text([f"c{j}" for j in range(args.dim)],
                           [[repr(float(v)) for v in row] for row in o]))
    summary = {"N": args.dim, "k": args.steps, "basis": basis, "seed": args.seed,
               "orthogonality_error": float(np.max(np.abs(o.T @ o - np.eye(args.dim)))),
               "det": float(np.linalg.det(o))}
    if args.dim >= 3 and (basis == "elementary" or args.dim > 4):
        for t in (1, 2):
            summary[f"bound_contraction_t{t}"] = orthogonal_bound(args.dim, t, basis) ** args.steps
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return 0


def cmd_state_design(args) -> int:
    N = 2**args.qubits
    rng = np.random.default_rng(args.seed)
    alpha = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    state = apply_channel_power(product_state(alpha, args.t), args.steps)
    dist = trace_norm(state.matrix - haar_state_moment(N, args.t).matrix)
    bound = state_design_bound(N, args.t, args.steps)
    _emit_json({"distance": dist, "bound": bound, "dim_sym": math.comb(N + args.t - 1, args.t),
                "ratio": dist / bound if bound else None, "n": args.qubits, "t": args.t,
                "k": args.steps,
                "meta": _meta(args, tol=1e-8, formulas=[
                    "distance <= C(N+t-1,t)^(1/2) (1 - N/(2t(N+1)) - N/(2(N^2-1)))^k"])},
               args.out)
    if dist > bound + 1e-8:
        raise BoundViolation(f"state design bound violated: {dist!r} > {bound!r}")
    return 0


def cmd_verify(args) -> int:
    results = run_checks(args.scale)
    for r in results:
        print(r.line(), file=sys.stderr)
    passed = all(bool(r.passed) for r in results)
    _emit_json({"scale": args.scale, "passed": passed,
                "checks": [{"name": r.name, "passed": bool(r.passed)} for r in results],
                "meta": _meta(args)}, args.out)
    return 0 if passed else 1


def cmd_bench(args) -> int:
    k = args.steps
    if k is None:
        k = heuristic_steps(args.dim, args.eps)
    out = benchmark(args.dim, k, seed=args.seed)
    out["meta"] = _meta(args)
    _emit_json(out, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--dense-limit", type=int, default=DENSE_DIM_LIMIT)

    parser = argparse.ArgumentParser(prog="pauli-designs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gap", parents=[common], help="exact moment-operator gap")
    p.add_argument("--qubits", type=int)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--dim", type=int, help="orthogonal group dimension N")
    p.add_argument("--basis", choices=["elementary", "skew-pauli"], default="elementary")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("su2", parents=[common], help="kernel overlaps and per-irrep norms")
    p.add_argument("--max-ell", type=int, default=8)
    p.set_defaults(func=cmd_su2)

    p = sub.add_parser("casimir", parents=[common], help="closed-form gap bounds")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="also compute the exact gap")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_casimir)

    p = sub.add_parser("compile", parents=[common], help="compile exp(i theta P/2)")
    p.add_argument("--pauli", required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--mode", choices=["spanning-tree", "log-depth"], default="spanning-tree")
    p.add_argument("--graph", help="edge-list file; default is a path graph")
    p.add_argument("--verify-limit", type=int, default=10)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("sample-unitary", parents=[common], help="random Pauli rotation walk")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--angles", choices=["continuous", "discrete"], default="continuous")
    p.add_argument("--half-width", type=float, choices=[1.0, 2.0], default=1.0,
                   help="continuous angle range in units of pi")
    p.add_argument("--t", type=int)
    p.add_argument("--unitary-out", help="also write the walk unitary as CSV")
    p.set_defaults(func=cmd_sample_unitary)

    p = sub.add_parser("ortho-sample", parents=[common], help="approximately Haar SO(N) matrix")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--basis", choices=["elementary", "skew-pauli"], default="elementary")
    p.set_defaults(func=cmd_ortho_sample)

    p = sub.add_parser("state-design", parents=[common], help="t-copy state distance to Haar")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_state_design)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--scale", choices=["fast", "slow"], default="fast")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="Givens walk vs Gram-Schmidt timing")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--steps", type=int, help="default: gap-bound heuristic for --eps")
    p.add_argument("--eps", type=float, default=1e-3)
    p.set_defaults(func=cmd_bench)
    return parser


def _fail(kind: str, message: str, status: int) -> int:
    print(json.dumps({"error": kind, "message": message}, sort_keys=True), file=sys.stderr)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        return _fail(e.kind, str(e), e.status)
    except BoundViolation as e:
        return _fail("bound_violation", str(e), 1)
    except (ValueError, MemoryError) as e:
        return _fail("invalid_argument", str(e), 2)


if __name__ == "__main__":
    sys.exit(main())
