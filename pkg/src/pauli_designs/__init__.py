"""Approximate unitary and orthogonal designs from random Pauli rotations."""

__version__ = "0.1.0"

from .pauli import (  # noqa: E402
    PauliString,
    commutes,
    enumerate_paulis,
    enumerate_skew_paulis,
    multiply,
    to_matrix,
    y_parity,
)
from .sampling import AngleMode, WalkConfig, required_steps, sample_step, walk_unitary  # noqa: E402
from .circuits import (  # noqa: E402
    ConnectivityGraph,
    circuit_to_unitary,
    compile_log_depth,
    compile_spanning_tree,
)
from .moments import (  # noqa: E402
    BoundViolation,
    GapReport,
    build_tau_star,
    haar_projector,
    kernel_projector,
    mean_kernel_projector,
    orthogonal_moment_gap,
    spectral_gap_report,
)
from .su2 import build_spin_irrep, irrep_gap_norm, kernel_overlap, su2_design_gap  # noqa: E402
from .casimir import HighestWeight, casimir_ratio, gap_bound  # noqa: E402
from .orthogonal import OrthoSamplerConfig, gram_schmidt_haar, sample_orthogonal  # noqa: E402
from .states import haar_state_moment, state_design_distance  # noqa: E402
