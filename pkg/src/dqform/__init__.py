"""Hermitian dual quaternion matrix toolkit and rigid-body consensus simulator.

Dual numbers, quaternions and dual quaternions; Hermitian dual quaternion
matrices with their eigen-decomposition and Gershgorin discs; visibility graph
adjacency and Laplacian matrices; and consensus simulation.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .dual import DualNumber, dn_abs, dn_div, dn_leq, dn_mul, dn_sqrt, format_dual, parse_dual
from .dualquat import (
    DualQuaternion,
    Pose,
    dq_exp,
    dq_inv,
    dq_magnitude,
    dq_mul,
    kinematics_step,
    left_invariant_error,
    make_twist,
    pose_adjoint,
    pose_exp,
    pose_from_rotation_translation,
    pose_log,
    pose_to_rotation_translation,
    relative_configuration,
)
from .errors import (
    AdjacencyInvalid,
    BadAxis,
    ConvergenceFailure,
    DQFormError,
    DimensionMismatch,
    Disconnected,
    DomainError,
    MissingTwists,
    NoTarget,
    NonAppreciable,
    NonAppreciableDivisor,
    NotACycle,
    NotHermitian,
    NotImaginary,
    NotUnit,
    Singular,
    SizeMismatch,
    StepRejected,
    Unstable,
    ValidationError,
    ZeroDivisor,
)
from .formation import (
    ControlInputs,
    Scenario,
    Stability,
    StabilityCertificate,
    TrajectoryLog,
    check_target,
    control_inputs,
    equilibrium_basis,
    simulate,
    simulate_pose_mode,
    stability_certificate,
)
from .graph import (
    LaplacianBundle,
    PoseAssignment,
    VisibilityGraph,
    build_adjacency,
    cycle_consistency,
    fundamental_cycles,
    laplacian,
    laplacian_spectrum_report,
    reduce_to_tree,
)
from .matrix import (
    Definiteness,
    DQMatrix,
    GershgorinReport,
    HermitianEigenDecomposition,
    classify_definiteness,
    gershgorin,
    herm_eigen,
    mat_inv,
    rayleigh,
)
from .quaternion import Quaternion, UnitQuaternion, q_adjoint, q_mul, uq_exp, uq_log

__all__ = [
    "__version__",
    "annotations",
    "DualNumber",
    "dn_abs",
    "dn_div",
    "dn_leq",
    "dn_mul",
    "dn_sqrt",
    "format_dual",
    "parse_dual",
    "DualQuaternion",
    "Pose",
    "dq_exp",
    "dq_inv",
    "dq_magnitude",
    "dq_mul",
    "kinematics_step",
    "left_invariant_error",
    "make_twist",
    "pose_adjoint",
    "pose_exp",
    "pose_from_rotation_translation",
    "pose_log",
    "pose_to_rotation_translation",
    "relative_configuration",
    "AdjacencyInvalid",
    "BadAxis",
    "ConvergenceFailure",
    "DQFormError",
    "DimensionMismatch",
    "Disconnected",
    "DomainError",
    "MissingTwists",
    "NoTarget",
    "NonAppreciable",
    "NonAppreciableDivisor",
    "NotACycle",
    "NotHermitian",
    "NotImaginary",
    "NotUnit",
    "Singular",
    "SizeMismatch",
    "StepRejected",
    "Unstable",
    "ValidationError",
    "ZeroDivisor",
    "ControlInputs",
    "Scenario",
    "Stability",
    "StabilityCertificate",
    "TrajectoryLog",
    "check_target",
    "control_inputs",
    "equilibrium_basis",
    "simulate",
    "simulate_pose_mode",
    "stability_certificate",
    "LaplacianBundle",
    "PoseAssignment",
    "VisibilityGraph",
    "build_adjacency",
    "cycle_consistency",
    "fundamental_cycles",
    "laplacian",
    "laplacian_spectrum_report",
    "reduce_to_tree",
    "Definiteness",
    "DQMatrix",
    "GershgorinReport",
    "HermitianEigenDecomposition",
    "classify_definiteness",
    "gershgorin",
    "herm_eigen",
    "mat_inv",
    "rayleigh",
    "Quaternion",
    "UnitQuaternion",
    "q_adjoint",
    "q_mul",
    "uq_exp",
    "uq_log",
]
