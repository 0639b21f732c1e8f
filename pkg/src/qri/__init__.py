"""Quantumness of relative incompatibility for finite-dimensional states."""

__version__ = "0.1.0"

from .errors import (
    AbsoluteContinuityViolation,
    DimensionMismatch,
    QRIError,
    ValidationError,
)
from .linalg import gram_schmidt, haar_unitary, hermitian_eig, inner, tensor
from .states import (
    DensityMatrix,
    MixtureSpec,
    ObservableBasis,
    bloch_pure,
    depolarized,
    maximally_mixed,
    mix,
    named_basis,
    product_basis,
    pure_state,
    qubit_basis,
    real_basis,
)
from .incompat import (
    JointDist,
    QReport,
    coherence_rel_ent,
    complementarity_report,
    joint_dist,
    kl_divergence,
    marginal_after,
    marginal_first,
    quantumness,
    quantumness_composite,
    report,
)
from .optimize import BasisParams, MaxQResult, max_q_over_b, max_q_over_b_general

__all__ = [
    "AbsoluteContinuityViolation",
    "BasisParams",
    "DensityMatrix",
    "DimensionMismatch",
    "JointDist",
    "MaxQResult",
    "MixtureSpec",
    "ObservableBasis",
    "QRIError",
    "QReport",
    "ValidationError",
    "bloch_pure",
    "coherence_rel_ent",
    "complementarity_report",
    "depolarized",
    "gram_schmidt",
    "haar_unitary",
    "hermitian_eig",
    "inner",
    "joint_dist",
    "kl_divergence",
    "marginal_after",
    "marginal_first",
    "max_q_over_b",
    "max_q_over_b_general",
    "maximally_mixed",
    "mix",
    "named_basis",
    "product_basis",
    "pure_state",
    "quantumness",
    "quantumness_composite",
    "qubit_basis",
    "real_basis",
    "report",
    "tensor",
]
