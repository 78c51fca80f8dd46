"""Spectral triple of the p-adic integers on depth-truncated p-adic trees."""

from .dirac import (
    DistributionCoeffs,
    apply_calD,
    apply_D,
    apply_D_adjoint,
    apply_D_adjoint_fourier,
    apply_D_fourier,
    apply_D_inverse,
    apply_D_inverse_adjoint,
    boundary_limit,
    hs_norm_squared,
    hs_norm_squared_limit,
    is_in_kernel,
    kernel_from_distribution,
    reconstruct_from_primitive_coeffs,
    weak_boundary_pairing,
)
from .harmonic import level_dft, level_idft, naive_dft, tree_fourier, tree_fourier_inverse
from .metrics import (
    DistanceEstimate,
    LocallyConstantFunction,
    SeminormReport,
    check_equivalence,
    commutator_apply,
    commutator_norm_estimate,
    connes_distance,
    gen_random_lipschitz,
    lipschitz_ball_distance,
    lipschitz_seminorm,
    seminorm_witness,
    spectral_seminorm,
)
from .padic_core import (
    PAdicApprox,
    Prime,
    Vertex,
    ball_representative,
    character_eval,
    children,
    padic_distance,
    parent,
    valuation,
)
from .tree_hilbert import GradedPair, TreeFunction, inner_product, random_tree_function, weighted_norm

__version__ = "0.1.0"
