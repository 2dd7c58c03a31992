"""Hagedorn wave packets, their polynomial prefactors, and Wigner transforms.

The package is organised in layers:

* :mod:`hagedorn.frames` -- normalised Lagrangian frames Z = (Q; P), the
  symplectic metric, overlap and recursion matrices of frame pairs, random
  generators, JSON interchange;
* :mod:`hagedorn.polys` -- the matrix-parametrised polynomial family q_k^M
  defined by a three-term recursion, with four independent construction
  routes (recursion table, generating function, Laguerre contraction, full
  Hermite tensor expansion) and ladder/counting operators;
* :mod:`hagedorn.wavepackets` -- ground and excited packets in position
  space, phase-space translation, Gauss-Legendre inner products, grids;
* :mod:`hagedorn.phasespace` -- the doubled-dimension lift of frames and
  the Wigner transform of packet pairs in closed form, by direct
  quadrature, and as a Laguerre product for equal frames;
* :mod:`hagedorn.fixtures` -- small reference matrices and frames used in
  tests, demos and the command line;
* :mod:`hagedorn.verification` -- the runnable residual-check suites behind
  ``hagedorn verify``.

Conventions: frames satisfy Z^T Omega Z = 0 and (i/2) Z^* Omega Z = Id with
Omega = [[0, -Id], [Id, 0]]; the semiclassical parameter eps scales widths
by sqrt(eps); the Wigner transform conjugates its first argument and uses
the kernel exp(i xi.y / eps).
"""

from .errors import (
    AsymmetricM,
    AxisOutOfRange,
    DimensionMismatch,
    GridTooLarge,
    HagedornError,
    LiftInvariantViolation,
    NotIsotropic,
    NotNormalised,
    QuadratureUnderResolved,
    RequiresEqualFrames,
    Singular,
    SymmetryViolation,
    ZeroOffdiagonal,
)
from .frames import (
    FramePair,
    LagrangianFrame,
    frame_from_json,
    frame_pair,
    frame_residuals,
    frame_to_json,
    haar_unitary,
    matrix_from_json,
    matrix_to_json,
    omega,
    overlap_matrix,
    random_normalised_frame,
    random_symmetric_unitary,
    recursion_matrix,
    symplectic_metric,
    validate_frame,
)
from .polys import (
    MultiIndexPolynomial,
    PolynomialTable,
    apply_counting_operator,
    coefficient_distance,
    genfunc_coefficient,
    gradient_lower,
    laguerre,
    laguerre_reduce,
    poly_from_json,
    poly_to_json,
    raise_index,
    tensor_expand,
    ttrr_generate,
    univariate_hermite,
)
from .wavepackets import (
    GridJob,
    QuadratureSpec,
    WavePacketSpec,
    excited_state,
    gram_matrix,
    grid_eval,
    ground_state,
    inner_product,
    nodes_needed,
    prefactor_by_operator,
    translate,
    wave_packet,
    write_grid_csv,
)
from .phasespace import (
    LiftedFrame,
    LiftedPair,
    WignerSpec,
    lift_frame,
    lift_pair,
    wigner_closed,
    wigner_factorized,
    wigner_grid,
    wigner_integral,
    wigner_quadrature,
    wigner_spec,
)
from . import fixtures

__version__ = "0.1.0"

__all__ = [
    "AsymmetricM",
    "AxisOutOfRange",
    "DimensionMismatch",
    "FramePair",
    "GridJob",
    "GridTooLarge",
    "HagedornError",
    "LagrangianFrame",
    "LiftInvariantViolation",
    "LiftedFrame",
    "LiftedPair",
    "MultiIndexPolynomial",
    "NotIsotropic",
    "NotNormalised",
    "PolynomialTable",
    "QuadratureSpec",
    "QuadratureUnderResolved",
    "RequiresEqualFrames",
    "Singular",
    "SymmetryViolation",
    "WavePacketSpec",
    "WignerSpec",
    "ZeroOffdiagonal",
    "apply_counting_operator",
    "coefficient_distance",
    "excited_state",
    "fixtures",
    "frame_from_json",
    "frame_pair",
    "frame_residuals",
    "frame_to_json",
    "genfunc_coefficient",
    "gradient_lower",
    "gram_matrix",
    "grid_eval",
    "ground_state",
    "haar_unitary",
    "inner_product",
    "nodes_needed",
    "laguerre",
    "laguerre_reduce",
    "lift_frame",
    "lift_pair",
    "matrix_from_json",
    "matrix_to_json",
    "omega",
    "overlap_matrix",
    "poly_from_json",
    "poly_to_json",
    "prefactor_by_operator",
    "raise_index",
    "random_normalised_frame",
    "random_symmetric_unitary",
    "recursion_matrix",
    "symplectic_metric",
    "tensor_expand",
    "translate",
    "ttrr_generate",
    "univariate_hermite",
    "validate_frame",
    "wave_packet",
    "wigner_closed",
    "wigner_factorized",
    "wigner_grid",
    "wigner_integral",
    "wigner_quadrature",
    "wigner_spec",
    "write_grid_csv",
]
