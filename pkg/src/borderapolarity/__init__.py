"""Exact-arithmetic toolkit for tensor border-rank lower-bound certification.

The package provides exact rational linear algebra, determinant tensors with
their flattenings and annihilators, concrete sl_n representation machinery,
enumeration of Borel-fixed subspaces, the multigraded apolarity test engine,
and a prover/verifier pair that runs the full border-rank-12 certification
for the 4x4 determinant tensor.
"""

__version__ = "0.1.0"

from .exact_linalg import (
    ExactMatrix,
    Rational,
    Subspace,
    contains,
    kernel_basis,
    perp,
    rank,
    rref,
    subspace_intersect,
    subspace_sum,
)
from .tensor_core import (
    Tensor,
    ann_piece,
    det_tensor,
    flattening_image,
    flattening_matrix,
    is_concise,
    projection_span_dim,
    rank_one,
)

__all__ = [
    "ExactMatrix", "Rational", "Subspace", "contains", "kernel_basis", "perp",
    "rank", "rref", "subspace_intersect", "subspace_sum",
    "Tensor", "ann_piece", "det_tensor", "flattening_image",
    "flattening_matrix", "is_concise", "projection_span_dim", "rank_one",
    "__version__",
]
