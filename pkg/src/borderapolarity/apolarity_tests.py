"""The multidegree test engine for border-rank candidacy.

Given candidate ideal pieces at multidegrees adjacent to a target, the engine
builds the multiplication maps into the target piece, computes the exact
image dimension, and passes the candidate iff the image has codimension at
least r there.  Failing a test excludes the candidate; the boundary case
codim == r passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact_linalg import ExactMatrix, Subspace, _rref_ints
from .grading import graded_dim, multiplication_scatter

__all__ = [
    "TestSpec", "TestReport", "graded_dim", "codim_target",
    "multiplication_matrix", "generator_rows", "run_test", "auto_pass_bound",
]


def codim_target(multidegree, factor_dims, r: int) -> int:
    """Required codimension of an ideal piece: min(r, dim of the piece)."""
    return min(r, graded_dim(multidegree, factor_dims))


@dataclass(frozen=True)
class TestSpec:
    """Sources (multidegree, piece) multiplying into one target multidegree.

    Each source multidegree must be the target minus one unit vector; the
    factor to multiply by is inferred from that difference.
    """

    factor_dims: tuple[int, ...]
    sources: tuple[tuple[tuple[int, ...], Subspace], ...]
    target: tuple[int, ...]
    r: int

    def __post_init__(self):
        if not self.sources:
            raise ValueError("a test needs at least one source piece")
        for m, sub in self.sources:
            self.source_factor(m)
            if sub.ambient_dim != graded_dim(m, self.factor_dims):
                raise ValueError(
                    f"piece at {m} lives in ambient {sub.ambient_dim}, "
                    f"expected {graded_dim(m, self.factor_dims)}")

    def source_factor(self, m) -> int:
        diff = [t - s for s, t in zip(m, self.target)]
        if sorted(diff) != [0] * (len(diff) - 1) + [1]:
            raise ValueError(f"source {m} is not target minus a unit vector")
        return diff.index(1)

    @property
    def name(self) -> str:
        return "(" + "".join(str(d) for d in self.target) + ")-test"


@dataclass(frozen=True)
class TestReport:
    target_dim: int
    image_dim: int
    codim: int
    verdict: str  # "pass" | "fail"

    def to_json(self) -> dict:
        return {"target_dim": self.target_dim, "image_dim": self.image_dim,
                "codim": self.codim, "verdict": self.verdict}

    @classmethod
    def from_json(cls, data: dict) -> "TestReport":
        return cls(int(data["target_dim"]), int(data["image_dim"]),
                   int(data["codim"]), str(data["verdict"]))


def _scatter_rows(piece: Subspace, m, factor_dims, k: int) -> np.ndarray:
    """Images of (piece basis) x (variables of factor k) in the target piece."""
    maps = multiplication_scatter(tuple(m), tuple(factor_dims), k)
    tgt = tuple(x + (1 if i == k else 0) for i, x in enumerate(m))
    width = graded_dim(tgt, factor_dims)
    rows = piece.int_basis()
    out = np.zeros((rows.shape[0] * len(maps), width), dtype=object)
    for i in range(rows.shape[0]):
        for j, scatter in enumerate(maps):
            out[i * len(maps) + j, list(scatter)] = rows[i]
    return out


def multiplication_matrix(piece: Subspace, m, factor_dims, k: int) -> ExactMatrix:
    """Matrix of the multiplication map (piece at m) (x) V_k* -> piece at m+e_k.

    Columns are indexed by (basis of the piece) x (variables of factor k),
    rows by the target piece's monomial basis; the image is the column space.
    """
    rows = _scatter_rows(piece, m, factor_dims, k)
    grid = [[int(v) for v in rows[i]] for i in range(rows.shape[0])]
    tgt_dim = rows.shape[1]
    cols = rows.shape[0]
    transposed = [[grid[j][i] for j in range(cols)] for i in range(tgt_dim)]
    return ExactMatrix.from_rows(transposed, cols)


def generator_rows(spec: TestSpec) -> np.ndarray:
    """Stacked image generators of all sources, as rows over the target basis."""
    blocks = []
    for m, piece in spec.sources:
        k = spec.source_factor(m)
        blocks.append(_scatter_rows(piece, m, spec.factor_dims, k))
    return np.vstack(blocks)

def run_test(spec: TestSpec) -> TestReport:
    """Exact image dimension and verdict of a multidegree test."""
    rows = generator_rows(spec)
    _, pivots = _rref_ints(rows)
    image_dim = len(pivots)
    target_dim = graded_dim(spec.target, spec.factor_dims)
    codim = target_dim - image_dim
    verdict = "pass" if codim >= spec.r else "fail"
    return TestReport(target_dim, image_dim, codim, verdict)


def auto_pass_bound(spec: TestSpec) -> str | None:
    """Shortcut: a single-source test passes outright when the generator
    count already bounds the image dimension by target_dim - r."""
    if len(spec.sources) != 1:
        return None
    m, piece = spec.sources[0]
    k = spec.source_factor(m)
    bound = piece.dim * spec.factor_dims[k]
    target_dim = graded_dim(spec.target, spec.factor_dims)
    if bound <= target_dim - spec.r:
        return "pass"
    return None
