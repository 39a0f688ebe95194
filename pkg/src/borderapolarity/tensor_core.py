"""Order-d tensors over Q: determinant tensors, flattenings, annihilators.

Tensors are dense arrays of rationals over fixed factor dimensions, stored
with the lexicographic multi-index layout (last index fastest) that every
other module shares.  The flattening conventions here fix, once and for all,
the coordinates in which annihilator pieces and candidate ideal pieces live.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import prod

import numpy as np

from .exact_linalg import ExactMatrix, Subspace, rank
from .grading import graded_dim

__all__ = [
    "Tensor", "det_tensor", "rank_one", "flattening_matrix", "flattening_image",
    "is_concise", "ann_piece", "projection_span_dim", "permutation_sign",
]


def permutation_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class Tensor:
    """Dense tensor over Q with fixed factor dimensions."""

    __slots__ = ("factor_dims", "entries")

    def __init__(self, factor_dims, entries: np.ndarray):
        self.factor_dims = tuple(int(d) for d in factor_dims)
        if entries.shape != self.factor_dims:
            raise ValueError("entry array shape does not match factor_dims")
        self.entries = entries

    @classmethod
    def zeros(cls, factor_dims) -> "Tensor":
        arr = np.zeros(tuple(factor_dims), dtype=object)
        arr[...] = 0
        return cls(factor_dims, arr)

    @property
    def order(self) -> int:
        return len(self.factor_dims)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.factor_dims == other.factor_dims
                and bool(np.all(self.entries == other.entries)))

    def __hash__(self):
        return hash((self.factor_dims, tuple(Fraction(v) for v in self.entries.ravel())))

    def __add__(self, other: "Tensor") -> "Tensor":
        if self.factor_dims != other.factor_dims:
            raise ValueError("factor dimension mismatch")
        return Tensor(self.factor_dims, self.entries + other.entries)

    def __sub__(self, other: "Tensor") -> "Tensor":
        if self.factor_dims != other.factor_dims:
            raise ValueError("factor dimension mismatch")
        return Tensor(self.factor_dims, self.entries - other.entries)

    def scale(self, c) -> "Tensor":
        c = Fraction(c)
        return Tensor(self.factor_dims, self.entries * c)

    def is_zero(self) -> bool:
        return not bool(np.any(self.entries != 0))

    def flat(self) -> np.ndarray:
        """Coordinates in the full tensor product space, last index fastest."""
        return self.entries.reshape(-1)

    def contract(self, vectors) -> Fraction:
        """Full contraction against one coordinate vector per factor."""
        if len(vectors) != self.order:
            raise ValueError("need one vector per factor")
        w = self.entries
        for vec in vectors:
            v = np.array([Fraction(x) for x in vec], dtype=object)
            if v.shape[0] != w.shape[0]:
                raise ValueError("vector length mismatch")
            w = np.tensordot(w, v, axes=([0], [0]))
        return Fraction(w[()])

    def to_json(self) -> dict:
        nonzeros = []
        for idx in np.argwhere(self.entries != 0):
            f = Fraction(self.entries[tuple(idx)])
            nonzeros.append([[int(i) for i in idx], str(f.numerator), str(f.denominator)])
        return {"dims": list(self.factor_dims), "nonzeros": nonzeros}

    @classmethod
    def from_json(cls, data: dict) -> "Tensor":
        t = cls.zeros(tuple(int(d) for d in data["dims"]))
        for idx, n, d in data["nonzeros"]:
            t.entries[tuple(int(i) for i in idx)] = Fraction(int(n), int(d))
        return t


def det_tensor(n: int) -> Tensor:
    """The n x n determinant tensor: entry sgn(sigma) at (sigma(1),...,sigma(n))."""
    if n < 1:
        raise ValueError("n must be at least 1")
    t = Tensor.zeros((n,) * n)
    for perm in permutations(range(n)):
        t.entries[perm] = permutation_sign(perm)
    return t


def rank_one(vectors) -> Tensor:
    """Outer product of one coordinate vector per factor."""
    arrays = []
    for vec in vectors:
        arrays.append(np.array([Fraction(x) for x in vec], dtype=object))
    ent = arrays[0]
    for a in arrays[1:]:
        ent = np.multiply.outer(ent, a)
    if len(arrays) == 1:
        ent = ent.reshape(arrays[0].shape)
    return Tensor(tuple(a.shape[0] for a in arrays), ent)


def _normalize_factor_subset(T: Tensor, S) -> tuple[int, ...]:
    S = tuple(sorted(set(int(s) for s in S)))
    if not S:
        raise ValueError("factor subset must be nonempty")
    if any(s < 1 or s > T.order for s in S):
        raise ValueError("factor index out of range (1-based)")
    if len(S) == T.order:
        raise ValueError("factor subset must be a proper subset")
    return S


def flattening_matrix(T: Tensor, S) -> ExactMatrix:
    """Matrix of the flattening by the factors in S (1-based indices).

    Rows are indexed by the S-side multi-index, columns by the complementary
    multi-index, both lexicographically; the row space is the image of the
    flattening inside the tensor product of the remaining factors.
    """
    S = _normalize_factor_subset(T, S)
    comp = [i for i in range(T.order) if (i + 1) not in S]
    axes = [s - 1 for s in S] + comp
    arr = np.transpose(T.entries, axes)
    rows = prod(T.factor_dims[s - 1] for s in S)
    mat = arr.reshape(rows, -1)
    grid = [[Fraction(v) for v in mat[i]] for i in range(rows)]
    return ExactMatrix.from_rows(grid, mat.shape[1])


def flattening_image(T: Tensor, S) -> Subspace:
    """Image of the flattening by S, as a canonical subspace."""
    m = flattening_matrix(T, S)
    return Subspace.from_matrix(m)


def is_concise(T: Tensor) -> bool:
    """True iff every single-factor flattening has full rank."""
    for i in range(T.order):
        if rank(flattening_matrix(T, {i + 1})) != T.factor_dims[i]:
            return False
    return True


def ann_piece(T: Tensor, multidegree) -> Subspace:
    """Graded piece of the annihilator of T at the given multidegree.

    Any piece with a factor of degree 2 or more is the full space.  In the
    multilinear range the piece is the perp of the matching flattening image:
    the full-support piece is the perp of the line spanned by T, and pieces
    supported on a proper subset are perps of the image of the flattening by
    the complementary factors.  On a concise tensor the unit multidegrees
    therefore give the zero subspace.
    """
    m = tuple(int(x) for x in multidegree)
    if len(m) != T.order:
        raise ValueError("multidegree length must equal tensor order")
    if any(x < 0 for x in m):
        raise ValueError("multidegree entries must be nonnegative")
    dim = graded_dim(m, T.factor_dims)
    if any(x >= 2 for x in m):
        return Subspace.full(dim)
    support = [i + 1 for i, x in enumerate(m) if x == 1]
    if not support:
        return Subspace.zero(1) if not T.is_zero() else Subspace.full(1)
    if len(support) == T.order:
        line = Subspace.from_spanning_rows(dim, [list(T.flat())])
        from .exact_linalg import perp
        return perp(line)
    comp = [i + 1 for i in range(T.order) if (i + 1) not in support]
    image = flattening_image(T, comp)
    from .exact_linalg import perp
    return perp(image)


def _rank_one_factor(T: Tensor, f: int) -> list[Fraction]:
    """Recover the f-th factor of a rank-one tensor, up to scale."""
    mat = flattening_matrix(T, {f})
    for j in range(mat.cols):
        col = [mat.entry(i, j) for i in range(mat.rows)]
        if any(col):
            return col
    raise ValueError("zero tensor has no rank-one factorization")


def projection_span_dim(terms, factors) -> int:
    """Dimension of the span of rank-one terms projected to chosen factors.

    Each term is either a rank-one Tensor or the list of per-factor vectors
    defining one; `factors` holds 1-based factor indices.  Factors recovered
    from a Tensor are only defined up to scale, which does not affect the
    span dimension.
    """
    if not terms:
        raise ValueError("need at least one term")
    factors = sorted(set(int(f) for f in factors))
    rows = []
    width = None
    for term in terms:
        if isinstance(term, Tensor):
            vecs = [_rank_one_factor(term, f) for f in factors]
        else:
            vecs = [term[f - 1] for f in factors]
        proj = rank_one(vecs)
        rows.append(list(proj.flat()))
        width = proj.flat().shape[0]
    return rank(ExactMatrix.from_rows(rows, width))
