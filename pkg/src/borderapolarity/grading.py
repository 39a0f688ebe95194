"""Monomial bases for multigraded pieces S^{m1}V1 x ... x S^{md}Vd.

One fixed convention is shared by every module in the package: the degree-m
monomials in n variables are the sorted variable-index tuples produced by
``itertools.combinations_with_replacement(range(n), m)`` in their natural
(lexicographic) order, and a multigraded basis element is a tuple of one such
monomial per factor, flattened with the last factor fastest.  Degree-0
factors contribute the single empty monomial, so coordinates of pieces like
(1,1,0,1) agree index-by-index with the corresponding tensor-power space.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial


@lru_cache(maxsize=None)
def monomials(n: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All degree-`degree` monomials in n variables as sorted index tuples."""
    return tuple(combinations_with_replacement(range(n), degree))


@lru_cache(maxsize=None)
def monomial_index(n: int, degree: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomials(n, degree))}


def graded_dim(multidegree, factor_dims) -> int:
    """Dimension of the multigraded piece: product of binomials."""
    total = 1
    for m, n in zip(multidegree, factor_dims, strict=True):
        total *= comb(n + m - 1, m)
    return total


def factor_sizes(multidegree, factor_dims) -> tuple[int, ...]:
    return tuple(comb(n + m - 1, m)
                 for m, n in zip(multidegree, factor_dims, strict=True))


def strides(sizes) -> tuple[int, ...]:
    out = [1] * len(sizes)
    for i in range(len(sizes) - 2, -1, -1):
        out[i] = out[i + 1] * sizes[i + 1]
    return tuple(out)


def monomial_content(mono: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Exponent vector of a monomial given as a sorted index tuple."""
    out = [0] * n
    for v in mono:
        out[v] += 1
    return tuple(out)


def apolar_scale(mono: tuple[int, ...], n: int) -> int:
    """Factorial weight of a monomial under the differentiation pairing.

    The coordinate pairing <x^a, v^b> = delta_ab differs from the apolarity
    pairing <x^a, v^b> = delta_ab * a! exactly by this diagonal factor; it is
    1 in degree <= 1, so it only matters for pieces with a factor of degree 2+.
    """
    s = 1
    for e in monomial_content(mono, n):
        s *= factorial(e)
    return s


@lru_cache(maxsize=None)
def multiplication_scatter(multidegree: tuple[int, ...],
                           factor_dims: tuple[int, ...],
                           k: int) -> tuple[tuple[int, ...], ...]:
    """Index maps for multiplying factor k by each variable.

    Returns one tuple per variable j in factor k; its i-th entry is the flat
    index in the (multidegree + e_k) piece of (basis element i of the source
    piece) times x_j.  Multiplication of monomials carries coefficient 1, so
    the maps are pure index scatters, injective for each fixed j.
    """
    src_sizes = factor_sizes(multidegree, factor_dims)
    tgt_degree = tuple(m + (1 if i == k else 0) for i, m in enumerate(multidegree))
    tgt_sizes = factor_sizes(tgt_degree, factor_dims)
    src_strides = strides(src_sizes)
    tgt_strides = strides(tgt_sizes)
    n_k = factor_dims[k]
    src_monos_k = monomials(n_k, multidegree[k])
    tgt_index_k = monomial_index(n_k, multidegree[k] + 1)

    src_dim = graded_dim(multidegree, factor_dims)
    maps = []
    for j in range(n_k):
        lifted = [tgt_index_k[tuple(sorted(m + (j,)))] for m in src_monos_k]
        scatter = []
        for flat in range(src_dim):
            rem = flat
            parts = []
            for s in src_strides:
                parts.append(rem // s)
                rem %= s
            parts[k] = lifted[parts[k]]
            scatter.append(sum(p * s for p, s in zip(parts, tgt_strides)))
        maps.append(tuple(scatter))
    return tuple(maps)
