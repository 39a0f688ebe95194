"""Concrete sl_n representation machinery on tensor and symmetric powers.

Modules live inside a fixed host coordinate space (a tensor product of
symmetric powers of Q^n, e.g. V^(x)3 or S^2V (x) S^2V (x) S^2V), so their
subspaces can be intersected and perped against flattening images without any
change of basis.  Torus weights, simple raising operators, Young symmetrizer
images, weight diagrams and highest-weight decompositions are all computed
exactly over Q.

Convention: the Young symmetrizer acts on the right by place permutation,
row symmetrization first and column antisymmetrization second, with no
normalization.  Swapping the order gives an isomorphic module with the same
weight diagram; a flag is provided for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations, product
from math import lcm

import numpy as np

from .exact_linalg import Subspace, _kernel_ints, _rref_ints
from .grading import monomial_index, monomials

__all__ = [
    "HostSpace", "tensor_power", "Weight", "Tableau", "WeightModule",
    "WeightDiagram", "ClosureError", "raising_action",
    "young_symmetrizer_vector", "schur_module", "alternating_module",
    "host_module", "weight_diagram", "highest_weight_vectors",
    "submodule_generated", "cubic_summands",
]


class ClosureError(RuntimeError):
    """A subspace expected to be stable under the torus/raisings is not."""


# ---------------------------------------------------------------------------
# host coordinate spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HostSpace:
    """A tensor product of symmetric powers S^{d1}Q^n (x) ... (x) S^{dm}Q^n."""

    n: int
    degrees: tuple[int, ...]

    @cached_property
    def factor_monomials(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        return tuple(monomials(self.n, d) for d in self.degrees)

    @cached_property
    def factor_sizes(self) -> tuple[int, ...]:
        return tuple(len(ms) for ms in self.factor_monomials)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = [1] * len(self.degrees)
        for i in range(len(self.degrees) - 2, -1, -1):
            out[i] = out[i + 1] * self.factor_sizes[i + 1]
        return tuple(out)

    @property
    def dim(self) -> int:
        return self.strides[0] * self.factor_sizes[0] if self.degrees else 1

    def basis_tuple(self, flat: int) -> tuple[tuple[int, ...], ...]:
        """Per-factor monomials of the basis element with the given index."""
        parts = []
        for t, s in enumerate(self.strides):
            parts.append(self.factor_monomials[t][flat // s])
            flat %= s
        return tuple(parts)

    def flat_index(self, parts) -> int:
        total = 0
        for t, mono in enumerate(parts):
            total += monomial_index(self.n, self.degrees[t])[tuple(mono)] * self.strides[t]
        return total

    def word_index(self, word) -> int:
        """Index of a word of letters split consecutively by factor degrees."""
        parts = []
        pos = 0
        for d in self.degrees:
            parts.append(tuple(sorted(word[pos:pos + d])))
            pos += d
        return self.flat_index(parts)

    def basis_content(self, flat: int) -> tuple[int, ...]:
        """Letter content (occurrences of each of the n letters)."""
        out = [0] * self.n
        for mono in self.basis_tuple(flat):
            for v in mono:
                out[v] += 1
        return tuple(out)

    @lru_cache(maxsize=None)
    def elementary_matrix(self, a: int, b: int) -> np.ndarray:
        """Matrix of E_{ab} (v_b -> v_a, 1-based) in the row convention.

        Acts by the Leibniz rule across factors and as a derivation inside
        each symmetric factor; the image of a vector v is v @ matrix.
        """
        if not (1 <= a <= self.n and 1 <= b <= self.n and a != b):
            raise ValueError("need distinct 1-based letter indices")
        src, tgt = b - 1, a - 1
        mat = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i in range(self.dim):
            parts = self.basis_tuple(i)
            for t, mono in enumerate(parts):
                for pos, letter in enumerate(mono):
                    if letter == src:
                        new = tuple(sorted(mono[:pos] + (tgt,) + mono[pos + 1:]))
                        j = self.flat_index(parts[:t] + (new,) + parts[t + 1:])
                        mat[i, j] += 1
        return mat

    def raising(self, k: int) -> np.ndarray:
        """Simple raising operator E_{k,k+1}, 1 <= k < n."""
        if not (1 <= k < self.n):
            raise ValueError("simple root index out of range")
        return self.elementary_matrix(k, k + 1)

    def lowering(self, k: int) -> np.ndarray:
        if not (1 <= k < self.n):
            raise ValueError("simple root index out of range")
        return self.elementary_matrix(k + 1, k)


def tensor_power(n: int, d: int) -> HostSpace:
    return HostSpace(n, (1,) * d)


def raising_action(host: HostSpace, k: int, v) -> np.ndarray:
    """Apply the simple raising operator E_{k,k+1} to a coordinate vector."""
    vec = np.array([Fraction(x) if not isinstance(x, int) else x for x in v],
                   dtype=object)
    if vec.shape[0] != host.dim:
        raise ValueError("vector length does not match host dimension")
    return vec @ host.raising(k).astype(object)


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Weight:
    """An sl_n torus weight sum(a_i L_i), normalized so min(a_i) = 0."""

    coefficients: tuple[int, ...]

    @classmethod
    def of(cls, coeffs) -> "Weight":
        coeffs = tuple(int(c) for c in coeffs)
        m = min(coeffs)
        return cls(tuple(c - m for c in coeffs))

    def raised(self, k: int) -> "Weight":
        """Weight after applying E_{k,k+1} (adds L_k - L_{k+1})."""
        c = list(self.coefficients)
        c[k - 1] += 1
        c[k] -= 1
        return Weight.of(c)

    def level(self) -> int:
        """Shift-invariant level; each simple raising lowers it by 2."""
        n = len(self.coefficients)
        s = sum(self.coefficients)
        return 2 * sum(i * c for i, c in enumerate(self.coefficients)) - (n - 1) * s

    def __str__(self) -> str:
        parts = [f"{c}L{i+1}" for i, c in enumerate(self.coefficients) if c]
        return "+".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# tableaux and Young symmetrizers
# ---------------------------------------------------------------------------

def _permutation_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _subset_permutations(d: int, subsets):
    """All permutations of range(d) permuting each given subset within itself."""
    base = list(range(d))
    pools = []
    for sub in subsets:
        pools.append([dict(zip(sub, img)) for img in permutations(sub)])
    for choice in product(*pools):
        perm = base.copy()
        for mapping in choice:
            for k, v in mapping.items():
                perm[k] = v
        yield tuple(perm)


def _compose(p, q):
    """Group product: (p.q)(t) = p[q[t]], matching the right place action."""
    return tuple(p[q[t]] for t in range(len(p)))


@dataclass(frozen=True)
class Tableau:
    """A Young tableau given by its rows of box labels (1-based, bijective)."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        labels = sorted(x for row in self.rows for x in row)
        if labels != list(range(1, len(labels) + 1)):
            raise ValueError("tableau filling must be a bijection onto 1..d")

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rows)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    @property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        ncols = max(len(r) for r in self.rows)
        return tuple(
            tuple(row[c] for row in self.rows if len(row) > c)
            for c in range(ncols)
        )

    @cached_property
    def symmetrizer_terms_rows_first(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        return self._terms(rows_first=True)

    @cached_property
    def symmetrizer_terms_cols_first(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        return self._terms(rows_first=False)

    def _terms(self, rows_first: bool):
        d = self.size
        row_sets = [tuple(x - 1 for x in row) for row in self.rows]
        col_sets = [tuple(x - 1 for x in col) for col in self.columns]
        row_perms = list(_subset_permutations(d, row_sets))
        col_perms = [(q, _permutation_sign(q)) for q in _subset_permutations(d, col_sets)]
        terms = []
        for p in row_perms:
            for q, sgn in col_perms:
                perm = _compose(p, q) if rows_first else _compose(q, p)
                terms.append((perm, sgn))
        return tuple(terms)

    def terms(self, convention: str = "rows_first"):
        if convention == "rows_first":
            return self.symmetrizer_terms_rows_first
        if convention == "cols_first":
            return self.symmetrizer_terms_cols_first
        raise ValueError("convention must be 'rows_first' or 'cols_first'")


def young_symmetrizer_vector(tab: Tableau, indices, n: int,
                             host: HostSpace | None = None,
                             convention: str = "rows_first") -> np.ndarray:
    """Image of a basis word under the right action of the Young symmetrizer.

    `indices` are 1-based letters (i_1, ..., i_d); the result is an integer
    coordinate vector in the host space (default: the tensor power), of
    weight L_{i_1} + ... + L_{i_d} when nonzero.
    """
    word = tuple(int(i) - 1 for i in indices)
    if len(word) != tab.size:
        raise ValueError("need one letter per tableau box")
    if any(not 0 <= w < n for w in word):
        raise ValueError("letter out of range")
    if host is None:
        host = tensor_power(n, tab.size)
    acc: dict[int, int] = {}
    for perm, sgn in tab.terms(convention):
        permuted = tuple(word[perm[t]] for t in range(len(word)))
        idx = host.word_index(permuted)
        acc[idx] = acc.get(idx, 0) + sgn
    vec = np.zeros(host.dim, dtype=object)
    for idx, c in acc.items():
        vec[idx] = c
    return vec


# ---------------------------------------------------------------------------
# weight modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightModule:
    """A subspace of a host space closed under the simple raising operators,
    with its weight grading and restricted raising matrices."""

    host: HostSpace
    space: Subspace
    name: str = ""

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def basis_rows(self) -> np.ndarray:
        return self.space.int_basis()

    @cached_property
    def row_weights(self) -> tuple[Weight, ...]:
        out = []
        for i in range(self.dim):
            support = np.nonzero(self.basis_rows[i])[0]
            contents = {self.host.basis_content(int(j)) for j in support}
            if len(contents) != 1:
                raise ClosureError(
                    f"basis row {i} of {self.name or 'module'} is not weight-homogeneous")
            out.append(Weight.of(contents.pop()))
        return tuple(out)

    @cached_property
    def nodes(self) -> tuple[tuple[Weight, tuple[int, ...]], ...]:
        """Distinct weights with their basis-row indices, topologically sorted
        (raising targets come before their sources)."""
        groups: dict[Weight, list[int]] = {}
        for i, w in enumerate(self.row_weights):
            groups.setdefault(w, []).append(i)
        ordered = sorted(groups.items(), key=lambda kv: (kv[0].level(), kv[0]))
        return tuple((w, tuple(idx)) for w, idx in ordered)

    @cached_property
    def node_index(self) -> dict[Weight, int]:
        return {w: i for i, (w, _) in enumerate(self.nodes)}

    def _restrict(self, host_matrix: np.ndarray) -> np.ndarray:
        """Express the action of a host operator in module coordinates."""
        rows = self.basis_rows
        if self.dim == self.space.ambient_dim:
            return host_matrix.astype(object)
        imgs = rows @ host_matrix.astype(object)
        pivots = self.space.pivot_cols
        coeffs = np.zeros((self.dim, self.dim), dtype=object)
        for j, pc in enumerate(pivots):
            pj = int(rows[j, pc])
            for i in range(self.dim):
                v = imgs[i, pc]
                coeffs[i, j] = Fraction(int(v), pj) if v else 0
        if np.any(coeffs @ rows.astype(object) != imgs):
            raise ClosureError(
                f"{self.name or 'module'} is not closed under a raising operator")
        return coeffs

    @cached_property
    def restricted_raisings(self) -> tuple[np.ndarray, ...]:
        return tuple(self._restrict(self.host.raising(k))
                     for k in range(1, self.host.n))

    def block_raising(self, k: int, src: Weight, tgt: Weight) -> np.ndarray:
        """Restricted raising map between two weight blocks, in block coords."""
        src_rows = dict(self.nodes)[src]
        tgt_rows = dict(self.nodes)[tgt]
        R = self.restricted_raisings[k - 1]
        return R[np.ix_(src_rows, tgt_rows)]

    def lift(self, node_coeffs: dict[Weight, np.ndarray]) -> Subspace:
        """Host subspace spanned by block coefficient rows at given nodes."""
        rows = []
        node_map = dict(self.nodes)
        for w, coeff in node_coeffs.items():
            block = self.basis_rows[list(node_map[w])].astype(object)
            if coeff.shape[0] == 0:
                continue
            rows.append(coeff @ block)
        if not rows:
            return Subspace.zero(self.space.ambient_dim)
        return Subspace.from_spanning_rows(self.space.ambient_dim, np.vstack(rows))


def host_module(host: HostSpace, name: str = "") -> WeightModule:
    return WeightModule(host, Subspace.full(host.dim), name or "host")


def schur_module(tab: Tableau, n: int, host: HostSpace | None = None,
                 convention: str = "rows_first", name: str = "") -> WeightModule:
    """Module spanned by all Young symmetrizer images of basis words.

    The dimension equals the number of semistandard tableaux of the same
    shape with entries in 1..n; shapes with more than n rows give the empty
    module.
    """
    if host is None:
        host = tensor_power(n, tab.size)
    gens = []
    for word in product(range(1, n + 1), repeat=tab.size):
        vec = young_symmetrizer_vector(tab, word, n, host, convention)
        if np.any(vec != 0):
            gens.append(vec)
    if not gens:
        space = Subspace.zero(host.dim)
    else:
        space = Subspace.from_spanning_rows(host.dim, np.vstack(gens))
    return WeightModule(host, space, name or f"S_{tab.shape}")


def alternating_module(n: int, d: int) -> WeightModule:
    """The alternating summand of the d-th tensor power (single-column shape)."""
    tab = Tableau(tuple((i,) for i in range(1, d + 1)))
    return schur_module(tab, n, name=f"Lambda^{d}")


# ---------------------------------------------------------------------------
# diagrams and decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightDiagram:
    """Weight multiplicities and exact ranks of the simple raising maps."""

    nodes: tuple[tuple[Weight, int], ...]
    edges: tuple[tuple[Weight, int, Weight, int], ...]

    def multiplicity(self, w: Weight) -> int:
        for node, mult in self.nodes:
            if node == w:
                return mult
        return 0

    def to_json(self) -> dict:
        return {
            "nodes": [{"weight": list(w.coefficients), "multiplicity": m}
                      for w, m in self.nodes],
            "edges": [{"source": list(s.coefficients), "root": k,
                       "target": list(t.coefficients), "rank": r}
                      for s, k, t, r in self.edges],
        }

    def to_dot(self) -> str:
        lines = ["digraph weights {", "  rankdir=BT;"]
        names = {w: f"w{i}" for i, (w, _) in enumerate(self.nodes)}
        for w, m in self.nodes:
            label = f"{w}" + (f" (x{m})" if m > 1 else "")
            lines.append(f'  {names[w]} [label="{label}"];')
        for s, k, t, r in self.edges:
            lines.append(f'  {names[s]} -> {names[t]} [label="E{k}{k+1} rk{r}"];')
        lines.append("}")
        return "\n".join(lines)


def _block_rank(mat: np.ndarray) -> int:
    if mat.size == 0:
        return 0
    den = 1
    for v in mat.ravel():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = np.zeros(mat.shape, dtype=object)
    for i in range(mat.shape[0]):
        for j in range(mat.shape[1]):
            ints[i, j] = int(Fraction(mat[i, j]) * den)
    _, piv = _rref_ints(ints)
    return len(piv)


def weight_diagram(M: WeightModule) -> WeightDiagram:
    nodes = tuple((w, len(idx)) for w, idx in M.nodes)
    node_map = dict(M.nodes)
    edges = []
    for k in range(1, M.host.n):
        R = M.restricted_raisings[k - 1]
        for w, idx in M.nodes:
            tgt = w.raised(k)
            block_rows = R[list(idx)]
            if tgt in node_map:
                outside = [j for j in range(M.dim) if j not in node_map[tgt]]
                if outside and np.any(block_rows[:, outside] != 0):
                    raise ClosureError("raising image leaves the expected weight block")
                r = _block_rank(block_rows[:, list(node_map[tgt])])
                if r > 0:
                    edges.append((w, k, tgt, r))
            elif np.any(block_rows != 0):
                raise ClosureError("raising image leaves the module's weight support")
    return WeightDiagram(nodes, tuple(edges))


def _left_kernel(mat: np.ndarray, nrows: int) -> np.ndarray:
    """Rows v with v @ mat = 0, for a Fraction/int object matrix."""
    if nrows == 0:
        return np.zeros((0, 0), dtype=object)
    if mat.size == 0:
        eye = np.zeros((nrows, nrows), dtype=object)
        for i in range(nrows):
            eye[i, i] = 1
        return eye
    den = 1
    for v in mat.ravel():
        f = Fraction(v)
        den = lcm(den, f.denominator)
    ints = np.zeros((mat.shape[1], nrows), dtype=object)
    for i in range(nrows):
        for j in range(mat.shape[1]):
            ints[j, i] = int(Fraction(mat[i, j]) * den)
    return _kernel_ints(ints, nrows)


def highest_weight_vectors(M: WeightModule) -> list[tuple[Weight, Subspace]]:
    """Per weight, the joint kernel of all simple raisings, in host coords."""
    out = []
    for w, idx in M.nodes:
        blocks = [R[list(idx)] for R in M.restricted_raisings]
        stacked = np.hstack(blocks) if blocks else np.zeros((len(idx), 0), dtype=object)
        kern = _left_kernel(stacked, len(idx))
        if kern.shape[0]:
            sub = M.lift({w: kern})
            out.append((w, sub))
    return out


def submodule_generated(M: WeightModule, seed: Subspace) -> WeightModule:
    """Smallest subspace containing the seed and closed under all simple
    raising and lowering operators."""
    from .exact_linalg import contains as sub_contains, subspace_sum
    if not sub_contains(M.space, seed):
        raise ValueError("seed is not contained in the module")
    ops = [M.host.raising(k).astype(object) for k in range(1, M.host.n)]
    ops += [M.host.lowering(k).astype(object) for k in range(1, M.host.n)]
    current = seed
    while True:
        rows = current.int_basis()
        pieces = [current]
        for op in ops:
            if rows.shape[0]:
                img = rows @ op
                pieces.append(Subspace.from_spanning_rows(current.ambient_dim, img))
        total = pieces[0]
        for p in pieces[1:]:
            total = subspace_sum(total, p)
        if total.dim == current.dim:
            return WeightModule(M.host, total, name="generated")
        current = total


# ---------------------------------------------------------------------------
# the cubic summands used by the 4x4 determinant pipeline
# ---------------------------------------------------------------------------

CUBIC_TABLEAUX = (
    Tableau(((1, 2, 3),)),
    Tableau(((1, 2), (3,))),
    Tableau(((1, 3), (2,))),
)


@lru_cache(maxsize=None)
def cubic_summands(n: int = 4, convention: str = "rows_first"
                   ) -> tuple[WeightModule, WeightModule, WeightModule, WeightModule]:
    """The three 20-dimensional summands of V^(x)3 plus the alternating one."""
    mods = tuple(
        schur_module(tab, n, convention=convention, name=f"lambda{i+1}")
        for i, tab in enumerate(CUBIC_TABLEAUX)
    )
    return mods + (alternating_module(n, 3),)
