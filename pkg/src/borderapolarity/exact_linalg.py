"""Exact dense linear algebra over the rationals.

Every rank, kernel, perp and codimension claim in this package reduces to
computations done here.  Matrices carry arbitrary-precision rational entries;
internally all elimination is fraction-free integer Gauss-Jordan on numpy
arrays (int64 with a certified escape to Python big ints), so results are
exact -- no rounding ever happens anywhere.

Subspaces are kept in a canonical form: the unique reduced row-echelon basis
of any spanning set.  Two subspaces are equal iff their canonical data are
equal entrywise, which turns every "there is only one such subspace" claim
into a plain data comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction

# Entries are kept below this bound while eliminating in int64; one round of
# cross-multiplication then stays below 2^62 and cannot overflow silently.
_INT64_SAFE = 1 << 30


class _Overflow(Exception):
    """Internal signal: redo the elimination with Python big ints."""


class AmbientMismatchError(ValueError):
    """Raised when combining subspaces of different ambient dimensions."""


# ---------------------------------------------------------------------------
# integer array helpers
# ---------------------------------------------------------------------------

def _as_int_array(rows: int, cols: int, data) -> np.ndarray:
    """Coerce nested int data to a 2-D object array of Python ints."""
    arr = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            arr[i, j] = int(data[i][j])
    return arr


def _int_rows_from_rationals(rows: Sequence[Sequence[Fraction]], cols: int) -> np.ndarray:
    """Scale each rational row to a primitive integer row (same row space)."""
    out = np.zeros((len(rows), cols), dtype=object)
    for i, row in enumerate(rows):
        fracs = [Fraction(x) for x in row]
        denom = 1
        for f in fracs:
            denom = lcm(denom, f.denominator)
        ints = [int(f * denom) for f in fracs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        for j, v in enumerate(ints):
            out[i, j] = v
    return out


def _row_gcds(arr: np.ndarray) -> np.ndarray:
    if arr.shape[1] == 0:
        return np.ones(arr.shape[0], dtype=object)
    return np.gcd.reduce(np.abs(arr), axis=1)


def _reduce_rows_by_gcd(arr: np.ndarray, idx) -> None:
    """Divide the selected rows by their gcd in place (zero rows untouched)."""
    if len(idx) == 0:
        return
    g = _row_gcds(arr[idx])
    nontrivial = g > 1
    if np.any(nontrivial):
        sel = np.asarray(idx)[np.asarray(nontrivial, dtype=bool)]
        gs = g[np.asarray(nontrivial, dtype=bool)]
        arr[sel] = arr[sel] // gs[:, None]


def _rref_ints(M: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Fraction-free Gauss-Jordan on an integer matrix.

    Returns ``(R, pivots)`` where the rows of ``R`` are the primitive integer
    scalings of the unique rational RREF rows: each row has gcd 1 and a
    positive entry at its pivot column; dividing row ``i`` by ``R[i, pivots[i]]``
    recovers the rational RREF.  This scaled form is itself canonical.
    """
    if M.size == 0 or M.shape[0] == 0:
        return np.zeros((0, M.shape[1] if M.ndim == 2 else 0), dtype=object), ()
    if M.dtype != object:
        work = M.astype(np.int64, copy=True)
        if work.size and int(np.abs(work).max()) <= _INT64_SAFE:
            try:
                R, piv = _rref_core(work, checked=True)
                return R.astype(object), piv
            except _Overflow:
                pass
    work = M.astype(object, copy=True)
    return _rref_core(work, checked=False)


def _rref_core(R: np.ndarray, checked: bool) -> tuple[np.ndarray, tuple[int, ...]]:
    nrows, ncols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        colvals = R[r:, c]
        nz = np.nonzero(colvals)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        # primitive pivot row with positive pivot
        g = int(np.gcd.reduce(np.abs(R[r]))) if ncols else 1
        if g > 1:
            R[r] = R[r] // g
        if R[r, c] < 0:
            R[r] = -R[r]
        p = R[r, c]
        col = R[:, c].copy()
        col[r] = 0
        mask = col != 0
        if np.any(mask):
            if checked:
                bound = int(np.abs(R[mask]).max()) * int(p) + \
                    int(np.abs(col[mask]).max()) * int(np.abs(R[r]).max())
                if bound > (1 << 62):
                    raise _Overflow
            R[mask] = R[mask] * p - np.outer(col[mask], R[r])
            idx = np.nonzero(mask)[0]
            _reduce_rows_by_gcd(R, idx)
            if checked and R[idx].size and int(np.abs(R[idx]).max()) > _INT64_SAFE:
                raise _Overflow
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return R[:r].copy(), tuple(pivots)


def _kernel_ints(M: np.ndarray, ncols: int) -> np.ndarray:
    """Primitive integer rows spanning the right kernel of M (not canonical)."""
    R, pivots = _rref_ints(M)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    out = np.zeros((len(free), ncols), dtype=object)
    for k, f in enumerate(free):
        scale = 1
        for i, _ in enumerate(pivots):
            if R[i, f] != 0:
                scale = lcm(scale, int(R[i, pivots[i]]))
        out[k, f] = scale
        for i, pc in enumerate(pivots):
            if R[i, f] != 0:
                out[k, pc] = -int(R[i, f]) * (scale // int(R[i, pivots[i]]))
    _reduce_rows_by_gcd(out, list(range(len(free))))
    return out


def _reduce_against(row: np.ndarray, R: np.ndarray, pivots: Sequence[int]) -> np.ndarray:
    """Reduce one integer row against primitive RREF rows; zero iff contained."""
    row = row.astype(object, copy=True)
    for i, c in enumerate(pivots):
        f = row[c]
        if f != 0:
            p = R[i, c]
            row = row * p - R[i] * f
            g = int(np.gcd.reduce(np.abs(row))) if row.size else 0
            if g > 1:
                row = row // g
    return row


# ---------------------------------------------------------------------------
# public types
# ---------------------------------------------------------------------------

class ExactMatrix:
    """Immutable dense matrix over the rationals.

    Stored as an integer numerator grid plus one positive denominator, so big
    integers survive untouched.  ``entry(i, j)`` returns a reduced Fraction.
    """

    __slots__ = ("rows", "cols", "_num", "_den")

    def __init__(self, rows: int, cols: int, num: np.ndarray, den: int = 1):
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.rows = rows
        self.cols = cols
        self._num = num
        self._den = den

    @classmethod
    def from_rows(cls, data: Iterable[Iterable], cols: int | None = None) -> "ExactMatrix":
        rows = [[Fraction(x) for x in row] for row in data]
        nrows = len(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
        den = 1
        for row in rows:
            for f in row:
                den = lcm(den, f.denominator)
        num = np.zeros((nrows, cols), dtype=object)
        for i, row in enumerate(rows):
            for j, f in enumerate(row):
                num[i, j] = int(f * den)
        return cls(nrows, cols, num, den)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, np.zeros((rows, cols), dtype=object), 1)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        num = np.zeros((n, n), dtype=object)
        for i in range(n):
            num[i, i] = 1
        return cls(n, n, num, 1)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self._num[i, j]), self._den)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        """Row-major tuple of all entries as reduced rationals."""
        return tuple(Fraction(int(v), self._den) for v in self._num.ravel())

    def row(self, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(v), self._den) for v in self._num[i])

    def int_rows(self) -> np.ndarray:
        """Primitive integer rows with the same row space (copy)."""
        out = self._num.astype(object, copy=True)
        _reduce_rows_by_gcd(out, list(range(self.rows)))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return np.array_equal(self._num * other._den, other._num * self._den)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(self.entries)))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols})"

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(f.numerator), str(f.denominator)] for f in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExactMatrix":
        rows, cols = int(data["rows"]), int(data["cols"])
        ents = data["entries"]
        if len(ents) != rows * cols:
            raise ValueError("entry count does not match shape")
        it = iter(ents)
        grid = []
        for _ in range(rows):
            row = []
            for _ in range(cols):
                n, d = next(it)
                row.append(Fraction(int(n), int(d)))
            grid.append(row)
        return cls.from_rows(grid, cols)


class Subspace:
    """A linear subspace of Q^n in canonical (RREF) form.

    Internally the basis is stored as primitive integer rows (gcd 1, positive
    pivot); dividing each row by its pivot entry gives the unique rational
    RREF.  Equality and hashing use this canonical integer data.
    """

    __slots__ = ("ambient_dim", "_rows", "pivot_cols")

    def __init__(self, ambient_dim: int, rows: np.ndarray, pivot_cols: tuple[int, ...]):
        self.ambient_dim = ambient_dim
        self._rows = rows
        self.pivot_cols = pivot_cols

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_spanning_rows(cls, ambient_dim: int, rows) -> "Subspace":
        """Canonicalize any spanning set (rationals or ints accepted)."""
        if isinstance(rows, np.ndarray) and rows.dtype == object:
            mat = rows
        else:
            rows = list(rows)
            if rows and any(
                isinstance(x, Fraction) and x.denominator != 1 for row in rows for x in row
            ):
                mat = _int_rows_from_rationals(rows, ambient_dim)
            else:
                mat = _as_int_array(len(rows), ambient_dim, rows)
        R, piv = _rref_ints(mat)
        return cls(ambient_dim, R, piv)

    @classmethod
    def from_matrix(cls, m: ExactMatrix) -> "Subspace":
        """Row space of a matrix."""
        R, piv = _rref_ints(m.int_rows())
        return cls(m.cols, R, piv)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((0, ambient_dim), dtype=object), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        num = np.zeros((ambient_dim, ambient_dim), dtype=object)
        for i in range(ambient_dim):
            num[i, i] = 1
        return cls(ambient_dim, num, tuple(range(ambient_dim)))

    # -- views -------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._rows.shape[0]

    @property
    def basis(self) -> ExactMatrix:
        """The rational RREF basis (pivot entries equal to 1)."""
        grid = []
        for i in range(self.dim):
            p = int(self._rows[i, self.pivot_cols[i]])
            grid.append([Fraction(int(v), p) for v in self._rows[i]])
        return ExactMatrix.from_rows(grid, self.ambient_dim)

    def int_basis(self) -> np.ndarray:
        """Primitive integer basis rows (copy; canonical)."""
        return self._rows.copy()

    def sort_key(self):
        return (self.dim, self.pivot_cols,
                tuple(int(v) for v in self._rows.ravel()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim
                and self.pivot_cols == other.pivot_cols
                and np.array_equal(self._rows, other._rows))

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.pivot_cols,
                     tuple(int(v) for v in self._rows.ravel())))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def contains_vector(self, vec) -> bool:
        if isinstance(vec, np.ndarray) and vec.dtype == object:
            row = vec
        else:
            row = _int_rows_from_rationals([list(vec)], self.ambient_dim)[0]
        res = _reduce_against(row, self._rows, self.pivot_cols)
        return not np.any(res != 0)

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "Subspace":
        m = ExactMatrix.from_json(data["basis"])
        if m.cols != int(data["ambient_dim"]):
            raise ValueError("basis width does not match ambient dimension")
        return cls.from_matrix(m)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def rref(m: ExactMatrix) -> tuple[ExactMatrix, tuple[int, ...], int]:
    """Reduced row-echelon form, pivot columns and rank of a matrix."""
    R, piv = _rref_ints(m.int_rows())
    grid = []
    for i in range(R.shape[0]):
        p = int(R[i, piv[i]])
        grid.append([Fraction(int(v), p) for v in R[i]])
    for _ in range(m.rows - R.shape[0]):
        grid.append([Fraction(0)] * m.cols)
    return ExactMatrix.from_rows(grid, m.cols), piv, len(piv)


def rank(m: ExactMatrix) -> int:
    _, piv = _rref_ints(m.int_rows())
    return len(piv)


def kernel_basis(m: ExactMatrix) -> Subspace:
    """Null space {x : m x = 0} of a matrix, canonical; dim = cols - rank."""
    K = _kernel_ints(m.int_rows(), m.cols)
    return Subspace.from_spanning_rows(m.cols, K)


def perp(s: Subspace) -> Subspace:
    """Annihilator of s in the dual under <e_i*, e_j> = delta_ij."""
    K = _kernel_ints(s._rows, s.ambient_dim)
    return Subspace.from_spanning_rows(s.ambient_dim, K)


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatchError(
            f"ambient dimensions differ: {a.ambient_dim} != {b.ambient_dim}")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    stacked = np.vstack([a._rows, b._rows]) if (a.dim or b.dim) else a._rows
    return Subspace.from_spanning_rows(a.ambient_dim, stacked)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the Zassenhaus block trick."""
    _check_ambient(a, b)
    n = a.ambient_dim
    ra, rb = a.dim, b.dim
    Z = np.zeros((ra + rb, 2 * n), dtype=object)
    if ra:
        Z[:ra, :n] = a._rows
        Z[:ra, n:] = a._rows
    if rb:
        Z[ra:, :n] = b._rows
    R, piv = _rref_ints(Z)
    inter_rows = [R[i, n:] for i in range(R.shape[0]) if piv[i] >= n]
    if inter_rows:
        mat = np.vstack([r[None, :] for r in inter_rows])
    else:
        mat = np.zeros((0, n), dtype=object)
    return Subspace.from_spanning_rows(n, mat)


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff b is a subspace of a."""
    _check_ambient(a, b)
    if b.dim > a.dim:
        return False
    for i in range(b.dim):
        res = _reduce_against(b._rows[i], a._rows, a.pivot_cols)
        if np.any(res != 0):
            return False
    return True
