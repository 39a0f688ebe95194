"""The 2x2 and 3x3 determinant companion computations.

The 2x2 case shows that both fixed codimension-2 candidate pieces cut out a
single point of the Segre quadric -- the linear-algebra form of the classical
obstruction to a fixed rank decomposition.  The 3x3 case enumerates the
codimension-5 fixed pieces at multidegree (2,2,2) inside the 216-dimensional
host space and counts how many pass the three adjacent multidegree tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .apolarity_tests import TestSpec, run_test
from .borel_fixed import enumerate_fixed, is_borel_fixed
from .exact_linalg import ExactMatrix, Subspace, kernel_basis, perp
from .grading import apolar_scale, graded_dim
from .schur_rep import (HostSpace, Tableau, WeightModule, alternating_module,
                        schur_module, tensor_power)
from .tensor_core import det_tensor

__all__ = [
    "det2_demo", "Det2Candidate", "Det2Report",
    "det3_f222", "Det3Report", "det3_host", "det3_summands", "DET3_TABLEAUX",
]


# ---------------------------------------------------------------------------
# 2x2: two candidates, each vanishing at one point only
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Det2Candidate:
    subspace: Subspace           # 2-dim piece upstairs in V (x) V
    codim_downstairs: int        # codimension of its perp among bilinear forms
    det_form: tuple[Fraction, Fraction, Fraction]  # a s^2 + b st + c t^2
    single_point: bool
    point: tuple[tuple[int, ...], tuple[int, ...]] | None  # (P1 x P1 coords)


@dataclass(frozen=True)
class Det2Report:
    candidates: tuple[Det2Candidate, ...]

    @property
    def candidate_count(self) -> int:
        return len(self.candidates)

    @property
    def all_single_points(self) -> bool:
        return all(c.single_point for c in self.candidates)


def _as_matrix(row: np.ndarray) -> list[list[Fraction]]:
    return [[Fraction(int(row[2 * i + j])) for j in range(2)] for i in range(2)]


def _det2x2(m) -> Fraction:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _rank_one_point(m) -> tuple[tuple[int, ...], tuple[int, ...]]:
    for i in range(2):
        for j in range(2):
            if m[i][j]:
                col = (m[0][j], m[1][j])
                row = (m[i][0], m[i][1])
                return _primitive(col), _primitive(row)
    raise ValueError("zero matrix has no well-defined point")


def _primitive(vec) -> tuple[int, ...]:
    from math import gcd, lcm
    fracs = [Fraction(v) for v in vec]
    den = 1
    for f in fracs:
        den = lcm(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-x for x in ints]
            break
    return tuple(ints)


def det2_demo() -> Det2Report:
    """Enumerate the fixed codimension-2 pieces for the 2x2 determinant and
    check that each cuts out a single point of the Segre quadric."""
    s2 = schur_module(Tableau(((1, 2),)), 2, name="sym2")
    l2 = alternating_module(2, 2)
    result = enumerate_fixed([s2, l2], 2, mode="per_summand")
    out = []
    for cand in result.candidates:
        E = cand.subspace
        rows = E.int_basis()
        A, B = _as_matrix(rows[0]), _as_matrix(rows[1])
        a = _det2x2(A)
        c = _det2x2(B)
        apb = [[A[i][j] + B[i][j] for j in range(2)] for i in range(2)]
        b = _det2x2(apb) - a - c
        disc = b * b - 4 * a * c
        form_zero = a == 0 and b == 0 and c == 0
        single = (not form_zero) and disc == 0
        point = None
        if single:
            if a != 0:
                s0, t0 = -b, 2 * a
            else:
                s0, t0 = 1, 0  # disc = 0 and a = 0 force b = 0, root t = 0
            m0 = [[s0 * A[i][j] + t0 * B[i][j] for j in range(2)] for i in range(2)]
            point = _rank_one_point(m0)
        out.append(Det2Candidate(
            subspace=E,
            codim_downstairs=E.ambient_dim - perp(E).dim,
            det_form=(a, b, c),
            single_point=single,
            point=point,
        ))
    return Det2Report(tuple(out))


# ---------------------------------------------------------------------------
# 3x3: fixed pieces at multidegree (2,2,2) and their tests
# ---------------------------------------------------------------------------

DET3_TABLEAUX = (
    Tableau(((1, 2, 3, 4, 5, 6),)),
    Tableau(((1, 2, 3, 4, 5), (6,))),
    Tableau(((1, 2, 3, 4), (5, 6))),
    Tableau(((1, 2, 3, 5, 6), (4,))),
    Tableau(((1, 2, 3, 5), (4, 6))),
    Tableau(((1, 2, 3, 5), (4,), (6,))),
    Tableau(((1, 2, 3), (4, 5, 6))),
    Tableau(((1, 2, 3), (4, 5), (6,))),
    Tableau(((1, 2, 5, 6), (3, 4))),
    Tableau(((1, 2, 5), (3, 4), (6,))),
    Tableau(((1, 2), (3, 4), (5, 6))),
)


def det3_host() -> HostSpace:
    return HostSpace(3, (2, 2, 2))


_summand_cache: list[WeightModule] | None = None


def det3_summands() -> list[WeightModule]:
    """The eleven irreducible summands of the (2,2,2) host, realized as
    projected Young symmetrizer images; they are independent with total
    dimension 216."""
    global _summand_cache
    if _summand_cache is None:
        host = det3_host()
        mods = [schur_module(tab, 3, host=host, name=f"mu{i+1}")
                for i, tab in enumerate(DET3_TABLEAUX)]
        total = sum(m.dim for m in mods)
        if total != host.dim:
            raise RuntimeError(f"summand dimensions {total} do not fill the host")
        _summand_cache = mods
    return _summand_cache


def apolar_perp(E: Subspace, host: HostSpace) -> Subspace:
    """Perp under the differentiation pairing of symmetric powers.

    The coordinate pairing and the differentiation pairing differ by the
    diagonal factorial weights; in degree <= 1 they coincide, but at (2,2,2)
    the weights matter: only this perp of a fixed subspace is itself fixed.
    """
    scales = [1] * host.dim
    for flat in range(host.dim):
        s = 1
        for mono in host.basis_tuple(flat):
            s *= apolar_scale(mono, host.n)
        scales[flat] = s
    rows = E.int_basis()
    grid = [[int(rows[i, j]) * scales[j] for j in range(host.dim)]
            for i in range(E.dim)]
    return kernel_basis(ExactMatrix.from_rows(grid, host.dim))


@dataclass(frozen=True)
class Det3Report:
    host_dim: int
    summand_dims: tuple[int, ...]
    candidate_count: int
    passing_count: int
    reference_count: int
    family_count: int
    unresolved_count: int

    @property
    def matches_reference(self) -> bool:
        return self.passing_count == self.reference_count

    def to_json(self) -> dict:
        return {
            "host_dim": self.host_dim,
            "summand_dims": list(self.summand_dims),
            "candidate_count": self.candidate_count,
            "passing_count": self.passing_count,
            "reference_count": self.reference_count,
            "matches_reference": self.matches_reference,
            "family_count": self.family_count,
            "unresolved_count": self.unresolved_count,
        }


DET3_REFERENCE_PASSING = 31


def det3_f222(r: int = 5, mode: str = "per_summand",
              check_fixedness: bool = False) -> Det3Report:
    """Enumerate dimension-r fixed subspaces at multidegree (2,2,2) for the
    3x3 determinant host and run the three adjacent multidegree tests on the
    perp of each."""
    host = det3_host()
    mods = det3_summands()
    result = enumerate_fixed(mods, r, mode=mode)
    dims3 = (3, 3, 3)
    m222 = (2, 2, 2)
    passing = 0
    for cand in result.candidates:
        E = cand.subspace
        if check_fixedness and not is_borel_fixed(E, host):
            raise RuntimeError("enumerated candidate is not fixed")
        F = apolar_perp(E, host)
        ok = True
        for k in range(3):
            tgt = tuple(x + (1 if i == k else 0) for i, x in enumerate(m222))
            rep = run_test(TestSpec(dims3, ((m222, F),), tgt, r))
            if rep.verdict != "pass":
                ok = False
                break
        if ok:
            passing += 1
    return Det3Report(
        host_dim=host.dim,
        summand_dims=tuple(m.dim for m in mods),
        candidate_count=len(result.candidates),
        passing_count=passing,
        reference_count=DET3_REFERENCE_PASSING,
        family_count=len(result.families),
        unresolved_count=len(result.unresolved_profiles),
    )
