"""End-to-end border-rank certification pipeline for the 4x4 determinant.

The pipeline mirrors the staged elimination argument: the tensor is concise,
so unit-degree ideal pieces vanish; pair-degree pieces pass their tests by a
dimension count; at each (1,1,1,0)-type multidegree the fixed-subspace
candidates are enumerated independently and filtered through the three
adjacent multidegree tests; finally the surviving 4-tuples feed the full
multilinear test, whose failure for every tuple proves the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .apolarity_tests import TestSpec, auto_pass_bound, run_test
from .borel_fixed import (FixedCandidate, assemble_E1110_candidates,
                          enumerate_fixed, is_borel_fixed)
from .certificate import (BOUND_PROVED, INCONCLUSIVE, Certificate,
                          subspace_to_json, tensor_hash)
from .exact_linalg import Subspace, contains, perp, subspace_sum
from .grading import graded_dim
from .schur_rep import CUBIC_TABLEAUX, cubic_summands, young_symmetrizer_vector
from .tensor_core import Tensor, ann_piece, det_tensor, flattening_image, \
    flattening_matrix, is_concise, projection_span_dim, rank_one
from .exact_linalg import rank as matrix_rank

DIMS = (4, 4, 4, 4)

__all__ = [
    "prove_det4", "explicit_e1110", "decomposition_terms",
    "verify_decomposition", "DecompositionReport", "position_multidegree",
]


def position_multidegree(pos: int) -> tuple[int, ...]:
    """The multilinear multidegree omitting one factor, e.g. 4 -> (1,1,1,0)."""
    return tuple(0 if i == pos - 1 else 1 for i in range(4))


def explicit_e1110() -> Subspace:
    """The unique surviving 11-dimensional fixed subspace at (1,1,1,0),
    written out explicitly: a 3-chain in the symmetric-cube summand, 2-chains
    in the two mixed summands, plus the full alternating summand."""
    tabs = CUBIC_TABLEAUX
    rows = [
        young_symmetrizer_vector(tabs[0], (1, 1, 1), 4),
        young_symmetrizer_vector(tabs[0], (1, 1, 2), 4),
        young_symmetrizer_vector(tabs[0], (1, 1, 3), 4),
        young_symmetrizer_vector(tabs[1], (1, 1, 2), 4),
        young_symmetrizer_vector(tabs[1], (1, 1, 3), 4),
        young_symmetrizer_vector(tabs[2], (1, 1, 2), 4),
        young_symmetrizer_vector(tabs[2], (1, 1, 3), 4),
    ]
    chains = Subspace.from_spanning_rows(64, np.vstack(rows))
    alt = cubic_summands(4)[3]
    return subspace_sum(chains, alt.space)


# ---------------------------------------------------------------------------
# the twelve-term rank decomposition
# ---------------------------------------------------------------------------

def _pm(i: int, j: int, sign: int) -> list[int]:
    v = [0, 0, 0, 0]
    v[i - 1] = 1
    v[j - 1] = sign
    return v


def decomposition_terms() -> list[tuple[int, list[list[int]]]]:
    """The 12 signed rank-one terms whose half-sum is the determinant tensor."""
    plus, minus = 1, -1
    data = [
        (+1, (1, 2, minus), (3, 4, minus), (3, 4, plus), (1, 2, plus)),
        (-1, (1, 3, minus), (2, 4, minus), (2, 4, plus), (1, 3, plus)),
        (+1, (1, 4, minus), (2, 3, minus), (2, 3, plus), (1, 4, plus)),
        (+1, (2, 3, minus), (1, 4, minus), (1, 4, plus), (2, 3, plus)),
        (-1, (2, 4, minus), (1, 3, minus), (1, 3, plus), (2, 4, plus)),
        (+1, (3, 4, minus), (1, 2, minus), (1, 2, plus), (3, 4, plus)),
        (+1, (1, 2, plus), (3, 4, plus), (3, 4, minus), (1, 2, minus)),
        (-1, (1, 3, plus), (2, 4, plus), (2, 4, minus), (1, 3, minus)),
        (+1, (1, 4, plus), (2, 3, plus), (2, 3, minus), (1, 4, minus)),
        (+1, (2, 3, plus), (1, 4, plus), (1, 4, minus), (2, 3, minus)),
        (-1, (2, 4, plus), (1, 3, plus), (1, 3, minus), (2, 4, minus)),
        (+1, (3, 4, plus), (1, 2, plus), (1, 2, minus), (3, 4, minus)),
    ]
    return [(sign, [_pm(*f) for f in factors]) for sign, *factors in data]


@dataclass(frozen=True)
class DecompositionReport:
    term_count: int
    reproduces_tensor: bool
    projection_span: int
    each_term_needed: bool

    @property
    def ok(self) -> bool:
        return (self.reproduces_tensor and self.projection_span == 9
                and self.each_term_needed)


def verify_decomposition() -> DecompositionReport:
    """Check the 12-term display: half the signed sum equals the tensor
    exactly, the first-two-factor projections span 9 dimensions, and no term
    is redundant."""
    t = det_tensor(4)
    terms = decomposition_terms()
    total = Tensor.zeros(DIMS)
    signed = []
    for sign, vectors in terms:
        rk1 = rank_one(vectors).scale(sign)
        signed.append(rk1)
        total = total + rk1
    reproduces = total.scale(Fraction(1, 2)) == t
    span = projection_span_dim([vecs for _, vecs in terms], {1, 2})
    each_needed = True
    for i in range(len(terms)):
        partial = Tensor.zeros(DIMS)
        for j, rk1 in enumerate(signed):
            if j != i:
                partial = partial + rk1
        if partial.scale(Fraction(1, 2)) == t:
            each_needed = False
    return DecompositionReport(len(terms), reproduces, span, each_needed)


# ---------------------------------------------------------------------------
# the staged prover
# ---------------------------------------------------------------------------

def _pair_multidegrees() -> list[tuple[int, ...]]:
    out = []
    for a in range(4):
        for b in range(a + 1, 4):
            m = [0, 0, 0, 0]
            m[a] = m[b] = 1
            out.append(tuple(m))
    return out


def _stage_conciseness(t: Tensor) -> dict:
    ranks = [matrix_rank(flattening_matrix(t, {i + 1})) for i in range(4)]
    concise = is_concise(t)
    if not concise:
        raise RuntimeError("tensor is not concise; unit degrees cannot be zeroed")
    return {"name": "conciseness", "flattening_ranks": ranks, "concise": concise}


def _stage_unit_degrees(t: Tensor) -> dict:
    pieces = []
    for i in range(4):
        m = tuple(1 if j == i else 0 for j in range(4))
        pieces.append({"multidegree": list(m), "dim": ann_piece(t, m).dim})
    return {"name": "unit_degrees", "pieces": pieces,
            "all_zero": all(p["dim"] == 0 for p in pieces)}


def _stage_pair_bounds(r: int) -> dict:
    entries = []
    for m in _pair_multidegrees():
        dim_m = graded_dim(m, DIMS)
        piece_dim = dim_m - min(r, dim_m)
        tests = []
        for k in [i for i, x in enumerate(m) if x]:
            tgt = tuple(x + (1 if i == k else 0) for i, x in enumerate(m))
            bound = piece_dim * DIMS[k]
            fires = bound <= graded_dim(tgt, DIMS) - r
            tests.append({"target": list(tgt), "generator_bound": bound,
                          "target_dim": graded_dim(tgt, DIMS),
                          "auto_pass": fires})
        entries.append({"multidegree": list(m), "piece_dim": piece_dim,
                        "tests": tests})
    return {"name": "pair_degree_bounds", "entries": entries,
            "all_auto_pass": all(t["auto_pass"] for e in entries for t in e["tests"])}


def _position_enumeration(r: int, mode: str):
    """Candidates (and, in general mode, families) for one multilinear slot.

    Every candidate is the alternating summand plus a fixed piece of the
    complementary Schur summands; the alternating part equals the flattening
    image each candidate is required to contain.
    """
    lam1, lam2, lam3, alt = cubic_summands(4)
    if mode == "per_summand":
        return assemble_E1110_candidates(r), []
    result = enumerate_fixed([lam1, lam2, lam3], r - alt.dim, mode="general")
    candidates = []
    for cand in result.candidates:
        total = subspace_sum(alt.space, cand.subspace)
        candidates.append(FixedCandidate(total, cand.provenance + ((3, alt.dim),),
                                         cand.profile))
    families = []
    for fam in result.families:
        lifted = tuple(subspace_sum(alt.space, w) for w in fam.witness_members)
        families.append((fam, lifted))
    for prof in result.unresolved_profiles:
        families.append((prof, ()))
    return candidates, families


def prove_det4(r: int = 11, mode: str = "per_summand") -> Certificate:
    """Run the staged elimination for border rank r+1 certification.

    Concludes BOUND_PROVED when every surviving candidate combination fails a
    mandatory test with no unresolved families on the path; any surviving
    combination or unresolved family yields INCONCLUSIVE, never a false proof.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if mode not in ("per_summand", "general"):
        raise ValueError("mode must be 'per_summand' or 'general'")
    t = det_tensor(4)
    stages = [_stage_conciseness(t), _stage_unit_degrees(t), _stage_pair_bounds(r)]
    unresolved_families: list[dict] = []

    positions_payload = []
    survivor_sets: list[list[int]] = []
    survivor_subspaces: list[list[Subspace]] = []
    for pos in (4, 3, 2, 1):
        m = position_multidegree(pos)
        required = flattening_image(t, {pos})
        candidates, families = _position_enumeration(r, mode)
        cand_payload = []
        survivors = []
        surv_subs = []
        for ci, cand in enumerate(candidates):
            E = cand.subspace
            if not contains(E, required):
                raise RuntimeError("candidate does not contain the flattening image")
            F = perp(E)
            reports = []
            all_pass = True
            for k in [i for i, x in enumerate(m) if x]:
                tgt = tuple(x + (1 if i == k else 0) for i, x in enumerate(m))
                spec = TestSpec(DIMS, ((m, F),), tgt, r)
                rep = run_test(spec)
                reports.append({"target": list(tgt), "report": rep.to_json()})
                if rep.verdict != "pass":
                    all_pass = False
                    break
            if all_pass and len(reports) < sum(m):
                raise RuntimeError("missing reports for a surviving candidate")
            if all_pass:
                survivors.append(ci)
                surv_subs.append(E)
            cand_payload.append({
                "subspace": subspace_to_json(E),
                "provenance": [list(p) for p in cand.provenance],
                "reports": reports,
                "survived": all_pass,
            })
        for fam, witnesses in families:
            frec = {"position": pos, "kind": "family"}
            if witnesses:
                frec["parameter_count"] = fam.parameter_count
                frec["profile"] = [[list(key[1]), d] for key, d in fam.profile.entries]
                min_image = None
                all_pass = True
                for w in witnesses:
                    F = perp(w)
                    for k in [i for i, x in enumerate(m) if x]:
                        tgt = tuple(x + (1 if i == k else 0) for i, x in enumerate(m))
                        rep = run_test(TestSpec(DIMS, ((m, F),), tgt, r))
                        min_image = rep.image_dim if min_image is None \
                            else min(min_image, rep.image_dim)
                        if rep.verdict != "pass":
                            all_pass = False
                frec["status"] = "survives_at_samples" if all_pass else "fails_at_samples"
                frec["min_sampled_image_dim"] = min_image
            else:
                frec["status"] = "unexplored_profile"
                frec["profile"] = [[list(key[1]), d] for key, d in fam.entries]
            unresolved_families.append(frec)
        positions_payload.append({
            "position": pos,
            "multidegree": list(m),
            "required_image": subspace_to_json(required),
            "candidates": cand_payload,
            "survivors": survivors,
            "survivor_count": len(survivors),
        })
        survivor_sets.append(survivors)
        survivor_subspaces.append(surv_subs)
    stages.append({"name": "position_analysis", "positions": positions_payload})

    # final multilinear test over all surviving combinations
    conclusion = INCONCLUSIVE
    some_empty = any(not s for s in survivor_sets)
    if not some_empty:
        tuples_payload = []
        all_fail = True
        idx = [0] * 4
        counts = [len(s) for s in survivor_sets]
        done = False
        while not done:
            members = [survivor_sets[p][idx[p]] for p in range(4)]
            sources = []
            for p, pos in enumerate((4, 3, 2, 1)):
                m = position_multidegree(pos)
                sources.append((m, perp(survivor_subspaces[p][idx[p]])))
            rep = run_test(TestSpec(DIMS, tuple(sources), (1, 1, 1, 1), r))
            tuples_payload.append({"members": members, "report": rep.to_json()})
            if rep.verdict == "pass":
                all_fail = False
                break
            for p in range(3, -1, -1):
                idx[p] += 1
                if idx[p] < counts[p]:
                    break
                idx[p] = 0
            else:
                done = True
        stages.append({"name": "final_test", "tuples": tuples_payload,
                       "all_fail": all_fail})
        if all_fail and not unresolved_families:
            conclusion = BOUND_PROVED
    else:
        if not unresolved_families:
            conclusion = BOUND_PROVED

    return Certificate(
        tensor_id="det4",
        factor_dims=DIMS,
        tensor_sha256=tensor_hash(t),
        r=r,
        mode=mode,
        stages=stages,
        conclusion=conclusion,
        unresolved_families=unresolved_families,
    )
