"""Serialized proof certificates and their independent verification.

A certificate records, stage by stage, every subspace and every exact image
dimension that the prover used, so a verifier can recompute all rank and
codimension claims from the serialized data alone and re-check the
conclusion logic.  Completeness of the candidate enumeration itself is the
prover's theorem; independent parties re-establish it by re-running the
prover rather than by reading the certificate.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .exact_linalg import Subspace, contains, perp
from .grading import graded_dim
from .apolarity_tests import TestReport, TestSpec, run_test
from .tensor_core import Tensor, ann_piece, det_tensor, flattening_image, flattening_matrix, is_concise
from .exact_linalg import rank as matrix_rank

SCHEMA_VERSION = 1

BOUND_PROVED = "BOUND_PROVED"
INCONCLUSIVE = "INCONCLUSIVE"


class MalformedCertificateError(ValueError):
    """The certificate violates the schema (as opposed to being refuted)."""


def subspace_to_json(s: Subspace) -> dict:
    """Integer-matrix form: primitive rows whose pivot entries carry the
    denominators, so verifiers only need big-integer arithmetic."""
    rows = s.int_basis()
    return {
        "ambient_dim": s.ambient_dim,
        "dim": s.dim,
        "pivot_cols": list(s.pivot_cols),
        "rows": [[str(int(v)) for v in rows[i]] for i in range(s.dim)],
    }


def subspace_from_json(data: dict) -> Subspace:
    try:
        ambient = int(data["ambient_dim"])
        rows = [[int(v) for v in row] for row in data["rows"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedCertificateError(f"bad subspace record: {exc}") from exc
    arr = np.zeros((len(rows), ambient), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != ambient:
            raise MalformedCertificateError("subspace row width mismatch")
        for j, v in enumerate(row):
            arr[i, j] = v
    sub = Subspace.from_spanning_rows(ambient, arr)
    if sub.dim != int(data["dim"]):
        raise MalformedCertificateError("serialized rows are not independent")
    return sub


def tensor_hash(t: Tensor) -> str:
    payload = json.dumps(t.to_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class Certificate:
    tensor_id: str
    factor_dims: tuple[int, ...]
    tensor_sha256: str
    r: int
    mode: str
    stages: list[dict]
    conclusion: str
    unresolved_families: list[dict] = field(default_factory=list)
    tool_version: str = __version__

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "borderapolarity", "version": self.tool_version},
            "tensor": {"id": self.tensor_id, "factor_dims": list(self.factor_dims),
                       "sha256": self.tensor_sha256},
            "r": self.r,
            "mode": self.mode,
            "stages": self.stages,
            "unresolved_families": self.unresolved_families,
            "conclusion": self.conclusion,
        }

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        try:
            if int(data["schema_version"]) != SCHEMA_VERSION:
                raise MalformedCertificateError("unsupported schema version")
            return cls(
                tensor_id=str(data["tensor"]["id"]),
                factor_dims=tuple(int(x) for x in data["tensor"]["factor_dims"]),
                tensor_sha256=str(data["tensor"]["sha256"]),
                r=int(data["r"]),
                mode=str(data["mode"]),
                stages=list(data["stages"]),
                conclusion=str(data["conclusion"]),
                unresolved_families=list(data.get("unresolved_families", [])),
                tool_version=str(data["tool"]["version"]),
            )
        except MalformedCertificateError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedCertificateError(f"missing or invalid field: {exc}") from exc

    @classmethod
    def load(cls, path) -> "Certificate":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedCertificateError(f"not valid JSON: {exc}") from exc
        return cls.from_json(data)


def _stage(cert: Certificate, name: str) -> dict:
    for s in cert.stages:
        if s.get("name") == name:
            return s
    raise MalformedCertificateError(f"missing stage {name!r}")


def verify_certificate(cert: Certificate) -> bool:
    """Recompute every rank/codimension claim and re-check the conclusion.

    Returns False when any claim fails to reproduce (a refuted certificate);
    raises MalformedCertificateError when the record itself is ill-formed.
    """
    if cert.tensor_id != "det4" or cert.factor_dims != (4, 4, 4, 4):
        raise MalformedCertificateError("only det4 certificates are supported")
    t = det_tensor(4)
    if tensor_hash(t) != cert.tensor_sha256:
        return False
    dims = cert.factor_dims
    r = cert.r

    try:
        conc = _stage(cert, "conciseness")
        ranks = [int(x) for x in conc["flattening_ranks"]]
        units = _stage(cert, "unit_degrees")
        pair = _stage(cert, "pair_degree_bounds")
        positions = _stage(cert, "position_analysis")["positions"]
        final = None
        for s in cert.stages:
            if s.get("name") == "final_test":
                final = s
    except (KeyError, TypeError) as exc:
        raise MalformedCertificateError(f"stage payload missing field: {exc}") from exc

    # conciseness and unit-degree pieces
    for i in range(4):
        if matrix_rank(flattening_matrix(t, {i + 1})) != ranks[i]:
            return False
    if bool(conc["concise"]) != is_concise(t):
        return False
    for entry in units["pieces"]:
        m = tuple(int(x) for x in entry["multidegree"])
        if ann_piece(t, m).dim != int(entry["dim"]):
            return False

    # pair-degree shortcut arithmetic
    for entry in pair["entries"]:
        m = tuple(int(x) for x in entry["multidegree"])
        piece_dim = graded_dim(m, dims) - min(r, graded_dim(m, dims))
        if piece_dim != int(entry["piece_dim"]):
            return False
        for trec in entry["tests"]:
            tm = tuple(int(x) for x in trec["target"])
            bound = piece_dim * 4
            fires = bound <= graded_dim(tm, dims) - r
            if bool(trec["auto_pass"]) != fires:
                return False

    # position candidates and their test reports
    survivor_sets: list[list[int]] = []
    position_subspaces: list[dict[int, Subspace]] = []
    for prec in positions:
        pos = int(prec["position"])
        m = tuple(int(x) for x in prec["multidegree"])
        required = subspace_from_json(prec["required_image"])
        if required != flattening_image(t, {pos}):
            return False
        survivors = []
        subs = {}
        for ci, crec in enumerate(prec["candidates"]):
            E = subspace_from_json(crec["subspace"])
            subs[ci] = E
            if E.dim != r:
                return False
            if not contains(E, required):
                return False
            F = perp(E)
            reports = crec["reports"]
            n_tests = sum(1 for x in m if x)
            # the prover records reports up to the first failure
            if not 1 <= len(reports) <= n_tests:
                raise MalformedCertificateError("wrong number of test reports")
            recomputed = []
            for k0, rrec in zip([i for i, x in enumerate(m) if x], reports):
                tgt = tuple(x + (1 if i == k0 else 0) for i, x in enumerate(m))
                if tuple(int(x) for x in rrec["target"]) != tgt:
                    return False
                rep = run_test(TestSpec(dims, ((m, F),), tgt, r))
                claimed = TestReport.from_json(rrec["report"])
                if rep != claimed:
                    return False
                recomputed.append(rep)
            all_pass = (len(recomputed) == n_tests
                        and all(rep.verdict == "pass" for rep in recomputed))
            if not all_pass and recomputed[-1].verdict == "pass" \
                    and len(recomputed) < n_tests:
                raise MalformedCertificateError("candidate reports truncated early")
            if bool(crec["survived"]) != all_pass:
                return False
            if all_pass:
                survivors.append(ci)
        if survivors != [int(x) for x in prec["survivors"]]:
            return False
        survivor_sets.append(survivors)
        position_subspaces.append(subs)

    # final multilinear test over every surviving tuple
    all_tuples_fail = None
    if final is not None:
        expected = 1
        for s in survivor_sets:
            expected *= len(s)
        tuples = final["tuples"]
        if cert.conclusion == BOUND_PROVED and len(tuples) != expected:
            return False
        all_tuples_fail = True
        seen = set()
        for trec in tuples:
            members = [int(x) for x in trec["members"]]
            if len(members) != len(survivor_sets):
                raise MalformedCertificateError("tuple arity mismatch")
            for mi, s in zip(members, survivor_sets):
                if mi not in s:
                    return False
            seen.add(tuple(members))
            sources = []
            for prec, subs, mi in zip(positions, position_subspaces, members):
                m = tuple(int(x) for x in prec["multidegree"])
                sources.append((m, perp(subs[mi])))
            rep = run_test(TestSpec(dims, tuple(sources), (1, 1, 1, 1), r))
            claimed = TestReport.from_json(trec["report"])
            if rep != claimed:
                return False
            if rep.verdict == "pass":
                all_tuples_fail = False
        if cert.conclusion == BOUND_PROVED and len(seen) != expected:
            return False

    # conclusion logic
    if cert.conclusion == BOUND_PROVED:
        if cert.unresolved_families:
            return False
        eliminated = any(not s for s in survivor_sets)
        if not eliminated:
            if final is None or not all_tuples_fail:
                return False
    elif cert.conclusion != INCONCLUSIVE:
        raise MalformedCertificateError(f"unknown conclusion {cert.conclusion!r}")
    return True
