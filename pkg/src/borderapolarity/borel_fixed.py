"""Enumeration of Borel-fixed subspaces of prescribed dimension.

A subspace is Borel-fixed iff it is spanned by torus weight vectors and is
closed under every simple raising operator.  Two enumeration modes exist:

* ``per_summand`` treats each irreducible summand separately and, inside a
  summand, only considers direct sums of full weight blocks (multiplicity
  blocks are all-or-nothing).  This reproduces the published per-dimension
  counts and is the mode the determinant pipelines certify with.
* ``general`` searches torus-stable profiles across the whole module
  (summands merged), including partial sub-blocks of multiplicity >= 2 weight
  spaces and cross-summand mixing.  It solves the raising-closure constraints
  exactly node by node; when a profile leaves a genuinely free choice the
  solutions form a positive-dimensional locus, which is reported as a
  FixedFamily with sampled witness members rather than silently dropped.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .exact_linalg import Subspace, contains as sub_contains, perp, subspace_sum
from .exact_linalg import _kernel_ints
from .schur_rep import HostSpace, Weight, WeightModule, cubic_summands

__all__ = [
    "Profile", "FixedCandidate", "FixedFamily", "EnumerationResult",
    "is_borel_fixed", "enumerate_fixed", "assemble_E1110_candidates",
    "subspace_profile", "merge_modules",
]

_WITNESS_SAMPLES = 7
_SAMPLE_SEED = 0x5CA1AB1E


@dataclass(frozen=True)
class Profile:
    """Chosen sub-dimension per weight node, keyed by (summand id, weight)."""

    entries: tuple[tuple[tuple[int, tuple[int, ...]], int], ...]

    @classmethod
    def of(cls, mapping: dict) -> "Profile":
        items = tuple(sorted(((sid, tuple(w.coefficients)), int(d))
                             for (sid, w), d in mapping.items() if d))
        return cls(items)

    @property
    def total(self) -> int:
        return sum(d for _, d in self.entries)


@dataclass(frozen=True)
class FixedCandidate:
    """An isolated Borel-fixed subspace of the requested dimension."""

    subspace: Subspace
    provenance: tuple[tuple[int, int], ...]  # (summand id, dimension there)
    profile: Profile


@dataclass(frozen=True)
class FixedFamily:
    """A positive-dimensional locus of Borel-fixed subspaces.

    Witness members are exact sampled points of the locus, each verified to
    be Borel-fixed of the target dimension; no completeness claim is made
    about special members.
    """

    profile: Profile
    parameter_count: int
    witness_members: tuple[Subspace, ...]


@dataclass(frozen=True)
class EnumerationResult:
    candidates: tuple[FixedCandidate, ...]
    families: tuple[FixedFamily, ...]
    unresolved_profiles: tuple[Profile, ...] = ()


# ---------------------------------------------------------------------------
# the fixedness predicate
# ---------------------------------------------------------------------------

def is_borel_fixed(s: Subspace, module) -> bool:
    """True iff s is torus-stable and closed under all simple raisings.

    `module` is the hosting WeightModule (or a bare HostSpace).  When a
    proper module is given, s must lie inside it.
    """
    if isinstance(module, WeightModule):
        host = module.host
        if s.ambient_dim != module.space.ambient_dim:
            raise ValueError("subspace does not live in the module's ambient space")
        if not sub_contains(module.space, s):
            raise ValueError("subspace is not contained in the module")
    elif isinstance(module, HostSpace):
        host = module
        if s.ambient_dim != host.dim:
            raise ValueError("subspace does not live in the host space")
    else:
        raise TypeError("module must be a WeightModule or HostSpace")

    rows = s.int_basis()
    for i in range(s.dim):
        support = np.nonzero(rows[i])[0]
        contents = {host.basis_content(int(j)) for j in support}
        if len(contents) > 1:
            return False
    for k in range(1, host.n):
        if s.dim == 0:
            break
        imgs = rows @ host.raising(k).astype(object)
        for i in range(s.dim):
            if not s.contains_vector(imgs[i]):
                return False
    return True


def subspace_profile(s: Subspace, module: WeightModule, summand_id: int = 0) -> Profile:
    """Per-weight-node dimensions of a torus-stable subspace of a module."""
    rows = s.int_basis()
    counts: dict[tuple[int, Weight], int] = {}
    for i in range(s.dim):
        support = np.nonzero(rows[i])[0]
        contents = {module.host.basis_content(int(j)) for j in support}
        if len(contents) != 1:
            raise ValueError("subspace is not torus-stable")
        w = Weight.of(contents.pop())
        counts[(summand_id, w)] = counts.get((summand_id, w), 0) + 1
    return Profile.of(counts)


def merge_modules(modules) -> WeightModule:
    """Direct sum of weight modules sharing one host, as a single module."""
    modules = list(modules)
    host = modules[0].host
    total = modules[0].space
    for m in modules[1:]:
        if m.host != host:
            raise ValueError("modules live in different host spaces")
        total = subspace_sum(total, m.space)
    if total.dim != sum(m.dim for m in modules):
        raise ValueError("summands are not independent")
    return WeightModule(host, total, name="+".join(m.name or "?" for m in modules))


# ---------------------------------------------------------------------------
# per-summand enumeration: up-closed sets of full weight blocks
# ---------------------------------------------------------------------------

def _node_targets(M: WeightModule) -> list[set[int]]:
    """For each node, the nodes its blocks raise into with a nonzero map."""
    idx = M.node_index
    targets: list[set[int]] = [set() for _ in M.nodes]
    for k in range(1, M.host.n):
        R = M.restricted_raisings[k - 1]
        for i, (w, rows) in enumerate(M.nodes):
            tgt = w.raised(k)
            j = idx.get(tgt)
            if j is None:
                continue
            block = R[np.ix_(rows, M.nodes[j][1])]
            if np.any(block != 0):
                targets[i].add(j)
    return targets


def _block_subsets(M: WeightModule, dim: int) -> list[tuple[int, ...]]:
    """Up-closed node subsets (full blocks only) with total dimension `dim`."""
    targets = _node_targets(M)
    mults = [len(rows) for _, rows in M.nodes]
    n = len(mults)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + mults[i]
    out: list[tuple[int, ...]] = []

    def walk(i: int, chosen: set[int], total: int) -> None:
        if i == n:
            if total == dim:
                out.append(tuple(sorted(chosen)))
            return
        if total + suffix[i] < dim or total > dim:
            return
        # include node i (nodes are in topological order: targets come first)
        if total + mults[i] <= dim and targets[i] <= chosen:
            chosen.add(i)
            walk(i + 1, chosen, total + mults[i])
            chosen.remove(i)
        walk(i + 1, chosen, total)

    walk(0, set(), 0)
    return out


def _subset_candidate(M: WeightModule, subset, summand_id: int) -> tuple[Subspace, Profile]:
    coeffs = {}
    profile = {}
    for i in subset:
        w, rows = M.nodes[i]
        mult = len(rows)
        eye = np.zeros((mult, mult), dtype=object)
        for t in range(mult):
            eye[t, t] = 1
        coeffs[w] = eye
        profile[(summand_id, w)] = mult
    return M.lift(coeffs), Profile.of(profile)


def fixed_block_subspaces(M: WeightModule, dim: int, summand_id: int = 0
                          ) -> list[tuple[Subspace, Profile]]:
    """All Borel-fixed subspaces of a module that are sums of full blocks."""
    return [_subset_candidate(M, s, summand_id) for s in _block_subsets(M, dim)]


def _compositions(total: int, caps) -> list[tuple[int, ...]]:
    out = []

    def walk(i, left, acc):
        if i == len(caps):
            if left == 0:
                out.append(tuple(acc))
            return
        tail_cap = sum(caps[i:])
        if left > tail_cap:
            return
        for d in range(min(caps[i], left) + 1):
            walk(i + 1, left - d, acc + [d])

    walk(0, total, [])
    return out


def _enumerate_per_summand(modules, dim: int) -> EnumerationResult:
    per_module: list[dict[int, list[tuple[Subspace, Profile]]]] = []
    caps = [m.dim for m in modules]
    needed_dims: list[set[int]] = [set() for _ in modules]
    comps = _compositions(dim, caps)
    for comp in comps:
        for i, d in enumerate(comp):
            needed_dims[i].add(d)
    for i, m in enumerate(modules):
        table = {d: fixed_block_subspaces(m, d, summand_id=i) for d in needed_dims[i]}
        per_module.append(table)

    candidates = []
    for comp in comps:
        pools = [per_module[i][d] for i, d in enumerate(comp)]
        if any(not p for p in pools):
            continue
        stack = [([], {})]
        for i, pool in enumerate(pools):
            stack = [
                (parts + [sub], {**prof_acc, **dict(prof.entries)})
                for parts, prof_acc in stack
                for sub, prof in pool
            ]
        for parts, prof_acc in stack:
            total = parts[0]
            for p in parts[1:]:
                total = subspace_sum(total, p)
            if total.dim != dim:
                raise RuntimeError("summand pieces were not independent")
            profile = Profile(tuple(sorted(prof_acc.items())))
            candidates.append(FixedCandidate(
                subspace=total,
                provenance=tuple((i, d) for i, d in enumerate(comp)),
                profile=profile,
            ))
    candidates.sort(key=lambda c: c.subspace.sort_key())
    return EnumerationResult(tuple(candidates), (), ())


# ---------------------------------------------------------------------------
# general enumeration: exact node-by-node constraint solving
# ---------------------------------------------------------------------------

def _left_kernel_rows(mat: np.ndarray, nrows: int) -> np.ndarray:
    """Primitive integer rows spanning {v : v @ mat = 0}."""
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


def _block_space(rows: np.ndarray, width: int) -> Subspace:
    return Subspace.from_spanning_rows(width, rows)


def _sample_subspace(A: Subspace, c: int, seed_parts) -> Subspace | None:
    """A pseudo-random c-dimensional subspace of A (block coordinates)."""
    rng = random.Random((_SAMPLE_SEED,) + tuple(seed_parts))
    basis = A.int_basis()
    for _ in range(20):
        coeff = np.zeros((c, A.dim), dtype=object)
        for i in range(c):
            for j in range(A.dim):
                coeff[i, j] = rng.randint(-9, 9)
        rows = coeff @ basis
        sub = _block_space(rows, A.ambient_dim)
        if sub.dim == c:
            return sub
    return None


def _enumerate_general(module: WeightModule, dim: int) -> EnumerationResult:
    nodes = module.nodes
    node_map = dict(nodes)
    idx = module.node_index
    n_nodes = len(nodes)
    mults = [len(rows) for _, rows in nodes]
    suffix = [0] * (n_nodes + 1)
    for i in range(n_nodes - 1, -1, -1):
        suffix[i] = suffix[i + 1] + mults[i]

    # per node, the raising blocks into each present target node
    raise_blocks: list[list[tuple[int, np.ndarray]]] = []
    for i, (w, rows) in enumerate(nodes):
        blocks = []
        for k in range(1, module.host.n):
            tgt = w.raised(k)
            j = idx.get(tgt)
            if j is not None:
                blocks.append((j, module.restricted_raisings[k - 1]
                               [np.ix_(rows, node_map[nodes[j][0]])]))
        raise_blocks.append(blocks)

    exact_leaves: list[tuple[Profile, dict]] = []
    sampled_leaves: dict[Profile, dict[int, dict]] = {}
    dead_profiles: set[Profile] = set()

    def admissible(i: int, chosen: dict[int, Subspace]) -> Subspace:
        # vectors of block i whose raising images land in the chosen targets:
        # v . B in W  <=>  v . B . (perp W basis)^T = 0
        mult = mults[i]
        pieces = []
        for j, B in raise_blocks[i]:
            P = perp(chosen[j])
            if P.dim == 0:
                continue
            pieces.append(B.astype(object) @ P.int_basis().T.astype(object))
        if not pieces:
            return Subspace.full(mult)
        stacked = np.hstack(pieces)
        kern = _left_kernel_rows(stacked, mult)
        return _block_space(kern, mult)

    def walk(i: int, chosen: dict[int, Subspace], total: int,
             free: int, sample_id: int | None, prof: dict) -> None:
        if total > dim or total + suffix[i] < dim:
            return
        if i == n_nodes:
            profile = Profile.of({(0, nodes[t][0]): d for t, d in prof.items()})
            if free == 0:
                exact_leaves.append((profile, dict(chosen)))
            else:
                sampled_leaves.setdefault(profile, {})[sample_id] = dict(chosen)
            return
        A = admissible(i, chosen)
        top = min(mults[i], dim - total)
        for c in range(top, -1, -1):
            if c == 0:
                chosen[i] = Subspace.zero(mults[i])
                walk(i + 1, chosen, total, free, sample_id, prof)
                del chosen[i]
                continue
            if c > A.dim:
                # realizable at most on a special locus of earlier free choices
                if free:
                    profile_prefix = Profile.of(
                        {(0, nodes[t][0]): d for t, d in {**prof, i: c}.items()})
                    dead_profiles.add(profile_prefix)
                continue
            prof[i] = c
            if c == A.dim:
                chosen[i] = A
                walk(i + 1, chosen, total + c, free, sample_id, prof)
                del chosen[i]
            else:
                new_free = free + c * (A.dim - c)
                if sample_id is None:
                    for sid in range(_WITNESS_SAMPLES):
                        sub = _sample_subspace(A, c, (i, c, sid))
                        if sub is None:
                            continue
                        chosen[i] = sub
                        walk(i + 1, chosen, total + c, new_free, sid, prof)
                        del chosen[i]
                else:
                    sub = _sample_subspace(A, c, (i, c, sample_id))
                    if sub is not None:
                        chosen[i] = sub
                        walk(i + 1, chosen, total + c, new_free, sample_id, prof)
                        del chosen[i]
            del prof[i]

    walk(0, {}, 0, 0, None, {})

    def materialize(chosen: dict[int, Subspace]) -> Subspace:
        coeffs = {}
        for t, sub in chosen.items():
            if sub.dim:
                coeffs[nodes[t][0]] = sub.int_basis()
        return module.lift(coeffs)

    candidates = []
    seen = set()
    for profile, chosen in exact_leaves:
        sub = materialize(chosen)
        if sub not in seen:
            seen.add(sub)
            candidates.append(FixedCandidate(sub, ((0, sub.dim),), profile))

    families = []
    unresolved = []
    for profile, by_sample in sampled_leaves.items():
        members = []
        for sid, chosen in sorted(by_sample.items()):
            sub = materialize(chosen)
            if is_borel_fixed(sub, module) and sub.dim == dim and sub not in members:
                members.append(sub)
        if len(members) >= 2:
            families.append(FixedFamily(profile, _family_params(module, profile),
                                        tuple(members)))
        elif len(members) == 1 and members[0] not in seen:
            # every sampled parameter produced the same subspace: isolated
            seen.add(members[0])
            candidates.append(FixedCandidate(members[0], ((0, dim),), profile))
        elif not members:
            unresolved.append(profile)
    unresolved.extend(sorted(dead_profiles, key=lambda p: p.entries))

    candidates.sort(key=lambda c: c.subspace.sort_key())
    return EnumerationResult(tuple(candidates), tuple(families), tuple(unresolved))


def _family_params(module: WeightModule, profile: Profile) -> int:
    """Generic parameter count of a profile's locus: sum of the Grassmannian
    dimensions c * (dim A - c) of its free node choices, recomputed along a
    generically sampled descent."""
    node_of = {tuple(w.coefficients): i for i, (w, _) in enumerate(module.nodes)}
    wanted = {node_of[key[1]]: d for key, d in profile.entries}
    params = 0
    chosen: dict[int, Subspace] = {}
    mults = [len(rows) for _, rows in module.nodes]
    idx = module.node_index
    node_map = dict(module.nodes)
    for i, (w, rows) in enumerate(module.nodes):
        c = wanted.get(i, 0)
        pieces = []
        for k in range(1, module.host.n):
            tgt = w.raised(k)
            j = idx.get(tgt)
            if j is None:
                continue
            B = module.restricted_raisings[k - 1][np.ix_(rows, node_map[module.nodes[j][0]])]
            P = perp(chosen[j])
            if P.dim == 0:
                continue
            pieces.append(B.astype(object) @ P.int_basis().T.astype(object))
        if pieces:
            A = _block_space(_left_kernel_rows(np.hstack(pieces), mults[i]), mults[i])
        else:
            A = Subspace.full(mults[i])
        if c == 0:
            chosen[i] = Subspace.zero(mults[i])
        elif c < A.dim:
            params += c * (A.dim - c)
            sub = _sample_subspace(A, c, (i, c, 0))
            chosen[i] = sub if sub is not None else A
        else:
            chosen[i] = A
    return max(params, 1)


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def enumerate_fixed(modules, dim: int, mode: str = "per_summand") -> EnumerationResult:
    """Enumerate Borel-fixed subspaces of the given total dimension.

    `modules` is a WeightModule or a sequence of them (direct summands in a
    common host).  Results are deterministic and duplicate-free; see the
    module docstring for the two modes.
    """
    if isinstance(modules, WeightModule):
        modules = [modules]
    else:
        modules = list(modules)
    if dim < 0 or dim > sum(m.dim for m in modules):
        raise ValueError("requested dimension out of range")
    if mode == "per_summand":
        return _enumerate_per_summand(modules, dim)
    if mode == "general":
        merged = modules[0] if len(modules) == 1 else merge_modules(modules)
        return _enumerate_general(merged, dim)
    raise ValueError("mode must be 'per_summand' or 'general'")


def assemble_E1110_candidates(r: int = 11, n: int = 4) -> list[FixedCandidate]:
    """Candidates for the dimension-r fixed subspace at a (1,1,1,0)-type
    multidegree: the alternating summand plus an enumerated per-summand fixed
    piece of dimension r - dim(Lambda^3) in the three cubic Schur summands."""
    lam1, lam2, lam3, alt = cubic_summands(n)
    w_dim = r - alt.dim
    if w_dim < 0:
        return []
    result = enumerate_fixed([lam1, lam2, lam3], w_dim, mode="per_summand")
    out = []
    for cand in result.candidates:
        total = subspace_sum(alt.space, cand.subspace)
        if total.dim != r:
            raise RuntimeError("alternating summand not independent from candidate")
        out.append(FixedCandidate(
            subspace=total,
            provenance=cand.provenance + ((3, alt.dim),),
            profile=cand.profile,
        ))
    out.sort(key=lambda c: c.subspace.sort_key())
    return out
