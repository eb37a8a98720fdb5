"""Non-pure shellings: verification, restriction sets and homology facets.

Positions in a shelling order are 0-based here; position 0 is the first
facet and carries no condition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .combinatorics import bell_number, format_set_partition
from .simplicial import Complex, Face, make_face

ShellingOrder = list


class NotAPermutation(ValueError):
    """The proposed order is not a permutation of the facets."""


class NotAShelling(ValueError):
    def __init__(self, report: "ShellingReport"):
        super().__init__(f"not a shelling: {report.reason} at position {report.position}")
        self.report = report


class NotXn(ValueError):
    """The complex is not X(n)."""


@dataclass
class ShellingReport:
    ok: bool
    position: int | None = None
    witness: Face | None = None
    reason: str | None = None
    restrictions: list[frozenset] = field(default_factory=list, repr=False)

    def __bool__(self) -> bool:
        return self.ok


def _check_permutation(x: Complex, order: Sequence[Face]) -> list[Face]:
    faces = [make_face(f) for f in order]
    if len(faces) != len(x.facets) or set(faces) != set(x.facets):
        raise NotAPermutation("order must list every facet exactly once")
    return faces


def _earlier_intersections(faces: list[Face]):
    """For each position, the distinct non-empty ``sigma_t & sigma_i`` with ``i < t``."""
    by_block: dict[frozenset, list[int]] = {}
    for t, f in enumerate(faces):
        seen: set[Face] = set()
        for b in f:
            for i in by_block.get(b, ()):
                seen.add(f & faces[i])
        yield t, f, seen
        for b in f:
            by_block.setdefault(b, []).append(t)


def _maximal_sets(sets: set[Face]) -> list[Face]:
    ordered = sorted(sets, key=len, reverse=True)
    out: list[Face] = []
    for s in ordered:
        if not any(s < m for m in out):
            out.append(s)
    return out


def is_shelling(x: Complex, order: Sequence[Face]) -> ShellingReport:
    """Check that each facet meets the earlier ones in a pure codimension-one subcomplex.

    The intersection of the simplex on ``sigma_t`` with the earlier simplices
    is generated by the sets ``sigma_t & sigma_i``; its maximal members must
    all have ``|sigma_t| - 1`` blocks.  A facet of dimension at least one
    that meets no earlier facet fails: the intersection is then just the
    empty face.
    """
    faces = _check_permutation(x, order)
    restrictions: list[frozenset] = []
    for t, f, inter in _earlier_intersections(faces):
        if t == 0:
            restrictions.append(frozenset())
            continue
        k = len(f)
        if not inter:
            if k == 1:
                restrictions.append(f)
                continue
            return ShellingReport(False, t, frozenset(), "empty intersection")
        for m in _maximal_sets(inter):
            if len(m) != k - 1:
                return ShellingReport(False, t, m, "intersection not pure of codimension one")
        restrictions.append(frozenset(b for b in f if f - {b} in inter))
    return ShellingReport(True, restrictions=restrictions)


def restriction_set(x: Complex, order: Sequence[Face], t: int) -> frozenset:
    """``{x in sigma_t : sigma_t - x lies in an earlier closed facet}``."""
    faces = _check_permutation(x, order)
    f = faces[t]
    if len(f) == 1:
        return f if t > 0 else frozenset()
    hits = set()
    for b in f:
        rest = f - {b}
        if any(rest <= faces[i] for i in range(t)):
            hits.add(b)
    return frozenset(hits)


def singleton_count(face: Face) -> int:
    return sum(1 for b in face if len(b) == 1)


def singleton_shelling_order(x: Complex, seed: int | None = None) -> ShellingOrder:
    """Facets of ``X(n)`` by decreasing number of singleton blocks.

    Ties are broken by the ``"1,2|3"`` serialization, or shuffled with
    ``seed`` when one is given.
    """
    n = x.n
    ground = frozenset(range(1, n + 1))
    if len(x.facets) != bell_number(n) - 1 or any(
            frozenset().union(*f) != ground or len(f) < 2 for f in x.facets):
        raise NotXn(f"{x!r} is not X({n})")
    tiers: dict[int, list[Face]] = {}
    for f in x.facets:
        tiers.setdefault(singleton_count(f), []).append(f)
    rng = random.Random(seed) if seed is not None else None
    order: list[Face] = []
    for count in sorted(tiers, reverse=True):
        tier = sorted(tiers[count], key=format_set_partition)
        if rng is not None:
            rng.shuffle(tier)
        order.extend(tier)
    return order


def homology_facets(x: Complex, order: Sequence[Face]) -> dict[int, list[Face]]:
    report = is_shelling(x, order)
    if not report:
        raise NotAShelling(report)
    faces = [make_face(f) for f in order]
    out: dict[int, list[Face]] = {}
    for f, r in zip(faces, report.restrictions):
        if r == f:
            out.setdefault(len(f) - 1, []).append(f)
    return out


def homology_ranks_from_shelling(x: Complex, order: Sequence[Face]) -> dict[int, int]:
    """Rank of reduced homology per degree ``0..dim``, read off the homology facets."""
    facets = homology_facets(x, order)
    return {q: len(facets.get(q, ())) for q in range(0, x.dimension + 1)}
