"""Integral reduced homology from Smith normal forms of boundary matrices."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .linalg import (SnfResult, normalize_diagonal, column_echelon, smith_normal_form,
                     smith_with_transforms)
from .shelling import NotAShelling, homology_ranks_from_shelling, is_shelling
from .simplicial import Complex, Face, boundary_matrix


@dataclass(frozen=True)
class HomologyGroup:
    q: int
    free_rank: int
    torsion: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) or "0"


def _snf_of_degree(x: Complex, q: int) -> SnfResult:
    return smith_normal_form(boundary_matrix(x, q))


def boundary_snfs(x: Complex, degrees: Iterable[int], threads: int = 1) -> dict[int, SnfResult]:
    """Smith normal forms of ``d_q`` for the requested ``q`` (``q >= 0``)."""
    degrees = sorted(set(q for q in degrees if 0 <= q <= x.dimension))
    if threads > 1 and len(degrees) > 1:
        x.faces(0)  # materialize once before pickling
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_snf_of_degree, [x] * len(degrees), degrees))
    else:
        results = [_snf_of_degree(x, q) for q in degrees]
    return dict(zip(degrees, results))


def reduced_homology(x: Complex, degrees: Iterable[int] | None = None,
                     threads: int = 1) -> dict[int, HomologyGroup]:
    """``H~_q(X; Z)`` for ``q`` in ``degrees`` (default ``-1..dim``)."""
    top = x.dimension
    wanted = list(range(-1, top + 1)) if degrees is None else sorted(set(degrees))
    needed = {d for q in wanted for d in (q, q + 1)}
    snfs = boundary_snfs(x, needed, threads=threads)
    out: dict[int, HomologyGroup] = {}
    for q in wanted:
        size = len(x.faces(q))
        r_in = snfs[q].rank if q in snfs else 0
        above = snfs.get(q + 1)
        r_out = above.rank if above else 0
        torsion = above.torsion if above else ()
        out[q] = HomologyGroup(q, size - r_in - r_out, torsion)
    return out


@dataclass
class CrossCheckReport:
    agree: bool
    snf: dict[int, HomologyGroup]
    shelling: dict[int, int]
    discrepancies: list[str] = field(default_factory=list)


def homology_cross_check(x: Complex, order: Sequence[Face], threads: int = 1) -> CrossCheckReport:
    """Compare SNF homology with the ranks read off a shelling."""
    rep = is_shelling(x, order)
    if not rep:
        raise NotAShelling(rep)
    from_shelling = homology_ranks_from_shelling(x, order)
    snf = reduced_homology(x, threads=threads)
    issues = []
    for q, group in snf.items():
        expected = from_shelling.get(q, 0)
        if group.free_rank != expected:
            issues.append(f"q={q}: SNF rank {group.free_rank} != shelling rank {expected}")
        if group.torsion:
            issues.append(f"q={q}: torsion {group.torsion} in a shellable complex")
    return CrossCheckReport(not issues, snf, from_shelling, issues)


# ---------------------------------------------------------------------------
# Explicit bases, for maps induced on homology

def _matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k in range(inner):
            v = row[k]
            if v:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        acc[j] += v * bk[j]
        out.append(acc)
    return out


@dataclass
class HomologyBasis:
    """Integral basis of ``H~_q`` modulo torsion, with a coordinate map.

    ``generators`` are cycles (vectors over the oriented ``q``-faces).
    """

    q: int
    generators: list[list[int]]
    torsion: tuple[int, ...]
    _u: list[list[int]] = field(repr=False)
    _w_inv: list[list[int]] = field(repr=False)
    _boundary_rank: int = field(repr=False)
    _kernel_offset: int = field(repr=False)
    _diag: list[int] = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def coordinates(self, cycle: Sequence[int]) -> list[int]:
        """Free coordinates of a cycle's class; raises if it is not a cycle."""
        y = [sum(u * c for u, c in zip(row, cycle) if u and c) for row in self._u]
        r = self._boundary_rank
        tail = y[r:]
        c = [sum(w * t for w, t in zip(row, tail) if w and t) for row in self._w_inv]
        if any(c[: self._kernel_offset]):
            raise ValueError("chain is not a cycle")
        return c[self._kernel_offset:]

    def reconstruct_residual(self, cycle: Sequence[int]) -> list[int]:
        """Residue of ``cycle - sum(coord * generator)``; lies in the span of boundaries and torsion."""
        coords = self.coordinates(cycle)
        out = list(cycle)
        for a, g in zip(coords, self.generators):
            if a:
                for i, v in enumerate(g):
                    out[i] -= a * v
        return out


def homology_basis(x: Complex, q: int) -> HomologyBasis:
    """Free generators of ``H~_q(X; Z)`` pinned by the deterministic pivot rule.

    Diagonalizes ``d_{q+1} = U^-1 D V^-1``; in the basis given by the columns
    of ``U^-1`` the first ``r`` vectors span the boundaries up to the factors
    ``D``.  The kernel of ``d_q`` restricted to the remaining coordinates is
    found by column echelon reduction, and its basis gives the free part.
    """
    m = len(x.faces(q))
    up = boundary_matrix(x, q + 1)
    down = boundary_matrix(x, q)
    st = smith_with_transforms(up.to_dense(), m, up.cols)
    r = len(st.diag)
    dq = down.to_dense()
    moved = _matmul(dq, st.left_inv) if dq else []
    if any(row[j] for row in moved for j in range(r)):
        raise ArithmeticError("boundaries are not cycles")
    sub = [row[r:] for row in moved]
    s, w, w_inv = column_echelon(sub, len(sub), m - r)
    gens_tail = [[w[i][j] for i in range(m - r)] for j in range(s, m - r)]
    generators = []
    for tail in gens_tail:
        vec = [sum(st.left_inv[i][r + k] * tail[k] for k in range(m - r) if tail[k])
               for i in range(m)]
        generators.append(vec)
    torsion = tuple(d for d in normalize_diagonal(st.diag) if d > 1)
    return HomologyBasis(q, generators, torsion, st.left, w_inv, r, s, st.diag)
