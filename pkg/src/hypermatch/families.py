"""Hypergraph matching complexes and named fibre-closed families."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator, Sequence

from .combinatorics import set_partitions
from .simplicial import Complex, Face, read_facet_file

FAMILY_NAMES = ("X", "skeleton1", "complete_on_vertices", "matching_Kn",
                "matching_Knr", "chessboard", "closure_seed")


class UnknownFamily(ValueError):
    pass


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable[Iterable[int]]):
        es = frozenset(frozenset(e) for e in edges)
        for e in es:
            if not e:
                raise ValueError("hypergraph edges must be non-empty")
            if min(e) < 1 or max(e) > n:
                raise ValueError(f"edge {sorted(e)} not inside [{n}]")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", es)

    @classmethod
    def complete(cls, n: int, r: int | None = None) -> "Hypergraph":
        """All non-empty subsets of ``[n]``, or only those of size ``r``."""
        ground = range(1, n + 1)
        sizes = range(1, n + 1) if r is None else [r]
        return cls(n, (c for k in sizes for c in combinations(ground, k)))

    @classmethod
    def complete_graph(cls, n: int) -> "Hypergraph":
        return cls.complete(n, 2)

    @classmethod
    def complete_bipartite(cls, m: int, n: int) -> "Hypergraph":
        return cls(m + n, ((i, m + j) for i in range(1, m + 1) for j in range(1, n + 1)))


def maximal_matchings(g: Hypergraph) -> Iterator[Face]:
    """Every maximal set of pairwise-disjoint edges, each exactly once.

    Walks the vertices in increasing order; each is either covered by an
    edge whose least element it is, or left uncovered.
    """
    by_min: dict[int, list[frozenset]] = {}
    for e in g.edges:
        by_min.setdefault(min(e), []).append(e)
    edges = list(g.edges)
    chosen: list[frozenset] = []

    def rec(v: int, used: frozenset) -> Iterator[Face]:
        if v > g.n:
            if all(e & used for e in edges):
                yield frozenset(chosen)
            return
        if v in used:
            yield from rec(v + 1, used)
            return
        for e in by_min.get(v, ()):
            if not e & used:
                chosen.append(e)
                yield from rec(v + 1, used | e)
                chosen.pop()
        yield from rec(v + 1, used)

    yield from rec(1, frozenset())


def matching_complex(g: Hypergraph, name: str | None = None) -> Complex:
    facets = [f for f in maximal_matchings(g) if f]
    return Complex(g.n, facets, assume_maximal=True, name=name)


def build_X(n: int, with_full_block: bool = False) -> Complex:
    """Matching complex of the complete hypergraph on ``[n]``.

    By default the isolated vertex ``[n]`` is dropped; its facets are then
    the set partitions of ``[n]`` into at least two blocks.
    """
    if n < 2:
        raise ValueError("X(n) needs n >= 2")
    facets = [frozenset(p) for p in set_partitions(range(1, n + 1), forbid_full_block=True)]
    if with_full_block:
        facets.append(frozenset([frozenset(range(1, n + 1))]))
    return Complex(n, facets, assume_maximal=True,
                   name=f"Xbar({n})" if with_full_block else f"X({n})")


def complete_on_vertices(n: int) -> Complex:
    verts = build_X(n).vertices
    return Complex(n, (frozenset(e) for e in combinations(verts, 2)),
                   assume_maximal=True, name=f"K(V(X({n})))")


# ---------------------------------------------------------------------------
# Surjections and preimages

def preimage_face(images: Sequence[int], face: Iterable[frozenset]) -> Face:
    """``{f^-1 x : x in face}`` for ``f(i) = images[i-1]``."""
    fibres: dict[int, list[int]] = {}
    for i, y in enumerate(images, start=1):
        fibres.setdefault(y, []).append(i)
    return frozenset(frozenset(i for y in b for i in fibres[y]) for b in face)


def surjections(a: int, b: int) -> Iterator[tuple[int, ...]]:
    """All surjections ``[a] -> [b]`` as image tuples."""
    if b == 0:
        if a == 0:
            yield ()
        return

    def rec(prefix: list[int], hit: list[int]) -> Iterator[tuple[int, ...]]:
        i = len(prefix)
        missing = b - sum(1 for h in hit if h)
        if a - i < missing:
            return
        if i == a:
            yield tuple(prefix)
            return
        for y in range(1, b + 1):
            prefix.append(y)
            hit[y - 1] += 1
            yield from rec(prefix, hit)
            hit[y - 1] -= 1
            prefix.pop()

    yield from rec([], [0] * b)


def canonical_merges(a: int) -> Iterator[tuple[int, ...]]:
    """Surjections ``[a] -> [a-1]`` gluing one pair, fibres labelled by minimum."""
    for i, j in combinations(range(1, a + 1), 2):
        images = []
        label = 0
        for k in range(1, a + 1):
            if k == j:
                images.append(images[i - 1])
            else:
                label += 1
                images.append(label)
        yield tuple(images)


def apply_permutation(g: Sequence[int], face: Iterable[frozenset]) -> Face:
    return frozenset(frozenset(g[e - 1] for e in b) for b in face)


def _symmetric_generators(n: int) -> list[tuple[int, ...]]:
    if n < 2:
        return []
    swap = (2, 1) + tuple(range(3, n + 1))
    cycle = tuple(range(2, n + 1)) + (1,)
    return [swap] if n == 2 else [swap, cycle]


def symmetrize(n: int, facets: Iterable[Face]) -> set[Face]:
    """Close a facet set under the ``S_n`` action."""
    gens = _symmetric_generators(n)
    seen = set(facets)
    frontier = list(seen)
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                h = apply_permutation(g, f)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def preimage_closure(prev: Complex, n: int) -> Complex:
    """Smallest complex on ``[n]`` holding every preimage of a face of ``prev``.

    Surjections ``[n] -> [n-1]`` differ from a canonical merge by a
    relabelling of the target, so it is enough to run the canonical merges
    over the ``S_{n-1}``-orbit of the facets of ``prev``.
    """
    if prev.n != n - 1:
        raise ValueError("preimage closure goes from [n-1] to [n]")
    orbit = symmetrize(n - 1, prev.facets)
    gens = {preimage_face(f, face) for f in canonical_merges(n) for face in orbit}
    return Complex(n, gens)


# ---------------------------------------------------------------------------
# Family specs

@dataclass(frozen=True)
class FamilySpec:
    """A named family ``n -> X_n``.

    ``params`` depends on the name: ``r`` for ``matching_Knr``, ``m`` for
    ``chessboard``, ``seed`` (a facet tuple) and ``seed_n`` for
    ``closure_seed``.  ``default_n`` records an ``n`` pinned by the CLI string.
    """

    name: str
    params: tuple = ()
    default_n: int | None = None
    label: str | None = None
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if self.name not in FAMILY_NAMES:
            raise UnknownFamily(f"unknown family {self.name!r}")
        p = dict(self.params)
        if self.name == "matching_Knr" and p.get("r", 0) < 1:
            raise ValueError("matching_Knr needs r >= 1")
        if self.name == "chessboard" and p.get("m", 0) < 1:
            raise ValueError("chessboard needs m >= 1")
        if self.name == "closure_seed" and ("seed" not in p or "seed_n" not in p):
            raise ValueError("closure_seed needs seed and seed_n")

    def param(self, key: str):
        return dict(self.params)[key]

    @classmethod
    def closure(cls, seed: Complex, seed_n: int, label: str | None = None) -> "FamilySpec":
        if seed.n != seed_n:
            seed = Complex(seed_n, seed.facets)
        facets = tuple(sorted((tuple(sorted(tuple(sorted(b)) for b in f)) for f in seed.facets)))
        return cls("closure_seed", (("seed", facets), ("seed_n", seed_n)),
                   label=label or f"closure@{seed_n}")

    def __str__(self) -> str:
        return self.label or self.name


def build_family(spec: FamilySpec, n: int) -> Complex:
    """The ``n``-th member of a family; results are cached per spec."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n in spec._cache:
        return spec._cache[n]
    name = spec.name
    if name == "X":
        x = build_X(n) if n >= 2 else Complex.empty(n)
    elif name == "skeleton1":
        x = build_X(n).skeleton(1) if n >= 2 else Complex.empty(n)
    elif name == "complete_on_vertices":
        x = complete_on_vertices(n) if n >= 2 else Complex.empty(n)
    elif name == "matching_Kn":
        x = matching_complex(Hypergraph.complete_graph(n), name=f"M(K{n})")
    elif name == "matching_Knr":
        r = spec.param("r")
        x = matching_complex(Hypergraph.complete(n, r), name=f"M(K{n}^{r})")
    elif name == "chessboard":
        m = spec.param("m")
        x = matching_complex(Hypergraph.complete_bipartite(m, n), name=f"M(K{m},{n})")
    else:
        seed_n = spec.param("seed_n")
        if n < seed_n:
            x = Complex.empty(n)
        elif n == seed_n:
            x = Complex(n, spec.param("seed"), name=f"seed({n})")
        else:
            x = preimage_closure(build_family(spec, n - 1), n)
    spec._cache[n] = x
    return x


_MATCH_RE = re.compile(r"^matching:K(?:\((\d+)\))?(n|\d+)?$")


def parse_family(text: str) -> FamilySpec:
    """Parse CLI family strings.

    ``X``, ``skeleton1``, ``complete_on_vertices``, ``matching:K`` (or
    ``matching:K7``, pinning n = 7), ``matching:K(3)`` / ``matching:K(3)8``
    for 3-uniform edges, ``chessboard:3`` and ``closure:FILE@7``.  In the
    closure form, ``FILE`` may also be ``K<m>`` for the matching complex of
    the complete graph ``K_m``.
    """
    t = text.strip()
    if t in ("X", "skeleton1", "complete_on_vertices"):
        return FamilySpec(t, label=t)
    m = _MATCH_RE.match(t)
    if m:
        r, tail = m.group(1), m.group(2)
        pinned = int(tail) if tail and tail != "n" else None
        if r is None:
            return FamilySpec("matching_Kn", default_n=pinned, label=t)
        return FamilySpec("matching_Knr", (("r", int(r)),), default_n=pinned, label=t)
    if t.startswith("chessboard:"):
        return FamilySpec("chessboard", (("m", int(t.split(":", 1)[1])),), label=t)
    if t.startswith("closure:"):
        body = t.split(":", 1)[1]
        if "@" not in body:
            raise UnknownFamily(f"closure family needs FILE@n0: {text!r}")
        src, at = body.rsplit("@", 1)
        seed_n = int(at)
        km = re.fullmatch(r"K(\d+)", src)
        if km and not os.path.exists(src):
            seed = matching_complex(Hypergraph.complete_graph(int(km.group(1))))
        else:
            seed = Complex(seed_n, read_facet_file(src))
        return FamilySpec.closure(seed, seed_n, label=t)
    raise UnknownFamily(f"unknown family {text!r}")


FamilyLike = str | FamilySpec | Callable[[int], Complex]


def _member(family: FamilyLike, n: int) -> Complex:
    if isinstance(family, str):
        family = parse_family(family)
    if isinstance(family, FamilySpec):
        return build_family(family, n)
    return family(n)


# ---------------------------------------------------------------------------
# Fibre-closedness audit

@dataclass
class FibreClosedReport:
    ok: bool
    n_max: int
    exhaustive_max: int
    checks: int = 0
    witness: tuple | None = None  # (surjection images, face of X_b, a, b)

    def __bool__(self) -> bool:
        return self.ok


def is_fibre_closed(family: FamilyLike, n_max: int, exhaustive_max: int = 6) -> FibreClosedReport:
    """Check that preimages of faces along surjections ``[a] -> [b]`` are faces.

    For ``a <= exhaustive_max`` every surjection with ``b < a`` is tried on
    every facet of ``X_b`` (facets suffice since preimage respects
    inclusion).  Beyond that the check uses the factorization of a
    surjection into one-pair merges and permutations: every ``X_k`` must be
    invariant under the generators of ``S_k`` and closed under the canonical
    merges ``[k+1] -> [k]``.
    """
    report = FibreClosedReport(True, n_max, exhaustive_max)
    members = {k: _member(family, k) for k in range(n_max + 1)}

    def fail(images, face, a, b) -> FibreClosedReport:
        report.ok = False
        report.witness = (tuple(images), face, a, b)
        return report

    for a in range(1, min(n_max, exhaustive_max) + 1):
        xa = members[a]
        for b in range(1, a):
            xb = members[b]
            for f in surjections(a, b):
                for face in xb.facets:
                    report.checks += 1
                    pre = preimage_face(f, face)
                    if pre not in xa:
                        return fail(f, face, a, b)
    if n_max > exhaustive_max:
        for k in range(1, n_max + 1):
            xk = members[k]
            for g in _symmetric_generators(k):
                for face in xk.facets:
                    report.checks += 1
                    if apply_permutation(g, face) not in xk:
                        inv = [0] * k
                        for i, y in enumerate(g, start=1):
                            inv[y - 1] = i
                        return fail(inv, face, k, k)
        for a in range(max(2, exhaustive_max + 1), n_max + 1):
            xa, xb = members[a], members[a - 1]
            for f in canonical_merges(a):
                for face in xb.facets:
                    report.checks += 1
                    if preimage_face(f, face) not in xa:
                        return fail(f, face, a, a - 1)
    return report


def has_symmetric_action(x: Complex) -> bool:
    """Every permutation of ``[n]`` maps faces to faces."""
    for g in permutations(range(1, x.n + 1)):
        for face in x.facets:
            if apply_permutation(g, face) not in x:
                return False
    return True
