"""Simplicial complexes whose vertices are non-empty subsets of ``[n]``.

A block is a ``frozenset`` of ints, a face is a ``frozenset`` of blocks and
an oriented face is a tuple of blocks sorted under :func:`vertex_key`:
larger blocks first, equal sizes compared lexicographically on their sorted
elements.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .linalg import IntegerMatrix

Block = frozenset
Face = frozenset
OrientedFace = tuple


@lru_cache(maxsize=None)
def vertex_key(x: frozenset) -> tuple[int, tuple[int, ...]]:
    return (-len(x), tuple(sorted(x)))


def vertex_compare(x: Iterable[int], y: Iterable[int]) -> int:
    """-1 if ``x`` precedes ``y`` in the vertex order, 1 if it follows, 0 if equal."""
    kx, ky = vertex_key(frozenset(x)), vertex_key(frozenset(y))
    return (kx > ky) - (kx < ky)


def orient(face: Iterable[Iterable[int]]) -> OrientedFace:
    return tuple(sorted((frozenset(b) for b in face), key=vertex_key))


def face_key(face: Iterable[frozenset]) -> tuple:
    """Sort key for faces: the block sequence of the oriented face."""
    return tuple(vertex_key(b) for b in orient(face))


def make_face(blocks: Iterable[Iterable[int]]) -> Face:
    return frozenset(frozenset(b) for b in blocks)


def sorting_sign(keys: Sequence) -> int:
    """Sign of the permutation that sorts ``keys`` (all distinct)."""
    order = sorted(range(len(keys)), key=keys.__getitem__)
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _maximal(faces: Iterable[Face]) -> list[Face]:
    uniq = sorted(set(faces), key=len, reverse=True)
    kept: list[Face] = []
    by_block: dict[frozenset, list[Face]] = {}
    for f in uniq:
        if f:
            anchor = next(iter(f))
            if any(len(g) > len(f) and f <= g for g in by_block.get(anchor, ())):
                continue
        elif kept:
            continue
        kept.append(f)
        for b in f:
            by_block.setdefault(b, []).append(f)
    return [f for f in kept if f]


class Complex:
    """Finite simplicial complex generated by its facets.

    Faces are materialized lazily, all dimensions at once, the first time
    any face query is made.
    """

    def __init__(self, n: int, facets: Iterable[Iterable[Iterable[int]]], *,
                 assume_maximal: bool = False, name: str | None = None):
        self.n = n
        self.name = name
        gens = [make_face(f) for f in facets]
        for f in gens:
            for b in f:
                if not b:
                    raise ValueError("empty block")
                if min(b) < 1 or max(b) > n:
                    raise ValueError(f"block {sorted(b)} not inside [{n}]")
        if assume_maximal:
            gens = [f for f in dict.fromkeys(gens) if f]
        else:
            gens = _maximal(gens)
        self.facets: list[Face] = sorted(gens, key=face_key)
        self._faces: list[list[OrientedFace]] | None = None
        self._face_sets: list[set[Face]] | None = None
        self._index: list[dict[Face, int]] | None = None

    @classmethod
    def empty(cls, n: int = 0) -> "Complex":
        return cls(n, [])

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<Complex{label} n={self.n} facets={len(self.facets)} dim={self.dimension}>"

    @property
    def dimension(self) -> int:
        return max((len(f) - 1 for f in self.facets), default=-1)

    def _materialize(self) -> None:
        if self._faces is not None:
            return
        top = self.dimension
        sets: list[set[Face]] = [set() for _ in range(top + 2)]
        sets[0].add(frozenset())
        for f in self.facets:
            blocks = tuple(f)
            for k in range(1, len(blocks) + 1):
                target = sets[k]
                for sub in combinations(blocks, k):
                    target.add(frozenset(sub))
        faces: list[list[OrientedFace]] = []
        index: list[dict[Face, int]] = []
        for s in sets:
            ordered = sorted((orient(f) for f in s),
                             key=lambda o: tuple(vertex_key(b) for b in o))
            faces.append(ordered)
            index.append({frozenset(o): i for i, o in enumerate(ordered)})
        self._face_sets = sets
        self._faces = faces
        self._index = index

    def faces(self, q: int) -> list[OrientedFace]:
        """Oriented ``q``-faces in sorted order; ``q = -1`` gives the empty face."""
        self._materialize()
        if q < -1 or q + 1 >= len(self._faces):
            return []
        return self._faces[q + 1]

    def face_index(self, q: int) -> dict[Face, int]:
        self._materialize()
        if q < -1 or q + 1 >= len(self._index):
            return {}
        return self._index[q + 1]

    def all_faces(self) -> Iterator[OrientedFace]:
        for q in range(-1, self.dimension + 1):
            yield from self.faces(q)

    def __contains__(self, face: Iterable[Iterable[int]]) -> bool:
        f = make_face(face)
        self._materialize()
        k = len(f)
        return k < len(self._face_sets) and f in self._face_sets[k]

    @property
    def vertices(self) -> list[frozenset]:
        return [o[0] for o in self.faces(0)]

    def f_vector(self) -> list[int]:
        """``[|X_-1|, |X_0|, ..., |X_dim|]``."""
        return [len(self.faces(q)) for q in range(-1, self.dimension + 1)]

    def skeleton(self, k: int) -> "Complex":
        gens = set()
        for f in self.facets:
            if len(f) <= k + 1:
                gens.add(f)
            else:
                gens.update(frozenset(s) for s in combinations(tuple(f), k + 1))
        return Complex(self.n, gens, name=f"{self.name or 'X'}^({k})")

    def facet_set(self) -> frozenset:
        return frozenset(self.facets)

    def same_faces(self, other: "Complex") -> bool:
        return self.facet_set() == other.facet_set()


def faces_of_dimension(x: Complex, q: int) -> list[OrientedFace]:
    return x.faces(q)


def boundary_matrix(x: Complex, q: int) -> IntegerMatrix:
    """Matrix of ``d: C_q -> C_{q-1}`` in the sorted oriented bases.

    ``q = 0`` is the augmentation onto ``C_{-1} = Z``.
    """
    src = x.faces(q)
    dst_index = x.face_index(q - 1)
    cols: list[dict[int, int]] = []
    for face in src:
        fs = frozenset(face)
        col: dict[int, int] = {}
        for i, b in enumerate(face):
            col[dst_index[fs - {b}]] = -1 if i % 2 else 1
        cols.append(col)
    return IntegerMatrix(len(dst_index), len(src), cols)


def euler_characteristic_reduced(x: Complex) -> int:
    return sum((-1) ** q * len(x.faces(q)) for q in range(-1, x.dimension + 1))


def connected_components(x: Complex) -> int:
    """Components of the 1-skeleton; isolated vertices count."""
    verts = x.vertices
    pos = {v: i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in x.faces(1):
        ra, rb = find(pos[a]), find(pos[b])
        if ra != rb:
            parent[ra] = rb
    return len({find(i) for i in range(len(verts))})


# ---------------------------------------------------------------------------
# Facet files: one facet per line, blocks "|"-separated, elements ","-separated

def format_facets(facets: Iterable[Iterable[Iterable[int]]]) -> str:
    lines = []
    for f in sorted((make_face(f) for f in facets), key=face_key):
        lines.append("|".join(",".join(str(e) for e in sorted(b)) for b in orient(f)))
    return "".join(line + "\n" for line in lines)


def parse_facets(text: str) -> list[Face]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        blocks = []
        for chunk in line.split("|"):
            elems = frozenset(int(e) for e in chunk.split(",") if e.strip())
            if not elems:
                raise ValueError(f"empty block in line {raw!r}")
            blocks.append(elems)
        face = frozenset(blocks)
        if len(face) != len(blocks):
            raise ValueError(f"repeated block in line {raw!r}")
        out.append(face)
    return out


def read_facet_file(path: str) -> list[Face]:
    with open(path) as fh:
        return parse_facets(fh.read())


def write_facet_file(path: str, facets: Iterable[Iterable[Iterable[int]]]) -> None:
    with open(path, "w") as fh:
        fh.write(format_facets(facets))
