"""The symmetric group acting on complexes of subsets of ``[n]``.

A permutation moves a face block by block; re-sorting the image blocks
into vertex order costs the sign of the sorting permutation.  On top of
this signed action the module computes homology characters, characters
induced from block-permuting normalizers, and a few consistency checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial, prod
from typing import Sequence

from .combinatorics import (Partition, as_partition, multiplicities, partitions_with_constraints,
                            set_partitions_of_shape)
from .linalg import IntegerMatrix, LARGE_PRIME, rref_mod_p, smith_normal_form
from .shelling import homology_facets, singleton_shelling_order
from .simplicial import Complex, Face, OrientedFace, boundary_matrix, orient, sorting_sign, vertex_key
from .symmetric import (ClassFunction, Permutation, centralizer_order, class_representative, compose,
                        cycle_type, cycle_types, identity_perm, inverse, perm_from_cycles, perm_sign)


class ActionNotPreserved(ValueError):
    """The group does not map a required set of faces to itself."""

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


def signed_action(g: Permutation, face: Sequence[frozenset]) -> tuple[OrientedFace, int]:
    """Image of an oriented face under ``g`` and the sign picked up by re-sorting."""
    images = [frozenset(g[x - 1] for x in b) for b in face]
    sign = sorting_sign([vertex_key(b) for b in images])
    return orient(images), sign


def generators(n: int) -> list[Permutation]:
    """The transposition ``(1 2)`` and the long cycle; together they generate ``S_n``."""
    if n < 2:
        return []
    gens = [perm_from_cycles([(1, 2)], n)]
    if n > 2:
        gens.append(perm_from_cycles([tuple(range(1, n + 1))], n))
    return gens


def chain_action_matrix(x: Complex, q: int, g: Permutation) -> IntegerMatrix:
    """Signed permutation matrix of ``g`` on ``C_q``."""
    faces = x.faces(q)
    index = x.face_index(q)
    cols = []
    for f in faces:
        img, sign = signed_action(g, f)
        try:
            cols.append({index[frozenset(img)]: sign})
        except KeyError:
            raise ActionNotPreserved(f"g maps {f} outside the complex", (g, f)) from None
    return IntegerMatrix(len(faces), len(faces), cols)


def chain_trace(x: Complex, q: int, g: Permutation) -> int:
    """Trace of ``g`` on ``C_q``; ``C_{-1} = Z`` with the trivial action."""
    if q == -1:
        return 1
    total = 0
    for f in x.faces(q):
        img, sign = signed_action(g, f)
        if img == f:
            total += sign
    return total


def _fixed_trace(faces: Sequence[OrientedFace], g: Permutation) -> int:
    total = 0
    for f in faces:
        img, sign = signed_action(g, f)
        if img == f:
            total += sign
    return total


# ---------------------------------------------------------------------------
# Homology characters

def homology_character(x: Complex, q: int, order: Sequence[Face] | None = None,
                       verify: bool = True) -> ClassFunction:
    """Character of ``H~_q`` read off the homology facets of a shelling.

    ``order`` defaults to the singleton-count order, which requires ``x`` to
    be ``X(n)``.  With ``verify`` the generators of ``S_n`` are checked to
    map the homology facets onto themselves up to sign.
    """
    n = x.n
    if order is None:
        order = singleton_shelling_order(x)
    facets = [orient(f) for f in homology_facets(x, order).get(q, [])]
    if verify and facets:
        fset = set(facets)
        for g in generators(n):
            for f in facets:
                img, _ = signed_action(g, f)
                if img not in fset:
                    raise ActionNotPreserved(
                        f"{g} sends homology facet {f} to non-homology facet {img}", (g, f, img))
    return ClassFunction(n, {ct: _fixed_trace(facets, class_representative(ct))
                             for ct in cycle_types(n)})


def _kernel_data(x: Complex, q: int, p: int):
    """Mod-``p`` RREF of ``d_q`` and its pivot columns."""
    if q < 0:
        return None
    d = boundary_matrix(x, q)
    r, pivots = rref_mod_p(d, p)
    return r, pivots


def _kernel_trace(x: Complex, q: int, g: Permutation, data, p: int) -> int:
    """Trace of ``g`` on ``ker d_q`` via the RREF kernel basis.

    The basis vector ``k_j`` for a free column ``j`` has a 1 at ``j`` and
    ``-R[row, j]`` at pivot columns; coordinates in this basis are the
    free entries, so ``tr = sum_j s_i * k_j[i]`` with ``g(face_i) = +-face_j``.
    """
    if q == -1:
        return 1
    faces = x.faces(q)
    if not faces:
        return 0
    index = x.face_index(q)
    r, pivots = data
    pivot_row = {c: i for i, c in enumerate(pivots)}
    total = 0
    for i, f in enumerate(faces):
        img, sign = signed_action(g, f)
        j = index[frozenset(img)]
        if j in pivot_row:
            continue
        if i == j:
            total += sign
        elif i in pivot_row:
            total -= sign * int(r[pivot_row[i], j])
    total %= p
    return total - p if total > p // 2 else total


def rational_homology_character(x: Complex, q: int, p: int = LARGE_PRIME) -> ClassFunction:
    """Character of ``H~_q(X; Q)`` from chain-level traces, no shelling needed.

    ``chi = tr(Z_q) - tr(C_{q+1}) + tr(Z_{q+1})``, with kernels computed
    mod a large prime.  The result is exact once the ranks mod ``p`` agree
    with the ranks over ``Q``, which is checked against the SNF.
    """
    n = x.n
    data = {k: _kernel_data(x, k, p) for k in (q, q + 1) if 0 <= k <= x.dimension}
    for k, d in data.items():
        rank = len(d[1])
        if rank != smith_normal_form(boundary_matrix(x, k)).rank:
            raise ArithmeticError(f"rank of d_{k} drops mod {p}")
    values = {}
    for ct in cycle_types(n):
        g = class_representative(ct) if n else ()
        values[ct] = (_z_trace(x, q, g, data, p) - _c_trace(x, q + 1, g)
                      + _z_trace(x, q + 1, g, data, p))
    return ClassFunction(n, values)


def _c_trace(x: Complex, q: int, g: Permutation) -> int:
    if q > x.dimension:
        return 0
    return chain_trace(x, q, g)


def _z_trace(x: Complex, q: int, g: Permutation, data: dict, p: int) -> int:
    if q > x.dimension:
        return 0
    if q == -1:
        return 1
    return _kernel_trace(x, q, g, data[q], p)


# ---------------------------------------------------------------------------
# Induced characters from the normalizer of a Young subgroup

def normalizer_order(lam: Sequence[int]) -> int:
    """``|N_lam| = prod_j (mu_j!)^{a_j} a_j!`` over the distinct parts ``mu_j``."""
    return prod(factorial(mu) ** a * factorial(a) for mu, a in multiplicities(lam).items())


@dataclass(frozen=True)
class NormalizerData:
    lam: Partition
    multiplicity_form: tuple[tuple[int, int], ...]  # (part, how many times)
    order: int

    @property
    def index(self) -> int:
        return factorial(sum(self.lam)) // self.order


def normalizer_data(lam: Sequence[int]) -> NormalizerData:
    lam = as_partition(lam)
    form = tuple(sorted(multiplicities(lam).items(), reverse=True))
    return NormalizerData(lam, form, normalizer_order(lam))


def minimal_face(lam: Sequence[int]) -> OrientedFace:
    """The face of shape ``lam`` whose blocks are runs of consecutive integers."""
    blocks = []
    start = 1
    for part in as_partition(lam):
        blocks.append(frozenset(range(start, start + part)))
        start += part
    return orient(blocks)


def normalizer_elements(lam: Sequence[int]):
    """Yield ``(x, sgn(x-bar))`` for every ``x`` in ``N_lam``.

    ``x-bar`` is the permutation ``x`` induces on the blocks of the minimal
    face; only equal-size blocks can be exchanged.
    """
    lam = as_partition(lam)
    n = sum(lam)
    groups: list[list[tuple[int, ...]]] = []
    start = 1
    for part, count in sorted(multiplicities(lam).items(), reverse=True):
        blocks = []
        for _ in range(count):
            blocks.append(tuple(range(start, start + part)))
            start += part
        groups.append(blocks)

    per_group = []
    for blocks in groups:
        size = len(blocks[0])
        options = []
        inner = list(permutations(range(size)))
        for tau in permutations(range(len(blocks))):
            s = perm_sign(tuple(t + 1 for t in tau))
            for within in product(inner, repeat=len(blocks)):
                mapping = {}
                for i, blk in enumerate(blocks):
                    target = blocks[tau[i]]
                    for k, v in enumerate(blk):
                        mapping[v] = target[within[i][k]]
                options.append((mapping, s))
        per_group.append(options)

    for combo in product(*per_group):
        g = [0] * n
        sign = 1
        for mapping, s in combo:
            sign *= s
            for k, v in mapping.items():
                g[k - 1] = v
        yield tuple(g), sign


def _route_a(lam: Partition) -> ClassFunction:
    n = sum(lam)
    faces = [orient(f) for f in set_partitions_of_shape(range(1, n + 1), lam)]
    return ClassFunction(n, {ct: _fixed_trace(faces, class_representative(ct))
                             for ct in cycle_types(n)})


def _route_b(lam: Partition) -> ClassFunction:
    """``chi(ct) = (z_ct / |N|) * sum of sgn(x-bar) over x in N of cycle type ct``."""
    n = sum(lam)
    sums: dict[Partition, int] = {}
    for g, s in normalizer_elements(lam):
        ct = cycle_type(g)
        sums[ct] = sums.get(ct, 0) + s
    order = normalizer_order(lam)
    return ClassFunction(n, {ct: Fraction(centralizer_order(ct) * v, order)
                             for ct, v in sums.items()})


ROUTE_B_MAX_N = 8


@lru_cache(maxsize=None)
def _induced_cached(lam: Partition, route: str) -> ClassFunction:
    if route == "a":
        return _route_a(lam)
    if route == "b":
        return _route_b(lam)
    a, b = _route_a(lam), _route_b(lam)
    if a != b:
        raise ArithmeticError(f"induction routes disagree for {lam}: {a.as_list()} vs {b.as_list()}")
    return a


def induced_sign_character(lam: Sequence[int], n: int | None = None,
                           route: str | None = None) -> ClassFunction:
    """Character of the sign-of-block-permutation module of ``N_lam`` induced to ``S_n``.

    Route ``"a"`` traces the signed action on the facets of shape ``lam``;
    route ``"b"`` averages over ``N_lam`` (``n <= 8``).  ``"both"`` computes
    the two and insists they agree; it is the default whenever route ``"b"``
    is available.
    """
    lam = as_partition(lam)
    if n is not None and sum(lam) != n:
        raise ValueError(f"{lam} is not a partition of {n}")
    size = sum(lam)
    if route is None:
        route = "both" if size <= ROUTE_B_MAX_N else "a"
    if route not in ("a", "b", "both"):
        raise ValueError(f"unknown route {route!r}")
    if route != "a" and size > ROUTE_B_MAX_N:
        raise ValueError(f"route b is limited to n <= {ROUTE_B_MAX_N}")
    return _induced_cached(lam, route)


def character_shapes(n: int, q: int) -> list[Partition]:
    """Shapes with ``q + 1`` parts, each between 2 and ``n - 1``."""
    if n < 2:
        return []
    return sorted(partitions_with_constraints(n, length=q + 1, min_part=2, max_part=n - 1),
                  reverse=True)


@dataclass
class CharacterIdentityReport:
    n: int
    q: int
    shapes: list[Partition]
    homology: ClassFunction
    induced_sum: ClassFunction
    residuals: dict[Partition, Fraction]
    dimensions: dict[Partition, int]
    blocks_invariant: bool
    routes_agree: bool | None
    rational_agrees: bool | None = None

    @property
    def ok(self) -> bool:
        return (all(v == 0 for v in self.residuals.values()) and self.blocks_invariant
                and self.routes_agree is not False and self.rational_agrees is not False)


def verify_character_identity(n: int, q: int, rational: bool = False) -> CharacterIdentityReport:
    """Compare the homology character of ``X(n)`` with the sum of induced characters.

    Also checks that facets of each shape form a union of orbits (so each
    shape spans an invariant summand) and that the two induction routes
    agree.  With ``rational`` the homology character is recomputed from
    chain-level traces as well.
    """
    if not 2 <= n <= 8:
        raise ValueError("n must lie in 2..8")
    from .families import build_X
    x = build_X(n)
    lhs = homology_character(x, q)
    shapes = character_shapes(n, q)
    rhs = ClassFunction(n)
    routes = True
    for lam in shapes:
        a = induced_sign_character(lam, n, route="a")
        routes = routes and a == induced_sign_character(lam, n, route="b")
        rhs = rhs + a
    residuals = {ct: lhs[ct] - rhs[ct] for ct in cycle_types(n)}
    invariant = True
    order = singleton_shelling_order(x)
    facets = homology_facets(x, order).get(q, [])
    for f in facets:
        shape = tuple(sorted((len(b) for b in f), reverse=True))
        for g in generators(n):
            img, _ = signed_action(g, orient(f))
            if tuple(sorted((len(b) for b in img), reverse=True)) != shape:
                invariant = False
    rational_ok = None
    if rational:
        rational_ok = rational_homology_character(x, q) == lhs
    dims = {lam: normalizer_data(lam).index for lam in shapes}
    return CharacterIdentityReport(n, q, shapes, lhs, rhs, residuals, dims, invariant,
                          routes if shapes else None, rational_ok)


# ---------------------------------------------------------------------------
# The cyclic submodule generated by a signed orbit sum of tabloids

Tabloid = tuple[frozenset, ...]


def _act_tabloid(g: Permutation, t: Tabloid) -> Tabloid:
    return tuple(frozenset(g[x - 1] for x in row) for row in t)


def _rank_exact(vectors: list[dict]) -> int:
    """Rank over ``Q`` of sparse vectors, by elimination with ``Fraction`` pivots."""
    basis: dict = {}  # pivot key -> reduced vector
    for v in vectors:
        v = {k: Fraction(c) for k, c in v.items() if c}
        while v:
            k = min(v)
            if k not in basis:
                basis[k] = v
                break
            b = basis[k]
            factor = v[k] / b[k]
            for kk, c in b.items():
                nv = v.get(kk, 0) - factor * c
                if nv:
                    v[kk] = nv
                else:
                    v.pop(kk, None)
    return len(basis)


@dataclass
class CyclicSubmoduleReport:
    lam: Partition
    n: int
    tabloid_dimension: int
    rank: int
    expected_rank: int
    character: ClassFunction
    expected: ClassFunction

    @property
    def ok(self) -> bool:
        return self.rank == self.expected_rank and self.character == self.expected


def cyclic_submodule_check(lam: Sequence[int], n: int | None = None) -> CyclicSubmoduleReport:
    """Span of the translates of ``S = sum_{h in N} sgn(h-bar) h.T`` inside the tabloid module.

    ``T`` is the tabloid whose rows are runs of consecutive integers.  The
    translates ``g.S`` depend, up to sign, only on the coset ``g N``, so one
    translate per facet of shape ``lam`` spans the submodule.
    """
    lam = as_partition(lam)
    n = sum(lam) if n is None else n
    if sum(lam) != n:
        raise ValueError(f"{lam} is not a partition of {n}")
    if n > 7:
        raise ValueError("tabloid spaces are only built for n <= 7")
    t0: Tabloid = tuple(minimal_face(lam))
    s_vec: dict[Tabloid, int] = {}
    for h, sgn in normalizer_elements(lam):
        t = _act_tabloid(h, t0)
        s_vec[t] = s_vec.get(t, 0) + sgn
    s_vec = {t: c for t, c in s_vec.items() if c}

    # one coset representative per facet of shape lam
    reps: dict[frozenset, Permutation] = {}
    for g in permutations(range(1, n + 1)):
        face = frozenset(_act_tabloid(g, t0))
        if face not in reps:
            reps[face] = g
        if len(reps) * normalizer_order(lam) == factorial(n):
            break

    def translate(g: Permutation) -> dict[Tabloid, int]:
        return {_act_tabloid(g, t): c for t, c in s_vec.items()}

    keyed = {}
    tab_index: dict[Tabloid, int] = {}
    vectors = []
    for face, g in sorted(reps.items(), key=lambda kv: kv[1]):
        v = translate(g)
        keyed[face] = v
        vectors.append({tab_index.setdefault(t, len(tab_index)): c for t, c in v.items()})
    rank = _rank_exact(vectors)

    # g maps the translate for a face onto +- the translate for its image face
    values = {}
    for ct in cycle_types(n):
        g = class_representative(ct)
        total = 0
        for face, v in keyed.items():
            img_face = frozenset(frozenset(g[x - 1] for x in b) for b in face)
            w = keyed[img_face]
            moved = {_act_tabloid(g, t): c for t, c in v.items()}
            if moved == w:
                sign = 1
            elif moved == {t: -c for t, c in w.items()}:
                sign = -1
            else:
                raise ArithmeticError("translate is not a signed translate")
            if img_face == face:
                total += sign
        values[ct] = total
    tabloid_dim = factorial(n) // prod(factorial(p) for p in lam)
    return CyclicSubmoduleReport(lam, n, tabloid_dim, rank, normalizer_data(lam).index,
                                 ClassFunction(n, values), induced_sign_character(lam, n))


# ---------------------------------------------------------------------------
# Hopf trace formula

@dataclass
class HopfTraceReport:
    g: Permutation
    chain_side: int
    homology_side: int
    chain_traces: dict[int, int] = field(default_factory=dict)
    homology_traces: dict[int, Fraction] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.chain_side == self.homology_side


def hopf_trace_check(x: Complex, g: Permutation | None = None,
                     order: Sequence[Face] | None = None) -> HopfTraceReport:
    """Alternating sums of traces of ``g`` on chains and on rational homology.

    Homology traces come from the homology facets of ``order`` when one is
    given, otherwise from chain-level kernel traces.
    """
    n = x.n
    g = identity_perm(n) if g is None else tuple(g)
    if len(g) != n:
        raise ValueError("permutation has the wrong degree")
    ct = cycle_type(g)
    chains = {q: chain_trace(x, q, g) for q in range(-1, x.dimension + 1)}
    homs: dict[int, Fraction] = {}
    for q in range(-1, x.dimension + 1):
        if order is not None and q >= 0:
            chi = homology_character(x, q, order)
        else:
            chi = rational_homology_character(x, q)
        homs[q] = chi[ct] if n else chi[()]
    chain_side = sum((-1) ** (q % 2) * v for q, v in chains.items())
    hom_side = sum((-1) ** (q % 2) * v for q, v in homs.items())
    return HopfTraceReport(g, chain_side, int(hom_side), chains, homs)


def conjugate(g: Permutation, h: Permutation) -> Permutation:
    """``h g h^-1``."""
    return compose(compose(h, g), inverse(h))
