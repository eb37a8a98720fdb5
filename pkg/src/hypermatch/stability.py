"""Families indexed by n: preimage maps, Betti-sequence fits and stability audits."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, lcm
from typing import Callable, Iterable, Mapping, Sequence

from .combinatorics import Partition, as_partition, multiplicities, partitions_with_constraints
from .families import FamilyLike, _member, preimage_face
from .homology import HomologyBasis, homology_basis, reduced_homology
from .linalg import IntegerMatrix
from .simplicial import Complex, Face, OrientedFace, boundary_matrix, orient, sorting_sign, vertex_key
from .symmetric import ClassFunction, decompose


# ---------------------------------------------------------------------------
# Surjections and the maps they induce

@dataclass(frozen=True)
class Surjection:
    """``f: [a] -> [b]`` with ``f(i) = images[i - 1]``."""

    a: int
    b: int
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.a:
            raise ValueError(f"expected {self.a} images, got {len(self.images)}")
        if any(not 1 <= y <= self.b for y in self.images):
            raise ValueError(f"images must lie in [1, {self.b}]")
        if len(set(self.images)) != self.b:
            missing = sorted(set(range(1, self.b + 1)) - set(self.images))
            raise ValueError(f"not surjective: {missing} not attained")

    @classmethod
    def from_images(cls, images: Sequence[int], b: int | None = None) -> "Surjection":
        images = tuple(int(y) for y in images)
        return cls(len(images), max(images, default=0) if b is None else b, images)

    @classmethod
    def parse(cls, text: str) -> "Surjection":
        """Images listed positionally, e.g. ``"1 2 3 3"``; commas also work."""
        parts = text.replace(",", " ").split()
        if not parts:
            raise ValueError("empty surjection")
        return cls.from_images(int(p) for p in parts)

    @classmethod
    def identity(cls, n: int) -> "Surjection":
        return cls(n, n, tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def then(self, g: "Surjection") -> "Surjection":
        """``g o self``: apply ``self`` first."""
        if g.a != self.b:
            raise ValueError("surjections are not composable")
        return Surjection(self.a, g.b, tuple(g(y) for y in self.images))

    def preimage(self, face: Iterable[frozenset]) -> Face:
        return preimage_face(self.images, face)

    def __str__(self) -> str:
        return " ".join(map(str, self.images))


def compose(g: Surjection, f: Surjection) -> Surjection:
    """``g o f``."""
    return f.then(g)


class ImageNotAFace(ValueError):
    def __init__(self, f: Surjection, face: Face, x_a: Complex):
        super().__init__(f"preimage of {sorted(map(sorted, face))} under {f} is not a face of {x_a!r}")
        self.witness = (f, face)


def induced_map(f: Surjection, x_b: Complex, x_a: Complex) -> dict[Face, Face]:
    """``face -> f^-1(face)`` on every face of ``X_b``, checking each image lies in ``X_a``."""
    if x_b.n != f.b or x_a.n != f.a:
        raise ValueError("complexes do not match the surjection's domain and codomain")
    out: dict[Face, Face] = {}
    for q in range(-1, x_b.dimension + 1):
        for face in x_b.faces(q):
            img = f.preimage(face)
            if img not in x_a:
                raise ImageNotAFace(f, frozenset(face), x_a)
            out[frozenset(face)] = img
    return out


def _oriented_preimage(f: Surjection, face: OrientedFace) -> tuple[OrientedFace, int]:
    blocks = [f.preimage([b]) for b in face]
    images = [next(iter(b)) for b in blocks]
    return orient(images), sorting_sign([vertex_key(b) for b in images])


def chain_map_matrix(f: Surjection, x_b: Complex, x_a: Complex, q: int) -> IntegerMatrix:
    """Matrix of ``f^*: C_q(X_b) -> C_q(X_a)`` in the sorted oriented bases."""
    src = x_b.faces(q)
    dst = x_a.face_index(q)
    cols = []
    for face in src:
        img, sign = _oriented_preimage(f, face)
        key = frozenset(img)
        if key not in dst:
            raise ImageNotAFace(f, frozenset(face), x_a)
        cols.append({dst[key]: sign})
    return IntegerMatrix(len(dst), len(src), cols)


@dataclass
class HomologyMap:
    matrix: IntegerMatrix
    source: HomologyBasis
    target: HomologyBasis


def induced_map_on_homology(f: Surjection, family: FamilyLike, q: int) -> HomologyMap:
    """Matrix of ``f^*`` on ``H~_q`` in the bases chosen by :func:`homology_basis`.

    Column ``j`` holds the coordinates of ``f^*`` of the ``j``-th generator of
    ``H~_q(X_b)``.  Before projecting, ``d f^* = f^* d`` is checked on
    ``C_q`` and ``C_{q+1}``.
    """
    x_b, x_a = _member(family, f.b), _member(family, f.a)
    for k in (q, q + 1):
        if k > x_b.dimension:
            continue
        left = boundary_matrix(x_a, k) @ chain_map_matrix(f, x_b, x_a, k)
        right = chain_map_matrix(f, x_b, x_a, k - 1) @ boundary_matrix(x_b, k)
        if left != right:
            raise ArithmeticError(f"preimage map is not a chain map in degree {k}")
    src = homology_basis(x_b, q)
    dst = homology_basis(x_a, q)
    cm = chain_map_matrix(f, x_b, x_a, q)
    cols = []
    for gen in src.generators:
        coords = dst.coordinates(cm.apply(gen))
        cols.append({i: c for i, c in enumerate(coords) if c})
    return HomologyMap(IntegerMatrix(dst.rank, src.rank, cols), src, dst)


# ---------------------------------------------------------------------------
# Exponential-polynomial fits

class NoFit(ValueError):
    pass


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan over ``Q``; ``None`` if the square system is singular."""
    k = len(rows)
    a = [list(r) + [v] for r, v in zip(rows, rhs)]
    for c in range(k):
        piv = next((r for r in range(c, k) if a[r][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for r in range(k):
            if r != c and a[r][c] != 0:
                m = a[r][c]
                a[r] = [x - m * y for x, y in zip(a[r], a[c])]
    return [a[r][k] for r in range(k)]


def _trim(poly: Sequence[Fraction]) -> tuple[Fraction, ...]:
    poly = list(poly)
    while poly and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


@dataclass(frozen=True)
class ExpPolyFit:
    """``value(n) = sum_c polys[c](n) * c**n`` for ``n >= valid_from``.

    ``polys[c]`` lists coefficients by increasing degree; an empty tuple is
    the zero polynomial.
    """

    bases: tuple[int, ...]
    polys: dict[int, tuple[Fraction, ...]]
    window: tuple[int, ...]
    solved_on: tuple[int, ...]
    verified_on: tuple[int, ...]
    valid_from: int

    def __call__(self, n: int) -> Fraction:
        return sum((sum((c * Fraction(n) ** d for d, c in enumerate(p)), Fraction(0)) * Fraction(b) ** n
                    for b, p in self.polys.items()), Fraction(0))

    def as_json(self) -> dict:
        return {str(b): [str(c) for c in p] for b, p in sorted(self.polys.items()) if p}


def fit_exp_poly(values: Mapping[int, object], max_base: int, max_degree: int,
                 min_held_out: int = 2) -> ExpPolyFit:
    """Exact fit by exponential polynomials with bases ``1..B`` and degree ``<= D``.

    Every model size ``B' <= B``, ``D' <= D`` is solved on the last
    ``B'(D'+1)`` points; the remaining points are held out.  A model is
    accepted when it reproduces a trailing run of at least ``min_held_out``
    held-out points exactly; ``valid_from`` is where that run starts, so
    finitely many early exceptions are reported rather than hidden.  The
    model with the earliest ``valid_from`` wins, fewer unknowns breaking ties.
    """
    if max_base < 1 or max_degree < 0:
        raise ValueError("need max_base >= 1 and max_degree >= 0")
    ns = sorted(values)
    if any(b - a != 1 for a, b in zip(ns, ns[1:])):
        raise ValueError("window must be a run of consecutive n")
    vals = {n: Fraction(values[n]) for n in ns}
    best: tuple | None = None
    for bases in range(1, max_base + 1):
        for deg in range(max_degree + 1):
            unknowns = [(c, d) for c in range(1, bases + 1) for d in range(deg + 1)]
            k = len(unknowns)
            if len(ns) < k + min_held_out:
                continue
            solved_on = ns[-k:]
            rows = [[Fraction(n) ** d * Fraction(c) ** n for c, d in unknowns] for n in solved_on]
            sol = _solve_exact(rows, [vals[n] for n in solved_on])
            if sol is None:
                continue
            held = ns[:-k]

            def model(n: int) -> Fraction:
                return sum((s * Fraction(n) ** d * Fraction(c) ** n
                            for s, (c, d) in zip(sol, unknowns)), Fraction(0))

            verified = []
            for n in reversed(held):
                if model(n) != vals[n]:
                    break
                verified.append(n)
            if len(verified) < min_held_out:
                continue
            valid_from = verified[-1]
            key = (valid_from, k)
            if best is None or key < best[0]:
                polys = {c: _trim([sol[unknowns.index((c, d))] for d in range(deg + 1)])
                         for c in range(1, bases + 1)}
                polys.update({c: () for c in range(bases + 1, max_base + 1)})
                fit = ExpPolyFit(tuple(c for c, p in polys.items() if p), polys, tuple(ns),
                                 tuple(solved_on), tuple(sorted(verified)), valid_from)
                best = (key, fit)
    if best is None:
        raise NoFit(f"no exact fit with bases <= {max_base}, degree <= {max_degree} "
                    f"and {min_held_out} held-out points on n = {ns[0] if ns else '?'}..{ns[-1] if ns else '?'}")
    return best[1]


# ---------------------------------------------------------------------------
# Characters across a family

def family_character(x: Complex, q: int) -> ClassFunction:
    """Character of ``H~_q(x; Q)``; uses the singleton shelling when ``x`` is ``X(n)``."""
    from .shelling import NotXn
    from .symrep import homology_character, rational_homology_character
    try:
        return homology_character(x, q)
    except NotXn:
        return rational_homology_character(x, q)


@dataclass
class LengthAudit:
    q: int
    bound: int
    max_length: dict[int, int]

    @property
    def ok(self) -> bool:
        return all(v <= self.bound for v in self.max_length.values())


def partition_length_audit(family: FamilyLike, q: int, ns: Iterable[int],
                           character: Callable[[Complex, int], ClassFunction] = family_character
                           ) -> LengthAudit:
    """Longest partition among the irreducibles of ``H~_q``, per ``n``; 0 when it vanishes."""
    out = {}
    for n in ns:
        parts = decompose(character(_member(family, n), q))
        out[n] = max((len(mu) for mu in parts), default=0)
    return LengthAudit(q, 2 ** (q + 1), out)


def padded(lam: Sequence[int], n: int) -> Partition | None:
    """``lam[n] = (n - |lam|, lam)``, or ``None`` when that is not a partition."""
    lam = as_partition(lam)
    first = n - sum(lam)
    if first < (lam[0] if lam else 0):
        return None
    return (first,) + lam if first else lam


def _interpolate(points: Sequence[tuple[int, Fraction]]) -> tuple[Fraction, ...]:
    """Coefficients (increasing degree) of the interpolating polynomial."""
    k = len(points)
    rows = [[Fraction(n) ** d for d in range(k)] for n, _ in points]
    sol = _solve_exact(rows, [v for _, v in points])
    assert sol is not None
    return _trim(sol)


def _eval_poly(poly: Sequence[Fraction], n: int) -> Fraction:
    return sum((c * Fraction(n) ** d for d, c in enumerate(poly)), Fraction(0))


@dataclass
class QuasiPolyReport:
    status: str  # "fit" or "inconclusive"
    values: dict[int, int]
    period: int | None = None
    polys: dict[int, tuple[Fraction, ...]] = field(default_factory=dict)  # residue -> poly

    def as_json(self) -> dict:
        return {"status": self.status, "values": {str(n): v for n, v in self.values.items()},
                "period": self.period,
                "polys": {str(r): [str(c) for c in p] for r, p in self.polys.items()}}


def fit_quasipolynomial(values: Mapping[int, int], periods: Iterable[int] = (1, 2, 3, 4),
                        max_degree: int = 3) -> QuasiPolyReport:
    """Smallest period whose residue classes each admit an exact polynomial fit.

    Each class is fitted with the least degree whose interpolant, built on
    the first ``degree + 1`` points, also matches at least one later point.
    """
    vals = {n: Fraction(v) for n, v in values.items()}
    for period in sorted(set(periods)):
        polys = {}
        for r in range(period):
            pts = [(n, vals[n]) for n in sorted(vals) if n % period == r]
            found = None
            for deg in range(min(max_degree, len(pts) - 2) + 1):
                poly = _interpolate(pts[:deg + 1])
                if all(_eval_poly(poly, n) == v for n, v in pts[deg + 1:]):
                    found = poly
                    break
            if found is None:
                break
            polys[r] = found
        else:
            return QuasiPolyReport("fit", {n: int(v) for n, v in vals.items()}, period, polys)
    return QuasiPolyReport("inconclusive", {n: int(v) for n, v in vals.items()})


def multiplicity_quasipoly(family: FamilyLike, q: int, lam: Sequence[int], ns: Iterable[int],
                           periods: Iterable[int] = (1, 2, 3, 4), max_degree: int = 3,
                           character: Callable[[Complex, int], ClassFunction] = family_character
                           ) -> QuasiPolyReport:
    """Multiplicity of the irreducible indexed by ``lam[n]`` in ``H~_q(X_n; Q)``, then a quasi-polynomial fit."""
    mults = {}
    for n in ns:
        mu = padded(lam, n)
        if mu is None:
            mults[n] = 0
            continue
        mults[n] = decompose(character(_member(family, n), q)).get(mu, 0)
    return fit_quasipolynomial(mults, periods, max_degree)


def distinct_part_count(n: int, parts: int) -> int:
    """Partitions of ``n`` into ``parts`` distinct parts, none equal to 1 or ``n``."""
    if n < 2:
        return 0
    return len(partitions_with_constraints(n, length=parts, min_part=2, max_part=n - 1,
                                           distinct=True))


# ---------------------------------------------------------------------------
# Character polynomials

@dataclass(frozen=True)
class CharPolyTerm:
    """``coefficient * prod_d binom(X_d, m_d(nu)) * s_d(A)^(X_d - m_d(nu))``.

    ``X_d`` counts ``d``-cycles and ``s_d(A) = sum_{e | d} e * a_e(A)``,
    where ``a_e(A)`` is the multiplicity of ``e`` as a part of ``A``.
    """

    nu: Partition = ()
    A: Partition = ()
    coefficient: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nu", as_partition(self.nu))
        object.__setattr__(self, "A", as_partition(self.A))
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))


def divisor_weight(A: Sequence[int], d: int) -> int:
    """``s_d(A) = sum over e dividing d of e * a_e``."""
    return sum(e * m for e, m in multiplicities(A).items() if d % e == 0)


def eval_char_poly(term: CharPolyTerm, ct: Sequence[int]) -> Fraction:
    """Value on the class of cycle type ``ct``; ``0**0 = 1`` and ``binom(x, k) = 0`` for ``x < k``."""
    x = multiplicities(ct)
    m = multiplicities(term.nu)
    top = max([*x, *m, 0])
    value = term.coefficient
    for d in range(1, top + 1):
        xd, md = x.get(d, 0), m.get(d, 0)
        if xd < md:
            return Fraction(0)
        value *= comb(xd, md) * Fraction(divisor_weight(term.A, d)) ** (xd - md)
    return value


@dataclass(frozen=True)
class IdentityReduction:
    """``value(n) = poly(n) * base**(n - shift)`` for ``n >= shift``, and 0 below."""

    poly: tuple[Fraction, ...]
    base: int
    shift: int

    def __call__(self, n: int) -> Fraction:
        if n < self.shift:
            return Fraction(0)
        return _eval_poly(self.poly, n) * Fraction(self.base) ** (n - self.shift)


def identity_class_reduction(term: CharPolyTerm) -> IdentityReduction:
    """The term at the identity of ``S_n`` as a polynomial times an exponential in ``n``.

    Only ``X_1 = n`` is non-zero at the identity, so terms with ``nu`` using
    cycles longer than 1 vanish; otherwise the value is
    ``c * binom(n, m_1) * s_1^(n - m_1)``.
    """
    m = multiplicities(term.nu)
    if any(d > 1 for d in m):
        return IdentityReduction((), 1, 0)
    m1 = m.get(1, 0)
    # binom(n, m1) = prod_{i < m1} (n - i) / m1!
    poly = [Fraction(1)]
    for i in range(m1):
        nxt = [Fraction(0)] * (len(poly) + 1)
        for d, c in enumerate(poly):
            nxt[d] -= i * c
            nxt[d + 1] += c
        poly = nxt
    scale = term.coefficient / Fraction(factorial(m1))
    return IdentityReduction(_trim([c * scale for c in poly]), divisor_weight(term.A, 1), m1)


# ---------------------------------------------------------------------------
# Torsion

@dataclass
class TorsionScan:
    q: int
    torsion: dict[int, tuple[int, ...]]
    exponents: dict[int, int]
    running_lcm: dict[int, int]
    grew_at: list[int]

    @property
    def observed_exponent_bound(self) -> int:
        """Least common multiple of every exponent seen so far."""
        return max(self.running_lcm.values(), default=1)

    def as_json(self) -> dict:
        return {"q": self.q,
                "torsion": {str(n): list(t) for n, t in self.torsion.items()},
                "exponents": {str(n): e for n, e in self.exponents.items()},
                "running_lcm": {str(n): e for n, e in self.running_lcm.items()},
                "grew_at": self.grew_at,
                "observed_exponent_bound": self.observed_exponent_bound}


def torsion_scan(family: FamilyLike, q: int, ns: Iterable[int], threads: int = 1) -> TorsionScan:
    """Torsion of ``H~_q`` per ``n``, its exponent, and the running lcm of exponents."""
    torsion, exps, running, grew = {}, {}, {}, []
    acc = 1
    for n in sorted(ns):
        x = _member(family, n)
        t = reduced_homology(x, degrees=[q], threads=threads)[q].torsion if q <= x.dimension else ()
        torsion[n] = tuple(t)
        e = lcm(*t) if t else 1
        exps[n] = e
        new = lcm(acc, e)
        if new != acc:
            grew.append(n)
        acc = new
        running[n] = acc
    return TorsionScan(q, torsion, exps, running, grew)
