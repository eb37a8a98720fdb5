"""Symmetric groups: permutations, class functions and irreducible characters.

Permutations of ``[n]`` are tuples ``g`` with ``g[i - 1]`` the image of
``i``.  Conjugacy classes are indexed by cycle types, written as partitions.
Columns of class-function tables are listed in increasing lexicographic
order, e.g. ``(1,1,1,1), (2,1,1), (2,2), (3,1), (4)`` for ``S_4``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Mapping, Sequence

from .combinatorics import Partition, integer_partitions, multiplicities

Permutation = tuple[int, ...]


def identity_perm(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def compose(g: Permutation, h: Permutation) -> Permutation:
    """``g o h``: apply ``h`` first."""
    return tuple(g[h[i] - 1] for i in range(len(h)))


def inverse(g: Permutation) -> Permutation:
    out = [0] * len(g)
    for i, y in enumerate(g, start=1):
        out[y - 1] = i
    return tuple(out)


def perm_from_cycles(cycles: Iterable[Sequence[int]], n: int) -> Permutation:
    g = list(range(1, n + 1))
    for cyc in cycles:
        for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
            g[a - 1] = b
    return tuple(g)


def cycles_of(g: Permutation) -> list[tuple[int, ...]]:
    seen = [False] * len(g)
    out = []
    for start in range(1, len(g) + 1):
        if seen[start - 1]:
            continue
        cyc = []
        x = start
        while not seen[x - 1]:
            seen[x - 1] = True
            cyc.append(x)
            x = g[x - 1]
        out.append(tuple(cyc))
    return out


def cycle_type(g: Permutation) -> Partition:
    return tuple(sorted((len(c) for c in cycles_of(g)), reverse=True))


def perm_sign(g: Permutation) -> int:
    return -1 if sum(len(c) - 1 for c in cycles_of(g)) % 2 else 1


def class_representative(ct: Partition) -> Permutation:
    """Cycles on consecutive integers, longest first."""
    cycles = []
    start = 1
    for length in ct:
        cycles.append(tuple(range(start, start + length)))
        start += length
    return perm_from_cycles(cycles, start - 1)


def centralizer_order(ct: Partition) -> int:
    """``z_ct = prod_d d^{m_d} m_d!``."""
    return prod(d ** m * factorial(m) for d, m in multiplicities(ct).items())


def class_size(ct: Partition) -> int:
    return factorial(sum(ct)) // centralizer_order(ct)


def cycle_types(n: int) -> list[Partition]:
    return sorted(integer_partitions(n))


# ---------------------------------------------------------------------------
# Class functions

@dataclass(frozen=True)
class ClassFunction:
    """Rational-valued class function on ``S_n``."""

    n: int
    values: Mapping[Partition, Fraction]

    def __init__(self, n: int, values: Mapping[Partition, object] | None = None):
        vals = {ct: Fraction(0) for ct in cycle_types(n)}
        for ct, v in (values or {}).items():
            ct = tuple(ct)
            if ct not in vals:
                raise ValueError(f"{ct} is not a cycle type of S_{n}")
            vals[ct] = Fraction(v)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, ct: Sequence[int]) -> Fraction:
        return self.values[tuple(ct)]

    def as_list(self) -> list[Fraction]:
        return [self.values[ct] for ct in cycle_types(self.n)]

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        self._same_group(other)
        return ClassFunction(self.n, {c: v + other.values[c] for c, v in self.values.items()})

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        self._same_group(other)
        return ClassFunction(self.n, {c: v - other.values[c] for c, v in self.values.items()})

    def __mul__(self, k) -> "ClassFunction":
        return ClassFunction(self.n, {c: v * k for c, v in self.values.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.n == other.n and dict(self.values) == dict(other.values)

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.as_list())))

    def _same_group(self, other: "ClassFunction") -> None:
        if self.n != other.n:
            raise ValueError(f"class functions on S_{self.n} and S_{other.n}")

    def inner(self, other: "ClassFunction") -> Fraction:
        """``(1/n!) sum_g f(g) h(g)``; characters are real so no conjugation."""
        self._same_group(other)
        total = sum(class_size(ct) * v * other.values[ct] for ct, v in self.values.items())
        return Fraction(total, factorial(self.n))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values.values())

    def degree(self) -> Fraction:
        return self.values[(1,) * self.n] if self.n else self.values[()]


def zero_function(n: int) -> ClassFunction:
    return ClassFunction(n)


def trivial_character(n: int) -> ClassFunction:
    return ClassFunction(n, {ct: 1 for ct in cycle_types(n)})


def sign_character(n: int) -> ClassFunction:
    return ClassFunction(n, {ct: perm_sign(class_representative(ct)) for ct in cycle_types(n)})


# ---------------------------------------------------------------------------
# Murnaghan-Nakayama

def _beta_set(lam: Partition, length: int) -> tuple[int, ...]:
    parts = list(lam) + [0] * (length - len(lam))
    return tuple(parts[i] + length - 1 - i for i in range(length))


def _from_beta(beta: Sequence[int]) -> Partition:
    b = sorted(beta, reverse=True)
    k = len(b)
    return tuple(p for p in (b[i] - (k - 1 - i) for i in range(k)) if p)


@lru_cache(maxsize=None)
def mn_character(lam: Partition, rho: Partition) -> int:
    """``chi^lam(rho)`` by removing rim hooks of length ``rho[0]``.

    Rim hooks of length ``r`` correspond to moving a bead of the beta-set
    down by ``r`` onto an empty position; the sign is ``(-1)`` to the
    number of beads jumped over (the hook's leg length).
    """
    if sum(lam) != sum(rho):
        raise ValueError("weights differ")
    if not rho:
        return 1
    r, rest = rho[0], rho[1:]
    beta = _beta_set(lam, len(lam))
    occupied = set(beta)
    total = 0
    for b in beta:
        t = b - r
        if t < 0 or t in occupied:
            continue
        height = sum(1 for c in beta if t < c < b)
        new = tuple(sorted((occupied - {b}) | {t}, reverse=True))
        total += (-1) ** height * mn_character(_from_beta(new), rest)
    return total


@dataclass(frozen=True)
class CharacterTable:
    n: int
    partitions: tuple[Partition, ...]  # rows, reverse-lexicographic
    classes: tuple[Partition, ...]  # columns, lexicographic
    table: tuple[tuple[int, ...], ...]

    def character(self, lam: Sequence[int]) -> ClassFunction:
        row = self.table[self.partitions.index(tuple(lam))]
        return ClassFunction(self.n, dict(zip(self.classes, row)))

    def characters(self) -> dict[Partition, ClassFunction]:
        return {lam: self.character(lam) for lam in self.partitions}


@lru_cache(maxsize=None)
def character_table(n: int, check: bool = True) -> CharacterTable:
    parts = tuple(integer_partitions(n))
    classes = tuple(cycle_types(n))
    table = tuple(tuple(mn_character(lam, ct) for ct in classes) for lam in parts)
    ct = CharacterTable(n, parts, classes, table)
    if check:
        chars = [ct.character(lam) for lam in parts]
        for i, a in enumerate(chars):
            for j, b in enumerate(chars):
                if a.inner(b) != (i == j):
                    raise ArithmeticError(f"orthogonality fails for {parts[i]}, {parts[j]}")
    return ct


class NotACharacter(ValueError):
    pass


def decompose(chi: ClassFunction, nonnegative: bool = True) -> dict[Partition, int]:
    """Multiplicities ``<chi, chi^mu>`` of the irreducibles, zero ones omitted."""
    out: dict[Partition, int] = {}
    if chi.n == 0:
        v = chi.values[()]
        if v.denominator != 1:
            raise NotACharacter("non-integer value on S_0")
        return {(): int(v)} if v else {}
    for lam, irr in character_table(chi.n).characters().items():
        m = chi.inner(irr)
        if m.denominator != 1:
            raise NotACharacter(f"<chi, chi^{lam}> = {m} is not an integer")
        if m < 0 and nonnegative:
            raise NotACharacter(f"negative multiplicity {m} for {lam}")
        if m:
            out[lam] = int(m)
    return out


def kostka(mu: Sequence[int], lam: Sequence[int]) -> int:
    """Semistandard tableaux of shape ``mu`` and content ``lam``, by backtracking.

    Cells are filled row by row, left to right; rows weakly increase,
    columns strictly increase, and value ``i`` is used ``lam[i-1]`` times.
    """
    mu, lam = tuple(mu), tuple(lam)
    if sum(mu) != sum(lam):
        raise ValueError(f"|{mu}| != |{lam}|")
    cells = [(r, c) for r, length in enumerate(mu) for c in range(length)]
    grid = [[0] * length for length in mu]
    left = list(lam)
    k = len(lam)

    def rec(idx: int) -> int:
        if idx == len(cells):
            return 1
        r, c = cells[idx]
        lo = grid[r][c - 1] if c else 1
        if r:
            lo = max(lo, grid[r - 1][c] + 1)
        count = 0
        for v in range(lo, k + 1):
            if left[v - 1]:
                left[v - 1] -= 1
                grid[r][c] = v
                count += rec(idx + 1)
                left[v - 1] += 1
        grid[r][c] = 0
        return count

    return rec(0)
