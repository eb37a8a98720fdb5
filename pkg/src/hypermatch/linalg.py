"""Exact integer linear algebra: sparse matrices and Smith normal form.

The invariant-factor path never uses modular arithmetic.  Elimination first
removes unit pivots sparsely (boundary matrices are mostly +-1), then hands
whatever is left to a dense Euclidean reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np


@dataclass
class IntegerMatrix:
    """Sparse integer matrix in column-major form.

    ``columns[j]`` maps row index -> non-zero entry.
    """

    rows: int
    cols: int
    columns: list[dict[int, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.columns:
            self.columns = [{} for _ in range(self.cols)]
        if len(self.columns) != self.cols:
            raise ValueError("column count mismatch")
        for col in self.columns:
            for i, v in list(col.items()):
                if not 0 <= i < self.rows:
                    raise IndexError(f"row {i} out of range")
                if v == 0:
                    del col[i]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntegerMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        columns: list[dict[int, int]] = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    columns[j][i] = int(v)
        return cls(nrows, ncols, columns)

    @classmethod
    def identity(cls, k: int) -> "IntegerMatrix":
        return cls(k, k, [{i: 1} for i in range(k)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def transpose(self) -> "IntegerMatrix":
        cols: list[dict[int, int]] = [{} for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                cols[i][j] = v
        return IntegerMatrix(self.cols, self.rows, cols)

    def row_dicts(self) -> list[dict[int, int]]:
        return self.transpose().columns

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = []
        for ocol in other.columns:
            acc: dict[int, int] = {}
            for k, b in ocol.items():
                for i, a in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            cols.append({i: v for i, v in acc.items() if v})
        return IntegerMatrix(self.rows, other.cols, cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.columns == other.columns

    def apply(self, vector: Sequence[int]) -> list[int]:
        out = [0] * self.rows
        for j, col in enumerate(self.columns):
            x = vector[j]
            if x:
                for i, v in col.items():
                    out[i] += v * x
        return out


@dataclass(frozen=True)
class SnfResult:
    """Invariant factors ``d_1 | d_2 | ...`` of an integer matrix."""

    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


def normalize_diagonal(diag: Iterable[int]) -> tuple[int, ...]:
    """Turn a non-zero diagonal into the equivalent divisibility chain."""
    d = sorted(abs(x) for x in diag if x)
    k = len(d)
    for i in range(k):
        for j in range(i + 1, k):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return tuple(d)


def _dense_snf_diagonal(a: list[list[int]]) -> list[int]:
    """Diagonal of an equivalent diagonal matrix; ``a`` is consumed."""
    diag: list[int] = []
    rows = [r for r in a if any(r)]
    while rows:
        ncols = len(rows[0])
        # pivot on an entry of minimal absolute value
        best = None
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        rows[0], rows[pi] = rows[pi], rows[0]
        for r in rows:
            r[0], r[pj] = r[pj], r[0]
        while True:
            p = rows[0][0]
            dirty = False
            for r in rows[1:]:
                if r[0]:
                    q = r[0] // p
                    if q:
                        for j in range(ncols):
                            if rows[0][j]:
                                r[j] -= q * rows[0][j]
                    if r[0]:
                        dirty = True
            top = rows[0]
            for j in range(1, ncols):
                if top[j]:
                    q = top[j] // p
                    if q:
                        for r in rows:
                            if r[0]:
                                r[j] -= q * r[0]
                    if top[j]:
                        dirty = True
            if not dirty:
                break
            # a smaller remainder appeared in the pivot row/column: move it up
            best = (abs(p), 0, 0)
            for i, r in enumerate(rows):
                if r[0] and abs(r[0]) < best[0]:
                    best = (abs(r[0]), i, 0)
            for j in range(ncols):
                if top[j] and abs(top[j]) < best[0]:
                    best = (abs(top[j]), 0, j)
            _, pi, pj = best
            rows[0], rows[pi] = rows[pi], rows[0]
            for r in rows:
                r[0], r[pj] = r[pj], r[0]
        diag.append(rows[0][0])
        rows = [r[1:] for r in rows[1:] if any(r[1:])]
    return diag


def smith_normal_form(m: IntegerMatrix, dense_threshold: float = 0.2) -> SnfResult:
    """Invariant factors of ``m`` over the integers.

    Phase one eliminates +-1 pivots sparsely, choosing short columns and
    short rows first; each such pivot contributes a factor 1.  Once no unit
    pivot is left, or the active part becomes denser than
    ``dense_threshold``, the remainder is reduced densely.
    """
    rows: dict[int, dict[int, int]] = {}
    colsets: dict[int, set[int]] = {}
    for j, col in enumerate(m.columns):
        if col:
            colsets[j] = set(col)
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v

    units = 0
    while True:
        progressed = False
        for c in sorted(colsets, key=lambda c: len(colsets[c])):
            rset = colsets.get(c)
            if not rset:
                colsets.pop(c, None)
                continue
            piv = None
            for r in rset:
                if abs(rows[r][c]) == 1 and (piv is None or len(rows[r]) < len(rows[piv])):
                    piv = r
            if piv is None:
                continue
            prow = rows.pop(piv)
            s = prow[c]
            for r in list(rset):
                if r == piv:
                    continue
                row = rows[r]
                f = row[c] * s
                for k, v in prow.items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        if k not in row:
                            colsets[k].add(r)
                        row[k] = nv
                    elif k in row:
                        del row[k]
                        colsets[k].discard(r)
                if not row:
                    del rows[r]
            for k in prow:
                colsets[k].discard(piv)
                if not colsets[k]:
                    del colsets[k]
            colsets.pop(c, None)
            units += 1
            progressed = True
        if not progressed:
            break
        nnz = sum(len(r) for r in rows.values())
        if rows and nnz > dense_threshold * len(rows) * max(1, len(colsets)):
            break

    rest: list[int] = []
    if rows:
        col_ids = sorted(colsets)
        pos = {c: k for k, c in enumerate(col_ids)}
        dense = []
        for r in rows.values():
            line = [0] * len(col_ids)
            for k, v in r.items():
                line[pos[k]] = v
            dense.append(line)
        rest = _dense_snf_diagonal(dense)
    return SnfResult(normalize_diagonal([1] * units + rest))


# ---------------------------------------------------------------------------
# Dense elimination with tracked unimodular transforms

def _identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


@dataclass
class SmithTransform:
    """``left @ a @ right == diag`` with ``left``/``right`` unimodular.

    ``diag`` holds the non-zero diagonal entries in positions ``0..r-1``;
    the inverses are tracked alongside so nothing has to be inverted later.
    """

    diag: list[int]
    left: list[list[int]]
    left_inv: list[list[int]]
    right: list[list[int]]
    right_inv: list[list[int]]


def smith_with_transforms(a: Sequence[Sequence[int]], nrows: int, ncols: int) -> SmithTransform:
    """Diagonalize ``a`` by unimodular row and column operations.

    The diagonal is not forced into a divisibility chain; callers that need
    invariant factors should use :func:`smith_normal_form`.
    """
    A = [list(map(int, r)) for r in a]
    U, Ui = _identity(nrows), _identity(nrows)
    V, Vi = _identity(ncols), _identity(ncols)

    def row_swap(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def row_add(dst: int, src: int, c: int) -> None:
        # row_dst += c * row_src
        ra, rs = A[dst], A[src]
        for k in range(ncols):
            if rs[k]:
                ra[k] += c * rs[k]
        ua, us = U[dst], U[src]
        for k in range(nrows):
            if us[k]:
                ua[k] += c * us[k]
        for r in Ui:
            if r[dst]:
                r[src] -= c * r[dst]

    def col_swap(i: int, j: int) -> None:
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def col_add(dst: int, src: int, c: int) -> None:
        # col_dst += c * col_src
        for r in A:
            if r[src]:
                r[dst] += c * r[src]
        for r in V:
            if r[src]:
                r[dst] += c * r[src]
        vd, vs = Vi[dst], Vi[src]
        for k in range(ncols):
            if vd[k]:
                vs[k] -= c * vd[k]

    diag: list[int] = []
    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            row = A[i]
            for j in range(t, ncols):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        while True:
            p = A[t][t]
            moved = False
            for i in range(t + 1, nrows):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        row_add(i, t, -q)
                    if A[i][t]:
                        row_swap(t, i)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, ncols):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        col_add(j, t, -q)
                    if A[t][j]:
                        col_swap(t, j)
                        moved = True
                        break
            if not moved:
                break
        diag.append(A[t][t])
        t += 1
    return SmithTransform(diag, U, Ui, V, Vi)


def column_echelon(a: Sequence[Sequence[int]], nrows: int, ncols: int):
    """Column-style Hermite reduction ``a @ W = [E | 0]``.

    Returns ``(s, W, W_inv)`` where the first ``s`` columns of ``a @ W`` are
    independent and the remaining ones vanish, so ``W[:, s:]`` is a
    lattice basis of the integer kernel of ``a``.
    """
    A = [list(map(int, r)) for r in a]
    W, Wi = _identity(ncols), _identity(ncols)

    def col_swap(i: int, j: int) -> None:
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in W:
            r[i], r[j] = r[j], r[i]
        Wi[i], Wi[j] = Wi[j], Wi[i]

    def col_add(dst: int, src: int, c: int) -> None:
        for r in A:
            if r[src]:
                r[dst] += c * r[src]
        for r in W:
            if r[src]:
                r[dst] += c * r[src]
        vd, vs = Wi[dst], Wi[src]
        for k in range(ncols):
            if vd[k]:
                vs[k] -= c * vd[k]

    s = 0
    for i in range(nrows):
        if s == ncols:
            break
        row = A[i]
        while True:
            nz = [j for j in range(s, ncols) if row[j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(row[j]))
            if j0 != s:
                col_swap(s, j0)
            p = row[s]
            for j in nz:
                if j != s and row[j]:
                    q = row[j] // p
                    col_add(j, s, -q)
            if all(row[j] == 0 for j in range(s + 1, ncols)):
                s += 1
                break
    return s, W, Wi


# ---------------------------------------------------------------------------
# Modular helpers (cross-checks and trace computations only)

LARGE_PRIME = 2_147_483_647  # 2**31 - 1; products fit in int64


def rref_mod_p(m: IntegerMatrix, p: int = LARGE_PRIME):
    """Reduced row echelon form of ``m`` over ``GF(p)``.

    Returns ``(R, pivots)`` with ``R`` a dense int64 array of the non-zero
    rows and ``pivots`` the pivot column of each.
    """
    if p >= 2 ** 31:
        raise ValueError("prime too large for int64 elimination")
    a = np.zeros((m.rows, m.cols), dtype=np.int64)
    for j, col in enumerate(m.columns):
        for i, v in col.items():
            a[i, j] = v % p
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_mod_p(m: IntegerMatrix, p: int = LARGE_PRIME) -> int:
    return len(rref_mod_p(m, p)[1])
