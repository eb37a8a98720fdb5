"""Exact enumerative primitives: integer and set partitions, Stirling numbers.

Integer partitions are plain tuples of positive ints in weakly decreasing
order, e.g. ``(3, 2, 2)``.  Set partitions are tuples of frozensets, blocks
sorted by their minimum element.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Iterator, Sequence

Partition = tuple[int, ...]
SetPartition = tuple[frozenset, ...]


class InvalidPadding(ValueError):
    """Raised when ``lambda[n]`` would not be a partition."""


class UnequalWeight(ValueError):
    """Raised when two partitions that must have the same size do not."""


# ---------------------------------------------------------------------------
# Stirling numbers

def stirling2_formula(n: int, k: int) -> int:
    """Alternating-sum formula ``(1/k!) sum_i (-1)^i C(k,i) (k-i)^n``."""
    if k < 0 or n < 0:
        return 0
    total = sum((-1) ** i * comb(k, i) * (k - i) ** n for i in range(k + 1))
    q, r = divmod(total, factorial(k))
    assert r == 0
    return q


@lru_cache(maxsize=None)
def stirling2_recurrence(n: int, k: int) -> int:
    if n == 0 and k == 0:
        return 1
    if n <= 0 or k <= 0 or k > n:
        return 0
    return k * stirling2_recurrence(n - 1, k) + stirling2_recurrence(n - 1, k - 1)


def stirling2(n: int, k: int) -> int:
    """Number of set partitions of ``[n]`` into ``k`` non-empty blocks."""
    if n < 0 or k < 0 or k > n:
        return 1 if n == k == 0 else 0
    a = stirling2_formula(n, k)
    b = stirling2_recurrence(n, k)
    if a != b:
        raise ArithmeticError(f"Stirling mismatch at ({n}, {k}): {a} != {b}")
    return a


@lru_cache(maxsize=None)
def assoc_stirling2(n: int, k: int, r: int) -> int:
    """Set partitions of ``[n]`` into ``k`` blocks, each of size at least ``r``.

    Recurrence on the block holding ``n``: either it joins an existing block,
    or it sits in a fresh block of size exactly ``r`` together with ``r - 1``
    of the others.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if n == 0 and k == 0:
        return 1
    if n <= 0 or k <= 0 or n < k * r:
        return 0
    return (k * assoc_stirling2(n - 1, k, r)
            + comb(n - 1, r - 1) * assoc_stirling2(n - r, k - 1, r))


def beta(n: int, q: int) -> int:
    """Rank of the reduced homology of ``X(n)`` in degree ``q``.

    Counts partitions of ``[n]`` into ``q + 1`` proper blocks with no
    singletons.  Degree 0 is zero outright: the one-block partition is the
    excluded full block.
    """
    if n < 2:
        raise ValueError("beta(n, q) needs n >= 2")
    if q <= 0:
        return 0
    k = q + 1
    value = sum((-1) ** i * comb(n, i) * stirling2(n - i, k - i)
                for i in range(k + 1))
    assoc = assoc_stirling2(n, k, 2)
    if value != assoc:
        raise ArithmeticError(f"beta({n}, {q}): {value} != {assoc}")
    return value


def bell_number(n: int) -> int:
    """Bell number via the Bell triangle (independent of Stirling numbers)."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


# ---------------------------------------------------------------------------
# Integer partitions

def _partitions(n: int, largest: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def integer_partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order."""
    return list(_partitions(n, n))


def partitions_with_constraints(
    n: int,
    length: int | None = None,
    min_part: int | None = None,
    max_part: int | None = None,
    distinct: bool = False,
) -> list[Partition]:
    lo = 1 if min_part is None else max(1, min_part)
    hi = n if max_part is None else max_part
    out: list[Partition] = []

    def rec(remaining: int, cap: int, prefix: Partition) -> None:
        if remaining == 0:
            if length is None or len(prefix) == length:
                out.append(prefix)
            return
        if length is not None and len(prefix) >= length:
            return
        for part in range(min(remaining, cap), lo - 1, -1):
            rec(remaining - part, part - 1 if distinct else part, prefix + (part,))

    if n == 0:
        return [()] if length in (None, 0) else []
    rec(n, hi, ())
    return out


def is_partition(parts: Sequence[int]) -> bool:
    return all(p >= 1 for p in parts) and all(
        parts[i] >= parts[i + 1] for i in range(len(parts) - 1))


def as_partition(parts: Iterable[int]) -> Partition:
    result = tuple(sorted((int(p) for p in parts if p), reverse=True))
    if any(p < 0 for p in result):
        raise ValueError(f"negative part in {result}")
    return result


def pad_partition(lam: Sequence[int], n: int) -> Partition:
    """``lambda[n] = (n - |lambda|, lambda_1, ..., lambda_r)``."""
    lam = tuple(lam)
    first = n - sum(lam)
    if lam and first < lam[0]:
        raise InvalidPadding(f"{lam}[{n}]: leading part {first} < {lam[0]}")
    if first <= 0:
        raise InvalidPadding(f"{lam}[{n}]: leading part {first} is not positive")
    return (first,) + lam


def dominates(mu: Sequence[int], lam: Sequence[int]) -> bool:
    """True iff every prefix sum of ``mu`` is at least that of ``lam``."""
    if sum(mu) != sum(lam):
        raise UnequalWeight(f"|{tuple(mu)}| != |{tuple(lam)}|")
    a = b = 0
    for i in range(max(len(mu), len(lam))):
        a += mu[i] if i < len(mu) else 0
        b += lam[i] if i < len(lam) else 0
        if a < b:
            return False
    return True


def multiplicities(lam: Sequence[int]) -> dict[int, int]:
    """Part size -> number of occurrences."""
    out: dict[int, int] = {}
    for p in lam:
        out[p] = out.get(p, 0) + 1
    return out


# ---------------------------------------------------------------------------
# Set partitions

def set_partitions(
    ground: Iterable[int],
    num_blocks: int | None = None,
    min_block_size: int | None = None,
    forbid_full_block: bool = False,
) -> list[SetPartition]:
    """Enumerate set partitions of ``ground`` honouring the constraints.

    Built by restricted growth: each element joins an existing block or
    opens a new one, with pruning on the block count.
    """
    elems = sorted(set(ground))
    m = len(elems)
    min_size = min_block_size or 1
    out: list[SetPartition] = []
    blocks: list[list[int]] = []

    def rec(i: int) -> None:
        left = m - i
        if num_blocks is not None:
            if len(blocks) > num_blocks or len(blocks) + left < num_blocks:
                return
        short = sum(max(0, min_size - len(b)) for b in blocks)
        if short > left:
            return
        if i == m:
            if num_blocks is not None and len(blocks) != num_blocks:
                return
            if forbid_full_block and len(blocks) == 1 and m > 0:
                return
            out.append(tuple(frozenset(b) for b in blocks))
            return
        x = elems[i]
        for b in blocks:
            b.append(x)
            rec(i + 1)
            b.pop()
        blocks.append([x])
        rec(i + 1)
        blocks.pop()

    if m == 0:
        ok = num_blocks in (None, 0) and not forbid_full_block
        return [()] if ok else []
    rec(0)
    out.sort(key=lambda p: tuple(tuple(sorted(b)) for b in p))
    return out


def set_partitions_of_shape(ground: Iterable[int], shape: Sequence[int]) -> list[SetPartition]:
    """Set partitions of ``ground`` whose sorted block sizes equal ``shape``."""
    shape = tuple(sorted(shape, reverse=True))
    elems = sorted(set(ground))
    if sum(shape) != len(elems):
        return []
    return [p for p in set_partitions(elems, num_blocks=len(shape),
                                      min_block_size=shape[-1] if shape else None)
            if tuple(sorted((len(b) for b in p), reverse=True)) == shape]


# ---------------------------------------------------------------------------
# Serialization

def format_partition(lam: Sequence[int]) -> str:
    return "+".join(str(p) for p in lam)


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if not text:
        return ()
    parts = tuple(int(t) for t in text.split("+"))
    if not is_partition(parts):
        raise ValueError(f"not a partition: {text!r}")
    return parts


def format_set_partition(blocks: Iterable[Iterable[int]]) -> str:
    canon = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0])
    return "|".join(",".join(str(x) for x in b) for b in canon)


def parse_set_partition(text: str) -> SetPartition:
    text = text.strip()
    if not text:
        return ()
    blocks = [frozenset(int(x) for x in chunk.split(",")) for chunk in text.split("|")]
    seen: set[int] = set()
    for b in blocks:
        if not b or seen & b:
            raise ValueError(f"blocks not disjoint and non-empty: {text!r}")
        seen |= b
    return tuple(sorted(blocks, key=min))
