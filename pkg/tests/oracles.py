"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from math import factorial

import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.domains import ZZ


def brute_set_partitions(elements):
    """Every set partition of ``elements``, built by inserting one element at a time."""
    elements = list(elements)
    if not elements:
        return [[]]
    first, rest = elements[0], elements[1:]
    out = []
    for p in brute_set_partitions(rest):
        out.append([{first}] + [set(b) for b in p])
        for i in range(len(p)):
            q = [set(b) for b in p]
            q[i].add(first)
            out.append(q)
    return out


def count_disjoint_pairs(n: int) -> int:
    """Unordered pairs of disjoint non-empty subsets of ``[n]``, by labelling each element 0/1/2."""
    total = 0
    for code in range(3 ** n):
        has1 = has2 = False
        c = code
        for _ in range(n):
            d = c % 3
            c //= 3
            has1 |= d == 1
            has2 |= d == 2
        if has1 and has2:
            total += 1
    return total // 2


def slow_is_shelling(order) -> bool:
    """Definitional check: for each facet, collect its subsets lying in an earlier facet.

    The empty set always qualifies once there is an earlier facet; the
    maximal qualifying subsets must all have one element fewer than the facet.
    """
    order = [frozenset(f) for f in order]
    for t in range(1, len(order)):
        f = order[t]
        inside = []
        for k in range(len(f) + 1):
            for sub in combinations(sorted(f, key=lambda b: sorted(b)), k):
                s = frozenset(sub)
                if any(s <= order[i] for i in range(t)):
                    inside.append(s)
        maximal = [s for s in inside if not any(s < o for o in inside)]
        if any(len(s) != len(f) - 1 for s in maximal):
            return False
    return True


def sympy_invariant_factors(rows, ncols):
    """Non-zero SNF diagonal via sympy, as sorted positive ints."""
    if not rows or ncols == 0:
        return ()
    m = sympy.Matrix(rows)
    d = sympy_snf(m, domain=ZZ)
    vals = [abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0]
    return tuple(sorted(vals))


def sympy_rank(rows) -> int:
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix(rows).rank()


@lru_cache(maxsize=None)
def kostka_by_strips(mu: tuple, lam: tuple) -> int:
    """Kostka numbers by peeling horizontal strips for the largest entry."""
    if sum(mu) != sum(lam):
        return 0
    if not lam:
        return 1 if not mu else 0
    k = lam[-1]
    rest = lam[:-1]
    total = 0

    def rec(i: int, left: int, inner: list):
        nonlocal total
        if i == len(mu):
            if left == 0:
                nu = tuple(p for p in inner if p)
                total += kostka_by_strips(nu, rest)
            return
        below = mu[i + 1] if i + 1 < len(mu) else 0
        for take in range(0, min(left, mu[i] - below) + 1):
            inner.append(mu[i] - take)
            rec(i + 1, left - take, inner)
            inner.pop()

    rec(0, k, [])
    return total


def hook_length_degree(lam) -> int:
    """``n! / prod(hooks)``."""
    lam = list(lam)
    conj = [sum(1 for p in lam if p > j) for j in range(lam[0])] if lam else []
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return factorial(sum(lam)) // hooks


def perm_sign(g) -> int:
    sign = 1
    g = list(g)
    for i in range(len(g)):
        for j in range(i + 1, len(g)):
            if g[i] > g[j]:
                sign = -sign
    return sign


def cycle_type(g) -> tuple:
    seen, out = set(), []
    for s in range(1, len(g) + 1):
        if s in seen:
            continue
        length, x = 0, s
        while x not in seen:
            seen.add(x)
            x = g[x - 1]
            length += 1
        out.append(length)
    return tuple(sorted(out, reverse=True))


def brute_induced_from_normalizer(lam):
    """Induced character by the textbook formula, summing over all of ``S_n``.

    ``chi(g) = (1/|N|) * sum over x in S_n with x g x^-1 in N of sgn(bar(x g x^-1))``,
    where membership in ``N`` and the block permutation are read off directly
    from how an element moves the blocks of the consecutive-runs face.
    """
    n = sum(lam)
    blocks, start = [], 1
    for p in lam:
        blocks.append(frozenset(range(start, start + p)))
        start += p
    index = {b: i for i, b in enumerate(blocks)}

    def bar(h):
        imgs = []
        for b in blocks:
            img = frozenset(h[x - 1] for x in b)
            if img not in index:
                return None
            imgs.append(index[img] + 1)
        return imgs

    group = list(permutations(range(1, n + 1)))
    in_n = {}
    for h in group:
        b = bar(h)
        if b is not None:
            in_n[h] = perm_sign(b)
    order = len(in_n)
    values = {}
    for g in group:
        ct = cycle_type(g)
        if ct in values:
            continue
        total = 0
        for x in group:
            xinv = [0] * n
            for i, y in enumerate(x, start=1):
                xinv[y - 1] = i
            conj = tuple(x[g[xinv[i] - 1] - 1] for i in range(n))
            if conj in in_n:
                total += in_n[conj]
        values[ct] = sympy.Rational(total, order)
    return values
