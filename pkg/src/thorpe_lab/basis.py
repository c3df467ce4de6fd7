"""Basis bookkeeping for exterior powers of an n-dimensional space.

A degree-p basis monomial is identified with the strictly increasing
p-subset of {1..n} of the indices it wedges together.  All coefficient
grids in this package are laid out in *colexicographic* order of those
subsets (equivalently: increasing bitmask value), which makes rank and
unrank O(p) with a binomial table and keeps the layout stable across
every module.

Signs follow the shuffle convention: merging two disjoint sorted index
sets I, J costs (-1)^{#inversions of the concatenation I,J}.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

# Practical ceiling for dense grids: C(16,8)^2 coefficients.  Raise at
# your own risk; memory grows like C(n, n/2)^2.
DEFAULT_DIMENSION_CAP = 16

_dimension_cap = DEFAULT_DIMENSION_CAP

IndexSet = tuple[int, ...]


class DegreeOutOfRangeError(ValueError):
    """Requested degree p outside 0 <= p <= n."""


def dimension_cap() -> int:
    return _dimension_cap


def set_dimension_cap(cap: int) -> None:
    """Raise or lower the ambient-dimension guard (default 16)."""
    global _dimension_cap
    if cap < 1:
        raise ValueError(f"dimension cap must be positive, got {cap}")
    _dimension_cap = cap


def check_dimension(n: int) -> None:
    if n < 0:
        raise ValueError(f"dimension must be nonnegative, got {n}")
    if n > _dimension_cap:
        raise ValueError(
            f"dimension {n} exceeds the cap {_dimension_cap}; "
            "use set_dimension_cap (or THORPE_LAB_NCAP in the CLI) to raise it"
        )


def check_degree(n: int, p: int) -> None:
    check_dimension(n)
    if p < 0 or p > n:
        raise DegreeOutOfRangeError(f"degree {p} out of range for dimension {n}")


def num_subsets(n: int, p: int) -> int:
    """C(n,p): length of the degree-p basis."""
    check_degree(n, p)
    return comb(n, p)


def _mask_to_set(mask: int) -> IndexSet:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _set_to_mask(subset: IndexSet) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << (i - 1)
    return mask


@lru_cache(maxsize=None)
def _enumerate_cached(n: int, p: int) -> tuple[IndexSet, ...]:
    if p == 0:
        return ((),)
    subsets = []
    # colex: extend each (p-1)-subset of {1..m-1} by a new maximum m
    for m in range(p, n + 1):
        for tail in _enumerate_cached(m - 1, p - 1):
            subsets.append(tail + (m,))
    return tuple(subsets)


def enumerate_basis(n: int, p: int) -> tuple[IndexSet, ...]:
    """All p-subsets of {1..n} in colexicographic (bitmask) order."""
    check_degree(n, p)
    return _enumerate_cached(n, p)


def rank(subset: IndexSet) -> int:
    """Colex rank of a sorted subset: sum of C(s_i - 1, i) over positions."""
    r = 0
    for i, s in enumerate(subset, start=1):
        r += comb(s - 1, i)
    return r


def unrank(n: int, p: int, r: int) -> IndexSet:
    """Inverse of rank over the (n,p) basis."""
    check_degree(n, p)
    if not 0 <= r < comb(n, p):
        raise ValueError(f"rank {r} out of range for C({n},{p})")
    out = []
    for i in range(p, 0, -1):
        # largest s with C(s-1, i) <= r
        s = i
        while comb(s, i) <= r:
            s += 1
        out.append(s)
        r -= comb(s - 1, i)
    return tuple(reversed(out))


def _shuffle_sign(left_mask: int, right_mask: int) -> int:
    """Parity of the shuffle sorting concatenation(left, right); masks disjoint.

    Counts pairs (i in left, j in right) with i > j.
    """
    sign = 1
    rest = left_mask
    while rest:
        low = rest & -rest
        # right elements strictly below this left element
        below = right_mask & (low - 1)
        if below.bit_count() & 1:
            sign = -sign
        rest ^= low
    return sign


def merge_sign(I: IndexSet, J: IndexSet) -> tuple[IndexSet, int] | None:
    """Wedge two basis monomials: (sorted union, shuffle sign), or None on overlap."""
    mi, mj = _set_to_mask(I), _set_to_mask(J)
    if mi & mj:
        return None
    return _mask_to_set(mi | mj), _shuffle_sign(mi, mj)


def complement_sign(n: int, I: IndexSet) -> tuple[IndexSet, int]:
    """Complement in {1..n} with the sign making e^I wedge e^(I^c) = sign * e^{1..n}."""
    check_dimension(n)
    mi = _set_to_mask(I)
    full = (1 << n) - 1
    if mi & ~full:
        raise ValueError(f"index set {I} not contained in 1..{n}")
    mc = full ^ mi
    return _mask_to_set(mc), _shuffle_sign(mi, mc)


@lru_cache(maxsize=None)
def merge_table(
    n: int, s: int, t: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Splitting table for wedging degree s with degree t in dimension n.

    Returns arrays (u, i, j, sign, seg) over all ordered disjoint pairs
    (I, J) with |I| = s, |J| = t:

      u[e]    colex rank of I union J in basis(n, s+t)
      i[e]    colex rank of I in basis(n, s)
      j[e]    colex rank of J in basis(n, t)
      sign[e] shuffle sign of (I, J)
      seg     start offsets of the runs of equal u (entries sorted by u),
              ready for np.add.reduceat

    Entries are sorted by u; within a run of fixed u, every C(s+t, s)
    splitting of that union appears exactly once.
    """
    check_degree(n, s + t)
    basis_s = enumerate_basis(n, s)
    basis_t = enumerate_basis(n, t)
    rank_s = {sub: r for r, sub in enumerate(basis_s)}
    rank_t = {sub: r for r, sub in enumerate(basis_t)}

    u_list, i_list, j_list, sign_list = [], [], [], []
    for u_rank, union in enumerate(enumerate_basis(n, s + t)):
        for left in combinations(union, s):
            right = tuple(x for x in union if x not in left)
            u_list.append(u_rank)
            i_list.append(rank_s[left])
            j_list.append(rank_t[right])
            sign_list.append(_shuffle_sign(_set_to_mask(left), _set_to_mask(right)))

    u = np.asarray(u_list, dtype=np.intp)
    seg_count = comb(s + t, s)
    seg = np.arange(0, len(u_list), seg_count, dtype=np.intp)
    return (
        u,
        np.asarray(i_list, dtype=np.intp),
        np.asarray(j_list, dtype=np.intp),
        np.asarray(sign_list, dtype=np.float64),
        seg,
    )


@lru_cache(maxsize=None)
def complement_table(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-rank complement permutation and sign for the Hodge star on one factor."""
    check_degree(n, p)
    basis_c = enumerate_basis(n, n - p)
    rank_c = {sub: r for r, sub in enumerate(basis_c)}
    perm = np.empty(comb(n, p), dtype=np.intp)
    sign = np.empty(comb(n, p), dtype=np.float64)
    for r, sub in enumerate(enumerate_basis(n, p)):
        csub, csign = complement_sign(n, sub)
        perm[r] = rank_c[csub]
        sign[r] = csign
    return perm, sign


def clear_caches() -> None:
    """Drop all precomputed tables (sign tables, bases, complements)."""
    _enumerate_cached.cache_clear()
    merge_table.cache_clear()
    complement_table.cache_clear()
