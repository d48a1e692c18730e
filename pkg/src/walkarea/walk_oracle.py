"""Ground-truth area distributions by direct counting.

Area convention: a step up at abscissa ``x`` adds ``x``, a step down
subtracts ``x``; horizontal steps add nothing.  For a closed walk this is
the algebraic area (counterclockwise positive): the unit square traversed
right, up, left, down from the origin encloses ``+1``.  The alternative
``-y dx`` accumulation gives the same value for closed walks and is kept
selectable for consistency checks.

:func:`oracle_areas` is a layered dynamic program over ``(x, y, area)``
stored in dense int64 arrays; :func:`oracle_naive` enumerates all ``4**n``
step sequences and exists only to validate the DP.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Literal

import numpy as np

from .combinatorics import Composition
from .structures import AreaDistribution

__all__ = [
    "MAX_DP_LENGTH",
    "MAX_NAIVE_LENGTH",
    "oracle_areas",
    "oracle_areas_by_steps",
    "oracle_edge_profiles",
    "oracle_naive",
]

MAX_DP_LENGTH = 16
MAX_NAIVE_LENGTH = 10

Convention = Literal["x_dy", "y_dx"]

# (dx, dy): right, left, up, down
STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _check(n: int, cap: int) -> None:
    if n <= 0 or n % 2:
        raise ValueError(f"length must be even and positive, got {n}")
    if n > cap:
        raise ValueError(f"length {n} exceeds the oracle ceiling {cap}")


def _dp(n: int, convention: Convention, by_steps: bool) -> np.ndarray:
    """Return counts indexed ``[m, area + amax]`` of closed walks."""
    r = n // 2  # |x|, |y| <= n/2 for any walk that can still close
    amax = r * n  # |sum x dy| <= (n/2) * (number of vertical steps)
    size, asize = 2 * r + 1, 2 * amax + 1
    hsize = n + 1 if by_steps else 1

    # state[h, x, y, a]: h counts horizontal steps so far
    state = np.zeros((hsize, size, size, asize), dtype=np.int64)
    state[0, r, r, amax] = 1
    for _ in range(n):
        new = np.zeros_like(state)
        h_src = slice(0, hsize - 1) if by_steps else slice(0, 1)
        h_dst = slice(1, hsize) if by_steps else slice(0, 1)
        for dx in (1, -1):
            xs = slice(max(0, -dx), size - max(0, dx))
            xd = slice(max(0, dx), size - max(0, -dx))
            if convention == "x_dy":
                new[h_dst, xd] += state[h_src, xs]
            else:
                # area -= y * dx, so the shift along the area axis depends on y
                for yi in range(size):
                    shift = -(yi - r) * dx
                    src = state[h_src, xs, yi]
                    if shift >= 0:
                        new[h_dst, xd, yi, shift:] += src[..., : asize - shift]
                    else:
                        new[h_dst, xd, yi, :shift] += src[..., -shift:]
        for dy in (1, -1):
            ys = slice(max(0, -dy), size - max(0, dy))
            yd = slice(max(0, dy), size - max(0, -dy))
            if convention == "y_dx":
                new[:, :, yd] += state[:, :, ys]
            else:
                for xi in range(size):
                    shift = (xi - r) * dy
                    src = state[:, xi, ys]
                    if shift >= 0:
                        new[:, xi, yd, shift:] += src[..., : asize - shift]
                    else:
                        new[:, xi, yd, :shift] += src[..., -shift:]
        state = new
    closed = state[:, r, r, :]
    if by_steps:
        # only even horizontal counts can close; row m <-> 2m horizontal steps
        closed = closed[0::2]
    return closed


def _to_distribution(n: int, row: np.ndarray) -> AreaDistribution:
    amax = (row.size - 1) // 2
    return AreaDistribution(n, {int(i) - amax: int(row[i]) for i in np.flatnonzero(row)})


def oracle_areas(n: int, convention: Convention = "x_dy") -> AreaDistribution:
    """Exact ``C_n(A)`` by dynamic programming over all ``4**n`` walks.

    >>> oracle_areas(4).counts
    {-1: 4, 0: 28, 1: 4}
    """
    _check(n, MAX_DP_LENGTH)
    return _to_distribution(n, _dp(n, convention, by_steps=False)[0])


def oracle_areas_by_steps(n: int, convention: Convention = "x_dy") -> dict[int, AreaDistribution]:
    """Area distributions resolved by ``m``, the number of right (= left) steps."""
    _check(n, MAX_DP_LENGTH)
    table = _dp(n, convention, by_steps=True)
    return {m: _to_distribution(n, table[m]) for m in range(n // 2 + 1)}


def oracle_naive(n: int, convention: Convention = "x_dy") -> AreaDistribution:
    """Literal enumeration of every step sequence of length ``n``."""
    if n > MAX_NAIVE_LENGTH:
        raise ValueError("naive enumeration cap exceeded")
    _check(n, MAX_NAIVE_LENGTH)
    steps = np.array(STEPS, dtype=np.int64)
    seqs = np.array(list(itertools.product(range(4), repeat=n)), dtype=np.int8)
    dx = steps[seqs, 0]
    dy = steps[seqs, 1]
    x_before = np.cumsum(dx, axis=1) - dx
    y_before = np.cumsum(dy, axis=1) - dy
    closed = (dx.sum(axis=1) == 0) & (dy.sum(axis=1) == 0)
    if convention == "x_dy":
        area = (x_before * dy).sum(axis=1)
    else:
        area = -(y_before * dx).sum(axis=1)
    return AreaDistribution(n, Counter(area[closed].tolist()))


def oracle_edge_profiles(n: int) -> dict[Composition, int]:
    """Classify closed 1d walks of length ``n`` starting to the right.

    Each walk covers a contiguous run of lattice edges, crossing edge ``e``
    back and forth ``m_e`` times.  Reading the multiplicities ``m_e`` from the
    leftmost covered edge to the rightmost gives a composition of ``n/2``.
    """
    if n <= 0 or n % 2:
        raise ValueError(f"length must be even and positive, got {n}")
    profiles: Counter = Counter()
    for rest in itertools.product((1, -1), repeat=n - 1):
        moves = (1,) + rest
        if sum(moves) != 0:
            continue
        crossings: Counter = Counter()
        x = 0
        for s in moves:
            if s > 0:
                crossings[x] += 1  # edge (x, x+1), counted on the way right
            x += s
        lo, hi = min(crossings), max(crossings)
        profiles[Composition(tuple(crossings[e] for e in range(lo, hi + 1)))] += 1
    return dict(profiles)
