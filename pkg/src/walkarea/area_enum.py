"""Closed-walk area counts from the composition-indexed multi-sum.

For a composition ``l = (l_1, ..., l_j)`` of ``h = n/2`` the building block is
the root-of-unity average::

    (1/q) sum_k  b(k)^l_1 b(k-1)^l_2 ... b(k-j+1)^l_j,   b(k) = 4 sin^2(pi k p/q)

which, for ``q`` large enough, is a finite cosine polynomial whose
coefficients are sums of products of binomials.  We evaluate the finite-bound
form of that multi-sum: summation variables ``k_i`` in ``[0, 2 l_i]`` for
``i >= 3``, with the signed area ``A`` carried by the first two blocks.  The
first-order Kreft slice is the coefficient-weighted sum of those blocks, and
``C_n(A)`` follows by multiplying by ``n``.

The symmetric (unbounded) form, with the ``k_{i,j}`` shifts of
:func:`k_shift`, is implemented separately in :func:`symmetric_form_sums`
and serves as an independent cross-check.
"""

from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .combinatorics import (
    Composition,
    binomial,
    composition_coefficient,
    compositions,
    count_compositions,
)
from .structures import AreaDistribution, CosinePolynomial, LaurentPolynomial, RationalFlux

__all__ = [
    "IntegralityError",
    "KWeightMatrix",
    "area_sums",
    "block_product_expansion",
    "composition_term",
    "enumerate_areas",
    "evaluate_at_flux",
    "first_order_q",
    "generating_polynomial",
    "k_shift",
    "k_weight_matrix",
    "lambda_area_counts",
    "lambda_table",
    "symmetric_form_sums",
]


class IntegralityError(ArithmeticError):
    """A quantity that must be an exact integer came out fractional."""


def _check_even(n: int, minimum: int = 2) -> None:
    if n % 2:
        raise ValueError("length must be even")
    if n < minimum:
        raise ValueError(f"length must be >= {minimum}, got {n}")


# --------------------------------------------------------------------------
# k-weights of the symmetric form

def k_shift(i: int, j: int, k: Sequence[int]) -> int:
    """Shift ``k_{i,j}`` of block ``i`` (1-based) among ``j`` blocks.

    ``k`` holds ``(k_3, ..., k_j)``.  The shift is::

        -sum_{r=i}^{j} k_r + (i-1) k_{2i-2} + (2i-1) k_{2i-1} + i k_{2i}

    where only indices in ``3..j`` contribute.
    """
    if not 1 <= i <= j:
        raise ValueError(f"block index {i} outside 1..{j}")
    if len(k) != max(j - 2, 0):
        raise ValueError(f"expected {max(j - 2, 0)} k values for j={j}, got {len(k)}")

    def kv(r: int) -> int:
        return k[r - 3] if 3 <= r <= j else 0

    total = -sum(kv(r) for r in range(max(i, 3), j + 1))
    return total + (i - 1) * kv(2 * i - 2) + (2 * i - 1) * kv(2 * i - 1) + i * kv(2 * i)


@dataclass(frozen=True)
class KWeightMatrix:
    """Coefficient of each ``k_r`` (``r = 3..j``) in every block shift.

    ``rows[r][i-1]`` is the weight of ``k_r`` in ``k_{i,j}``; ``placement``
    gives the sign with which ``A`` enters each block (+1 on block ``j-1``,
    -1 on block ``j``).
    """

    j: int
    rows: dict[int, tuple[int, ...]]
    placement: tuple[int, ...]

    def as_array(self) -> np.ndarray:
        return np.array([self.rows[r] for r in range(3, self.j + 1)], dtype=np.int64).reshape(
            max(self.j - 2, 0), self.j
        )


def k_weight_matrix(j: int) -> KWeightMatrix:
    if j < 1:
        raise ValueError("need at least one block")
    rows = {}
    for r in range(3, j + 1):
        unit = [0] * (j - 2)
        unit[r - 3] = 1
        rows[r] = tuple(k_shift(i, j, unit) for i in range(1, j + 1))
    placement = tuple(int(i == j - 1) - int(i == j) for i in range(1, j + 1)) if j >= 2 else (0,)
    return KWeightMatrix(j, rows, placement)


# --------------------------------------------------------------------------
# finite-bound multi-sum

def _trans_sums(parts: Sequence[int], factor: Callable, mul: Callable, add: Callable) -> dict:
    """Signed-area table ``T[A]`` of the finite-bound multi-sum.

    ``factor(l, x)`` plays the role of ``binom(2l, x)`` and must return a
    falsy value outside the support; ``mul``/``add`` combine factor values.
    """
    j = len(parts)
    if j == 1:
        l1 = parts[0]
        return {0: factor(l1, l1)}

    # (s1, s2) are the accumulated shifts of blocks 1 and 2 over k_3..k_j
    weights: dict[tuple[int, int], object] = {(0, 0): None}
    for i in range(3, j + 1):
        li = parts[i - 1]
        nxt: dict[tuple[int, int], object] = {}
        for (s1, s2), w in weights.items():
            for ki in range(2 * li + 1):
                f = factor(li, ki)
                if not f:
                    continue
                d = ki - li
                key = (s1 + (i - 2) * d, s2 + (i - 1) * d)
                term = f if w is None else mul(w, f)
                prev = nxt.get(key)
                nxt[key] = term if prev is None else add(prev, term)
        weights = nxt

    l1, l2 = parts[0], parts[1]
    table: dict[int, object] = {}
    for (s1, s2), w in weights.items():
        lo = max(-l1 - s1, -l2 - s2)
        hi = min(l1 - s1, l2 - s2)
        for a in range(lo, hi + 1):
            f = mul(factor(l1, l1 + a + s1), factor(l2, l2 - a - s2))
            if not f:
                continue
            term = f if w is None else mul(w, f)
            prev = table.get(a)
            table[a] = term if prev is None else add(prev, term)
    return table


def _central_factor(l: int, x: int) -> int:
    return binomial(2 * l, x)


def area_sums(parts: Sequence[int]) -> dict[int, int]:
    """Signed-area coefficients ``T[A]`` of the block product average.

    ``sum_A T[A] exp(2 i A pi p/q)`` equals
    ``(1/q) sum_k prod_i b(k-i+1)^parts[i]`` whenever ``q > sum(parts)``.
    Zero parts are allowed.
    """
    if len(parts) == 0:
        raise ValueError("empty composition")
    if any(p < 0 for p in parts):
        raise ValueError("parts must be non-negative")
    table = _trans_sums(tuple(parts), _central_factor, int.__mul__, int.__add__)
    return {a: v for a, v in sorted(table.items()) if v}


def _fold(table: dict[int, object]) -> dict[int, object]:
    """Fold signed harmonics onto ``A >= 0`` (``c_A = T[A] + T[-A]``)."""
    out: dict[int, object] = {}
    for a, v in table.items():
        out[abs(a)] = out.get(abs(a), 0) + v
    return out


def block_product_expansion(parts: Sequence[int]) -> CosinePolynomial:
    """Cosine expansion of the block product average for arbitrary parts >= 0."""
    return CosinePolynomial(_fold(area_sums(parts)))


def composition_term(c: Composition | Sequence[int]) -> CosinePolynomial:
    """Cosine expansion attached to a composition.

    >>> composition_term(Composition((1, 1, 1))).coefficients
    {0: Fraction(8, 1), 1: Fraction(8, 1), 2: Fraction(4, 1)}
    """
    if not isinstance(c, Composition):
        if len(c) == 0:
            raise ValueError("empty composition")
        c = Composition(tuple(c))
    return block_product_expansion(c.parts)


# --------------------------------------------------------------------------
# assembly

def _partial_first_order(h: int, start: int, stop: int) -> dict[int, Fraction]:
    acc: dict[int, Fraction] = defaultdict(Fraction)
    for c in compositions(h, start, stop):
        coef = composition_coefficient(c)
        for a, v in _fold(area_sums(c.parts)).items():
            acc[a] += coef * v
    return dict(acc)


def _chunks(total: int, pieces: int) -> list[tuple[int, int]]:
    pieces = max(1, min(pieces, total))
    step = math.ceil(total / pieces)
    return [(s, min(s + step, total)) for s in range(0, total, step)]


def _map_reduce(fn: Callable, h: int, workers: int) -> dict:
    total = count_compositions(h)
    if workers <= 1 or total < 16:
        return fn(h, 0, total)
    # over-partition so uneven chunk costs balance out
    chunks = _chunks(total, 4 * workers)
    acc: dict = {}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, h, s, e) for s, e in chunks]
        for fut in futures:
            for key, v in fut.result().items():
                acc[key] = acc[key] + v if key in acc else v
    return acc


def first_order_q(n: int, workers: int = 1) -> CosinePolynomial:
    """First-order-in-q slice of the Kreft coefficient ``a_{p,q}(n)``.

    Sum over compositions of ``n/2`` of coefficient times cosine expansion.
    Accepts ``n = 2`` as well (single composition ``(1,)``, value 2).
    """
    _check_even(n)
    poly = CosinePolynomial(_map_reduce(_partial_first_order, n // 2, workers))
    for a, c in poly.coefficients.items():
        if (c * n).denominator != 1:
            raise IntegralityError(f"n * c_{a} = {c * n} is not an integer (n={n})")
    return poly


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise IntegralityError(f"{what} = {x} is not an integer")
    return x.numerator


def enumerate_areas(n: int, workers: int = 1) -> AreaDistribution:
    """Exact ``C_n(A)`` for all ``A``.

    >>> enumerate_areas(4).counts
    {-1: 4, 0: 28, 1: 4}
    """
    _check_even(n)
    if n == 2:
        return AreaDistribution(2, {0: 4})
    poly = first_order_q(n, workers)
    counts = {}
    for a, c in poly.coefficients.items():
        if a == 0:
            counts[0] = _as_int(n * c, "C_n(0)")
        else:
            value = _as_int(n * c / 2, f"C_n({a})")
            counts[a] = counts[-a] = value
    return AreaDistribution(n, counts)


def generating_polynomial(n: int, workers: int = 1) -> LaurentPolynomial:
    """``Z_n(Q) = sum_A C_n(A) Q^A``."""
    return enumerate_areas(n, workers).polynomial()


def evaluate_at_flux(d: AreaDistribution, flux: RationalFlux) -> complex:
    """``sum_A C_n(A) exp(2 i pi A p/q)`` in double precision."""
    re, im = [], []
    for a, c in d.counts.items():
        phase = 2.0 * math.pi * ((a * flux.p) % flux.q) / flux.q
        re.append(c * math.cos(phase))
        im.append(c * math.sin(phase))
    return complex(math.fsum(re), math.fsum(im))


# --------------------------------------------------------------------------
# horizontal/vertical resolved counts (lambda deformation)
#
# binom(2l, x) is replaced by sum_j binom(l, j) binom(l, x-j) t^j with
# t = (lambda/2)^2; the power of t counts right-left step pairs.

def _deformed_factor(l: int, x: int) -> tuple[int, ...]:
    coeffs = tuple(binomial(l, j) * binomial(l, x - j) for j in range(l + 1))
    return coeffs if any(coeffs) else ()


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return tuple(out)


def _poly_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    return tuple(u + (b[i] if i < len(b) else 0) for i, u in enumerate(a))


def _partial_lambda(h: int, start: int, stop: int) -> dict[tuple[int, int], Fraction]:
    acc: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for c in compositions(h, start, stop):
        coef = composition_coefficient(c)
        table = _trans_sums(c.parts, _deformed_factor, _poly_mul, _poly_add)
        for a, poly in table.items():
            for m, v in enumerate(poly):
                if v:
                    # symmetrized: C(A) = (n/2) sum coef * (T[A] + T[-A])
                    acc[(m, a)] += coef * v
                    acc[(m, -a)] += coef * v
    return dict(acc)


def lambda_table(n: int, workers: int = 1) -> dict[int, AreaDistribution]:
    """``C_{m,m,n/2-m,n/2-m}(A)`` for every ``m`` in ``0..n/2``.

    Entry ``m`` counts closed walks with ``m`` right and ``m`` left steps.
    """
    _check_even(n)
    acc = _map_reduce(_partial_lambda, n // 2, workers)
    rows: dict[int, dict[int, int]] = {m: {} for m in range(n // 2 + 1)}
    for (m, a), v in acc.items():
        rows[m][a] = _as_int(v * n / 2, f"C_(m={m})({a})")
    return {m: AreaDistribution(n, counts) for m, counts in rows.items()}


def lambda_area_counts(n: int, m: int, workers: int = 1) -> AreaDistribution:
    _check_even(n)
    if not 0 <= m <= n // 2:
        raise ValueError(f"m must lie in 0..{n // 2}, got {m}")
    return lambda_table(n, workers)[m]


# --------------------------------------------------------------------------
# symmetric form with provable finite bounds

def _variable_bounds(tops: Sequence[int], offsets: Sequence[int]) -> tuple[np.ndarray, list[range]]:
    """Coefficient matrix and sufficient ranges for ``(k_3..k_j, A)``.

    Block ``i`` sees ``offsets[i] + sum_v M[i, v] * var_v``.  The binomial
    support confines block deviations to boxes; since the map from the
    ``j - 1`` variables to blocks ``2..j`` is invertible, the preimage of that
    box is bounded and the inverse gives the ranges.
    """
    j = len(tops)
    km = k_weight_matrix(j)
    coef = np.zeros((j, j - 1), dtype=np.int64)
    if j > 2:
        coef[:, : j - 2] = -km.as_array().T
    coef[:, j - 2] = km.placement
    lo = np.array([-o for o in offsets], dtype=float)
    hi = np.array([t - o for t, o in zip(tops, offsets)], dtype=float)
    square = coef[1:].astype(float)
    if abs(np.linalg.det(square)) < 0.5:
        raise ArithmeticError(f"weight map is singular for j={j}")
    inv = np.linalg.inv(square)
    vlo = np.minimum(inv * lo[1:], inv * hi[1:]).sum(axis=1)
    vhi = np.maximum(inv * lo[1:], inv * hi[1:]).sum(axis=1)
    ranges = [range(math.floor(a - 1e-6), math.ceil(b + 1e-6) + 1) for a, b in zip(vlo, vhi)]
    return coef, ranges


def symmetric_form_sums(
    tops: Sequence[int], offsets: Sequence[int], ranges: Sequence[range] | None = None
) -> dict[int, int]:
    """Per-``A`` value of ``sum_k prod_i binom(tops_i, offsets_i - k_{i,j} + A e_i)``.

    ``e`` is +1 on block ``j-1`` and -1 on block ``j``.  With
    ``tops = 2l, offsets = l`` this is the symmetric form of the block
    product expansion; summing over ``A`` gives the multi-binomial identity.
    ``ranges`` overrides the computed summation box (variables
    ``k_3..k_j`` then ``A``).
    """
    j = len(tops)
    if j == 0 or len(offsets) != j:
        raise ValueError("tops and offsets must be non-empty and of equal length")
    if j == 1:
        return {0: binomial(tops[0], offsets[0])} if binomial(tops[0], offsets[0]) else {}

    coef, auto = _variable_bounds(tops, offsets)
    ranges = list(auto if ranges is None else ranges)
    size = math.prod(len(r) for r in ranges)
    if size > 50_000_000:
        raise MemoryError(f"summation box of {size} points is too large")

    dtype = np.int64 if sum(tops) <= 62 else object
    axes = [np.arange(r.start, r.stop).reshape([-1 if v == ax else 1 for ax in range(j - 1)])
            for v, r in enumerate(ranges)]
    prod = np.ones([len(r) for r in ranges], dtype=dtype)
    for i in range(j):
        arg = offsets[i] + sum(int(coef[i, v]) * axes[v] for v in range(j - 1) if coef[i, v])
        arg = np.broadcast_to(arg, prod.shape)
        table = np.array([binomial(tops[i], x) for x in range(tops[i] + 1)], dtype=dtype)
        inside = (arg >= 0) & (arg <= tops[i])
        prod = prod * np.where(inside, table[np.clip(arg, 0, tops[i])], 0)
    per_a = prod.reshape(-1, len(ranges[-1])).sum(axis=0)
    return {a: int(v) for a, v in zip(ranges[-1], per_a) if v}
