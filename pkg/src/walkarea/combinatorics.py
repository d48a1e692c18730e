"""Exact integer primitives, integer compositions and the composition coefficient.

Counts are plain Python ``int`` (arbitrary precision) and rational
quantities are :class:`fractions.Fraction`; nothing here ever rounds.

Compositions of ``h`` are enumerated through their cut-set encoding: a
composition of ``h`` is fixed by the subset of the ``h - 1`` gaps between
consecutive units at which it is cut.  Reading the gaps left to right as a
bit string ``s_1 s_2 ... s_{h-1}`` (``s_i = 1`` means "cut after unit i")
and ordering these strings lexicographically gives the enumeration order::

    h = 3:  00 -> (3,)   01 -> (2, 1)   10 -> (1, 2)   11 -> (1, 1, 1)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

__all__ = [
    "Composition",
    "MirrorClass",
    "binomial",
    "classify_composition",
    "coefficient_sum",
    "composition_at",
    "composition_coefficient",
    "compositions",
    "count_compositions",
    "mirror_class_counts",
    "multinomial",
    "multiplicity_vectors",
]


def binomial(n: int, k: int) -> int:
    """Binomial coefficient, zero-extended outside ``0 <= k <= n``.

    Negative ``n`` also gives 0: generalized binomials never occur in the
    sums evaluated by this package, and the zero extension is what turns the
    formally infinite multi-sums into finite ones.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def multinomial(parts: Sequence[int]) -> int:
    """``(sum parts)! / prod(part!)`` for non-negative parts."""
    total = 0
    result = 1
    for part in parts:
        if part < 0:
            return 0
        total += part
        result *= math.comb(total, part)
    return result


@dataclass(frozen=True)
class Composition:
    """An ordered tuple of positive parts.

    The canonical form stores no trailing zeros, so every part is >= 1.
    Trailing zeros are accepted on construction and stripped.
    """

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if not parts:
            raise ValueError("empty composition")
        if any(p < 1 for p in parts):
            raise ValueError(f"composition parts must be positive: {self.parts!r}")
        object.__setattr__(self, "parts", parts)

    @property
    def half_length(self) -> int:
        return sum(self.parts)

    def reverse(self) -> "Composition":
        return Composition(self.parts[::-1])

    def padded(self) -> tuple[int, ...]:
        """Parts padded with zeros to ``half_length`` entries."""
        return self.parts + (0,) * (self.half_length - len(self.parts))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self) -> str:
        return "+".join(map(str, self.parts))


def count_compositions(h: int) -> int:
    return 1 << (h - 1) if h >= 1 else 0


def composition_at(h: int, index: int) -> Composition:
    """Decode the ``index``-th composition of ``h`` in cut-set order."""
    if not 0 <= index < count_compositions(h):
        raise IndexError(f"composition index {index} out of range for h={h}")
    parts = []
    run = 1
    for gap in range(1, h):
        if (index >> (h - 1 - gap)) & 1:
            parts.append(run)
            run = 1
        else:
            run += 1
    parts.append(run)
    return Composition(tuple(parts))


def compositions(h: int, start: int = 0, stop: int | None = None) -> Iterator[Composition]:
    """Yield the compositions of ``h`` in cut-set order.

    ``start``/``stop`` select an index range so the stream can be split
    between workers.  ``h = 0`` yields nothing.
    """
    total = count_compositions(h)
    stop = total if stop is None else min(stop, total)
    for index in range(max(start, 0), stop):
        yield composition_at(h, index)


def _block(left: int, right: int) -> Fraction:
    return Fraction(binomial(left + right, left), left + right)


def composition_coefficient(c: Composition | Sequence[int]) -> Fraction:
    """Weight of a composition in the first-order expansion.

    For parts ``l_1, ..., l_j``::

        c = C(l1+l2, l1)/(l1+l2) * prod_{i=2}^{j-1} l_i C(l_i+l_{i+1}, l_i)/(l_i+l_{i+1})

    With a single part the leading block degenerates to ``1/l_1`` and every
    later block to 1 (the zero-padding convention).
    """
    if not isinstance(c, Composition):
        if len(c) == 0:
            raise ValueError("empty composition")
        c = Composition(tuple(c))
    parts = c.parts
    if len(parts) == 1:
        return Fraction(1, parts[0])
    coef = _block(parts[0], parts[1])
    for i in range(1, len(parts) - 1):
        coef *= parts[i] * _block(parts[i], parts[i + 1])
    return coef


def coefficient_sum(h: int) -> Fraction:
    """Sum of :func:`composition_coefficient` over all compositions of ``h``."""
    return sum((composition_coefficient(c) for c in compositions(h)), Fraction(0))


class MirrorClass(str, Enum):
    PALINDROMIC = "palindromic"
    MIRROR_PAIR = "mirror_pair"


def classify_composition(c: Composition) -> MirrorClass:
    if c.parts == c.parts[::-1]:
        return MirrorClass.PALINDROMIC
    return MirrorClass.MIRROR_PAIR


def mirror_class_counts(h: int) -> tuple[int, int]:
    """Return ``(palindromic, mirror_free)`` counts for compositions of ``h``.

    ``mirror_free`` counts classes under reversal: each palindrome is its own
    class and every other composition pairs with its reverse.
    """
    if h < 1:
        return 0, 0
    palindromic = 1 << (h // 2)
    return palindromic, (count_compositions(h) + palindromic) // 2


def multiplicity_vectors(total: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """Yield ``(m_1, ..., m_max_part)`` with ``sum i*m_i == total``, all ``m_i >= 0``.

    These are integer partitions of ``total`` written as part multiplicities.
    """
    if total < 0:
        return
    if max_part <= 0:
        if total == 0:
            yield ()
        return

    counts = [0] * max_part

    def rec(part: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if part == 1:
            counts[0] = remaining
            yield tuple(counts)
            return
        for m in range(remaining // part + 1):
            counts[part - 1] = m
            yield from rec(part - 1, remaining - m * part)
        counts[part - 1] = 0

    yield from rec(max_part, total)
