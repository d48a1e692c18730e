"""Executable binomial and root-of-unity identities.

Each check evaluates both sides independently and reports whether they
agree: exactly for integer identities, to ``1e-9`` relative for those that
involve ``sin^2`` averages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .area_enum import symmetric_form_sums
from .combinatorics import binomial
from .kreft import b_tilde
from .structures import RationalFlux, isclose

__all__ = [
    "PairedSumCheck",
    "chu_vandermonde",
    "multi_binomial_identity",
    "multi_binomial_sum",
    "paired_sum_identity",
]


def chu_vandermonde(l1: int, l2: int, l1p: int, l2p: int) -> bool:
    """``binom(l1+l2, l1'+l2') == sum_A binom(l1, l1'+A) binom(l2, l2'-A)``."""
    if min(l1, l2, l1p, l2p) < 0:
        raise ValueError("arguments must be non-negative")
    rhs = sum(binomial(l1, l1p + a) * binomial(l2, l2p - a) for a in range(-l1p, l1 - l1p + 1))
    return binomial(l1 + l2, l1p + l2p) == rhs


def multi_binomial_sum(tops: Sequence[int], offsets: Sequence[int], ranges=None) -> int:
    """Right-hand side of the j-block identity, summed over ``A`` and ``k_3..k_j``."""
    return sum(symmetric_form_sums(tops, offsets, ranges).values())


def multi_binomial_identity(
    l: Sequence[int], primed: Sequence[int] | None = None, doubled: bool = False
) -> bool:
    """``binom(sum l, sum l') == sum_{A,k} prod_i binom(l_i, l'_i - k_{i,j} + A e_i)``.

    ``primed`` defaults to ``l``.  With ``doubled=True`` the binomial tops are
    ``2 l_i`` and the identity reads ``binom(2 sum l, sum l')``; with
    ``primed = l`` that is the lattice-walk counting ``binom(2h, h)``.
    """
    primed = tuple(l) if primed is None else tuple(primed)
    if len(primed) != len(l):
        raise ValueError("l and primed must have equal length")
    tops = [2 * x for x in l] if doubled else list(l)
    return binomial(sum(tops), sum(primed)) == multi_binomial_sum(tops, primed)


@dataclass(frozen=True)
class PairedSumCheck:
    numeric_lhs: float
    numeric_rhs: float
    binomial_lhs: int
    binomial_rhs: int

    @property
    def holds(self) -> bool:
        return self.binomial_lhs == self.binomial_rhs and isclose(self.numeric_lhs, self.numeric_rhs)


def _paired_rhs_coefficients(l1: int, l2: int, l3: int) -> dict[int, int]:
    """Cosine coefficients (harmonic ``A >= 0``) of the binomial right-hand side."""
    bound = 2 * (l1 + l2 + l3) + 2

    def tri(a: int, k3: int, left: int, right: int) -> int:
        return (
            binomial(2 * left, left - k3 - a)
            * binomial(2 * l2, l2 + 2 * k3 + a)
            * binomial(2 * right, right - k3)
        )

    coeffs = {0: 2 * sum(tri(0, k3, l1, l3) for k3 in range(0, bound + 1))}
    for a in range(1, bound + 1):
        ks = range(-(a // 2), bound + 1)
        coeffs[a] = 2 * sum(tri(a, k3, l1, l3) + tri(a, k3, l3, l1) for k3 in ks)
    return {a: c for a, c in coeffs.items() if c}


def paired_sum_identity(l1: int, l2: int, l3: int, flux: RationalFlux) -> PairedSumCheck:
    """Three-block average plus product of separated averages vs its binomial expansion.

    Left side::

        (1/q) sum_k b^l1(k) b^l2(k-1) b^l3(k-2) + (1/q) sum_k b^l2(k-1) * (1/q) sum_k b^l1(k) b^l3(k-2)

    The flux-free shadow (all cosines set to 1) is
    ``binom(2L, L) + binom(2 l2, l2) binom(2(l1+l3), l1+l3)`` with ``L = l1+l2+l3``.
    """
    if min(l1, l2, l3) < 0:
        raise ValueError("exponents must be non-negative")
    if flux.q <= 2 * (l1 + l2 + l3):
        raise ValueError("need q > 2 (l1 + l2 + l3)")
    q = flux.q
    b = [b_tilde(flux, k) for k in range(q)]
    triple = math.fsum(b[k % q] ** l1 * b[(k - 1) % q] ** l2 * b[(k - 2) % q] ** l3 for k in range(1, q + 1)) / q
    middle = math.fsum(b[(k - 1) % q] ** l2 for k in range(1, q + 1)) / q
    outer = math.fsum(b[k % q] ** l1 * b[(k - 2) % q] ** l3 for k in range(1, q + 1)) / q
    coeffs = _paired_rhs_coefficients(l1, l2, l3)
    rhs = math.fsum(c * flux.harmonic(a) for a, c in coeffs.items())
    total = l1 + l2 + l3
    return PairedSumCheck(
        numeric_lhs=triple + middle * outer,
        numeric_rhs=rhs,
        binomial_lhs=binomial(2 * total, total) + binomial(2 * l2, l2) * binomial(2 * (l1 + l3), l1 + l3),
        binomial_rhs=sum(coeffs.values()),
    )
