"""Kreft coefficients of the Hofstadter secular polynomial.

``a_{p,q}(2j)`` is defined by a j-fold nested sum of ``4 sin^2`` factors when
``q >= 2j``.  For ``q < 2j`` we use the extrapolated value: the one obtained by
declaring every root-of-unity power sum ``sum_{k=1}^q exp(2 i pi k p j/q)``
to vanish for all ``q``.  Three routes to the extrapolated value are
provided (closed multinomial sum, coalesced power-series form and the
exponential-formula tower built on first-order slices) so that they can be
checked against each other.

Everything involving ``sin^2`` is double precision; the combinatorial weights
(``a_{1,1}``, multinomials, composition coefficients) stay exact until the
final multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .area_enum import block_product_expansion, enumerate_areas, evaluate_at_flux, first_order_q
from .combinatorics import binomial, multinomial, multiplicity_vectors
from .structures import CosinePolynomial, QCosinePolynomial, RationalFlux, isclose

__all__ = [
    "ShiftedCheck",
    "a11",
    "b_tilde",
    "kreft4_decomposition",
    "kreft_closed_form",
    "kreft_coefficient",
    "kreft_direct",
    "kreft_extrapolated",
    "kreft_polynomial",
    "kreft_series",
    "first_order_link",
    "power_sum",
    "q_expansion_reconstruct",
    "shifted_product_sum",
]


def b_tilde(flux: RationalFlux, k: int) -> float:
    """``4 sin^2(pi k p / q)``, periodic in ``k`` with period ``q``."""
    s = math.sin(math.pi * ((k * flux.p) % flux.q) / flux.q)
    return 4.0 * s * s


def kreft_direct(flux: RationalFlux, j: int) -> float:
    """Nested-sum Kreft coefficient, defined for ``q >= 2j``.

    Evaluates::

        (-1)^(j+1) sum_{k1=0}^{q-2j} sum_{k2=0}^{k1} ... sum_{kj=0}^{k_{j-1}}
            b(k1 + 2j - 1) b(k2 + 2j - 3) ... b(kj + 1)

    innermost first, with running prefix sums (O(j q) work).
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    if j == 0:
        return -1.0
    q = flux.q
    if q < 2 * j:
        raise ValueError("direct form undefined; use kreft_extrapolated")
    span = q - 2 * j + 1
    level = [b_tilde(flux, k + 1) for k in range(span)]
    for m in range(j - 1, 0, -1):
        running = 0.0
        nxt = []
        for k in range(span):
            running += level[k]
            nxt.append(b_tilde(flux, k + 2 * j - 2 * m + 1) * running)
        level = nxt
    return (-1) ** (j + 1) * math.fsum(level)


# Closed forms through a(8); keys are (power of q, cosine harmonic).
_CLOSED_FORMS: dict[int, dict[tuple[int, int], Fraction]] = {
    1: {(1, 0): Fraction(2)},
    2: {(1, 0): Fraction(7), (1, 1): Fraction(2), (2, 0): Fraction(-2)},
    3: {
        (1, 0): Fraction(2 * 58, 3),
        (1, 1): Fraction(2 * 36, 3),
        (1, 2): Fraction(2 * 6, 3),
        (2, 0): Fraction(-2 * 21, 3),
        (2, 1): Fraction(-2 * 6, 3),
        (3, 0): Fraction(2 * 2, 3),
    },
    4: {
        (1, 0): Fraction(1617, 6),
        (1, 1): Fraction(1512, 6),
        (1, 2): Fraction(462, 6),
        (1, 3): Fraction(72, 6),
        (1, 4): Fraction(12, 6),
        (2, 0): Fraction(-617, 6),
        (2, 1): Fraction(-372, 6),
        (2, 2): Fraction(-54, 6),
        (3, 0): Fraction(84, 6),
        (3, 1): Fraction(24, 6),
        (4, 0): Fraction(-4, 6),
    },
}


def kreft_closed_form(j: int) -> QCosinePolynomial:
    """Closed form of ``a_{p,q}(2j)`` as a polynomial in q and cosines."""
    if j not in _CLOSED_FORMS:
        raise ValueError(f"closed form known only for j <= 4, got j={j}")
    return QCosinePolynomial(_CLOSED_FORMS[j])


def power_sum(j: int, flux: RationalFlux) -> float:
    """``(1/q) sum_{k=1}^{q} b(k)^j``; equals ``binom(2j, j)`` once ``q > j``."""
    q = flux.q
    return math.fsum(b_tilde(flux, k) ** j for k in range(1, q + 1)) / q


@dataclass(frozen=True)
class ShiftedCheck:
    numeric: float
    predicted: float
    expansion: CosinePolynomial

    @property
    def holds(self) -> bool:
        return isclose(self.numeric, self.predicted)


def shifted_product_sum(flux: RationalFlux, exponents: Sequence[int], stride: int = 1) -> ShiftedCheck:
    """Compare ``(1/q) sum_k prod_i b(k - (i-1) r)^l_i`` with the dilated expansion.

    The stride-``r`` average is predicted to equal the stride-1 cosine
    expansion with every harmonic ``A`` replaced by ``r A``.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    q = flux.q
    numeric = math.fsum(
        math.prod(b_tilde(flux, k - i * stride) ** l for i, l in enumerate(exponents))
        for k in range(1, q + 1)
    ) / q
    expansion = block_product_expansion(exponents).dilate(stride)
    return ShiftedCheck(numeric, expansion.evaluate(flux), expansion)


@lru_cache(maxsize=None)
def a11(j: int) -> Fraction:
    """Extrapolated ``a_{1,1}(2j)``, exact.

    ``-sum over partitions (l_i) of j of prod_i (1/l_i!) (-binom(2i,i)^2/(2i))^l_i``;
    ``a11(0) = -1``.
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    total = Fraction(0)
    for ell in multiplicity_vectors(j, j):
        term = Fraction(1)
        for i, li in enumerate(ell, start=1):
            if li:
                term *= Fraction(-binomial(2 * i, i) ** 2, 2 * i) ** li / math.factorial(li)
        total += term
    return -total


def kreft_extrapolated(flux: RationalFlux, j: int) -> float:
    """Extrapolated ``a_{p,q}(2j)`` in the regime ``1 <= q < 2j``.

    Zero for ``j + 1 <= q <= 2j - 1``.  For ``q <= j``::

        sum_{k>=0} sum_{l: sum_i i l_i = j - q(k+1)}
            a11(2(k+1)) * multinomial(l_1, ..., l_{q//2}, 2k) * prod_i a_{p,q}(2i)^l_i

    with the genuine (nested-sum) coefficients on the right.
    """
    q = flux.q
    if q >= 2 * j:
        raise ValueError("use kreft_direct")
    if q > j:
        return 0.0
    half = q // 2
    base = [kreft_direct(flux, i) for i in range(1, half + 1)]
    terms = []
    for k in range((j - q) // q + 1):
        rest = j - q * (k + 1)
        if rest < 0:
            break
        outer = a11(k + 1)
        for ell in multiplicity_vectors(rest, half):
            weight = outer * multinomial(ell + (2 * k,))
            terms.append(float(weight) * math.prod(a ** li for a, li in zip(base, ell)))
    return math.fsum(terms)


def kreft_coefficient(flux: RationalFlux, j: int) -> float:
    """Kreft coefficient valid for every ``q``: nested sum or extrapolation."""
    if j == 0:
        return -1.0
    if flux.q >= 2 * j:
        return kreft_direct(flux, j)
    return kreft_extrapolated(flux, j)


def kreft_polynomial(flux: RationalFlux) -> list[float]:
    """Coefficients of ``b_{p,q}(w) = -sum_{i=0}^{q//2} a_{p,q}(2i) w^i`` (``w = z^2``)."""
    return [-kreft_direct(flux, i) for i in range(flux.q // 2 + 1)]


def _series_power(coeffs: Sequence[float], alpha: int, order: int) -> list[float]:
    """Power series of ``f(w)**alpha`` up to ``w**order`` for ``f(0) = 1``.

    J.C.P. Miller recurrence: ``g_n = (1/n) sum_{i=1}^n ((alpha+1) i - n) f_i g_{n-i}``.
    """
    if coeffs[0] != 1:
        raise ValueError("series must have constant term 1")
    f = list(coeffs) + [0.0] * max(0, order + 1 - len(coeffs))
    g = [1.0] + [0.0] * order
    for n in range(1, order + 1):
        g[n] = math.fsum(((alpha + 1) * i - n) * f[i] * g[n - i] for i in range(1, n + 1)) / n
    return g


def kreft_series(flux: RationalFlux, j: int) -> float:
    """Coalesced form ``sum_{k: j-qk>=0} a11(2k) [z^(2j-2qk)] b_{p,q}(z)^(1-2k)``.

    Valid for every ``q``; reproduces the nested sum when ``q >= 2j`` and the
    extrapolation otherwise.
    """
    q = flux.q
    poly = kreft_polynomial(flux)
    terms = []
    for k in range(j // q + 1):
        power = j - q * k
        series = _series_power(poly, 1 - 2 * k, power)
        terms.append(float(a11(k)) * series[power])
    return math.fsum(terms)


def first_order_link(n: int, flux: RationalFlux) -> tuple[float, float]:
    """Both sides of ``(1/n) sum_A C_n(A) e^{2 i A pi p/q} = [q] a_{p,q}(n)``."""
    lhs = evaluate_at_flux(enumerate_areas(n), flux).real / n
    return lhs, first_order_q(n).evaluate(flux)


def q_expansion_reconstruct(n: int, flux: RationalFlux) -> float:
    """Rebuild ``a_{p,q}(n)`` from the first-order slices ``[q] a_{p,q}(2i)``::

        a(n) = -sum_{k: sum_i i k_i = n/2} prod_i (-1)^k_i / k_i! (q [q]a(2i))^k_i
    """
    if n % 2 or n < 2:
        raise ValueError("length must be even")
    if n > 12:
        raise ValueError("reconstruction is limited to n <= 12")
    h = n // 2
    q = flux.q
    slices = [q * first_order_q(2 * i).evaluate(flux) for i in range(1, h + 1)]
    terms = []
    for ks in multiplicity_vectors(h, h):
        term = 1.0
        for s, ki in zip(slices, ks):
            if ki:
                term *= (-s) ** ki / math.factorial(ki)
        terms.append(term)
    return -math.fsum(terms)


def kreft4_decomposition(flux: RationalFlux) -> float:
    """``a_{p,q}(4)`` rewritten with the triangular sum turned into products::

        -1/2 ((sum b)^2 - sum b^2) + sum b(k) b(k-1)
    """
    q = flux.q
    b = [b_tilde(flux, k) for k in range(q + 1)]
    s1 = math.fsum(b[1:])
    s2 = math.fsum(x * x for x in b[1:])
    s11 = math.fsum(b[k] * b[k - 1] for k in range(1, q + 1))
    return -0.5 * (s1 * s1 - s2) + s11
