"""Value types shared across the package."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

__all__ = [
    "AreaDistribution",
    "CosinePolynomial",
    "LaurentPolynomial",
    "QCosinePolynomial",
    "RationalFlux",
    "coprime_fluxes",
    "isclose",
]

RTOL = 1e-9


def isclose(a: complex | float, b: complex | float, rtol: float = RTOL) -> bool:
    """Relative comparison with a floor of 1 on the scale.

    Below magnitude 1 this is an absolute test, which is what the vanishing
    identities (exact zeros computed in floating point) need.
    """
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True, order=True)
class RationalFlux:
    """Flux ``2*pi*p/q`` per lattice cell, with ``p`` and ``q`` coprime."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.p < 0:
            raise ValueError(f"p must be >= 0, got {self.p}")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} are not coprime")

    @property
    def angle(self) -> float:
        return 2.0 * math.pi * self.p / self.q

    def harmonic(self, a: int) -> float:
        """``cos(2*pi*a*p/q)``, reduced mod q before the float conversion."""
        return math.cos(2.0 * math.pi * ((a * self.p) % self.q) / self.q)

    @classmethod
    def parse(cls, text: str) -> "RationalFlux":
        p, _, q = text.partition("/")
        return cls(int(p), int(q or 1))

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def coprime_fluxes(q_max: int) -> list[RationalFlux]:
    """All fluxes ``p/q`` with ``0 <= p < q <= q_max`` and ``gcd(p, q) == 1``."""
    return [RationalFlux(p, q) for q in range(1, q_max + 1) for p in range(q) if math.gcd(p, q) == 1]


def _clean(coeffs: Mapping[int, object]) -> dict:
    return {k: v for k, v in sorted(coeffs.items()) if v != 0}


@dataclass(frozen=True)
class CosinePolynomial:
    """``c_0 + sum_{A>0} c_A cos(2*A*pi*p/q)`` with exact rational ``c_A``.

    The ``A = 0`` coefficient is stored as is (not doubled).
    """

    coefficients: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(a < 0 for a in self.coefficients):
            raise ValueError("cosine harmonics must be >= 0")
        object.__setattr__(
            self, "coefficients", _clean({a: Fraction(c) for a, c in self.coefficients.items()})
        )

    def __getitem__(self, a: int) -> Fraction:
        return self.coefficients.get(a, Fraction(0))

    def __add__(self, other: "CosinePolynomial") -> "CosinePolynomial":
        out = dict(self.coefficients)
        for a, c in other.coefficients.items():
            out[a] = out.get(a, 0) + c
        return CosinePolynomial(out)

    def scale(self, factor) -> "CosinePolynomial":
        return CosinePolynomial({a: c * factor for a, c in self.coefficients.items()})

    def dilate(self, r: int) -> "CosinePolynomial":
        """Substitute ``cos(A x) -> cos(r A x)``."""
        if r < 1:
            raise ValueError("dilation factor must be >= 1")
        return CosinePolynomial({r * a: c for a, c in self.coefficients.items()})

    def at_zero_flux(self) -> Fraction:
        """Value with every cosine set to 1."""
        return sum(self.coefficients.values(), Fraction(0))

    def evaluate(self, flux: RationalFlux) -> float:
        return math.fsum(float(c) * flux.harmonic(a) for a, c in self.coefficients.items())

    def degree(self) -> int:
        return max(self.coefficients, default=0)

    def __eq__(self, other) -> bool:
        if isinstance(other, CosinePolynomial):
            return self.coefficients == other.coefficients
        if isinstance(other, Mapping):
            return self.coefficients == _clean({a: Fraction(c) for a, c in other.items()})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self.coefficients.items()))


@dataclass(frozen=True)
class QCosinePolynomial:
    """Polynomial in ``q`` whose coefficients are cosine polynomials.

    Keys are ``(power of q, harmonic A)``.
    """

    coefficients: Mapping[tuple[int, int], Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coefficients", _clean({k: Fraction(c) for k, c in self.coefficients.items()})
        )

    def slice(self, power: int) -> CosinePolynomial:
        return CosinePolynomial({a: c for (pw, a), c in self.coefficients.items() if pw == power})

    def q_degree(self) -> int:
        return max((pw for pw, _ in self.coefficients), default=0)

    def evaluate(self, flux: RationalFlux) -> float:
        return math.fsum(
            float(c) * flux.q**pw * flux.harmonic(a) for (pw, a), c in self.coefficients.items()
        )


@dataclass(frozen=True)
class LaurentPolynomial:
    """Finitely supported ``sum_A coeffs[A] * Q**A`` with integer coefficients."""

    coeffs: Mapping[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _clean(dict(self.coeffs)))

    def __call__(self, x: complex) -> complex:
        return sum(c * x**a for a, c in self.coeffs.items())

    def at_one(self) -> int:
        return sum(self.coeffs.values())

    def __str__(self) -> str:
        terms = []
        for a, c in self.coeffs.items():
            if a == 0:
                terms.append(str(c))
            elif a == 1:
                terms.append(f"{c}Q")
            else:
                terms.append(f"{c}Q^{a}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class AreaDistribution:
    """Exact counts of closed walks of length ``n`` by signed enclosed area."""

    n: int
    counts: Mapping[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", _clean(dict(self.counts)))

    def __getitem__(self, a: int) -> int:
        return self.counts.get(a, 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def max_area(self) -> int:
        """``floor(n^2 / 16)``: no closed walk of length n encloses more."""
        return self.n * self.n // 16

    def is_symmetric(self) -> bool:
        return all(self.counts.get(-a, 0) == c for a, c in self.counts.items())

    def within_support(self) -> bool:
        bound = self.max_area()
        return all(abs(a) <= bound for a in self.counts)

    def nonnegative(self) -> bool:
        return all(c >= 0 for c in self.counts.values())

    def half(self) -> dict[int, int]:
        """Counts for ``A >= 0`` only (the other half follows by symmetry)."""
        return {a: c for a, c in self.counts.items() if a >= 0}

    def polynomial(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.counts)

    def __eq__(self, other) -> bool:
        if isinstance(other, AreaDistribution):
            return self.n == other.n and self.counts == other.counts
        if isinstance(other, Mapping):
            return self.counts == _clean(dict(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.counts.items())))
