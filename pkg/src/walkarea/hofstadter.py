"""Per-site moments ``Tr H^n`` of the Hofstadter Hamiltonian at flux ``2 pi p/q``.

Three independent evaluations plus the two walk-based ones:

* :func:`trace_formula` - multinomial sum over genuine Kreft coefficients;
* :func:`trace_partition` - partition sum over extrapolated coefficients;
* :func:`trace_matrix` - Brillouin-zone average of ``tr H(k1, k2)^n / q``.

Gauge for the matrix route: the magnetic cell spans ``q`` sites along x.
Site ``m`` carries the on-site term ``2 cos(k2 + 2 pi p m / q)`` from the
vertical hops, neighbouring sites are coupled by 1, and the hop closing the
cell picks up ``exp(+-i q k1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .area_enum import enumerate_areas, evaluate_at_flux, first_order_q
from .combinatorics import binomial, multinomial, multiplicity_vectors
from .kreft import kreft_coefficient, kreft_direct
from .structures import RTOL, RationalFlux

__all__ = [
    "MomentReport",
    "bloch_hamiltonian",
    "bloch_moment",
    "trace_formula",
    "trace_matrix",
    "trace_partition",
    "verify_moment_identity",
]

MAX_MATRIX_Q = 16


def _check_even(n: int) -> None:
    if n < 2 or n % 2:
        raise ValueError("length must be even")


def trace_formula(n: int, flux: RationalFlux) -> float:
    """``Tr H^n`` from the genuine Kreft coefficients ``a(2j)``, ``j <= q//2``::

        (n/q) sum_{k>=0} sum_{l: sum_j j l_j = n/2 - k q}
            multinomial(l, 2k) / (|l| + 2k) * binom(2k, k)^2 * prod_j a(2j)^l_j
    """
    _check_even(n)
    q, h = flux.q, n // 2
    half = q // 2
    coeffs = [kreft_direct(flux, j) for j in range(1, half + 1)]
    terms = []
    for k in range(h // q + 1):
        for ell in multiplicity_vectors(h - k * q, half):
            size = sum(ell) + 2 * k
            weight = Fraction(multinomial(ell + (2 * k,)) * binomial(2 * k, k) ** 2, size)
            terms.append(float(weight) * math.prod(a**e for a, e in zip(coeffs, ell)))
    return n / q * math.fsum(terms)


def trace_partition(n: int, flux: RationalFlux) -> float:
    """``Tr H^n`` as a partition sum over extrapolated Kreft coefficients::

        (n/q) sum_{l: sum_j j l_j = n/2} multinomial(l) / |l| * prod_j a(2j)^l_j
    """
    _check_even(n)
    h = n // 2
    coeffs = [kreft_coefficient(flux, j) for j in range(1, h + 1)]
    terms = []
    for ell in multiplicity_vectors(h, h):
        weight = Fraction(multinomial(ell), sum(ell))
        terms.append(float(weight) * math.prod(a**e for a, e in zip(coeffs, ell) if e))
    return n / flux.q * math.fsum(terms)


def bloch_hamiltonian(flux: RationalFlux, k1, k2) -> np.ndarray:
    """Bloch Hamiltonians on a batch of momenta, shape ``(..., q, q)``."""
    q, p = flux.q, flux.p
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    shape = np.broadcast(k1, k2).shape
    h = np.zeros(shape + (q, q), dtype=complex)
    m = np.arange(q)
    h[..., m, m] = 2.0 * np.cos(k2[..., None] + 2.0 * np.pi * p * m / q)
    if q == 1:
        h[..., 0, 0] += 2.0 * np.cos(q * k1)
        return h
    h[..., m[:-1], m[1:]] += 1.0
    h[..., m[1:], m[:-1]] += 1.0
    h[..., q - 1, 0] += np.exp(1j * q * k1)
    h[..., 0, q - 1] += np.exp(-1j * q * k1)
    return h


def bloch_moment(n: int, flux: RationalFlux, kappa2_shift: float = 0.0, grid: int | None = None) -> complex:
    """``(1/q) <tr H(k1, k2)^n>`` over a uniform grid on ``[0, 2 pi)^2``.

    The integrand is a trigonometric polynomial of degree at most ``n`` in each
    momentum, so a ``grid >= n + 1`` rule is exact up to roundoff.  Odd ``n``
    is accepted (the result vanishes on the bipartite lattice).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if flux.q > MAX_MATRIX_Q:
        raise ValueError(f"matrix route limited to q <= {MAX_MATRIX_Q}")
    grid = n + 2 if grid is None else grid
    theta = 2.0 * np.pi * np.arange(grid) / grid
    k1, k2 = np.meshgrid(theta, theta + kappa2_shift, indexing="ij")
    h = bloch_hamiltonian(flux, k1.ravel(), k2.ravel())
    traces = np.trace(np.linalg.matrix_power(h, n), axis1=-2, axis2=-1)
    scale = flux.q * grid * grid
    return complex(math.fsum(traces.real) / scale, math.fsum(traces.imag) / scale)


def trace_matrix(n: int, flux: RationalFlux) -> float:
    _check_even(n)
    return bloch_moment(n, flux).real


@dataclass
class MomentReport:
    n: int
    flux: RationalFlux
    values: dict[str, float] = field(default_factory=dict)
    imaginary: dict[str, float] = field(default_factory=dict)
    tolerance: float = RTOL

    @property
    def max_deviation(self) -> float:
        """Largest pairwise relative deviation (scale floored at 1)."""
        vals = list(self.values.values())
        worst = 0.0
        for i, a in enumerate(vals):
            for b in vals[i + 1:]:
                worst = max(worst, abs(a - b) / max(1.0, abs(a), abs(b)))
        for name, im in self.imaginary.items():
            worst = max(worst, abs(im) / max(1.0, abs(self.values[name])))
        return worst

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "flux": str(self.flux),
            "values": dict(self.values),
            "max_deviation": self.max_deviation,
            "passed": self.passed,
        }


def verify_moment_identity(n: int, flux: RationalFlux, areas=None) -> MomentReport:
    """Five-way comparison of ``Z_n(exp(2 i pi p/q))`` with the trace routes.

    ``areas`` may pass a precomputed :class:`AreaDistribution` for ``n``.
    """
    _check_even(n)
    areas = enumerate_areas(n) if areas is None else areas
    z = evaluate_at_flux(areas, flux)
    m = bloch_moment(n, flux)
    report = MomentReport(n, flux)
    report.values = {
        "areas": z.real,
        "formula": trace_formula(n, flux),
        "partition": trace_partition(n, flux),
        "matrix": m.real,
        "first_order": n * first_order_q(n).evaluate(flux),
    }
    report.imaginary = {"areas": z.imag, "matrix": m.imag}
    return report
