import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkarea.combinatorics import binomial
from walkarea.hofstadter import bloch_hamiltonian
from walkarea.kreft import (
    a11,
    b_tilde,
    first_order_link,
    kreft4_decomposition,
    kreft_closed_form,
    kreft_coefficient,
    kreft_direct,
    kreft_extrapolated,
    kreft_polynomial,
    kreft_series,
    power_sum,
    q_expansion_reconstruct,
    shifted_product_sum,
)
from walkarea.structures import RationalFlux, coprime_fluxes, isclose

FLUXES_12 = coprime_fluxes(12)


def nested_oracle(flux, j):
    """(-1)^(j+1) sum over k1 > k2 > ... > kj in 1..q, consecutive gaps >= 2."""
    q = flux.q
    b = [b_tilde(flux, k) for k in range(q + 1)]

    def rec(top, depth):
        if depth == 0:
            return 1.0
        return sum(b[k] * rec(k - 2, depth - 1) for k in range(1, top + 1))

    return (-1) ** (j + 1) * rec(q, j)


def charpoly_coefficient(flux, j):
    """Minus the E^(q-2j) coefficient of det(E - H(k1, k2)); momentum-free for 2j < q."""
    c = np.poly(bloch_hamiltonian(flux, 0.37, 1.21))
    return -c[2 * j].real


@pytest.mark.parametrize("flux", coprime_fluxes(9), ids=str)
def test_direct_matches_nested_loops(flux):
    for j in range(1, flux.q // 2 + 1):
        assert isclose(kreft_direct(flux, j), nested_oracle(flux, j))


@pytest.mark.parametrize("flux", FLUXES_12, ids=str)
def test_direct_matches_characteristic_polynomial(flux):
    for j in range(1, (flux.q + 1) // 2):
        assert isclose(kreft_direct(flux, j), charpoly_coefficient(flux, j))


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_closed_forms_on_all_small_fluxes(j):
    cf = kreft_closed_form(j)
    for flux in FLUXES_12:
        assert isclose(kreft_coefficient(flux, j), cf.evaluate(flux)), flux


def test_simple_values():
    assert kreft_direct(RationalFlux(1, 5), 0) == -1.0
    assert isclose(kreft_direct(RationalFlux(1, 5), 1), 10)
    assert isclose(kreft_direct(RationalFlux(1, 4), 2), -4)
    assert isclose(kreft_direct(RationalFlux(1, 2), 1), 4)


def test_closed_form_shape():
    cf = kreft_closed_form(2)
    assert cf.q_degree() == 2
    assert cf.slice(1) == {0: 7, 1: 2}
    with pytest.raises(ValueError):
        kreft_closed_form(5)


def test_direct_domain():
    with pytest.raises(ValueError, match="extrapolated"):
        kreft_direct(RationalFlux(1, 3), 2)
    with pytest.raises(ValueError):
        kreft_direct(RationalFlux(1, 3), -1)


def test_a4_decomposition():
    for flux in FLUXES_12:
        if flux.q >= 4:
            assert isclose(kreft4_decomposition(flux), kreft_direct(flux, 2))


@given(st.sampled_from(FLUXES_12), st.integers(1, 6))
def test_power_sum_is_central_binomial_for_large_q(flux, j):
    if flux.q > j:
        assert isclose(power_sum(j, flux), binomial(2 * j, j))


# --- extrapolation -----------------------------------------------------------

def test_a11_values():
    assert [a11(j) for j in range(6)] == [-1, 2, 7, 50, 456, 4728]
    assert isinstance(a11(3), Fraction)


def test_a11_against_log_series():
    # sum_j a11(j) w^j = -exp(-sum_i binom(2i,i)^2 / (2i) w^i), so
    # j a11(j) = -sum_i binom(2i,i)^2 / 2 * a11(j-i)
    for j in range(1, 10):
        rhs = -sum(Fraction(binomial(2 * i, i) ** 2, 2) * a11(j - i) for i in range(1, j + 1))
        assert j * a11(j) == rhs


@pytest.mark.parametrize("j", range(2, 7))
def test_vanishing_window(j):
    for q in range(j + 1, 2 * j):
        for p in range(q):
            if math.gcd(p, q) == 1:
                flux = RationalFlux(p, q)
                assert kreft_extrapolated(flux, j) == 0.0
                assert abs(kreft_series(flux, j)) <= 1e-9 * max(1.0, abs(kreft_direct(flux, 1)) ** j)


def test_named_extrapolations():
    assert kreft_extrapolated(RationalFlux(1, 3), 2) == 0
    assert isclose(kreft_extrapolated(RationalFlux(0, 1), 2), 7)
    assert isclose(kreft_extrapolated(RationalFlux(0, 1), 1), 2)
    assert isclose(kreft_extrapolated(RationalFlux(1, 2), 3), 8)
    with pytest.raises(ValueError, match="kreft_direct"):
        kreft_extrapolated(RationalFlux(1, 5), 2)


@pytest.mark.parametrize("flux", FLUXES_12[:12], ids=str)
def test_series_agrees_with_dispatcher(flux):
    for j in range(1, 8):
        assert isclose(kreft_series(flux, j), kreft_coefficient(flux, j))


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_q_expansion_reconstruction(n):
    for flux in coprime_fluxes(8):
        assert isclose(q_expansion_reconstruct(n, flux), kreft_coefficient(flux, n // 2))


def test_reconstruction_limits():
    with pytest.raises(ValueError):
        q_expansion_reconstruct(14, RationalFlux(1, 3))
    with pytest.raises(ValueError):
        q_expansion_reconstruct(5, RationalFlux(1, 3))


def test_kreft_polynomial():
    poly = kreft_polynomial(RationalFlux(1, 4))
    assert poly[0] == 1.0
    assert np.allclose(poly, [1, -8, 4])


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_first_order_link(n):
    for flux in coprime_fluxes(8):
        lhs, rhs = first_order_link(n, flux)
        assert isclose(lhs, rhs)


# --- stride substitution -----------------------------------------------------

@settings(deadline=None)
@given(
    st.lists(st.integers(0, 3), min_size=1, max_size=4),
    st.integers(1, 4),
    st.sampled_from(coprime_fluxes(25)),
)
def test_stride_substitution(exponents, stride, flux):
    if flux.q > sum(exponents):
        assert shifted_product_sum(flux, exponents, stride).holds


def test_stride_rejects_zero():
    with pytest.raises(ValueError):
        shifted_product_sum(RationalFlux(1, 5), (1, 1), 0)
