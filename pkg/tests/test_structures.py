import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from walkarea.envelope import ResultCache, ResultEnvelope, counts_from_payload, counts_payload
from walkarea.structures import (
    AreaDistribution,
    CosinePolynomial,
    LaurentPolynomial,
    QCosinePolynomial,
    RationalFlux,
    coprime_fluxes,
    isclose,
)


def test_isclose_floor():
    assert isclose(1e-10, 0.0)
    assert not isclose(1e-8, 0.0)
    assert isclose(1e12, 1e12 + 100)
    assert not isclose(1e12, 1e12 + 1e4)


def test_flux_validation():
    assert str(RationalFlux.parse("3/7")) == "3/7"
    assert RationalFlux.parse("0") == RationalFlux(0, 1)
    for p, q in [(2, 4), (1, 0), (-1, 3), (0, 2)]:
        with pytest.raises(ValueError):
            RationalFlux(p, q)


def test_coprime_fluxes():
    assert [str(f) for f in coprime_fluxes(4)] == ["0/1", "1/2", "1/3", "2/3", "1/4", "3/4"]
    # Euler phi summed, with phi(1) = 1 standing for 0/1
    assert len(coprime_fluxes(12)) == sum(
        sum(1 for p in range(q) if math.gcd(p, q) == 1) for q in range(1, 13)
    )


@given(st.sampled_from(coprime_fluxes(15)), st.integers(-100, 100))
def test_harmonic_reduction(flux, a):
    assert isclose(flux.harmonic(a), math.cos(a * flux.angle), rtol=1e-9)


def test_cosine_polynomial_algebra():
    p = CosinePolynomial({0: 4, 1: 2, 2: 0})
    assert p.coefficients == {0: 4, 1: 2}
    assert p[5] == 0
    assert (p + CosinePolynomial({1: -2})) == {0: 4}
    assert p.scale(Fraction(1, 2)) == {0: 2, 1: 1}
    assert p.dilate(3) == {0: 4, 3: 2}
    assert p.at_zero_flux() == 6
    assert p.degree() == 1
    assert isclose(p.evaluate(RationalFlux(1, 2)), 2)
    with pytest.raises(ValueError):
        p.dilate(0)


def test_q_cosine_polynomial():
    p = QCosinePolynomial({(1, 0): 7, (1, 1): 2, (2, 0): -2})
    assert p.q_degree() == 2
    assert p.slice(1) == {0: 7, 1: 2}
    assert isclose(p.evaluate(RationalFlux(1, 4)), 4 * 7 - 2 * 16)


def test_laurent_polynomial():
    z = LaurentPolynomial({-1: 4, 0: 28, 1: 4})
    assert z.at_one() == 36
    assert isclose(z(-1), 20)
    assert str(LaurentPolynomial({0: 2, 1: 3, 2: 1})) == "2 + 3Q + 1Q^2"
    assert str(LaurentPolynomial({})) == "0"


def test_area_distribution_predicates():
    d = AreaDistribution(4, {0: 28, 1: 4, -1: 4, 2: 0})
    assert d.counts == {-1: 4, 0: 28, 1: 4}
    assert d.total() == 36 and d.max_area() == 1
    assert d.is_symmetric() and d.within_support() and d.nonnegative()
    assert d.half() == {0: 28, 1: 4}
    assert d[7] == 0
    assert not AreaDistribution(4, {2: 1}).within_support()
    assert not AreaDistribution(4, {1: 1}).is_symmetric()
    assert d == {0: 28, 1: 4, -1: 4}
    assert d != AreaDistribution(6, d.counts)


# --- envelopes ---------------------------------------------------------------

big_counts = st.dictionaries(st.integers(-50, 50), st.integers(0, 10**40), max_size=20)


@given(big_counts)
def test_counts_payload_round_trip(counts):
    payload = counts_payload(counts)
    assert all(isinstance(v, str) for v in payload.values())
    assert counts_from_payload(json.loads(json.dumps(payload))) == counts


@given(big_counts, st.integers(2, 40))
def test_envelope_json_round_trip(counts, n):
    env = ResultEnvelope("area", {"n": n}, counts_payload(counts))
    assert ResultEnvelope.from_json(env.to_json()) == env
    assert ResultEnvelope.from_json(env.to_json(indent=2)) == env


def test_cache_last_write_wins_and_tolerates_torn_lines(tmp_path):
    cache = ResultCache(tmp_path / "sub" / "cache.jsonl")
    assert cache.get("area", {"n": 4}) is None
    cache.put(ResultEnvelope("area", {"n": 4}, {"0": "1"}))
    cache.put(ResultEnvelope("area", {"n": 6}, {"0": "2"}))
    cache.put(ResultEnvelope("area", {"n": 4}, {"0": "3"}))
    with cache.path.open("a") as fh:
        fh.write('{"command": "area", "param')
    assert cache.get("area", {"n": 4}).payload == {"0": "3"}
    assert cache.get("area", {"n": 6}).payload == {"0": "2"}
    assert cache.get("lambda", {"n": 4}) is None


def test_cache_from_env(monkeypatch, tmp_path):
    monkeypatch.delenv("WALKAREA_CACHE", raising=False)
    assert ResultCache.from_env() is None
    monkeypatch.setenv("WALKAREA_CACHE", str(tmp_path / "c.jsonl"))
    assert ResultCache.from_env().path == tmp_path / "c.jsonl"
