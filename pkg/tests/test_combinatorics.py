import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from walkarea.combinatorics import (
    Composition,
    MirrorClass,
    binomial,
    classify_composition,
    coefficient_sum,
    composition_at,
    composition_coefficient,
    compositions,
    count_compositions,
    mirror_class_counts,
    multinomial,
    multiplicity_vectors,
)
from walkarea.walk_oracle import oracle_edge_profiles


def brute_compositions(h):
    """All compositions of h, by filtering every tuple of positive parts."""
    out = set()
    for size in range(1, h + 1):
        for parts in itertools.product(range(1, h + 1), repeat=size):
            if sum(parts) == h:
                out.add(parts)
    return out


@pytest.mark.parametrize("n,k,expected", [(4, 2, 6), (0, 0, 1), (5, -1, 0), (5, 6, 0), (-3, 1, 0), (40, 20, 137846528820)])
def test_binomial(n, k, expected):
    assert binomial(n, k) == expected


def test_binomial_is_exact_for_huge_arguments():
    assert binomial(200, 100) == math.factorial(200) // math.factorial(100) ** 2


def test_multinomial():
    assert multinomial((2, 1, 1)) == 12
    assert multinomial((0, 3)) == 1
    assert multinomial(()) == 1
    assert multinomial((1, -1)) == 0


def test_composition_normalises_trailing_zeros():
    assert Composition((2, 1, 0, 0)) == Composition((2, 1))
    assert Composition((1, 2)).half_length == 3
    assert str(Composition((1, 2))) == "1+2"
    assert Composition((1, 2)).reverse() == Composition((2, 1))
    with pytest.raises(ValueError):
        Composition(())
    with pytest.raises(ValueError):
        Composition((0,))
    with pytest.raises(ValueError):
        Composition((1, 0, 2))


def test_enumeration_order_small():
    assert [c.parts for c in compositions(3)] == [(3,), (2, 1), (1, 2), (1, 1, 1)]
    assert [c.parts for c in compositions(1)] == [(1,)]


@pytest.mark.parametrize("h", range(1, 9))
def test_compositions_match_brute_force(h):
    listed = [c.parts for c in compositions(h)]
    assert len(listed) == count_compositions(h) == 2 ** (h - 1)
    assert set(listed) == brute_compositions(h)


@given(st.integers(1, 14), st.data())
def test_random_access_agrees_with_iteration(h, data):
    index = data.draw(st.integers(0, 2 ** (h - 1) - 1))
    assert composition_at(h, index) == next(compositions(h, index, index + 1))


def test_composition_at_bounds():
    with pytest.raises(IndexError):
        composition_at(3, 4)


@given(st.integers(1, 10), st.data())
def test_slices_tile_the_full_range(h, data):
    total = 2 ** (h - 1)
    cut = data.draw(st.integers(0, total))
    assert list(compositions(h, 0, cut)) + list(compositions(h, cut)) == list(compositions(h))


@pytest.mark.parametrize(
    "parts,expected",
    [
        ((2,), Fraction(1, 2)),
        ((1, 1), Fraction(1)),
        ((3,), Fraction(1, 3)),
        ((2, 1), Fraction(1)),
        ((1, 2), Fraction(1)),
        ((1, 1, 1), Fraction(1)),
        ((4,), Fraction(1, 4)),
        ((2, 2), Fraction(3, 2)),
        ((1, 2, 1), Fraction(2)),
        ((1, 1, 1, 1), Fraction(1)),
    ],
)
def test_composition_coefficient_values(parts, expected):
    assert composition_coefficient(parts) == expected


@pytest.mark.parametrize("h", range(1, 11))
def test_coefficient_sum(h):
    assert coefficient_sum(h) == Fraction(binomial(2 * h, h), 2 * h)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_coefficients_count_edge_profiles(n):
    # (n/2) c(l) counts closed 1d walks of length n whose first step is to
    # the right and which cross their i-th covered edge 2 l_i times.
    profiles = oracle_edge_profiles(n)
    for c in compositions(n // 2):
        assert n // 2 * composition_coefficient(c) == profiles.get(c, 0), c
    assert sum(profiles.values()) == binomial(n, n // 2) // 2


def test_edge_profiles_length_six():
    profiles = {str(c): v for c, v in oracle_edge_profiles(6).items()}
    assert profiles == {"3": 1, "2+1": 3, "1+2": 3, "1+1+1": 3}


@given(st.lists(st.integers(1, 6), min_size=1, max_size=6))
def test_coefficient_is_positive(parts):
    assert composition_coefficient(parts) > 0


@pytest.mark.parametrize("h", range(1, 11))
def test_mirror_classes(h):
    comps = list(compositions(h))
    pal = sum(classify_composition(c) is MirrorClass.PALINDROMIC for c in comps)
    classes = {min(c.parts, c.reverse().parts) for c in comps}
    assert mirror_class_counts(h) == (pal, len(classes))


def test_multiplicity_vectors():
    assert sorted(multiplicity_vectors(3, 3)) == [(0, 0, 1), (1, 1, 0), (3, 0, 0)]
    assert list(multiplicity_vectors(0, 2)) == [(0, 0)]


@given(st.integers(0, 12), st.integers(1, 12))
def test_multiplicity_vectors_are_partitions(total, max_part):
    vecs = list(multiplicity_vectors(total, max_part))
    assert len(set(vecs)) == len(vecs)
    for v in vecs:
        assert len(v) == max_part
        assert sum(i * m for i, m in enumerate(v, start=1)) == total
    if max_part >= total:
        # number of integer partitions, by the standard recurrence
        p = [1] + [0] * total
        for part in range(1, total + 1):
            for s in range(part, total + 1):
                p[s] += p[s - part]
        assert len(vecs) == p[total]
