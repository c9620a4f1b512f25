import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ap3lab.apcount import (
    Ap3Count,
    complement_identity_check,
    count_3aps,
    count_3aps_naive,
    count_3aps_spectral,
    split_spectrum,
)
from ap3lab.errors import ConsistencyError, ValidationError
from ap3lab.zpz import full_set, make_residue_set
from oracles import count_nm, count_pairs


@pytest.mark.parametrize(
    "p, members, total, nontrivial",
    [(5, range(5), 25, 20), (7, [0, 1, 2], 5, 2), (5, [0, 1], 2, 0), (7, [], 0, 0)],
)
def test_naive_examples(p, members, total, nontrivial):
    c = count_3aps_naive(make_residue_set(p, members))
    assert (c.total, c.nontrivial, c.trivial) == (total, nontrivial, len(set(members)))


def test_ap3count_rejects_inconsistent_parts():
    with pytest.raises(ConsistencyError):
        Ap3Count(5, 3, 1)


def test_spectral_examples():
    assert count_3aps_spectral(full_set(5)) == pytest.approx(25.0, abs=1e-9)
    assert count_3aps_spectral(make_residue_set(7, [0, 1, 2])) == pytest.approx(5.0, abs=1e-6)
    assert count_3aps_spectral(make_residue_set(5, [])) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([5, 7, 11, 13, 17, 67, 127, 131]), st.data())
def test_count_properties(p, data):
    members = data.draw(st.lists(st.integers(0, p - 1), max_size=p))
    S = make_residue_set(p, members)
    c = count_3aps_naive(S)
    assert c.total == count_pairs(p, members)
    if p <= 17:
        assert c.total == count_nm(p, members)
    assert c.trivial == S.cardinality
    assert c.nontrivial % 2 == 0
    assert abs(count_3aps_spectral(S) - c.total) <= 1e-6 * max(1, c.total)
    a, b = data.draw(st.integers(1, p - 1)), data.draw(st.integers(0, p - 1))
    from ap3lab.zpz import affine_map

    assert count_3aps(affine_map(S, a, b)) == c.total


def test_split_examples():
    S = make_residue_set(7, [0, 1, 2])
    sp = split_spectrum(S, 10)
    assert sp.M == 0 and sp.sigma1 == 0
    assert sp.sigma2.real == pytest.approx(7 * 5) and abs(sp.sigma2.imag) < 1e-9
    sp = split_spectrum(full_set(5), 1)
    assert sp.large_freqs == (0,)
    assert sp.sigma1.real == pytest.approx(125) and abs(sp.sigma2) < 1e-9


def test_split_degenerate_threshold():
    S = make_residue_set(11, [0, 1, 3])
    sp = split_spectrum(S, 1e-12)
    assert sp.M == 11  # no coefficient of a 3-element set mod 11 vanishes
    assert abs(sp.sigma2) < 1e-9


def test_split_rejects_nonpositive_threshold():
    with pytest.raises(ValidationError):
        split_spectrum(make_residue_set(7, [1]), 0)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([7, 31, 101]), st.data(), st.floats(0.01, 50))
def test_split_parseval_bound_and_sum(p, data, T):
    members = data.draw(st.lists(st.integers(0, p - 1), max_size=p))
    S = make_residue_set(p, members)
    sp = split_spectrum(S, T)
    assert sp.M * T * T <= p * S.cardinality * (1 + 1e-9)
    total = sp.sigma1 + sp.sigma2
    assert abs(total - p * count_3aps(S)) <= 1e-6 * max(1, p * count_3aps(S))


def test_complement_identity_examples():
    assert complement_identity_check(make_residue_set(5, [0, 1])) == (2, 5)
    assert complement_identity_check(full_set(7)) == (49, 0)
    assert complement_identity_check(make_residue_set(7, [])) == (0, 49)
