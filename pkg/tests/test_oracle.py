from __future__ import annotations

from fractions import Fraction
import math

import pytest
from hypothesis import given, settings, strategies as st

from mapenum.errors import CapExceededError, DomainError
from mapenum.exact import double_factorial
from mapenum.oracle import (
    GenusHistogram,
    RotationMap,
    enumerate_matchings_by_genus,
    genus_of_map,
    labeled_to_unlabeled,
    min_vertices,
)


def test_genus_examples():
    assert genus_of_map(RotationMap.from_edges([4], [(0, 2), (1, 3)])) == 1
    assert genus_of_map(RotationMap.from_edges([4], [(0, 1), (2, 3)])) == 0
    assert genus_of_map(RotationMap.from_edges([2, 2], [(0, 2), (1, 3)])) == 0


def test_rotation_map_validation():
    with pytest.raises(DomainError):
        RotationMap((3,), (1, 0, 2))
    with pytest.raises(DomainError):
        RotationMap((2,), (0, 1))


def test_one_vertex_quartic():
    h = enumerate_matchings_by_genus([4])
    assert h.counts == {0: 2, 1: 1} and h.total == 3
    assert enumerate_matchings_by_genus([4], connected_only=False).total == 3


def test_two_trivalent_vertices():
    h = enumerate_matchings_by_genus([3, 3])
    allp = enumerate_matchings_by_genus([3, 3], connected_only=False)
    assert allp.total == 15
    # disconnected pairings would need an odd number of darts paired within a vertex
    assert h.total == 15
    assert h.counts == {0: 12, 1: 3}


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=4).filter(lambda v: sum(v) % 2 == 0 and sum(v) <= 12))
def test_unrestricted_total_is_double_factorial(vals):
    h = enumerate_matchings_by_genus(vals, connected_only=False)
    assert h.total == double_factorial(sum(vals) - 1)
    assert all(g >= 0 or len(vals) > 1 for g in h.counts)


@pytest.mark.parametrize("nu,j", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_euler_bound(nu, j):
    h = enumerate_matchings_by_genus([2 * nu] * j)
    for g in h.counts:
        assert g >= 0
        assert j >= min_vertices(g, nu)


def test_workers_do_not_change_result():
    a = enumerate_matchings_by_genus([4, 4, 4])
    b = enumerate_matchings_by_genus([4, 4, 4], workers=3)
    assert a.counts == b.counts


def test_cap():
    with pytest.raises(CapExceededError) as exc:
        enumerate_matchings_by_genus([4] * 7)
    assert exc.value.required == 28
    with pytest.raises(DomainError):
        enumerate_matchings_by_genus([3])


def test_labeled_to_unlabeled():
    assert labeled_to_unlabeled(2, 1, 2) == Fraction(1, 2)
    assert labeled_to_unlabeled(0, 5, 3) == 0
    assert labeled_to_unlabeled(105, 2, 2) == Fraction(105, 32)


def test_min_vertices():
    assert min_vertices(5, 2) == 9
    assert min_vertices(0, 2) == 1
    assert min_vertices(2, 3) == 2


def test_histogram_export():
    h = enumerate_matchings_by_genus([4])
    assert h.to_csv().splitlines() == ["genus,labeled_count,unlabeled_count", "0,2,1/2", "1,1,1/4"]
    assert '"labeled_count": "2"' in h.to_json()
