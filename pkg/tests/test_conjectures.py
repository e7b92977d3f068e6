from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mapenum.conjectures import (
    C2_SEED,
    cg_bernoulli_check,
    cg_closed_g2,
    cg_recursion,
    cm_match_check,
    commutation_check,
    conjecture1_check,
    conjecture1_lhs,
    conjecture1_rhs,
    count_ratios,
    interlacing_check,
    load_polynomials,
    r_vector_check,
    route_equivalence_check,
)
from mapenum.errors import DegreeGapError, DomainError
from mapenum.exact import bernoulli_numbers


def test_conjecture1_small_case():
    assert conjecture1_lhs(1, 0, 1) == 6 == conjecture1_rhs(1, 0, 1)


@settings(max_examples=50)
@given(st.integers(1, 12), st.integers(0, 12), st.integers(1, 12))
def test_conjecture1_random_points(g, ell, j):
    assert conjecture1_lhs(g, ell, j) == conjecture1_rhs(g, ell, j)


def test_conjecture1_report():
    rep = conjecture1_check(4, 4, 4)
    assert rep.passed and len(rep.cases) == 5 * 4 * 4
    assert json.loads(rep.to_json())["first_failure"] is None
    with pytest.raises(DomainError):
        conjecture1_check(2, 0, 2)


def test_bernoulli_recursion():
    C = cg_recursion(3)
    B = bernoulli_numbers(6)
    assert -C[2] == B[4] / 8 == Fraction(-1, 240)
    assert -C[3] == B[6] / 24 == Fraction(1, 1008)
    assert cg_closed_g2() == C2_SEED
    assert cg_bernoulli_check(30).passed


def test_bernoulli_wrong_seed_fails():
    C = cg_recursion(4, seed=Fraction(1, 241))
    assert -C[4] != bernoulli_numbers(8)[8] / 48


def test_interlacing_examples():
    assert interlacing_check([["1", "-1"], ["1", "-3", "1"]]).passed
    assert not interlacing_check([["1", "0"], ["1", "0", "1"]]).passed
    assert interlacing_check([]).passed
    assert interlacing_check([["1", "2"]]).passed
    # shared root is not strict interlacing
    assert not interlacing_check([["1", "-1"], ["1", "0", "-1"]]).passed
    # real roots that do not interlace
    assert not interlacing_check([["1", "-10"], ["1", "0", "-1"]]).passed
    with pytest.raises(DegreeGapError):
        interlacing_check([["1", "0"], ["1", "0", "0", "-1"]])


def test_interlacing_chebyshev():
    # consecutive Chebyshev polynomials interlace
    T = [[1], [1, 0], [2, 0, -1], [4, 0, -3, 0], [8, 0, -8, 0, 1]]
    assert interlacing_check(T).passed
    text = json.dumps({"polynomials": [[str(c) for c in t] for t in T]})
    assert len(load_polynomials(text)) == 5


def test_count_ratios():
    assert count_ratios({1: 2, 2: 6, 3: 5}, {1: 1, 2: 4, 4: 1}) == [(1, 2), (2, Fraction(3, 2))]


def test_suites_small():
    assert commutation_check([2, 3], 5).passed
    assert r_vector_check([2, 3], 6).passed
    assert route_equivalence_check([2], 6, samples=3).passed
    assert cm_match_check("dp1-sfu").passed
