from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from mapenum.errors import DomainError, HypergeometricDomainError
from mapenum.exact import (
    GAMMA,
    ETA,
    ZETA,
    bernoulli_numbers,
    bigfloat,
    binomial,
    combinatorial_primitives,
    double_factorial,
    falling_factorial,
    hypergeom_2f1_terminating,
    param_eval,
    param_function,
    pochhammer,
    rank,
    solve_linear,
    to_rational,
)

rationals = st.builds(Fraction, st.integers(-999, 999), st.integers(1, 50))


def test_primitive_examples():
    assert combinatorial_primitives("binomial", 3, 1) == 3
    assert combinatorial_primitives("double_factorial", 7) == 105
    assert combinatorial_primitives("pochhammer", -2, 4) == 0
    assert double_factorial(-1) == 1 and double_factorial(0) == 1
    with pytest.raises(DomainError):
        double_factorial(-2)
    with pytest.raises(DomainError):
        combinatorial_primitives("gamma", 1)


def test_binomial_negative_upper():
    # (-1 choose k) = (-1)^k
    assert [binomial(-1, k) for k in range(5)] == [1, -1, 1, -1, 1]
    assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binomial(5, -1) == 0


def test_falling_factorial():
    assert falling_factorial(-2, 4) == 120
    assert falling_factorial(5, 0) == 1
    assert falling_factorial(5, 6) == 0


def test_bernoulli_examples():
    assert bernoulli_numbers(2) == [1, Fraction(-1, 2), Fraction(1, 6)]
    B = bernoulli_numbers(12)
    assert B[4] == Fraction(-1, 30)
    assert B[12] == Fraction(-691, 2730)
    assert B[4] / 8 == Fraction(-1, 240)


def test_bernoulli_defining_recurrence():
    B = bernoulli_numbers(40)
    for m in range(1, 40):
        assert sum(binomial(m + 1, k) * B[k] for k in range(m + 1)) == 0
    assert all(B[k] == 0 for k in range(3, 41, 2))


def test_hypergeom_examples():
    assert hypergeom_2f1_terminating(0, 5, 7, 3) == 1
    assert hypergeom_2f1_terminating(-1, -2, -1, -1) == 3
    assert hypergeom_2f1_terminating(-1, 1, 1, 1) == 0


def test_hypergeom_domain_error():
    # (c)_1 = 0 while the numerator is still alive
    with pytest.raises(HypergeometricDomainError):
        hypergeom_2f1_terminating(-2, 3, 0, 1)
    # numerator dies at k=1 before (c)_2 vanishes
    assert hypergeom_2f1_terminating(-3, -1, -1, 2) == 1 + Fraction(-3 * -1, -1) * 2


@given(st.integers(0, 6), rationals, rationals, rationals)
def test_hypergeom_matches_direct_sum(n, b, c, z):
    a = -n
    if any(c + k == 0 for k in range(n)):
        return
    direct = sum(
        pochhammer(a, k) * pochhammer(b, k) / (pochhammer(c, k) * pochhammer(1, k)) * z**k for k in range(n + 1)
    )
    assert hypergeom_2f1_terminating(a, b, c, z) == direct


@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


def test_to_rational():
    assert to_rational("-3/7") == Fraction(-3, 7)
    assert to_rational("0.25") == Fraction(1, 4)
    with pytest.raises(TypeError):
        to_rational(0.25)


def test_param_functions_canonical():
    g = param_function("gamma")
    a = param_function("gamma*(3*gamma+1)/216")
    b = (GAMMA * (3 * GAMMA + 1) * (ZETA + ETA)) / (216 * (ZETA + ETA))
    assert a == b
    assert g / g == 1
    assert param_eval(a, Fraction(1), 0, 0) == Fraction(4, 216)


def test_bigfloat_precision():
    x = bigfloat(Fraction(1, 3), 50)
    with mpmath.workdps(60):
        assert abs(x - mpmath.mpf(1) / 3) < mpmath.mpf(10) ** -49


def test_linear_algebra():
    M = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    assert solve_linear(M, [Fraction(3), Fraction(4)]) == [1, 1]
    assert rank([[1, 2], [2, 4]]) == 1
    with pytest.raises(ZeroDivisionError):
        solve_linear([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], [Fraction(1), Fraction(1)])
