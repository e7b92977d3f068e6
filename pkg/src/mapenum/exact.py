"""Exact and high-precision arithmetic substrate.

Scalars are :class:`fractions.Fraction` (always reduced, positive denominator).
Symbolic coefficients in the parameters gamma, zeta, eta live in a sympy
fraction field, whose elements are kept gcd-reduced so equality is decidable.
High-precision floats are :mod:`mpmath` ``mpf`` values.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import mpmath
import sympy
from sympy import QQ
from sympy.polys.fields import FracElement, field
from sympy.polys.orderings import lex

from .errors import DomainError, HypergeometricDomainError

ExactRational = Fraction

# Default working precision (decimal digits) for BigFloat values.
DEFAULT_DPS = int(os.environ.get("MAPENUM_PRECISION", "256"))


def to_rational(value) -> Fraction:
    """Parse ``value`` into an exact Fraction.

    Accepts ints, Fractions, sympy rationals and strings such as ``"-3/7"`` or
    ``"0.25"``. Binary floats are rejected because they are rarely what the
    caller meant in an exact computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError("refusing to convert a binary float to an exact rational; pass a string")
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def fraction_str(x: Fraction) -> str:
    return str(to_rational(x))


# --------------------------------------------------------------------------
# combinatorial primitives
# --------------------------------------------------------------------------


def binomial(n, k: int) -> Fraction:
    """Binomial coefficient, polynomial in the upper index.

    ``n`` may be any rational (negative integers included); ``k`` is an
    integer and the result is 0 for ``k < 0``.
    """
    k = int(k)
    if k < 0:
        return Fraction(0)
    n = to_rational(n)
    if n.denominator == 1 and n >= 0:
        return Fraction(math.comb(int(n), k))
    num = Fraction(1)
    for i in range(k):
        num *= n - i
    return num / math.factorial(k)


def double_factorial(n: int) -> Fraction:
    """n!! for n >= -1 (with 0!! = (-1)!! = 1)."""
    n = int(n)
    if n < -1:
        raise DomainError(f"double factorial undefined for {n}")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return Fraction(out)


def pochhammer(x, n: int):
    """Rising factorial (x)_n = x (x+1) ... (x+n-1), n >= 0.

    Works for any ring element ``x``; for ints/strings the result is a Fraction.
    """
    n = int(n)
    if n < 0:
        raise DomainError("pochhammer length must be >= 0")
    if isinstance(x, (int, str)):
        x = to_rational(x)
    out = Fraction(1) if isinstance(x, Fraction) else 1
    for i in range(n):
        out = out * (x + i)
    return out


def falling_factorial(x, n: int) -> Fraction:
    """x (x-1) ... (x-n+1), n >= 0."""
    n = int(n)
    if n < 0:
        raise DomainError("falling factorial length must be >= 0")
    x = to_rational(x)
    out = Fraction(1)
    for i in range(n):
        out *= x - i
    return out


def combinatorial_primitives(kind: str, *args) -> Fraction:
    if kind == "binomial":
        return binomial(*args)
    if kind == "double_factorial":
        return double_factorial(*args)
    if kind == "pochhammer":
        return to_rational(pochhammer(*args))
    if kind == "falling_factorial":
        return falling_factorial(*args)
    raise DomainError(f"unknown primitive {kind!r}")


# --------------------------------------------------------------------------
# Bernoulli numbers
# --------------------------------------------------------------------------


def bernoulli_numbers(m_max: int) -> list[Fraction]:
    """B_0 .. B_{m_max} exactly, with B_1 = -1/2 (so B_2 = 1/6, B_4 = -1/30).

    Computed with the Akiyama-Tanigawa triangle, which natively produces the
    B_1 = +1/2 convention; the sign of B_1 is flipped afterwards.
    """
    if m_max < 0:
        raise DomainError("m_max must be >= 0")
    a = [Fraction(0)] * (m_max + 1)
    out = []
    for m in range(m_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if m_max >= 1:
        out[1] = -out[1]
    return out


# --------------------------------------------------------------------------
# terminating Gauss hypergeometric function
# --------------------------------------------------------------------------


def hypergeom_2f1_terminating(a: int, b, c, z) -> Fraction:
    """Exact 2F1(a, b; c; z) for a nonpositive integer ``a``.

    The sum runs over k = 0..|a|. A denominator Pochhammer (c)_k that vanishes
    is tolerated only when the numerator has already vanished at or before
    that k (the series has terminated); otherwise HypergeometricDomainError.
    """
    if int(a) != a or a > 0:
        raise DomainError("a must be a nonpositive integer")
    a = int(a)
    b, c, z = to_rational(b), to_rational(c), to_rational(z)
    total = Fraction(1)
    term = Fraction(1)
    for k in range(-a):
        num = (a + k) * (b + k)
        den = (c + k) * (k + 1)
        if num == 0:
            break
        if den == 0:
            raise HypergeometricDomainError(
                f"2F1({a},{b};{c};{z}): (c)_{k + 1} vanishes before termination"
            )
        term = term * num / den * z
        total += term
    return total


# --------------------------------------------------------------------------
# parameter rational functions in (gamma, zeta, eta)
# --------------------------------------------------------------------------

PARAM_NAMES = ("gamma", "zeta", "eta")
PARAM_FIELD, GAMMA, ZETA, ETA = field(",".join(PARAM_NAMES), QQ, lex)
ParamRationalFunction = FracElement

_PARAM_SYMBOLS = {name: sympy.Symbol(name) for name in PARAM_NAMES}


def param_function(value) -> FracElement:
    """Build a ParamRationalFunction from a string, number or sympy expression."""
    if isinstance(value, FracElement):
        return value
    if isinstance(value, (int, Fraction)):
        value = to_rational(value)
        return PARAM_FIELD(value.numerator) / value.denominator
    if isinstance(value, str):
        value = sympy.sympify(value, locals=_PARAM_SYMBOLS)
    return PARAM_FIELD.from_expr(sympy.nsimplify(value) if isinstance(value, sympy.Float) else value)


def param_str(value: FracElement) -> str:
    return str(value.as_expr())


def _eval_poly(poly, values: Sequence):
    total = 0
    for monom, coeff in poly.terms():
        term = Fraction(int(coeff.numerator), int(coeff.denominator))
        for v, e in zip(values, monom):
            if e:
                term = term * v**e
        total = total + term
    return total


def param_eval(value, gamma=0, zeta=0, eta=0):
    """Evaluate a ParamRationalFunction at numeric (Fraction or mpf) parameters."""
    if not isinstance(value, FracElement):
        return value
    vals = (gamma, zeta, eta)
    den = _eval_poly(value.denom, vals)
    if den == 0:
        raise ZeroDivisionError("parameter rational function has a pole here")
    return _eval_poly(value.numer, vals) / den


def is_zero(value) -> bool:
    return value == 0


# --------------------------------------------------------------------------
# BigFloat
# --------------------------------------------------------------------------

BigFloat = mpmath.mpf


def bigfloat(value, dps: int | None = None) -> mpmath.mpf:
    """Convert ``value`` to an mpf rounded (to nearest) at ``dps`` digits."""
    dps = DEFAULT_DPS if dps is None else int(dps)
    with mpmath.workdps(dps):
        if isinstance(value, Fraction):
            return mpmath.mpf(value.numerator) / value.denominator
        if isinstance(value, str) and "/" in value:
            return bigfloat(to_rational(value), dps)
        return +mpmath.mpf(value)


def bigfloat_str(value, dps: int | None = None) -> str:
    dps = DEFAULT_DPS if dps is None else int(dps)
    return mpmath.nstr(value, dps)


def solve_linear(matrix: list[list], rhs: list) -> list:
    """Gaussian elimination over any exact field (Fraction, FracElement, mpf).

    Raises ZeroDivisionError when the matrix is singular.
    """
    n = len(matrix)
    m = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular linear system")
        m[col], m[pivot] = m[pivot], m[col]
        inv = Fraction(1, m[col][col]) if isinstance(m[col][col], int) else 1 / m[col][col]
        for i in range(n):
            if i != col and m[i][col] != 0:
                factor = m[i][col] * inv
                m[i] = [a - factor * b for a, b in zip(m[i], m[col])]
    return [m[i][n] * (Fraction(1, m[i][i]) if isinstance(m[i][i], int) else 1 / m[i][i]) for i in range(n)]


def rank(matrix: list[list]) -> int:
    """Exact rank over a field."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col] / rows[r][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def sum_exact(values: Iterable) -> Fraction:
    return sum(values, Fraction(0))
