"""Univariate truncated power series over an arbitrary coefficient ring.

Coefficients may be Fractions, mpf values or parameter rational functions;
only ``+ - * /`` and comparison with 0 are required of them. A series of
order ``k`` stores coefficients 0..k and claims nothing beyond ``O(x^(k+1))``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SeriesError


def _zero_like(c):
    return c * 0


def _recip(c):
    # keep integer scalars exact
    if isinstance(c, int):
        return Fraction(1, c)
    return 1 / c


class TruncatedSeries:
    """A power series ``sum c_k x^k + O(x^(order+1))``."""

    __slots__ = ("coeffs", "order", "var")

    def __init__(self, coeffs: Iterable, order: int | None = None, var: str = "t"):
        coeffs = list(coeffs)
        if not coeffs:
            coeffs = [Fraction(0)]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise SeriesError("order must be >= 0")
        zero = _zero_like(coeffs[0])
        coeffs = coeffs[: order + 1] + [zero] * (order + 1 - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.order = order
        self.var = var

    # -- construction ------------------------------------------------------

    @classmethod
    def variable(cls, order: int, var: str = "t", one=Fraction(1)) -> "TruncatedSeries":
        return cls([one * 0, one], order, var)

    @classmethod
    def constant(cls, value, order: int, var: str = "t") -> "TruncatedSeries":
        return cls([value], order, var)

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries([other], self.order, self.var)

    # -- access ------------------------------------------------------------

    def __getitem__(self, k: int):
        if k < 0:
            raise IndexError(k)
        if k > self.order:
            raise SeriesError(f"coefficient {k} is beyond the stored order {self.order}")
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, min(order, self.order), self.var)

    def map(self, fn) -> "TruncatedSeries":
        return TruncatedSeries([fn(c) for c in self.coeffs], self.order, self.var)

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = list(self.coeffs)
            c[0] = c[0] + other
            return TruncatedSeries(c, self.order, self.var)
        n = min(self.order, other.order)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)], n, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order, self.var)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([c * other for c in self.coeffs], self.order, self.var)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            acc = _zero_like(a[0] * b[0])
            for i in range(k + 1):
                if a[i] != 0 and b[k - i] != 0:
                    acc = acc + a[i] * b[k - i]
            out.append(acc)
        return TruncatedSeries(out, n, self.var)

    def __rmul__(self, other):
        return TruncatedSeries([other * c for c in self.coeffs], self.order, self.var)

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; needs a nonzero constant term."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = _recip(c0)
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = _zero_like(inv0)
            for i in range(1, k + 1):
                if self.coeffs[i] != 0:
                    acc = acc + self.coeffs[i] * out[k - i]
            out.append(-acc * inv0)
        return TruncatedSeries(out, self.order, self.var)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        if other == 0:
            raise ZeroDivisionError("division of a series by zero")
        inv = _recip(other)
        return TruncatedSeries([c * inv for c in self.coeffs], self.order, self.var)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncatedSeries([self.coeffs[0] * 0 + 1], self.order, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.order == other.order and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        # comparison with a scalar: equal when the series is that constant
        return self.coeffs[0] == other and all(c == 0 for c in self.coeffs[1:])

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    # -- calculus ----------------------------------------------------------

    def derivative(self) -> "TruncatedSeries":
        if self.order == 0:
            return TruncatedSeries([_zero_like(self.coeffs[0])], 0, self.var)
        return TruncatedSeries([k * self.coeffs[k] for k in range(1, self.order + 1)], self.order - 1, self.var)

    def integral(self, constant=0) -> "TruncatedSeries":
        out = [constant + _zero_like(self.coeffs[0])]
        for k, c in enumerate(self.coeffs):
            out.append(c / (k + 1) if not isinstance(c, int) else Fraction(c, k + 1))
        return TruncatedSeries(out, self.order + 1, self.var)

    def log(self, log_c0=None) -> "TruncatedSeries":
        """Series logarithm.

        The constant term must be 1 unless ``log_c0`` supplies log(c0).
        """
        c0 = self.coeffs[0]
        if log_c0 is None:
            if c0 != 1:
                raise SeriesError("log of a series needs constant term 1 (or an explicit log_c0)")
            log_c0 = _zero_like(c0)
        if self.order == 0:
            return TruncatedSeries([log_c0], 0, self.var)
        return (self.derivative() / self.truncate(self.order - 1)).integral(log_c0)

    def exp(self) -> "TruncatedSeries":
        if self.coeffs[0] != 0:
            raise SeriesError("exp needs a zero constant term in exact arithmetic")
        out = [self.coeffs[0] * 0 + 1]
        d = [k * self.coeffs[k] for k in range(self.order + 1)]
        for n in range(1, self.order + 1):
            acc = _zero_like(out[0])
            for k in range(1, n + 1):
                acc = acc + d[k] * out[n - k]
            out.append(Fraction(acc, n) if isinstance(acc, int) else acc / n)
        return TruncatedSeries(out, self.order, self.var)

    def sqrt(self, sqrt_c0=None) -> "TruncatedSeries":
        """Square root with the branch fixed by ``sqrt_c0`` (defaults to the
        exact root of a perfect-square Fraction, or ``c0 ** 0.5`` otherwise)."""
        c0 = self.coeffs[0]
        if sqrt_c0 is None:
            if isinstance(c0, Fraction):
                rn, rd = math.isqrt(c0.numerator), math.isqrt(c0.denominator)
                if c0 < 0 or rn * rn != c0.numerator or rd * rd != c0.denominator:
                    raise SeriesError("constant term has no exact rational square root")
                sqrt_c0 = Fraction(rn, rd)
            else:
                sqrt_c0 = c0 ** 0.5
        if sqrt_c0 == 0:
            raise SeriesError("sqrt of a series with zero constant term")
        out = [sqrt_c0]
        two_r0 = 2 * sqrt_c0
        for k in range(1, self.order + 1):
            acc = self.coeffs[k]
            for i in range(1, k):
                acc = acc - out[i] * out[k - i]
            out.append(acc / two_r0)
        return TruncatedSeries(out, self.order, self.var)

    # -- composition -------------------------------------------------------

    def __call__(self, x):
        """Evaluate (Horner) at a scalar, or compose with a series."""
        if isinstance(x, TruncatedSeries):
            return self.compose(x)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """``self(inner(x))`` for ``inner(0) == 0``.

        The result carries order ``min(self.order, inner.order)``: terms of
        ``self`` beyond its order and of ``inner`` beyond its order are unknown.
        """
        if inner.coeffs[0] != 0:
            raise SeriesError("composition needs an inner series with zero constant term")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        acc = TruncatedSeries([self.coeffs[n]], n, inner.var)
        for k in range(n - 1, -1, -1):
            acc = acc * inner + self.coeffs[k]
        return acc

    def reversion(self) -> "TruncatedSeries":
        return series_reversion(self)

    # -- display -----------------------------------------------------------

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(f"{c}")
            elif k == 1:
                terms.append(f"({c})*{self.var}")
            else:
                terms.append(f"({c})*{self.var}^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({self.var}^{self.order + 1})"


def series_reversion(s: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse ``r`` with ``s(r(x)) = x`` to the stored order."""
    if s.order < 1:
        raise SeriesError("reversion needs order >= 1")
    if s.coeffs[0] != 0:
        raise SeriesError("reversion needs a zero constant term")
    a1 = s.coeffs[1]
    if a1 == 0:
        raise SeriesError("reversion needs a nonzero linear coefficient")
    zero = _zero_like(a1)
    inv_a1 = _recip(a1)
    r = [zero, inv_a1]
    # order-by-order: [x^k] s(r) = a1 * r_k + (terms in r_1..r_{k-1})
    for k in range(2, s.order + 1):
        trial = TruncatedSeries(r + [zero], k, s.var)
        excess = s.truncate(k).compose(trial).coeffs[k]
        r.append(-excess * inv_a1)
    return TruncatedSeries(r, s.order, s.var)


def series_from(coeffs: Sequence, var: str = "t") -> TruncatedSeries:
    return TruncatedSeries(coeffs, len(coeffs) - 1, var)
