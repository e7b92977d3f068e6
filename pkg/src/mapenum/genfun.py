"""Generating functions and map counts for regular even valence 2*nu.

The genus-g generating function is written as a partial fraction in
D = nu - (nu-1) z0, where z0(t) solves 1 = z0 + c_nu t z0^nu:

    e_g = C + sum_l q0_l / D^(2g+l-2)

Counts N(g, j) = (-1)^j d^j e_g/dt^j at t = 0 are reachable through four
independent routes, all exact: Taylor coefficients of e_g(z0(t)), the
bidiagonal q-recurrence, the 4-valent band contraction, and a terminating 2F1
sum. Trivalent genus 0..2 generating functions are also provided.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import mpmath

from .errors import (
    BranchLostError,
    DimensionMismatchError,
    DomainError,
    SingularityError,
    SupportEscapeError,
)
from .exact import binomial, hypergeom_2f1_terminating, to_rational
from .series import TruncatedSeries

C2 = 12


def c_nu(nu: int) -> Fraction:
    """c_nu = 2 nu binom(2nu - 1, nu - 1)."""
    if nu < 1:
        raise DomainError("nu must be >= 1")
    return Fraction(2 * nu * math.comb(2 * nu - 1, nu - 1))


@dataclass(frozen=True)
class StringEquationSpec:
    nu: int

    @property
    def c(self) -> Fraction:
        return c_nu(self.nu)

    def residual(self, z0, t):
        return z0 + self.c * t * z0**self.nu - 1


# ---------------------------------------------------------------------------
# z0 and its derivative
# ---------------------------------------------------------------------------


def z0_series(nu: int, order: int) -> TruncatedSeries:
    """Power series of z0(t) with z0(0) = 1, exact to O(t^(order+1))."""
    if order < 0:
        raise DomainError("order must be >= 0")
    c = c_nu(nu)
    t = TruncatedSeries.variable(order, "t")
    z = TruncatedSeries.constant(Fraction(1), order, "t")
    # each pass of z <- 1 - c t z^nu fixes one more coefficient
    for _ in range(order):
        z = 1 - c * t * z**nu
    return z


def z0_numeric(nu: int, t, tol=None, dps: int = 50, steps: int = 64):
    """Root of z + c_nu t z^nu = 1 on the branch through z0(0) = 1.

    The root is continued from t = 0 in ``steps`` increments with Newton
    corrections; BranchLostError is raised when the continuation meets the
    fold where 1 + nu c t z^(nu-1) vanishes.
    """
    c = c_nu(nu)
    with mpmath.workdps(dps + 10):
        t = mpmath.mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else mpmath.mpf(t)
        tol = mpmath.mpf(10) ** (-dps) if tol is None else mpmath.mpf(tol)
        cm = mpmath.mpf(c.numerator)
        z = mpmath.mpf(1)
        for i in range(1, steps + 1):
            ti = t * i / steps
            for _ in range(200):
                f = z + cm * ti * z**nu - 1
                fp = 1 + nu * cm * ti * z ** (nu - 1)
                if abs(fp) < mpmath.mpf(10) ** (-dps // 2):
                    raise BranchLostError(f"string equation fold reached near t = {mpmath.nstr(ti, 10)}")
                dz = f / fp
                z -= dz
                if abs(dz) <= tol * max(1, abs(z)):
                    break
            else:
                raise BranchLostError(f"Newton failed to converge at t = {mpmath.nstr(ti, 10)}")
            # z0 is monotone in t along the branch, and stays below nu/(nu-1)
            if nu > 1 and z >= mpmath.mpf(nu) / (nu - 1):
                raise BranchLostError("continuation crossed z0 = nu/(nu-1)")
        resid = abs(z + cm * t * z**nu - 1)
        if resid > tol:
            raise BranchLostError(f"residual {mpmath.nstr(resid, 5)} above tolerance")
        return +z


def dz0_dt(nu: int, z0):
    """dz0/dt = -c_nu z0^(nu+1) / (nu - (nu-1) z0); generic over scalars and series."""
    den = nu - (nu - 1) * z0
    if (den[0] if isinstance(den, TruncatedSeries) else den) == 0:
        raise SingularityError("nu - (nu-1) z0", "z0 = nu/(nu-1)")
    return -c_nu(nu) * z0 ** (nu + 1) / den


# ---------------------------------------------------------------------------
# q-coefficient vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QVector:
    """Coefficients q_0^(j) .. q_{3g-4+j}^(j) of the j-th derivative."""

    g: int
    j: int
    nu: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(to_rational(e) for e in self.entries))
        if self.g < 2 or self.j < 1:
            raise DomainError("QVector needs g >= 2 and j >= 1")
        if len(self.entries) != 3 * self.g - 3 + self.j:
            raise DimensionMismatchError(
                f"QVector(g={self.g}, j={self.j}) needs {3 * self.g - 3 + self.j} entries, got {len(self.entries)}"
            )

    @classmethod
    def zeros(cls, g: int, j: int, nu: int) -> "QVector":
        return cls(g, j, nu, (Fraction(0),) * (3 * g - 3 + j))

    def __getitem__(self, ell: int) -> Fraction:
        if 0 <= ell < len(self.entries):
            return self.entries[ell]
        return Fraction(0)


@dataclass(frozen=True)
class GeneratingFunctionData:
    """Partial-fraction data (C^(g), q_l^(0)) for e_g, optionally with the
    4-valent band seed V_{e,g}^(1)."""

    g: int
    nu: int
    C: Fraction
    q0: tuple[Fraction, ...]
    v1_band: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "C", to_rational(self.C))
        object.__setattr__(self, "q0", tuple(to_rational(q) for q in self.q0))
        if self.v1_band is not None:
            object.__setattr__(self, "v1_band", tuple(to_rational(v) for v in self.v1_band))
        if self.g < 2:
            raise DomainError("partial-fraction data is defined for g >= 2")
        if len(self.q0) != 3 * self.g - 2:
            raise DimensionMismatchError(f"q0 must have 3g-2 = {3 * self.g - 2} entries")
        if self.v1_band is not None and len(self.v1_band) != 5 * self.g - 5:
            raise DimensionMismatchError(f"V1_band must have 5g-5 = {5 * self.g - 5} entries")

    @classmethod
    def from_json(cls, text: str) -> "GeneratingFunctionData":
        raw = json.loads(text)
        return cls(
            g=int(raw["genus"]),
            nu=int(raw["nu"]),
            C=to_rational(raw.get("C", "0")),
            q0=tuple(to_rational(q) for q in raw["q0"]),
            v1_band=tuple(to_rational(v) for v in raw["V1_band"]) if raw.get("V1_band") else None,
        )

    @classmethod
    def load(cls, path: str | Path) -> "GeneratingFunctionData":
        return cls.from_json(Path(path).read_text())

    def to_json(self) -> str:
        out = {"genus": self.g, "nu": self.nu, "C": str(self.C), "q0": [str(q) for q in self.q0]}
        if self.v1_band is not None:
            out["V1_band"] = [str(v) for v in self.v1_band]
        return json.dumps(out, indent=2)

    def q1(self) -> QVector:
        """First-derivative coefficients: q_l^(1) = (nu-1)(2g+l-2) q_l^(0)."""
        return QVector(
            self.g, 1, self.nu,
            tuple((self.nu - 1) * (2 * self.g + ell - 2) * q for ell, q in enumerate(self.q0)),
        )


def q_step(q_prev: QVector, j: int | None = None, g: int | None = None, nu: int | None = None) -> QVector:
    """q^(j) from q^(j-1):  q_l^(j) = beta_{j,l} q_{l-1}^(j-1) - alpha_{j,l} q_l^(j-1)."""
    j = q_prev.j + 1 if j is None else j
    g = q_prev.g if g is None else g
    nu = q_prev.nu if nu is None else nu
    if j < 2:
        raise DomainError("q_step needs j >= 2")
    if q_prev.j != j - 1 or q_prev.g != g or q_prev.nu != nu:
        raise DimensionMismatchError(f"q_step(j={j}, g={g}, nu={nu}) given q^({q_prev.j}) for g={q_prev.g}, nu={q_prev.nu}")
    out = []
    for ell in range(3 * g - 3 + j):
        beta = nu * (2 * g + ell + j - 3)
        alpha = 2 * g + ell - 2 - (nu - 1) * (j - 1)
        out.append(beta * q_prev[ell - 1] - alpha * q_prev[ell])
    return QVector(g, j, nu, tuple(out))


def q_orbit(q1: QVector, j: int) -> QVector:
    q = q1
    while q.j < j:
        q = q_step(q)
    return q


def count_from_q(q: QVector) -> Fraction:
    """N(g, j) = c_nu^j sum_l q_l^(j)."""
    return c_nu(q.nu) ** q.j * sum(q.entries, Fraction(0))


# ---------------------------------------------------------------------------
# 4-valent band reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BandVector4:
    """V_{e,g}^(j): the 5g-5 possibly nonzero entries of c_2^j q^(j)."""

    g: int
    j: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(to_rational(e) for e in self.entries))
        if len(self.entries) != 5 * self.g - 5:
            raise DimensionMismatchError(f"band vector for g={self.g} needs {5 * self.g - 5} entries")

    def total(self) -> Fraction:
        return sum(self.entries, Fraction(0))


def _band_start(g: int, j: int, padding: int) -> int:
    # index of q^(j) held in the first band slot
    return j - 1 - padding


def _support_fits(vec: Sequence[Fraction], lo_index: int, g: int, start: int) -> bool:
    width = 5 * g - 5
    return all(v == 0 or start <= lo_index + i < start + width for i, v in enumerate(vec))


@lru_cache(maxsize=None)
def band_padding(g: int, horizon: int = 50) -> int:
    """Number of zeros to prepend to q^(1) so the band never loses support.

    Determined by simulation: a generic q^(1) is pushed through the full
    q-recurrence for j = 1..horizon and every candidate offset is checked
    against the shifting 5g-5 window. Exactly one offset survives.
    """
    if g < 2:
        raise DomainError("band reduction needs g >= 2")
    width = 5 * g - 5
    q = QVector(g, 1, 2, tuple(Fraction(ell + 2, 3 * ell + 1) for ell in range(3 * g - 2)))
    supports = []
    for j in range(1, horizon + 1):
        nz = [ell for ell, v in enumerate(q.entries) if v != 0]
        supports.append((j, min(nz), max(nz)))
        if j < horizon:
            q = q_step(q)
    survivors = []
    for pad in range(0, width - (3 * g - 2) + 1):
        ok = all(_band_start(g, j, pad) <= lo and hi < _band_start(g, j, pad) + width for j, lo, hi in supports)
        if ok:
            survivors.append(pad)
    if len(survivors) != 1:
        raise SupportEscapeError(f"no unique band padding for g={g}: candidates {survivors}")
    return survivors[0]


def band_matrix(j: int, g: int) -> list[list[Fraction]]:
    """A^(j): one q-recurrence step restricted to the 5g-5 band (without the c_2 factor)."""
    pad = band_padding(g)
    start = _band_start(g, j, pad)
    width = 5 * g - 5
    A = [[Fraction(0)] * width for _ in range(width)]
    jn = j + 1
    for k in range(width):
        ell = start + 1 + k  # index of q^(j+1) stored in slot k
        beta = 2 * (2 * g + ell + jn - 3)
        alpha = 2 * g + ell - 2 - (jn - 1)
        A[k][k] = Fraction(beta)
        if k + 1 < width:
            A[k][k + 1] = Fraction(-alpha)
    return A


def band_reduce_4valent(q: QVector) -> BandVector4:
    """Window c_2^j q^(j) onto the 5g-5 band."""
    if q.nu != 2:
        raise DomainError("band reduction is specific to nu = 2")
    g, j = q.g, q.j
    start = _band_start(g, j, band_padding(g))
    if not _support_fits(q.entries, 0, g, start):
        raise SupportEscapeError(f"q^({j}) has support outside the band [{start}, {start + 5 * g - 6}]")
    scale = Fraction(C2) ** j
    return BandVector4(g, j, tuple(scale * q[start + k] for k in range(5 * g - 5)))


def band_step(v: BandVector4) -> BandVector4:
    """V^(j+1) = c_2 A^(j) V^(j)."""
    A = band_matrix(v.j, v.g)
    x = v.entries
    # A^(j) only touches its last column through the diagonal; anything that
    # would feed the slot below the band is zero by construction of the padding.
    start = _band_start(v.g, v.j, band_padding(v.g))
    alpha_low = 2 * v.g + start - 2 - v.j
    if x[0] != 0 and alpha_low != 0:
        raise SupportEscapeError("band step would push a nonzero entry below the band")
    out = tuple(C2 * sum((A[k][m] * x[m] for m in range(k, min(k + 2, len(x)))), Fraction(0)) for k in range(len(x)))
    return BandVector4(v.g, v.j + 1, out)


def band_seed(data: GeneratingFunctionData) -> BandVector4:
    if data.v1_band is not None:
        return BandVector4(data.g, 1, data.v1_band)
    if data.nu != 2:
        raise DomainError("band seed is specific to nu = 2")
    return band_reduce_4valent(data.q1())


def r_vector(j: int, g: int) -> list[Fraction]:
    """Column sums of A^(1) ... A^(j-1) in closed form."""
    if j < 1 or g < 2:
        raise DomainError("r_vector needs j >= 1, g >= 2")
    out = []
    for n in range(1, 5 * g - 4):
        total = 0
        for k in range(1, n + 1):
            prod = 1
            for ell in range(1, j):
                prod *= 2 * (2 * ell + k)
            total += math.comb(n - 1, k - 1) * prod
        out.append(Fraction(total, 2 ** (n - 1)))
    return out


def count_contraction(seed: BandVector4 | Sequence, j: int, g: int | None = None) -> Fraction:
    """N_4(g, j) = c_2^(j-1) R^(j) . V_{e,g}^(1)."""
    entries = seed.entries if isinstance(seed, BandVector4) else tuple(to_rational(s) for s in seed)
    g = seed.g if g is None else g
    if len(entries) != 5 * g - 5:
        raise DimensionMismatchError(f"seed must have 5g-5 = {5 * g - 5} entries")
    R = r_vector(j, g)
    return Fraction(C2) ** (j - 1) * sum((r * v for r, v in zip(R, entries)), Fraction(0))


def count_band_iterated(seed: BandVector4, j: int) -> Fraction:
    v = seed
    while v.j < j:
        v = band_step(v)
    return v.total()


# ---------------------------------------------------------------------------
# hypergeometric closed form
# ---------------------------------------------------------------------------


def hypergeom_count(data: GeneratingFunctionData, j: int) -> Fraction:
    """N(g, j) as a finite sum of terminating 2F1 values."""
    g, nu = data.g, data.nu
    if g < 2 or j < 1:
        raise DomainError("hypergeometric count needs g >= 2 and j >= 1")
    c = c_nu(nu)
    zarg = Fraction(1, 1 - nu)
    total = Fraction(0)
    for ell, q in enumerate(data.q0):
        if q == 0:
            continue
        total += q * binomial(2 * g - 4 + ell + j, j) * hypergeom_2f1_terminating(
            -j, 1 - nu * j, 4 - 2 * g - (ell + j), zarg
        )
    return math.factorial(j) * c**j * Fraction(nu - 1) ** j * total


# ---------------------------------------------------------------------------
# genus-5 closed form
# ---------------------------------------------------------------------------


def closed_form_g5(j: int) -> Fraction:
    """Explicit N_{4,e}(5, j)."""
    if j < 1:
        raise DomainError("j must be >= 1")
    vanishing = math.prod(j - k for k in range(1, 8))
    first = 4 ** (j - 1) * math.factorial(j) * (
        Fraction(38213, 1146617856) * j**2 + Fraction(915313, 2293235712) * j - Fraction(1940327, 53508833280)
    )
    second = Fraction(math.factorial(2 * j), math.factorial(j)) * (
        Fraction(211033, 2319969600) * j**2 + Fraction(8139013, 71455063680) * j + Fraction(1, 887040)
    )
    return Fraction(12) ** (j - 1) * vanishing * (first - second)


# ---------------------------------------------------------------------------
# evaluation of e_g and Taylor-coefficient route
# ---------------------------------------------------------------------------


def eg_eval(data: GeneratingFunctionData, z0):
    """e_g(z0) = C + sum_l q_l^(0) / (nu - (nu-1) z0)^(2g+l-2)."""
    den = data.nu - (data.nu - 1) * z0
    if (den[0] if isinstance(den, TruncatedSeries) else den) == 0:
        raise SingularityError("nu - (nu-1) z0", "z0 = nu/(nu-1)")
    inv = 1 / den
    total = data.C + 0 * inv
    for ell, q in enumerate(data.q0):
        if q != 0:
            total = total + q * inv ** (2 * data.g + ell - 2)
    return total


def derivative_counts(series: TruncatedSeries, j_max: int) -> list[Fraction]:
    """(-1)^j j! [t^j] for j = 1..j_max."""
    return [(-1) ** j * math.factorial(j) * series[j] for j in range(1, j_max + 1)]


def eg_derivative_series(data: GeneratingFunctionData, nu: int | None = None, j_max: int = 6) -> list[Fraction]:
    nu = data.nu if nu is None else nu
    if nu != data.nu:
        raise DimensionMismatchError("nu does not match the generating-function data")
    z0 = z0_series(nu, j_max)
    return derivative_counts(eg_eval(data, z0), j_max)


def count_routes(data: GeneratingFunctionData, j: int) -> dict[str, Fraction]:
    """All available exact routes to N(g, j) for the given data."""
    out = {
        "hypergeom": hypergeom_count(data, j),
        "recurrence": count_from_q(q_orbit(data.q1(), j)),
    }
    if data.nu == 2:
        seed = band_seed(data)
        out["band"] = count_contraction(seed, j)
    return out


# ---------------------------------------------------------------------------
# trivalent low-genus generating functions
# ---------------------------------------------------------------------------


def trivalent_z0_series(order: int) -> TruncatedSeries:
    """z0(t) from 1 = z0^2 - 72 t^2 z0^3, z0(0) = 1, by series Newton iteration."""
    t = TruncatedSeries.variable(order, "t")
    z = TruncatedSeries.constant(Fraction(1), order, "t")
    t2 = t * t
    for _ in range(max(1, order.bit_length() + 1)):
        f = z * z - 72 * t2 * z**3 - 1
        fp = 2 * z - 216 * t2 * z * z
        z = z - f / fp
    return z


def trivalent_eg_series(g: int, order: int) -> TruncatedSeries:
    z = trivalent_z0_series(order)
    if g == 0:
        return z.log() / 2 + (z - 1) * (z * z - 6 * z - 3) / (12 * z + 12)
    if g == 1:
        return -(Fraction(3, 2) - z * z / 2).log() / 24
    if g == 2:
        z2 = z * z
        return (z2 - 1) ** 3 * (4 * z2 * z2 - 93 * z2 - 261) / (960 * (z2 - 3) ** 5)
    raise DomainError("trivalent generating functions are available for g = 0, 1, 2")


def trivalent_counts(g: int, j_max: int) -> list[Fraction]:
    """Labeled trivalent g-map counts for j = 1..j_max."""
    return derivative_counts(trivalent_eg_series(g, j_max), j_max)
