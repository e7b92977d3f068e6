"""Exact verification harnesses for identities observed in the map counts."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .errors import DegreeGapError, DomainError, HypergeometricDomainError
from .exact import bernoulli_numbers, binomial, falling_factorial, hypergeom_2f1_terminating, to_rational


@dataclass
class VerificationReport:
    name: str
    ranges: dict
    cases: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c["ok"] for c in self.cases)

    @property
    def first_failure(self) -> dict | None:
        return next((c for c in self.cases if not c["ok"]), None)

    def add(self, case: dict, ok: bool, **detail):
        self.cases.append({"case": case, "ok": bool(ok), **{k: str(v) for k, v in detail.items()}})

    def summary(self) -> dict:
        return {
            "name": self.name,
            "ranges": self.ranges,
            "cases": len(self.cases),
            "passed": self.passed,
            "first_failure": self.first_failure,
            "wall_time": round(self.wall_time, 3),
        }

    def to_json(self, full: bool = False) -> str:
        out = self.summary()
        if full:
            out["results"] = self.cases
        return json.dumps(out, indent=2)


# ---------------------------------------------------------------------------
# hypergeometric identity
# ---------------------------------------------------------------------------


def conjecture1_lhs(g: int, ell: int, j: int) -> Fraction:
    top = 2 * g - 2 + ell + j
    f = hypergeom_2f1_terminating(-j, -2 * j, 2 - 2 * g - (ell + j), -1)
    return math.factorial(j) * 2 ** (ell + 2 * g - 1) * binomial(top, j) * f


def conjecture1_rhs(g: int, ell: int, j: int) -> int:
    total = 0
    m = ell + 2 * g
    for k in range(1, m + 1):
        prod = 1
        for i in range(j):
            prod *= 2 * (2 * i + k)
        total += math.comb(m - 1, k - 1) * prod
    return total


def conjecture1_check(ell_max: int = 20, g_max: int = 20, j_max: int = 20, ell_min: int = 0) -> VerificationReport:
    if ell_min < 0 or g_max < 1 or j_max < 1:
        raise DomainError("need ell >= 0, g >= 1, j >= 1")
    rep = VerificationReport("conjecture1", {"ell": [ell_min, ell_max], "g": [1, g_max], "j": [1, j_max]})
    t0 = time.perf_counter()
    for g in range(1, g_max + 1):
        for ell in range(ell_min, ell_max + 1):
            for j in range(1, j_max + 1):
                case = {"g": g, "ell": ell, "j": j}
                try:
                    lhs = conjecture1_lhs(g, ell, j)
                except HypergeometricDomainError as exc:
                    rep.add(case, False, error=exc)
                    continue
                rhs = conjecture1_rhs(g, ell, j)
                rep.add(case, lhs == rhs, lhs=lhs, rhs=rhs)
    rep.wall_time = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# C^(g) recursion and Bernoulli numbers
# ---------------------------------------------------------------------------

C2_SEED = Fraction(1, 240)


def cg_recursion(g_max: int, seed: Fraction = C2_SEED) -> dict[int, Fraction]:
    """C^(2..g_max) from the factorial recursion, seeded at g = 2.

    The symbol (2-2k)_m in the recursion is the falling factorial; the rising
    one vanishes identically here since 2-2k <= 0 < 2-2k+m.
    """
    if g_max < 2:
        raise DomainError("g_max must be >= 2")
    f = math.factorial
    C = {2: Fraction(seed)}
    for g in range(3, g_max + 1):
        acc = Fraction(0)
        for k in range(2, g):
            m = 2 * g - 2 * k + 2
            acc += falling_factorial(2 - 2 * k, m) / f(m) * C[k]
        bracket = Fraction(1, f(2 * g + 2)) - Fraction(1, f(2 * g) * 12) + acc / f(2 * g - 1)
        C[g] = -2 * f(2 * g - 3) * bracket
    return C


def cg_closed_g2() -> Fraction:
    """The g = 2 instance of the recursion, where the sum is switched off."""
    f = math.factorial
    return -2 * f(1) * (Fraction(1, f(6)) - Fraction(1, f(4) * 12))


def cg_bernoulli_check(g_max: int = 100) -> VerificationReport:
    rep = VerificationReport("bernoulli", {"g": [2, g_max]})
    t0 = time.perf_counter()
    C = cg_recursion(g_max)
    B = bernoulli_numbers(2 * g_max)
    for g in range(2, g_max + 1):
        target = B[2 * g] / (4 * g * (g - 1))
        rep.add({"g": g}, -C[g] == target, lhs=-C[g], rhs=target)
    rep.wall_time = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# real-rootedness and interlacing
# ---------------------------------------------------------------------------

_X = sympy.Symbol("x")


def parse_polynomial(coeffs: Sequence) -> sympy.Poly:
    """Exact coefficients, highest degree first."""
    vals = [to_rational(c) for c in coeffs]
    return sympy.Poly([sympy.Rational(v.numerator, v.denominator) for v in vals], _X, domain="QQ")


def load_polynomials(text: str) -> list[sympy.Poly]:
    data = json.loads(text)
    if isinstance(data, dict):
        data = data["polynomials"]
    return [parse_polynomial(c) for c in data]


def _real_simple_rooted(p: sympy.Poly) -> bool:
    if p.degree() <= 0:
        return True
    if sympy.degree(sympy.gcd(p, p.diff(_X)), _X) > 0:
        return False
    return p.count_roots() == p.degree()


def _strictly_interlace(p: sympy.Poly, q: sympy.Poly) -> bool:
    """Roots of p (degree d) strictly separate those of q (degree d + 1)."""
    if sympy.degree(sympy.gcd(p, q), _X) > 0:
        return False
    owners = []
    for (a, b), _ in (p * q).intervals():
        a, b = sympy.Rational(a), sympy.Rational(b)
        if a == b:
            owners.append("p" if p.eval(a) == 0 else "q")
        else:
            owners.append("p" if p.eval(a) * p.eval(b) < 0 else "q")
    expect = ["q" if i % 2 == 0 else "p" for i in range(len(owners))]
    return owners == expect and len(owners) == p.degree() + q.degree()


def interlacing_check(polys: Iterable) -> VerificationReport:
    """All roots real and simple, consecutive root sets strictly interlacing."""
    polys = [p if isinstance(p, sympy.Poly) else parse_polynomial(p) for p in polys]
    rep = VerificationReport("interlacing", {"count": len(polys)})
    t0 = time.perf_counter()
    for a, b in zip(polys, polys[1:]):
        if b.degree() - a.degree() != 1:
            raise DegreeGapError(f"degrees {a.degree()} and {b.degree()} differ by more than one step")
    for i, p in enumerate(polys):
        rep.add({"index": i, "kind": "real"}, _real_simple_rooted(p), degree=p.degree())
    for i, (a, b) in enumerate(zip(polys, polys[1:])):
        ok = _real_simple_rooted(a) and _real_simple_rooted(b) and _strictly_interlace(a, b)
        rep.add({"index": i, "kind": "interlace"}, ok)
    rep.wall_time = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# ratio data over supplied counts
# ---------------------------------------------------------------------------


def count_ratios(counts: dict[int, Fraction], reference: dict[int, Fraction]) -> list[tuple[int, Fraction]]:
    """N(j)/N_ref(j) for every j present in both tables with nonzero reference."""
    out = []
    for j in sorted(counts):
        ref = reference.get(j)
        if ref:
            out.append((j, to_rational(counts[j]) / to_rational(ref)))
    return out


# ---------------------------------------------------------------------------
# suites over the count routes and the center manifold
# ---------------------------------------------------------------------------


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def commutation_check(genera: Iterable[int] = range(2, 8), index_max: int = 10) -> VerificationReport:
    from .genfun import band_matrix

    genera = list(genera)
    rep = VerificationReport("commutation", {"g": genera, "index": [1, index_max]})
    t0 = time.perf_counter()
    for g in genera:
        mats = {j: band_matrix(j, g) for j in range(1, index_max + 1)}
        for m in range(1, index_max + 1):
            for n in range(m + 1, index_max + 1):
                ok = _matmul(mats[m], mats[n]) == _matmul(mats[n], mats[m])
                rep.add({"g": g, "m": m, "n": n}, ok)
    rep.wall_time = time.perf_counter() - t0
    return rep


def r_vector_check(genera: Iterable[int] = range(2, 8), j_max: int = 10) -> VerificationReport:
    """Closed-form R^(j) against column sums of A^(j-1) ... A^(1)."""
    from .genfun import band_matrix, r_vector

    genera = list(genera)
    rep = VerificationReport("r-vector", {"g": genera, "j": [1, j_max]})
    t0 = time.perf_counter()
    for g in genera:
        w = 5 * g - 5
        P = [[Fraction(int(i == k)) for k in range(w)] for i in range(w)]
        for j in range(1, j_max + 1):
            if j > 1:
                P = _matmul(band_matrix(j - 1, g), P)
            colsum = [sum((P[i][k] for i in range(w)), Fraction(0)) for k in range(w)]
            rep.add({"g": g, "j": j}, colsum == r_vector(j, g))
    rep.wall_time = time.perf_counter() - t0
    return rep


def route_equivalence_check(genera: Iterable[int] = range(2, 6), j_max: int = 12, samples: int = 50,
                            seed: int = 0, nu: int = 2) -> VerificationReport:
    """Random rational seeds pushed through every exact count route."""
    import random

    from .genfun import GeneratingFunctionData, count_routes

    genera = list(genera)
    rng = random.Random(seed)
    rep = VerificationReport("route-equivalence", {"g": genera, "j": [1, j_max], "samples": samples, "nu": nu})
    t0 = time.perf_counter()
    for g in genera:
        for s in range(samples):
            q0 = [Fraction(rng.randint(-999, 999), rng.randint(1, 99)) for _ in range(3 * g - 2)]
            data = GeneratingFunctionData(g, nu, Fraction(0), tuple(q0))
            for j in range(1, j_max + 1):
                vals = count_routes(data, j)
                ok = len(set(vals.values())) == 1
                rep.add({"g": g, "sample": s, "j": j}, ok, **vals)
    rep.wall_time = time.perf_counter() - t0
    return rep


def cm_match_check(system: str = "dp1-sfu", order: int = 4) -> VerificationReport:
    from .center_manifold import cm_expand, reference_series

    ref = reference_series(system)
    order = min(order, min(len(v) for v in ref.values()) - 1)
    rep = VerificationReport("cm-match", {"system": system, "order": order})
    t0 = time.perf_counter()
    cm = cm_expand(system, order)
    for name, coeffs in ref.items():
        for k in range(order + 1):
            got = cm[name].coeffs[k]
            rep.add({"series": name, "k": k}, got == coeffs[k], got=_expr(got), expected=_expr(coeffs[k]))
    rep.wall_time = time.perf_counter() - t0
    return rep


def _expr(c):
    return c.as_expr() if hasattr(c, "as_expr") else c
