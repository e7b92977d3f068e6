"""Center-manifold series at a fixed point with a one-dimensional neutral
direction, and its inversion into large-n expansions of the orbit.

The manifold is a graph over the center coordinate u: every other coordinate
is a power series in u. Writing h(v) for the curve and F for the step map,
invariance reads F(h(v)) = h(F_u(h(v))). At order k this is a linear system
for the k-th coefficient vector whose matrix is

    L = phi^k I + a_1 J[c, :] - J,

with J the Jacobian at the fixed point, a_1 the tangent vector and phi = 1
the neutral eigenvalue.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import CenterDimensionError, DomainError, OrderStarvationError, ResonanceError
from .exact import GAMMA, ETA, ZETA, param_eval, param_function, param_str, rank, solve_linear
from .painleve import SYSTEMS, OrbitRecord, StepSystem, WeightParams, jacobian
from .series import TruncatedSeries

SYMBOLIC_PARAMS = {"gamma": GAMMA, "zeta": ZETA, "eta": ETA}


def _coerce_point(point, params):
    zero = next(iter(params.values())) * 0 if params else Fraction(0)
    return tuple(zero + c for c in point)


@dataclass
class CMExpansion:
    system: str
    coords: tuple[str, ...]
    center: str
    series: dict[str, TruncatedSeries]
    order: int
    fixed_point: tuple

    def __getitem__(self, name: str) -> TruncatedSeries:
        return self.series[name]

    def evaluate(self, u, params: dict | None = None) -> dict:
        """Numeric point on the curve at ``u`` with parameters substituted."""
        out = {}
        for name, ser in self.series.items():
            coeffs = [_num_coeff(c, params) for c in ser.coeffs]
            acc = coeffs[-1]
            for c in reversed(coeffs[:-1]):
                acc = acc * u + c
            out[name] = acc
        return out

    def specialize(self, params: dict) -> "CMExpansion":
        """Substitute numeric parameter values into every coefficient."""
        ser = {k: v.map(lambda c: _num_coeff(c, params)) for k, v in self.series.items()}
        fp = tuple(_num_coeff(c, params) for c in self.fixed_point)
        return CMExpansion(self.system, self.coords, self.center, ser, self.order, fp)

    def to_json(self) -> str:
        return json.dumps({
            "system": self.system,
            "center": self.center,
            "order": self.order,
            "fixed_point": [_cstr(c) for c in self.fixed_point],
            "series": {k: [_cstr(c) for c in v.coeffs] for k, v in self.series.items()},
        }, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = list(self.series)
        w.writerow(["k"] + names)
        for k in range(self.order + 1):
            w.writerow([k] + [_cstr(self.series[n].coeffs[k]) for n in names])
        return buf.getvalue()

    @classmethod
    def from_json(cls, text: str) -> "CMExpansion":
        data = json.loads(text)
        system = SYSTEMS[data["system"]]
        ser = {k: TruncatedSeries([param_function(c) for c in v], int(data["order"]), data["center"])
               for k, v in data["series"].items()}
        fp = tuple(param_function(c) for c in data["fixed_point"])
        return cls(system.name, system.coords, data["center"], ser, int(data["order"]), fp)


def _cstr(c) -> str:
    if isinstance(c, mpmath.mpf):
        return mpmath.nstr(c, mpmath.mp.dps)
    if hasattr(c, "as_expr"):
        return param_str(c)
    return str(c)


def _num_coeff(c, params):
    if hasattr(c, "numer") and hasattr(c, "denom"):
        if params is None:
            raise DomainError("symbolic coefficients need parameter values")
        return param_eval(c, params.get("gamma", 0), params.get("zeta", 0), params.get("eta", 0))
    return c


def cm_expand(system: StepSystem | str, order: int, params: dict | None = None,
              fixed_point: Sequence | None = None, center: str | None = None) -> CMExpansion:
    """Center-manifold graph over the center coordinate to the given order.

    ``params`` maps parameter names to ring elements; by default they are the
    symbols gamma, zeta, eta so coefficients come out as rational functions.
    """
    if isinstance(system, str):
        system = SYSTEMS[system]
    if order < 1:
        raise DomainError("order must be >= 1")
    if params is None:
        params = {k: SYMBOLIC_PARAMS[k] for k in system.params}
    if center is not None and center != system.center:
        system = StepSystem(system.name, system.coords, system.params, system.fn, center, system.fixed_point)
    if fixed_point is None:
        fixed_point = system.fixed_point(params)
    p0 = _coerce_point(fixed_point, params)
    d, c = system.dim, system.center_index
    zero, one = p0[0] * 0, p0[0] * 0 + 1

    J = jacobian(system, p0, params)
    JmI = [[J[i][m] - (one if i == m else zero) for m in range(d)] for i in range(d)]
    if rank(JmI) != d - 1:
        raise CenterDimensionError("eigenvalue 1 does not have a one-dimensional eigenspace")
    # kernel of J - I normalised to a unit center component
    others = [i for i in range(d) if i != c]
    rows = [r for r in range(d)]
    # solve (J - I) a = 0 with a_c = 1: drop one dependent row
    a1 = None
    for drop in rows:
        keep = [r for r in rows if r != drop]
        M = [[JmI[r][m] for m in others] for r in keep]
        rhs = [-JmI[r][c] for r in keep]
        try:
            sol = solve_linear(M, rhs)
        except ZeroDivisionError:
            continue
        a1 = [zero] * d
        a1[c] = one
        for i, v in zip(others, sol):
            a1[i] = v
        break
    if a1 is None:
        raise CenterDimensionError("the center direction has no component along the chosen coordinate")

    coeffs = [[p0[i], a1[i]] for i in range(d)]
    for k in range(2, order + 1):
        trial = [TruncatedSeries(coeffs[i] + [zero], k, "u") for i in range(d)]
        image = system(trial, params)
        phi = image[c]
        lhs = [trial[i].compose(phi - p0[c]) if i != c else phi for i in range(d)]
        R0 = [(lhs[i] - image[i]).coeffs[k] for i in range(d)]
        phi1 = phi.coeffs[1]
        L = [[(phi1**k if i == m else zero) + a1[i] * J[c][m] - J[i][m] for m in range(d)] for i in range(d)]
        try:
            ak = solve_linear(L, [-r for r in R0])
        except ZeroDivisionError:
            raise ResonanceError(f"order-{k} solve is singular (resonant transverse eigenvalue)") from None
        for i in range(d):
            coeffs[i].append(ak[i])
    series = {system.coords[i]: TruncatedSeries(coeffs[i], order, "u") for i in range(d) if i != c}
    return CMExpansion(system.name, system.coords, system.center, series, order, p0)


def invariance_residual(cm: CMExpansion, params: dict | None = None) -> dict[str, TruncatedSeries]:
    """F(h(u)) - h(F_u(h(u))) per coordinate; zero through the stored order."""
    system = SYSTEMS[cm.system]
    if params is None:
        params = {k: SYMBOLIC_PARAMS[k] for k in system.params}
    c = system.center_index
    one = cm.fixed_point[0] * 0 + 1
    h = []
    for i, name in enumerate(system.coords):
        if i == c:
            h.append(TruncatedSeries([cm.fixed_point[c], one], cm.order, "u"))
        else:
            h.append(cm.series[name])
    image = system(h, params)
    phi = image[c] - cm.fixed_point[c]
    return {name: image[i] - h[i].compose(phi) for i, name in enumerate(system.coords) if i != c}


# ---------------------------------------------------------------------------
# inversion to a large-n expansion
# ---------------------------------------------------------------------------


@dataclass
class AsymptoticExpansion:
    """x_n ~ sum_{k >= -1} c_k n^(-k/2)."""

    coeffs: list
    dps: int = 50

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] == 0:
            raise DomainError("leading coefficient must be nonzero")

    def c(self, k: int):
        return self.coeffs[k + 1]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 2

    def __call__(self, n, upto: int | None = None):
        upto = self.order if upto is None else upto
        n = mpmath.mpf(n)
        return sum(self.coeffs[k + 1] * n ** (-mpmath.mpf(k) / 2) for k in range(-1, upto + 1))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "c_k"])
        for k, v in enumerate(self.coeffs, start=-1):
            w.writerow([k, mpmath.nstr(v, self.dps) if isinstance(v, mpmath.mpf) else str(v)])
        return buf.getvalue()


def invert_to_n(cm: CMExpansion, p: WeightParams, order: int, dps: int = 50) -> AsymptoticExpansion:
    """Expansion of x along the center manifold in powers of n^(-1/2).

    Along the curve n/N = eta (s + f + u - 1)/u^2 and x = -eta/u. With
    eps = (n/N)^(-1/2) and u = eps w, w solves w = -sqrt(eta S(eps w)).
    """
    if order < -1:
        raise DomainError("order must be >= -1")
    if cm.order < order + 1:
        raise OrderStarvationError(f"expansion order {order} needs a center manifold of order {order + 1}, got {cm.order}")
    m = order + 1
    with mpmath.workdps(dps):
        params = {k: _to_mpf(v) for k, v in p.symbols().items()}
        eta = params["eta"]
        s = [_to_mpf(_num_coeff(c, params)) for c in cm["s"].coeffs[: m + 1]]
        f = [_to_mpf(_num_coeff(c, params)) for c in cm["f"].coeffs[: m + 1]]
        S = [a + b for a, b in zip(s, f)]
        S[0] -= 1
        if m >= 1:
            S[1] += 1
        S = TruncatedSeries(S, m, "u")
        if S.coeffs[0] <= 0:
            raise DomainError("center manifold is not at infinity in n (S(0) <= 0)")
        eps = TruncatedSeries([mpmath.mpf(0), mpmath.mpf(1)], m, "e")
        w = TruncatedSeries([-mpmath.sqrt(eta * S.coeffs[0])], m, "e")
        for _ in range(m + 1):
            inner = eta * S.compose(eps * w)
            w = -inner.sqrt(mpmath.sqrt(inner.coeffs[0]))
        E = -eta * w.inverse()
        N = _to_mpf(p.N)
        coeffs = [E.coeffs[k] * mpmath.sqrt(N) ** (k - 1) for k in range(m + 1)]
    return AsymptoticExpansion(coeffs, dps)


def _to_mpf(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def orbit_distance(orbit: OrbitRecord, cm: CMExpansion, p: WeightParams | None = None) -> list:
    """Euclidean distance from each orbit point to the curve point at the same u."""
    params = None
    if p is not None:
        params = p.symbols()
    coords = [c for c in cm.coords if c != cm.center]
    out = []
    with mpmath.workdps(orbit.precision):
        num = {k: [_to_mpf(_num_coeff(c, params)) for c in v.coeffs] for k, v in cm.series.items()}
        for st in orbit.states:
            u = _to_mpf(getattr(st, cm.center))
            tot = mpmath.mpf(0)
            for name in coords:
                acc = mpmath.mpf(0)
                for c in reversed(num[name]):
                    acc = acc * u + c
                tot += (_to_mpf(getattr(st, name)) - acc) ** 2
            out.append(mpmath.sqrt(tot))
    return out


# reference expansions through u^4 used by the cm-match suite
REFERENCE_SERIES = {
    "dp1-sfu": {
        "s": ["2", "-1", "-gamma/6", "-gamma/36", "-gamma*(3*gamma + 1)/216"],
        "f": ["2", "-1", "gamma/6", "gamma/36", "-gamma*(3*gamma - 1)/216"],
    },
    "mixed-sfuzw": {
        "s": ["2", "-1", "-gamma/6", "eta*gamma*zeta/108 - gamma/36",
              "-gamma*(27*gamma + (eta*zeta - 3)**2)/1944"],
        "f": ["2", "eta*zeta/3 - 1", "gamma/6",
              "-eta**3*zeta**3/2187 + eta**2*zeta**2/243 - eta*(gamma + 1)*zeta/108 + gamma/36",
              "eta**4*zeta**4/19683 - 4*eta**3*zeta**3/6561 + (gamma + Rational(14, 3))*eta**2*zeta**2/1944"
              " - eta*(gamma + 1)*zeta/324 - gamma**2/72 + gamma/216"],
        "z": ["-eta/3", "eta**2*zeta/81 - eta/18", "-eta**3*zeta**2/1458 + 5*eta**2*zeta/972 - eta/108",
              "eta*(2*eta*zeta - 9)*(eta**2*zeta**2 - 6*eta*zeta - 27*gamma + 9)/52488",
              "-23*(eta*zeta - Rational(9, 2))/12754584*(eta**3*zeta**3 - 9*eta**2*zeta**2"
              " - Rational(2187, 23)*zeta*(gamma - Rational(8, 27))*eta + Rational(6561, 23)*gamma"
              " - Rational(729, 23))*eta"],
        "w": ["-eta/3", "eta**2*zeta/81 - eta/18", "-eta**3*zeta**2/1458 + 5*eta**2*zeta/972 - eta/108",
              "eta*(2*eta*zeta - 9)*(eta**2*zeta**2 - 6*eta*zeta + 27*gamma + 9)/52488",
              "-23*(eta*zeta - Rational(9, 2))/12754584*(eta**3*zeta**3 - 9*eta**2*zeta**2"
              " + Rational(2187, 23)*zeta*(gamma + Rational(8, 27))*eta - Rational(6561, 23)*gamma"
              " - Rational(729, 23))*eta"],
    },
}


def reference_series(system: str) -> dict[str, list]:
    return {k: [param_function(e) for e in v] for k, v in REFERENCE_SERIES[system].items()}
