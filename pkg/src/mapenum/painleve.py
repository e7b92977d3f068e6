"""Recurrence-coefficient dynamics: dP1, the mixed cubic/quartic system and
the cubic QRT system, in raw and compactified coordinates.

Every step map is written with plain ring arithmetic so the same code runs
on Fractions (exact orbits), mpf values (Freud orbits), parameter rational
functions, and truncated series (Jacobians and center manifolds).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from .errors import DomainError, PoleError, QuadratureError
from .exact import to_rational
from .series import TruncatedSeries

FREUD_DPS = 800
EXPLORE_DPS = 64


def _is_zero(x) -> bool:
    if isinstance(x, TruncatedSeries):
        return x.coeffs[0] == 0
    return x == 0


def _div(a, b, name: str):
    if _is_zero(b):
        raise PoleError(name)
    if isinstance(b, int):
        b = Fraction(b)
    if isinstance(a, Fraction) and isinstance(b, mpmath.mpf):
        a = mpmath.mpf(a.numerator) / a.denominator
    return a / b


def _num(value):
    """Parse user input: exact where possible, mpf for decimals."""
    if isinstance(value, (Fraction, mpmath.mpf)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        v = value.strip()
        if "e" in v.lower() and "/" not in v:
            return mpmath.mpf(v)
        return to_rational(v)
    return to_rational(value)


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightParams:
    """Weight exp(-N (l^2/2 + t3 l^3 + t4 l^4)); the quartic case has t4 = r/4."""

    N: object = Fraction(1)
    t3: object = Fraction(0)
    t4: object = Fraction(1, 4)

    def __post_init__(self):
        for name in ("N", "t3", "t4"):
            object.__setattr__(self, name, _num(getattr(self, name)))
        if self.N <= 0:
            raise DomainError("N must be positive")
        if self.t4 <= 0:
            raise DomainError("t4 must be positive for an integrable weight")

    @classmethod
    def quartic(cls, N=1, r=1) -> "WeightParams":
        r = _num(r)
        return cls(N=N, t3=0, t4=r / 4)

    @classmethod
    def mixed(cls, N=1, t3=1, t4=1) -> "WeightParams":
        return cls(N=N, t3=t3, t4=t4)

    @property
    def r(self):
        return 4 * self.t4

    @property
    def eta(self):
        return 1 / (4 * self.t4)

    @property
    def zeta(self):
        return 9 * self.t3**2

    @property
    def gamma(self):
        return 1 / (self.eta * self.N)

    def symbols(self) -> dict:
        return {"gamma": self.gamma, "zeta": self.zeta, "eta": self.eta}

    def snapshot(self) -> dict:
        return {k: str(v) for k, v in (("N", self.N), ("t3", self.t3), ("t4", self.t4))}

    def potential(self, lam):
        return lam**2 / 2 + self.t3 * lam**3 + self.t4 * lam**4


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DP1State:
    x: object
    y: object
    n: int


@dataclass(frozen=True)
class SFUState:
    s: object
    f: object
    u: object
    n: int


@dataclass(frozen=True)
class MixedState:
    x: object
    y: object
    z: object
    w: object
    n: int


@dataclass(frozen=True)
class MixedSFUZWState:
    s: object
    f: object
    u: object
    z: object
    w: object
    n: int


@dataclass(frozen=True)
class QRTState:
    a: object
    x: object
    n: int


def state_components(state) -> list[str]:
    return [k for k in state.__dataclass_fields__ if k != "n"]


# ---------------------------------------------------------------------------
# dP1
# ---------------------------------------------------------------------------


def dp1_step(state: DP1State, p: WeightParams) -> DP1State:
    x, y, n = state.x, state.y, state.n
    r = p.r
    xn = _div(n, p.N * r * x, "x") - _div(1, r, "r") - x - y
    return DP1State(xn, x, n + 1)


def sfu_transform(state: DP1State, p: WeightParams) -> SFUState:
    x, y, n = state.x, state.y, state.n
    r = p.r
    rx = r * x
    s = _div(y, x, "x") + 1 + _div(1, rx, "x")
    f = _div(n, p.N * rx * x, "x") - _div(y, x, "x")
    u = -_div(1, rx, "x")
    return SFUState(s, f, u, n)


def sfu_inverse(state: SFUState, p: WeightParams) -> DP1State:
    s, u = state.s, state.u
    ru = p.r * state.u
    x = -_div(1, ru, "u")
    y = -_div(s + u - 1, ru, "u")
    return DP1State(x, y, state.n)


def sfu_map(s, f, u, gamma):
    """The compactified dP1 map on bare coordinates."""
    Z = _div(1, u + f - 1, "u + f - 1")
    return Z * f, Z * Z * (s + gamma * u * u), Z * u


def sfu_step(state: SFUState, p: WeightParams) -> SFUState:
    s, f, u = sfu_map(state.s, state.f, state.u, p.gamma)
    return SFUState(s, f, u, state.n + 1)


# ---------------------------------------------------------------------------
# mixed cubic/quartic system
# ---------------------------------------------------------------------------


def mixed_step(state: MixedState, p: WeightParams) -> MixedState:
    x, y, z, w, n = state.x, state.y, state.z, state.w, state.n
    eta, zeta = p.eta, p.zeta
    xn = (-(w + z) * eta - w * w - w * z - z * z) * zeta + (_div(n, p.N * x, "x") - 1) * eta - x - y
    if _is_zero(xn):
        raise PoleError("x_{n+1}", f"n={n}")
    zn = (
        (-eta * z * z - z**3) * zeta / xn
        + (-x / xn - 1 - z / xn) * eta
        - x * w / xn
        - 2 * x * z / xn
        - 2 * z
    )
    return MixedState(xn, x, zn, z, n + 1)


def mixed_sfuzw_map(s, f, u, z, w, gamma, zeta, eta):
    Z = _div(1, u + f - 1, "u + f - 1")
    H = eta * w + eta * z + w * w + w * z + z * z
    Q = Z * H * u / eta
    D = zeta * Q + 1
    Dinv = _div(1, D, "zeta*Q + 1")
    s1 = (zeta * Q + f * Z) * Dinv
    f1 = -Z * ((-gamma * u * u - s) * Z + zeta * Q) * Dinv * Dinv
    u1 = u * Z * Dinv
    z1 = (
        (eta * Z * u * z * z + Z * u * z**3 - eta * eta * Q - 2 * eta * Q * z) * zeta
        + ((u - 2) * Z - 2) * eta * z
        + (-Z - 1) * eta * eta
        - eta * Z * w
    ) * Dinv / eta
    return s1, f1, u1, z1, z


def mixed_sfuzw_step(state: MixedSFUZWState, p: WeightParams) -> MixedSFUZWState:
    out = mixed_sfuzw_map(state.s, state.f, state.u, state.z, state.w, p.gamma, p.zeta, p.eta)
    return MixedSFUZWState(*out, state.n + 1)


def mixed_transform(state: MixedState, p: WeightParams) -> MixedSFUZWState:
    x, y, n = state.x, state.y, state.n
    eta = p.eta
    s = _div(y, x, "x") + 1 + _div(eta, x, "x")
    f = _div(n * eta, p.N * x * x, "x") - _div(y, x, "x")
    u = -_div(eta, x, "x")
    return MixedSFUZWState(s, f, u, state.z, state.w, n)


def mixed_inverse(state: MixedSFUZWState, p: WeightParams) -> MixedState:
    eta = p.eta
    x = -_div(eta, state.u, "u")
    y = (state.s - 1) * x - eta
    return MixedState(x, y, state.z, state.w, state.n)


# ---------------------------------------------------------------------------
# cubic QRT system and the restricted planar map
# ---------------------------------------------------------------------------


def qrt_cubic_step(state: QRTState, p: WeightParams) -> QRTState:
    a, x, n = state.a, state.x, state.n
    t3 = p.t3
    if t3 == 0:
        raise DomainError("the cubic recurrence needs t3 != 0")
    xn = -a / (3 * t3) - a * a - x
    an = _div(Fraction(n + 1) if isinstance(n, int) else n + 1, 3 * p.N * t3 * xn, "x_{n+1}") - 1 / (3 * t3) - a
    return QRTState(an, xn, n + 1)


def qrt_matrices(p: WeightParams, n, r=0):
    """Biquadratic invariant matrices with the index frozen at ``n``."""
    t3 = to_rational(p.t3) if not isinstance(p.t3, mpmath.mpf) else p.t3
    c = (Fraction(n) + 1) / p.N
    A0 = [[0, 0, -3 * t3], [-3 * t3, -1, 0], [0, c, r]]
    A1 = [[0, 0, 0], [0, 0, 0], [0, 0, 1]]
    return A0, A1


def qrt_invariant(x, a, n, p: WeightParams, r=0):
    A0, A1 = qrt_matrices(p, n, r)
    X = (x * x, x, 1)
    Y = (a * a, a, 1)

    def form(A):
        return sum(X[i] * A[i][j] * Y[j] for i in range(3) for j in range(3))

    return _div(form(A0), form(A1), "X A1 Y")


def qrt_autonomous_step(state: QRTState, p: WeightParams, n_frozen) -> QRTState:
    """The cubic step with the index held at ``n_frozen``."""
    nxt = qrt_cubic_step(QRTState(state.a, state.x, n_frozen), p)
    return QRTState(nxt.a, nxt.x, state.n + 1)


def planar_restricted_step(s, f):
    """The dP1 compactified map restricted to the invariant plane u = 0."""
    Z = _div(1, f - 1, "f - 1")
    return Z * f, s * Z * Z


# ---------------------------------------------------------------------------
# step systems for generic analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepSystem:
    """A rational autonomous map on named coordinates with parameters."""

    name: str
    coords: tuple[str, ...]
    params: tuple[str, ...]
    fn: Callable
    center: str = "u"
    fixed_point: Callable | None = None

    def __call__(self, point: Sequence, params: dict):
        return tuple(self.fn(*point, *(params[k] for k in self.params)))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def center_index(self) -> int:
        return self.coords.index(self.center)


DP1_SFU = StepSystem(
    "dp1-sfu", ("s", "f", "u"), ("gamma",), sfu_map,
    fixed_point=lambda prm: (2, 2, 0),
)
MIXED_SFUZW = StepSystem(
    "mixed-sfuzw", ("s", "f", "u", "z", "w"), ("gamma", "zeta", "eta"), mixed_sfuzw_map,
    fixed_point=lambda prm: (2, 2, 0, -prm["eta"] / 3, -prm["eta"] / 3),
)
SYSTEMS = {s.name: s for s in (DP1_SFU, MIXED_SFUZW)}


def jacobian(system: StepSystem, point: Sequence, params: dict) -> list[list]:
    """Exact Jacobian by forward differentiation with first-order series."""
    d = system.dim
    J = [[None] * d for _ in range(d)]
    for m in range(d):
        args = []
        for i, c in enumerate(point):
            one = c * 0 + 1
            args.append(TruncatedSeries([c, one if i == m else one * 0], 1, "e"))
        out = system(args, params)
        for i, o in enumerate(out):
            J[i][m] = o[1] if isinstance(o, TruncatedSeries) else o * 0
    return J


def charpoly(M: list[list]) -> list:
    """Monic characteristic polynomial coefficients, highest degree first
    (Faddeev-LeVerrier)."""
    n = len(M)
    zero = M[0][0] * 0
    ident = [[zero + (1 if i == j else 0) for j in range(n)] for i in range(n)]
    coeffs = [zero + 1]
    Mk = [row[:] for row in ident]
    for k in range(1, n + 1):
        AM = [[sum((M[i][l] * Mk[l][j] for l in range(n)), zero) for j in range(n)] for i in range(n)]
        tr = sum((AM[i][i] for i in range(n)), zero)
        c = -tr / k if not isinstance(tr, int) else Fraction(-tr, k)
        coeffs.append(c)
        Mk = [[AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


@dataclass
class FixedPointReport:
    system: str
    point: tuple
    eigenvalues: list
    charpoly: list

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "point": [str(c) for c in self.point],
            "eigenvalues": [mpmath.nstr(e, 20) for e in self.eigenvalues],
            "charpoly": [str(c) for c in self.charpoly],
        }


def fixed_point_analysis(system: StepSystem | str, p: WeightParams, precision: int = EXPLORE_DPS,
                         points: Sequence[Sequence] | None = None) -> list[FixedPointReport]:
    """Check candidate fixed points exactly and return their spectra."""
    if isinstance(system, str):
        system = SYSTEMS[system]
    params = p.symbols()
    if points is None:
        points = [system.fixed_point(params)]
    reports = []
    for pt in points:
        pt = tuple(Fraction(c) if isinstance(c, int) else c for c in pt)
        image = system(pt, params)
        if any(a != b for a, b in zip(image, pt)):
            raise DomainError(f"{pt} is not a fixed point of {system.name}")
        J = jacobian(system, pt, params)
        with mpmath.workdps(precision):
            Jm = mpmath.matrix([[_to_mpf(c) for c in row] for row in J])
            ev = mpmath.eig(Jm, left=False, right=False)
            ev = sorted((mpmath.re(e) if abs(mpmath.im(e)) < mpmath.mpf(10) ** (-precision // 2) else e for e in ev),
                        key=lambda e: (mpmath.re(e), mpmath.im(e)))
        reports.append(FixedPointReport(system.name, pt, ev, charpoly(J)))
    return reports


def _to_mpf(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


# ---------------------------------------------------------------------------
# Freud seeds from moments
# ---------------------------------------------------------------------------


def weight_moments(p: WeightParams, kmax: int, precision: int, max_level: int = 22) -> list:
    """mu_0..mu_kmax of the weight by a truncated, doubling trapezoid rule.

    The cutoff is pushed out until the weight is below 10^-(precision+10) at
    both ends; the step is halved until two successive sums agree.
    """
    dps = precision + 20
    with mpmath.workdps(dps):
        N = _to_mpf(p.N)
        t3, t4 = _to_mpf(p.t3), _to_mpf(p.t4)

        def V(x):
            return x * x / 2 + t3 * x**3 + t4 * x**4

        thr = (precision + 10) * mpmath.log(10)
        vmin = min(N * V(x) for x in mpmath.linspace(-4, 4, 81))
        L = mpmath.mpf(1)
        while N * V(L) - vmin < thr or N * V(-L) - vmin < thr:
            L *= mpmath.mpf("1.25")
        n = 8
        h = 2 * L / n
        xs = [-L + i * h for i in range(n + 1)]
        S = [mpmath.mpf(0)] * (kmax + 1)

        def accumulate(points):
            for x in points:
                wx = mpmath.exp(-N * V(x))
                pw = wx
                for k in range(kmax + 1):
                    S[k] += pw
                    pw *= x

        accumulate(xs)
        prev = None
        tol = mpmath.mpf(10) ** (-precision - 5)
        for _ in range(max_level):
            h /= 2
            n *= 2
            accumulate(-L + (2 * i + 1) * h for i in range(n // 2))
            cur = [s * h for s in S]
            if prev is not None and all(abs(a - b) <= tol * abs(cur[0]) for a, b in zip(cur, prev)):
                return cur
            prev = cur
    raise QuadratureError(f"moment quadrature did not converge to {precision} digits")


def _hankel_det(mu, k: int, shifted: bool = False):
    if k == 0:
        return mpmath.mpf(1) if not shifted else mpmath.mpf(0)
    rows = [[mu[i + j] if (j < k - 1 or not shifted) else mu[i + k] for j in range(k)] for i in range(k)]
    return mpmath.det(mpmath.matrix(rows))


def jacobi_from_moments(mu: Sequence, count: int) -> tuple[list, list]:
    """Recurrence coefficients a_0..a_{count-1} and b_1^2..b_{count-1}^2.

    Uses D_k = det(mu_{i+j}) and the variant with the last column shifted,
    a_k = D~_{k+1}/D_{k+1} - D~_k/D_k, b_k^2 = D_{k+1} D_{k-1} / D_k^2.
    """
    if len(mu) < 2 * count:
        raise DomainError(f"need {2 * count} moments")
    D = [_hankel_det(mu, k) for k in range(count + 1)]
    Dt = [_hankel_det(mu, k, shifted=True) for k in range(count + 1)]
    a = [Dt[k + 1] / D[k + 1] - Dt[k] / D[k] for k in range(count)]
    b2 = [None] + [D[k + 1] * D[k - 1] / D[k] ** 2 for k in range(1, count)]
    return a, b2


def freud_seed(p: WeightParams, precision: int = FREUD_DPS, system: str = "quartic"):
    """Initial state of the Freud orbit computed from the weight's moments.

    Quartic: (x_1 = mu_2/mu_0, y_1 = 0, n = 1). Mixed: the index-2 state
    (b_2^2, b_1^2, a_2/sqrt(zeta), a_1/sqrt(zeta)).
    """
    if system == "quartic":
        if p.t3 != 0:
            raise DomainError("the quartic seed needs t3 = 0")
        mu = weight_moments(p, 2, precision)
        with mpmath.workdps(precision):
            return DP1State(+(mu[2] / mu[0]), mpmath.mpf(0), 1)
    if system == "mixed":
        if p.t3 == 0:
            raise DomainError("the mixed seed needs t3 != 0 (z = a/sqrt(zeta))")
        # Hankel determinants lose digits; carry a guard of half the precision
        guard = precision // 2 + 20
        mu = weight_moments(p, 5, precision + guard)
        with mpmath.workdps(precision + guard):
            a, b2 = jacobi_from_moments(mu, 3)
            rz = mpmath.sqrt(_to_mpf(p.zeta))
            out = [b2[2], b2[1], a[2] / rz, a[1] / rz]
        with mpmath.workdps(precision):
            return MixedState(*(+v for v in out), 2)
    raise DomainError(f"unknown seed system {system!r}")


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------


STATE_TYPES = {
    "dp1": DP1State,
    "dp1-sfu": SFUState,
    "mixed": MixedState,
    "mixed-sfuzw": MixedSFUZWState,
    "qrt-cubic": QRTState,
}

STEPS = {
    "dp1": dp1_step,
    "dp1-sfu": sfu_step,
    "mixed": mixed_step,
    "mixed-sfuzw": mixed_sfuzw_step,
    "qrt-cubic": qrt_cubic_step,
}


@dataclass
class OrbitRecord:
    system: str
    states: list
    precision: int
    params: dict = field(default_factory=dict)
    events: list = field(default_factory=list)
    error_bounds: list | None = None

    def __post_init__(self):
        for a, b in zip(self.states, self.states[1:]):
            if b.n != a.n + 1:
                raise DomainError("orbit indices must increase by 1")

    @property
    def components(self) -> list[str]:
        if not self.states:
            return []
        return state_components(self.states[0])

    def _fmt(self, v) -> str:
        if isinstance(v, mpmath.mpf):
            return mpmath.nstr(v, self.precision, strip_zeros=False)
        return str(v)

    def to_csv(self, extra: dict[str, list] | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = self.components
        extra = extra or {}
        head = ["n"] + cols + (["error_bound"] if self.error_bounds else []) + list(extra)
        w.writerow(head)
        for i, st in enumerate(self.states):
            row = [st.n] + [self._fmt(getattr(st, c)) for c in cols]
            if self.error_bounds:
                row.append(mpmath.nstr(self.error_bounds[i], 5))
            row += [self._fmt(v[i]) if i < len(v) else "" for v in extra.values()]
            w.writerow(row)
        return buf.getvalue()

    def to_json(self) -> str:
        cols = self.components
        return json.dumps({
            "system": self.system,
            "precision": self.precision,
            "params": self.params,
            "events": self.events,
            "states": [{"n": st.n, **{c: self._fmt(getattr(st, c)) for c in cols}} for st in self.states],
        }, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "OrbitRecord":
        data = json.loads(text)
        prec = int(data.get("precision", EXPLORE_DPS))
        typ = STATE_TYPES[data["system"]]
        states = []
        with mpmath.workdps(prec):
            for row in data["states"]:
                vals = {k: _parse_value(v) for k, v in row.items() if k != "n"}
                states.append(typ(n=int(row["n"]), **vals))
        return cls(data["system"], states, prec, data.get("params", {}), data.get("events", []))


def _parse_value(v: str):
    if "." in v or "e" in v.lower():
        return mpmath.mpf(v)
    return to_rational(v)


def load_seed(path_or_text: str):
    """Import an externally computed seed (first state of an orbit JSON)."""
    try:
        text = open(path_or_text).read()
    except (OSError, ValueError):
        text = path_or_text
    rec = OrbitRecord.from_json(text)
    return rec.system, rec.states[0], rec.precision


def _iterate(step, state, p, steps: int):
    states = [state]
    events = []
    for _ in range(steps):
        try:
            state = step(state, p)
        except PoleError as exc:
            events.append({"n": state.n, "event": "pole", "denominator": exc.denominator})
            break
        states.append(state)
    return states, events


def _lower(v, dps):
    if isinstance(v, mpmath.mpf):
        with mpmath.workdps(dps):
            return +v
    return v


def iterate_orbit(system: str, seed, p: WeightParams, steps: int, precision: int = EXPLORE_DPS,
                  audit: bool = True) -> OrbitRecord:
    """Iterate ``steps`` times from ``seed``; a pole ends the orbit with an event.

    With ``audit`` a shadow orbit at 10 fewer digits is run and the largest
    componentwise difference is recorded as each state's error bound.
    """
    if system not in STEPS:
        raise DomainError(f"unknown system {system!r}")
    if precision < 16:
        raise DomainError("precision must be at least 16 digits")
    step = STEPS[system]
    with mpmath.workdps(precision):
        states, events = _iterate(step, seed, p, steps)
    bounds = None
    exact = all(not isinstance(getattr(seed, c), mpmath.mpf) for c in state_components(seed))
    if audit and not exact:
        lo = precision - 10
        with mpmath.workdps(lo):
            shadow_seed = type(seed)(**{k: _lower(getattr(seed, k), lo) if k != "n" else seed.n
                                        for k in seed.__dataclass_fields__})
            shadow, _ = _iterate(step, shadow_seed, p, len(states) - 1)
        with mpmath.workdps(precision):
            bounds = []
            for a, b in zip(states, shadow):
                bounds.append(max(abs(getattr(a, c) - getattr(b, c)) for c in state_components(a)))
            bounds += [mpmath.inf] * (len(states) - len(bounds))
    return OrbitRecord(system, states, precision, p.snapshot(), events, bounds)


def freud_orbit(p: WeightParams, steps: int, precision: int = FREUD_DPS, system: str = "quartic") -> OrbitRecord:
    seed = freud_seed(p, precision, system)
    name = "dp1" if system == "quartic" else "mixed"
    return iterate_orbit(name, seed, p, steps, precision)


def to_compactified(record: OrbitRecord, p: WeightParams) -> OrbitRecord:
    """Map a raw dP1 or mixed orbit to (s,f,u) or (s,f,u,z,w) coordinates."""
    conv = {"dp1": ("dp1-sfu", sfu_transform), "mixed": ("mixed-sfuzw", mixed_transform)}
    if record.system not in conv:
        raise DomainError(f"no compactification for {record.system}")
    name, fn = conv[record.system]
    with mpmath.workdps(record.precision):
        states = [fn(st, p) for st in record.states]
    return OrbitRecord(name, states, record.precision, record.params, list(record.events))


def planar_orbit(s, f, steps: int) -> tuple[list[tuple], list[dict]]:
    pts = [(s, f)]
    events = []
    for k in range(steps):
        try:
            s, f = planar_restricted_step(s, f)
        except PoleError as exc:
            events.append({"n": k, "event": "pole", "denominator": exc.denominator})
            break
        pts.append((s, f))
    return pts, events
