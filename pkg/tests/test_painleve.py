from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from mapenum.errors import DomainError, PoleError
from mapenum.painleve import (
    DP1State,
    MixedState,
    MixedSFUZWState,
    OrbitRecord,
    QRTState,
    SFUState,
    WeightParams,
    charpoly,
    DP1_SFU,
    dp1_step,
    fixed_point_analysis,
    freud_orbit,
    freud_seed,
    iterate_orbit,
    jacobi_from_moments,
    jacobian,
    mixed_inverse,
    mixed_sfuzw_step,
    mixed_step,
    mixed_transform,
    planar_orbit,
    planar_restricted_step,
    qrt_autonomous_step,
    qrt_cubic_step,
    qrt_invariant,
    sfu_inverse,
    sfu_step,
    sfu_transform,
    to_compactified,
    weight_moments,
)

small = st.builds(Fraction, st.integers(-40, 40).filter(bool), st.integers(1, 9))


def test_weight_params():
    p = WeightParams.quartic(1, 1)
    assert p.t4 == Fraction(1, 4) and p.r == 1 and p.eta == 1 and p.gamma == 1
    m = WeightParams.mixed(2, 1, 1)
    assert m.zeta == 9 and m.eta == Fraction(1, 4) and m.gamma == 2
    with pytest.raises(DomainError):
        WeightParams(1, 0, 0)


def test_dp1_step_example():
    p = WeightParams.quartic(1, 1)
    nxt = dp1_step(DP1State(Fraction(1), Fraction(1), 3), p)
    assert nxt == DP1State(0, 1, 4)
    with pytest.raises(PoleError):
        dp1_step(nxt, p)


def test_sfu_fixed_point_and_plane():
    p = WeightParams.quartic(3, 2)
    assert sfu_step(SFUState(Fraction(2), Fraction(2), Fraction(0), 5), p) == SFUState(2, 2, 0, 6)
    st_ = SFUState(Fraction(1, 3), Fraction(5, 7), Fraction(0), 1)
    for _ in range(10):
        st_ = sfu_step(st_, p)
        assert st_.u == 0


@settings(max_examples=40)
@given(small, small, st.integers(1, 20), st.sampled_from([(1, 1), (2, 3), (Fraction(1, 2), 5)]))
def test_sfu_conjugacy(x, y, n, Nr):
    p = WeightParams.quartic(*Nr)
    a = DP1State(x, y, n)
    try:
        via_raw = sfu_transform(dp1_step(a, p), p)
        via_sfu = sfu_step(sfu_transform(a, p), p)
    except PoleError:
        return
    assert via_raw == via_sfu
    assert sfu_inverse(sfu_transform(a, p), p) == a


def test_sfu_conjugacy_along_freud_orbit():
    p = WeightParams.quartic(1, 1)
    prec = 100
    with mpmath.workdps(prec):
        seed = freud_seed(p, prec)
        raw = iterate_orbit("dp1", seed, p, 50, prec, audit=False)
        sfu = iterate_orbit("dp1-sfu", sfu_transform(seed, p), p, 50, prec, audit=False)
        rel = mpmath.mpf(10) ** (2 - prec)
        for a, b in zip(raw.states, raw.states[1:]):
            one = sfu_step(sfu_transform(a, p), p)
            two = sfu_transform(b, p)
            for c in "sfu":
                assert abs(getattr(one, c) - getattr(two, c)) <= rel * abs(getattr(two, c))
        # whole orbits drift apart at the expanding rate 2 + sqrt(3) per step
        for a, b in zip(raw.states, sfu.states):
            c = sfu_transform(a, p)
            assert abs(c.s - b.s) + abs(c.f - b.f) + abs(c.u - b.u) < mpmath.mpf(10) ** -60


def test_mixed_fixed_points():
    p = WeightParams.mixed(1, Fraction(1, 2), Fraction(1, 3))
    e = p.eta
    P = MixedSFUZWState(Fraction(2), Fraction(2), Fraction(0), -e / 3, -e / 3, 4)
    assert mixed_sfuzw_step(P, p) == MixedSFUZWState(2, 2, 0, -e / 3, -e / 3, 5)
    for z in (Fraction(-3), Fraction(1, 7), Fraction(5)):
        L = MixedSFUZWState(Fraction(0), Fraction(0), Fraction(0), z, z, 1)
        assert mixed_sfuzw_step(L, p) == MixedSFUZWState(0, 0, 0, z, z, 2)


@settings(max_examples=30)
@given(small, small, small, small, st.integers(2, 12))
def test_mixed_conjugacy_and_shift(x, y, z, w, n):
    p = WeightParams.mixed(1, Fraction(1, 3), Fraction(1, 2))
    a = MixedState(x, y, z, w, n)
    try:
        raw = mixed_step(a, p)
        via_raw = mixed_transform(raw, p)
        via_c = mixed_sfuzw_step(mixed_transform(a, p), p)
    except PoleError:
        return
    assert raw.w == z
    assert via_raw == via_c
    assert mixed_inverse(mixed_transform(a, p), p) == a


@settings(max_examples=30)
@given(small, small, small, small, small)
def test_mixed_zeta_zero_reduces_to_dp1(s, f, u, z, w):
    q = WeightParams(Fraction(2), Fraction(0), Fraction(3, 4))
    try:
        m = mixed_sfuzw_step(MixedSFUZWState(s, f, u, z, w, 0), q)
        d = sfu_step(SFUState(s, f, u, 0), WeightParams.quartic(2, 3))
    except PoleError:
        return
    assert (m.s, m.f, m.u) == (d.s, d.f, d.u)


def test_eigenvalues():
    s3 = mpmath.sqrt(3)
    tol = mpmath.mpf(10) ** -10
    (rep,) = fixed_point_analysis("dp1-sfu", WeightParams.quartic(1, 1))
    with mpmath.workdps(64):
        for got, want in zip(rep.eigenvalues, sorted([1, -2 - s3, -2 + s3])):
            assert abs(got - want) < tol
    assert rep.charpoly == [1, 3, -3, -1]
    (mrep,) = fixed_point_analysis("mixed-sfuzw", WeightParams.mixed(1, 1, 1))
    want = sorted([1, -2 - s3, -2 - s3, -2 + s3, -2 + s3])
    for got, w in zip(mrep.eigenvalues, want):
        assert abs(got - w) < tol
    assert abs(-2 + s3) < 1 < abs(-2 - s3)


def test_jacobian_is_exact():
    J = jacobian(DP1_SFU, (Fraction(2), Fraction(2), Fraction(0)), {"gamma": Fraction(1)})
    assert all(isinstance(c, Fraction) for row in J for c in row)
    assert charpoly([[Fraction(2), Fraction(0)], [Fraction(0), Fraction(3)]]) == [1, -5, 6]


def test_qrt_step_example():
    p = WeightParams.mixed(1, 1, 1)
    assert qrt_cubic_step(QRTState(Fraction(0), Fraction(1), 1), p) == QRTState(-1, -1, 2)


@pytest.mark.parametrize("t3,N,n", [(Fraction(1), Fraction(1), 3), (Fraction(2, 3), Fraction(5), 7), (Fraction(-1, 2), Fraction(3, 2), 2)])
def test_qrt_invariant_exact(t3, N, n):
    p = WeightParams(N, t3, Fraction(1))
    rng = random.Random(1)
    state = QRTState(Fraction(rng.randint(1, 9), 7), Fraction(rng.randint(1, 9), 5), 0)
    K = qrt_invariant(state.x, state.a, n, p)
    for _ in range(20):
        state = qrt_autonomous_step(state, p, n)
        assert qrt_invariant(state.x, state.a, n, p) == K


def test_planar_map():
    assert planar_restricted_step(Fraction(2), Fraction(2)) == (2, 2)
    for f in (Fraction(2, 3), Fraction(-5, 2), Fraction(7, 3)):
        pts, ev = planar_orbit(1 - f, f, 3)
        assert not ev and pts[3] == pts[0]
    pts, ev = planar_orbit(Fraction(0), Fraction(1), 3)
    assert ev and ev[0]["event"] == "pole"


def test_moments_and_seed():
    p = WeightParams.quartic(1, 1)
    mu = weight_moments(p, 2, 30)
    with mpmath.workdps(30):
        ref = mpmath.quad(lambda x: mpmath.exp(-(x**2 / 2 + x**4 / 4)), [-mpmath.inf, 0, mpmath.inf])
        assert abs(mu[0] - ref) < mpmath.mpf(10) ** -25
    seed = freud_seed(p, 40)
    assert round(float(seed.x), 2) == 0.47 and seed.y == 0 and seed.n == 1


def test_jacobi_from_gaussian_moments():
    # standard Gaussian: a_k = 0, b_k^2 = k
    mu = [mpmath.mpf(0 if k % 2 else mpmath.fac2(k - 1)) for k in range(8)]
    a, b2 = jacobi_from_moments(mu, 4)
    assert all(abs(x) < 1e-20 for x in a)
    assert [float(b) for b in b2[1:]] == [1.0, 2.0, 3.0]


def test_mixed_seed_digits():
    x, y, z, w = (freud_seed(WeightParams.mixed(1, 1, 1), 40, "mixed").__dict__[k] for k in "xyzw")
    assert [round(float(v), 4) for v in (x, y, z, w)] == [0.3933, 0.3210, -0.0791, -0.0803]


def test_orbit_export_roundtrip_and_audit():
    p = WeightParams.quartic(1, 1)
    with mpmath.workdps(50):
        rec = iterate_orbit("dp1", freud_seed(p, 50), p, 20, 50)
    assert len(rec.states) == 21 and rec.error_bounds[-1] < mpmath.mpf(10) ** -20
    back = OrbitRecord.from_json(rec.to_json())
    assert [s.n for s in back.states] == list(range(1, 22))
    assert rec.to_csv().splitlines()[0] == "n,x,y,error_bound"
    comp = to_compactified(rec, p)
    assert comp.system == "dp1-sfu" and comp.states[-1].u < 0


def test_orbit_pole_event():
    p = WeightParams.quartic(1, 1)
    rec = iterate_orbit("dp1", DP1State(Fraction(1), Fraction(1), 3), p, 5)
    assert len(rec.states) == 2 and rec.events[0]["event"] == "pole"


def test_precision_audit_at_700():
    p = WeightParams.quartic(1, 1)
    lo = freud_orbit(p, 699, precision=500)
    hi = freud_orbit(p, 699, precision=1000)
    with mpmath.workdps(1000):
        assert lo.states[-1].n == 700
        assert abs(lo.states[-1].x - hi.states[-1].x) < lo.error_bounds[-1]
