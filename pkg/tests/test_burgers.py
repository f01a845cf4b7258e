import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

import oracles
from bosestat import burgers
from bosestat.errors import DomainError, NoRootError

ODD = burgers.cubic_profile()
ASYM = burgers.cubic_profile(1.0, 0.6, 0.1)
RAMP = burgers.two_ramp_profile()


def real_roots(prof, x, t):
    """Roots of ``xi + t p0(xi) = x`` for a cubic profile, by numpy companion matrix."""
    coeffs = [t, t * prof.b, 1.0 - t * prof.c, t * prof.d - x]
    r = np.roots(coeffs)
    return np.sort(r[np.abs(r.imag) < 1e-9].real)


# ------------------------------------------------------------- profiles


def test_profile_basics():
    assert ODD.p0(2.0) == 6.0 and ODD.P(0.0) == 0.0
    assert ODD.t_cr == 1.0
    assert ASYM.t_cr == pytest.approx(1 / (1 + 0.36 / 3))
    for prof in (ODD, ASYM, RAMP):
        xs = np.linspace(-2.0, 2.0, 41)
        for x in xs:
            val, _ = integrate.quad(lambda s: float(prof.p0(s)), 0.0, x, epsabs=1e-13, points=[-1, -0.5, 0, 0.5, 1] if abs(x) > 1 else None)
            assert float(prof.P(x)) == pytest.approx(val, abs=1e-10)
    assert RAMP.t_cr == pytest.approx(1.0)  # steepest segment drops 0.5 over 0.5
    with pytest.raises(DomainError):
        burgers.cubic_profile(c=0.0)
    with pytest.raises(DomainError):
        burgers.sampled_profile([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(DomainError):
        burgers.sampled_profile([0, 1, 2, 3, 4], [1, 0, 1, 0, 1]).fold_points(5.0)


def test_sampled_matches_two_ramp():
    s = burgers.sampled_profile([-1.0, 0.0, 0.5], [1.0, 0.0, -0.5])
    for x in np.linspace(-3, 3, 31):
        assert float(s.P(x)) == pytest.approx(float(RAMP.P(x)), abs=1e-15)
    assert burgers.shock_position(3.0, s) == pytest.approx(burgers.shock_position(3.0, RAMP), abs=1e-12)


# ------------------------------------------------------------ heat solution


def test_zero_and_constant_profiles():
    zero = burgers.constant_profile(0.0)
    for x in (-1.0, 0.0, 2.5):
        assert burgers.heat_solution(x, 0.7, 0.05, zero) == pytest.approx(1.0, rel=1e-10)
    c = 0.8
    const = burgers.constant_profile(c)
    for x in (-1.0, 0.3, 2.0):
        eps = 0.05
        expected = -c * (x - c * 0.7 / 2) / eps
        assert burgers.log_heat_solution(x, 0.7, eps, const) == pytest.approx(expected, rel=1e-10)
        assert burgers.viscous_solution(x, 0.7, eps, const) == pytest.approx(c, rel=1e-10)


@pytest.mark.parametrize("x, t, eps", [(0.3, 0.5, 0.01), (-0.4, 2.0, 0.05), (0.0, 1.5, 0.1), (1.1, 3.0, 0.02)])
def test_heat_against_scipy(x, t, eps):
    u = burgers.heat_solution(x, t, eps, ODD)
    assert u == pytest.approx(oracles.heat_u(x, t, eps, ODD.P), rel=1e-8)


def test_viscous_against_scipy_ratio():
    for x, t, eps in [(0.3, 0.5, 0.01), (0.2, 2.0, 0.05), (-0.7, 2.0, 0.02)]:
        f = lambda xi: math.exp(-float(burgers.action(xi, x, t, ODD)) / eps)
        den = integrate.quad(f, -np.inf, np.inf, epsabs=0, epsrel=1e-12, limit=400)[0]
        num = integrate.quad(lambda xi: (x - xi) / t * f(xi), -np.inf, np.inf, epsabs=0, epsrel=1e-12, limit=400)[0]
        assert burgers.viscous_solution(x, t, eps, ODD) == pytest.approx(num / den, rel=1e-7, abs=1e-10)


def test_viscous_matches_log_derivative():
    x, t, eps, h = 0.25, 1.5, 0.05, 1e-4
    fd = -eps * (burgers.log_heat_solution(x + h, t, eps, ODD) - burgers.log_heat_solution(x - h, t, eps, ODD)) / (2 * h)
    assert burgers.viscous_solution(x, t, eps, ODD) == pytest.approx(fd, rel=1e-6)


def test_odd_profile_parity():
    for t in (0.5, 2.0):
        for eps in (0.1, 1e-3):
            assert abs(burgers.viscous_solution(0.0, t, eps, ODD)) <= 1e-10
            assert burgers.viscous_solution(0.4, t, eps, ODD) == pytest.approx(
                -burgers.viscous_solution(-0.4, t, eps, ODD), rel=1e-9, abs=1e-12)


def test_before_fold_matches_characteristics():
    t = 0.5
    for x in (-1.0, -0.2, 0.3, 0.9):
        ref = oracles.characteristic_value(x, t, ODD.p0, -5.0, 5.0)
        assert burgers.viscous_solution(x, t, 1e-4, ODD) == pytest.approx(ref, abs=1e-3)
        assert burgers.generalized_solution(x, t, ODD) == pytest.approx(ref, abs=1e-12)


def test_burgers_residual_is_second_order():
    # v_t + v v_x - (eps/2) v_xx on a centred stencil
    x, t, eps = 0.35, 0.6, 0.05
    v = lambda xx, tt: burgers.viscous_solution(xx, tt, eps, ODD)

    def residual(h):
        vx = (v(x + h, t) - v(x - h, t)) / (2 * h)
        vxx = (v(x + h, t) - 2 * v(x, t) + v(x - h, t)) / h**2
        vt = (v(x, t + h) - v(x, t - h)) / (2 * h)
        return vt + v(x, t) * vx - 0.5 * eps * vxx

    r1, r2 = abs(residual(2e-2)), abs(residual(1e-2))
    assert r1 < 1e-2
    assert 3.0 < r1 / r2 < 5.0


def test_viscous_limit_away_from_shock():
    t = 2.0
    xs_ = burgers.shock_position(t, ODD)
    xs = [x for x in np.linspace(-1.5, 1.5, 31) if abs(x - xs_) >= 0.1]
    gaps = []
    for eps in (1e-2, 1e-3, 1e-4):
        gaps.append(max(abs(burgers.viscous_solution(x, t, eps, ODD) - burgers.generalized_solution(x, t, ODD)) for x in xs))
    assert gaps[0] > gaps[1] > gaps[2]


def test_tiny_viscosity_is_stable():
    v = burgers.viscous_solution(0.5, 2.0, 1e-8, ODD)
    assert v == pytest.approx(burgers.generalized_solution(0.5, 2.0, ODD), abs=1e-6)


def test_argument_errors():
    with pytest.raises(DomainError):
        burgers.heat_solution(0.0, 0.0, 0.1, ODD)
    with pytest.raises(DomainError):
        burgers.viscous_solution(0.0, 1.0, 0.0, ODD)
    with pytest.raises(DomainError):
        burgers.tropical_min(1.0, 2.0, 0.0)


# -------------------------------------------------------------- branches


def test_branch_counts_match_discriminant():
    assert len(burgers.branch_solve(0.3, 0.5, ODD)) == 1
    assert len(burgers.branch_solve(0.0, 2.0, ODD)) == 3
    for prof in (ODD, ASYM):
        for t in (0.5, 1.5, 3.0):
            for x in np.linspace(-2.0, 2.0, 41):
                bs = burgers.branch_solve(x, t, prof)
                ref = real_roots(prof, x, t)
                assert len(bs) == len(ref)
                assert [b.xi for b in bs.branches] == pytest.approx(list(ref), abs=1e-9)
                assert all(b.S == pytest.approx(float(burgers.action(b.xi, x, t, prof))) for b in bs.branches)


def test_actions_continuous_across_window_edges():
    t = 2.0
    lo, hi = burgers.overlap_window(t, ODD)
    for edge, side in ((lo, 0), (hi, -1)):
        outside = burgers.branch_solve(edge + (1e-6 if side == -1 else -1e-6), t, ODD)
        inside = burgers.branch_solve(edge + (-1e-6 if side == -1 else 1e-6), t, ODD)
        assert len(outside) == 1 and len(inside) == 3
        kept = inside.branches[side]
        assert kept.S == pytest.approx(outside.branches[0].S, abs=1e-5)


def test_generalized_solution_regions():
    t = 2.0
    x_s = burgers.shock_position(t, ASYM)
    left = burgers.branch_solve(x_s - 0.3, t, ASYM)
    right = burgers.branch_solve(x_s + 0.3, t, ASYM)
    assert left.best.xi == left.branches[0].xi
    assert right.best.xi == right.branches[-1].xi
    assert burgers.generalized_solution(-3.0, t, ASYM) == burgers.branch_solve(-3.0, t, ASYM).branches[0].p
    # at the switch the outer actions agree
    at = burgers.branch_solve(x_s, t, ASYM)
    assert abs(at.branches[0].S - at.branches[-1].S) <= 1e-10


def test_tropical_min():
    assert burgers.tropical_min(1.0, 1.0, 0.1) == pytest.approx(1.0 - 0.1 * math.log(2), rel=1e-15)
    assert abs(burgers.tropical_min(1.0, 2.0, 1e-6) - 1.0) <= 1e-6
    assert burgers.tropical_min(5e4, 0.3, 0.01) == burgers.tropical_min(0.3, 5e4, 0.01)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(1e-8, 10.0))
def test_tropical_bound(w1, w2, eps):
    r = burgers.tropical_min(w1, w2, eps)
    m = min(w1, w2)
    assert r <= m + 1e-12 * max(1.0, abs(m))
    assert m - r <= eps * math.log(2) * (1 + 1e-12) + 1e-12 * max(1.0, abs(m))


# ---------------------------------------------------------------- shocks


@pytest.mark.parametrize("t", [1.5, 2.0, 3.0])
def test_odd_shock_at_origin(t):
    assert abs(burgers.shock_position(t, ODD)) <= 1e-10


def test_no_shock_before_fold():
    with pytest.raises(NoRootError):
        burgers.shock_position(0.9, ODD)
    with pytest.raises(NoRootError):
        burgers.shock_position(1.0, ODD)


def _oracle_lobes(prof, t, x_s):
    r1, r2, r3 = real_roots(prof, x_s, t)
    f = lambda xi: (xi + t * prof.p0(xi) - x_s) * prof.dp0(xi)
    return abs(integrate.quad(f, r1, r2, epsabs=1e-15)[0]), abs(integrate.quad(f, r2, r3, epsabs=1e-15)[0])


@pytest.mark.parametrize("t", [1.5, 2.0, 3.0])
def test_equal_area_asymmetric(t):
    x_s = burgers.shock_position(t, ASYM)
    # closed form: the depressed cubic has its inflection at xi = -b/3
    infl = -ASYM.b / 3
    assert x_s == pytest.approx(infl + t * ASYM.p0(infl), abs=1e-10)
    left, right = burgers.equal_area_lobes(t, ASYM)
    assert abs(left - right) <= 1e-8
    ol, orr = _oracle_lobes(ASYM, t, x_s)
    assert left == pytest.approx(ol, rel=1e-9) and right == pytest.approx(orr, rel=1e-9)
    speed, avg = burgers.rankine_hugoniot(t, ASYM)
    assert speed == pytest.approx(avg, rel=1e-2)


def test_equal_area_ramp():
    t = 3.0
    x_s = burgers.shock_position(t, RAMP)
    assert x_s == pytest.approx(0.5, abs=1e-10)
    left, right = burgers.equal_area_lobes(t, RAMP)
    assert left == pytest.approx(0.5625, abs=1e-10) and right == pytest.approx(0.5625, abs=1e-10)
    speed, avg = burgers.rankine_hugoniot(t, RAMP)
    assert speed == pytest.approx(0.25, rel=1e-6) and avg == pytest.approx(0.25, rel=1e-12)


# -------------------------------------------------------- critical point


def test_critical_prefactor_closed_form():
    ref = mpmath.mpf(4) ** 0.25 * mpmath.sqrt(mpmath.pi) / 4 / mpmath.gamma(1.25)
    assert burgers.CRITICAL_PREFACTOR == pytest.approx(float(ref), rel=1e-15)
    assert burgers.CRITICAL_PREFACTOR == pytest.approx(0.69136, rel=5e-3)
    for eps in (1e-6, 1e-4, 1e-2, 1.0):
        assert burgers.critical_value(eps) == pytest.approx(burgers.CRITICAL_PREFACTOR * eps**0.25, rel=1e-6)
        assert burgers.critical_value(2 * eps) / burgers.critical_value(eps) == pytest.approx(2**0.25, rel=1e-6)


def test_critical_value_against_scipy():
    eps = 1e-3
    w = lambda xi: math.exp(-(xi**4) / (4 * eps))
    num = integrate.quad(lambda xi: xi * w(xi), 0, np.inf, epsabs=0, epsrel=1e-12)[0]
    den = integrate.quad(w, 0, np.inf, epsabs=0, epsrel=1e-12)[0]
    assert burgers.critical_value(eps) == pytest.approx(num / den, rel=1e-9)


def test_critical_scaling_fit():
    grid = np.geomspace(1e-6, 1e-2, 9)
    C, k = burgers.critical_scaling(grid)
    assert abs(k - 0.25) <= 0.01
    assert C == pytest.approx(0.69136, rel=5e-3)
    assert abs(burgers.critical_inverse_exponent(grid) - 4.0) <= 0.1
    with pytest.raises(DomainError):
        burgers.critical_scaling([1e-3, 1e-2])
    with pytest.raises(DomainError):
        burgers.critical_scaling([1e-3, 3e-3, 1e-2])


def test_self_similarity_at_the_fold():
    # for x^3 - x at t = 1 the action is x^2/2 - x xi + xi^4/4, so with
    # x = eps^(3/4) s the mean of xi / eps^(1/4) depends on s alone
    for s in (0.5, 2.0):
        vals = []
        for eps in (1e-6, 1e-4, 1e-2):
            x = eps**0.75 * s
            vals.append((x - burgers.viscous_solution(x, 1.0, eps, ODD)) / eps**0.25)
        assert max(vals) - min(vals) <= 1e-8 * abs(vals[0])
