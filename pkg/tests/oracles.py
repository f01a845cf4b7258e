"""Independent reference computations for the test suite.

Nothing here reuses library code: partitions are enumerated or expanded
from a generating function, special functions come from mpmath, integrals
from scipy, and the multiplier inversion is a plain nested bisection.
"""
from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy import integrate, optimize

mpmath.mp.dps = 40


def partitions_asc(n: int):
    """All partitions of ``n`` as ascending lists (Kelleher's accel_asc)."""
    if n == 0:
        yield []
        return
    a = [0] * (n + 1)
    k = 1
    y = n - 1
    while k != 0:
        x = a[k - 1] + 1
        k -= 1
        while 2 * x <= y:
            a[k] = x
            y -= x
            k += 1
        l = k + 1
        while x <= y:
            a[k] = x
            a[l] = y
            yield a[: k + 2]
            x += 1
            y -= 1
        a[k] = x + y
        y = x + y - 1
        yield a[: k + 1]


def enumerate_by_length(M: int) -> list[int]:
    """``out[N]`` = number of partitions of ``M`` with exactly ``N`` parts, by enumeration."""
    out = [0] * (M + 1)
    for p in partitions_asc(M):
        out[len(p)] += 1
    return out


def bivariate_gf(M_max: int) -> np.ndarray:
    """Coefficients of ``prod_k 1/(1 - y q^k)``: entry ``[m, n]`` = p(m, n)."""
    G = np.zeros((M_max + 1, M_max + 1), dtype=object)
    G[:, :] = 0
    G[0, 0] = 1
    for k in range(1, M_max + 1):
        for m in range(k, M_max + 1):
            G[m, 1:] += G[m - k, :-1]
    return G


def pentagonal_p(n_max: int) -> list[int]:
    """Unrestricted p(n) by Euler's pentagonal-number recurrence."""
    p = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def zeta(s: float) -> float:
    return float(mpmath.zeta(s))


def polylog(s: float, a: float) -> float:
    return float(mpmath.polylog(s, a))


def c_gamma_quad(g: float) -> float:
    """``int_0^inf (1/x - 1/(e^x - 1)) x^g dx`` with mpmath quadrature."""
    f = lambda x: (1 / x - 1 / mpmath.expm1(x)) * x**g
    # on [0, 1] substitute u = x^(1+g), which absorbs the x^g singularity
    # (tiny x cancels catastrophically even at 40 digits, so use the series there)
    h = lambda x: 0.5 - x / 12 + x**3 / 720 if x < 1e-8 else 1 / x - 1 / mpmath.expm1(x)
    near = mpmath.quad(lambda u: h(u ** (1 / (1 + g))), [0, 1]) / (1 + g)
    body = near + mpmath.quad(f, [1, 10, 40])
    # beyond 40 the 1/x part integrates in closed form; the rest decays like e^-x
    tail = mpmath.mpf(40) ** g / -g - mpmath.quad(lambda x: x**g / mpmath.expm1(x), [40, mpmath.inf])
    return float(body + tail)


def nested_bisection(energies, degeneracies, N: float, E: float) -> tuple[float, float]:
    """``(a, b)`` reproducing ``(N, E)`` by two nested brentq solves."""
    e = np.asarray(energies, dtype=float)
    g = np.asarray(degeneracies, dtype=float)

    def a_for(b):
        f = lambda a: float(np.sum(g / np.expm1(a + b * e))) - N
        lo = -b * e[0] + 1e-14
        hi = 1.0
        while f(hi) > 0:
            hi *= 2
        return optimize.brentq(f, lo, hi, xtol=1e-15, rtol=1e-15)

    def mean_gap(lb):
        b = math.exp(lb)
        a = a_for(b)
        occ = g / np.expm1(a + b * e)
        return float(np.sum(e * occ) / np.sum(occ)) - E / N

    with np.errstate(over="ignore", divide="ignore"):
        lb = optimize.brentq(mean_gap, -12.0, 6.0, xtol=1e-15, rtol=1e-15)
        b = math.exp(lb)
        return a_for(b), b


def heat_u(x: float, t: float, eps: float, P) -> float:
    """Cole-Hopf heat solution by scipy quadrature (moderate eps only)."""
    f = lambda xi: math.exp(-((x - xi) ** 2 / (2 * t) + P(xi)) / eps)
    val, _ = integrate.quad(f, -np.inf, np.inf, epsabs=0, epsrel=1e-12, limit=400)
    return val / math.sqrt(2 * math.pi * eps * t)


def characteristic_value(x: float, t: float, p0, lo: float, hi: float) -> float:
    """``p0(xi)`` with ``xi + t p0(xi) = x`` on a bracket where the map is monotone."""
    xi = optimize.brentq(lambda s: s + t * p0(s) - x, lo, hi, xtol=1e-15)
    return p0(xi)


def finite_occupancy_integral(g: float, b: float, k: float) -> float:
    """``int_0^inf [1/(e^{bx}-1) - k/(e^{kbx}-1)] x^g dx`` with mpmath, via ``u = x^(1+g)``."""
    a = 1 + g

    def h(x):
        if k * b * x < 1e-8:  # the 1/x poles cancel; use the series
            return (k - 1) / 2 + b * x * (1 - k * k) / 12
        return 1 / mpmath.expm1(b * x) - k / mpmath.expm1(k * b * x)

    cuts = [0] + sorted(((1 / (k * b)) ** a, (1 / b) ** a, (10 / b) ** a)) + [(120 / b) ** a]
    return float(mpmath.quad(lambda u: h(u ** (1 / a)), cuts) / a)


def kernel_power_sum(g: float, b: float, J: int = 2000) -> float:
    """``sum_j j^g (1/(bj) - 1/(e^{bj}-1))``: first ``J`` terms directly, the rest from Hurwitz zeta."""
    head = mpmath.fsum(mpmath.mpf(j) ** g * (1 / (b * mpmath.mpf(j)) - 1 / mpmath.expm1(b * j)) for j in range(1, J + 1))
    # beyond J the exponential part is below e^{-bJ}; only the power part remains
    tail = mpmath.zeta(1 - g, J + 1) / b - mpmath.nsum(lambda j: j**g / mpmath.expm1(b * j), [J + 1, mpmath.inf])
    return float(head + tail)
