"""Real-order special functions: zeta, polylogarithm, gamma, the Bose kernel.

All functions are pure and work in IEEE double precision.  The activity
argument of the polylogarithm is restricted to ``0 < a <= 1``; that is the
only range where the thermodynamic series converge.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .numerics import quad

# B_{2j} for j = 1..12.
_BERNOULLI_EVEN = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330), Fraction(854513, 138),
    Fraction(-236364091, 2730),
]
# B_{2j} / (2j)!
_EM_COEFFS = [float(b / math.factorial(2 * j)) for j, b in enumerate(_BERNOULLI_EVEN, 1)]


def _borwein_coeffs(n: int) -> list[float]:
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), exact then rounded
    acc = Fraction(0)
    d = []
    for i in range(n + 1):
        acc += Fraction(math.factorial(n + i - 1) * 4**i,
                        math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    dn = d[n]
    return [float((d[k] - dn) / dn) for k in range(n)]


_BORWEIN_N = 36
_BORWEIN = _borwein_coeffs(_BORWEIN_N)


def _check_real(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def hurwitz_zeta(s: float, q: float) -> float:
    """Hurwitz zeta ``sum_{k>=0} (q+k)^-s`` for ``s > 1``, ``q > 0``.

    Direct summation up to a shift ``w = q + N`` followed by the
    Euler-Maclaurin tail with twelve Bernoulli corrections.
    """
    s = _check_real("s", s)
    if s <= 1.0:
        raise DomainError(f"hurwitz_zeta needs s > 1, got {s}")
    if q <= 0.0:
        raise DomainError(f"hurwitz_zeta needs q > 0, got {q}")
    n = max(0, math.ceil(max(16.0, s + 8.0) - q))
    head = math.fsum((q + k) ** -s for k in range(n))
    w = q + n
    tail = [w ** (1.0 - s) / (s - 1.0), 0.5 * w**-s]
    rising = s  # s (s+1) ... (s+2j-2)
    wpow = w ** (-s - 1.0)
    for j, coeff in enumerate(_EM_COEFFS, 1):
        tail.append(coeff * rising * wpow)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        wpow /= w * w
    return head + math.fsum(tail)


def _eta(s: float) -> float:
    # Dirichlet eta via Borwein's accelerated alternating sum.
    terms = [(-1) ** k * c / (k + 1) ** s for k, c in enumerate(_BORWEIN)]
    return -math.fsum(terms)


# Taylor coefficients of zeta about s = 0 (radius 1, set by the pole).
_ZETA_AT_ZERO = [
    -0.5, -0.91893853320467274178, -1.0031782279542924256, -1.000785194477042408,
    -0.99987929950057116496, -1.000001940896320456, -1.0000013011460139596,
    -0.99999983138417361078, -1.0000000057646759799, -1.0000000009110164892,
    -0.99999999985029924058, -1.0000000000094068957, -1.0000000000000409258,
    -0.99999999999993460095, -1.000000000000006544,
]


def _zeta_any(s: float) -> float:
    """Zeta on the whole real line except the pole (internal)."""
    if s > 1.0:
        return hurwitz_zeta(s, 1.0)
    if abs(s) < 0.05:
        # 1 - s is too close to the pole for the functional equation
        acc = 0.0
        for c in reversed(_ZETA_AT_ZERO):
            acc = acc * s + c
        return acc
    if s > 0.0:
        return _eta(s) / (1.0 - 2.0 ** (1.0 - s))
    if s == math.floor(s) and int(s) % 2 == 0:
        return 0.0  # trivial zeros
    # functional equation, 1 - s > 1; reduce s mod 4 (exact) inside the sine
    r = s - 4.0 * math.floor(s / 4.0)
    return (2.0**s * math.pi ** (s - 1.0) * math.sin(0.5 * math.pi * r)
            * math.gamma(1.0 - s) * hurwitz_zeta(1.0 - s, 1.0))


def zeta(s: float) -> float:
    """Riemann zeta for real ``s > 0``, ``s != 1``.

    ``s > 1`` uses Euler-Maclaurin summation; ``0 < s < 1`` uses the
    alternating eta series, ``zeta = eta / (1 - 2^(1-s))``.
    """
    s = _check_real("s", s)
    if s <= 0.0 or s == 1.0:
        raise DomainError(f"zeta is defined here for s > 0, s != 1; got {s}")
    return _zeta_any(s)


def gamma_fn(x: float) -> float:
    """Gamma function on the positive axis."""
    x = _check_real("x", x)
    if x <= 0.0:
        raise DomainError(f"gamma_fn needs x > 0, got {x}")
    return math.gamma(x)


# ---------------------------------------------------------------- polylog

_DIRECT_MAX_A = 0.5
_NEAR_INT = 0.05


def _polylog_direct(s: float, a: float) -> float:
    total = 0.0
    term_k = a
    k = 1
    while True:
        term = term_k / k**s
        total += term
        if term < 1e-17 * total or k > 5000:
            return total
        k += 1
        term_k *= a


# Stieltjes constants: zeta(1+d) = 1/d + sum_n (-1)^n gamma_n d^n / n!
_STIELTJES = [
    0.57721566490153286061, -0.072815845483676724861, -0.0096903631928723184845,
    0.0020538344203033458662, 0.0023253700654673000575, 0.00079332381730106270175,
    -0.00023876934543019960987, -0.00052728956705775104607, -0.0003521233538030395096,
]
_ZETA_EVEN = [math.pi**2 / 6, math.pi**4 / 90, math.pi**6 / 945,
              math.pi**8 / 9450, math.pi**10 / 93555,
              691 * math.pi**12 / 638512875]


def _singular_pair(m: int, d: float, y: float) -> float:
    """``Gamma(-m-d) y^(m+d) + zeta(1+d) (-y)^m / m!`` for small ``|d|``.

    Both terms have a simple pole at ``d = 0``.  Writing everything as
    ``1 + d * (...)`` cancels the poles analytically.
    """
    # d zeta(1+d) = 1 + d * z1
    z1 = math.fsum((-1) ** n * g * d**n / math.factorial(n) for n, g in enumerate(_STIELTJES))
    # ln(pi d / sin(pi d)) / d
    lg = math.fsum(z * d ** (2 * k - 1) / k for k, z in enumerate(_ZETA_EVEN, 1))
    # ln(m! / Gamma(m+1+d)) / d, via the series of lgamma(1+d)
    lgamma1 = -_STIELTJES[0] + math.fsum(
        (-1) ** k * _zeta_any(k) * d ** (k - 1) / k for k in range(2, 22))
    lh = -lgamma1 - math.fsum(math.log1p(d / j) / d for j in range(1, m + 1)) if d else (
        -lgamma1 - math.fsum(1.0 / j for j in range(1, m + 1)))
    phi = lg + lh + math.log(y)
    em = phi if d == 0.0 else math.expm1(d * phi) / d
    return (-1) ** m * y**m / math.factorial(m) * (z1 - em)


def _polylog_mu_series(s: float, mu: float) -> float:
    """``Li_s(e^mu)`` for ``-2pi < mu < 0`` as a power series in ``mu``.

    The non-analytic ``Gamma(1-s) (-mu)^(s-1)`` term pairs with the
    ``zeta(s-m)`` term of index ``m = round(s) - 1``; near integer orders that
    pair goes through :func:`_singular_pair`.
    """
    n = round(s)
    d = s - n
    paired = n >= 1 and abs(d) < _NEAR_INT
    if paired:
        m = n - 1
        terms = [_singular_pair(m, d, -mu)]
    else:
        m = -1
        terms = [math.gamma(1.0 - s) * (-mu) ** (s - 1.0)]
    scale = abs(terms[0])
    small = 0
    mu_k = 1.0  # mu^k / k!
    for k in range(120):
        if k != m:
            t = _zeta_any(s - k) * mu_k
            terms.append(t)
            scale = max(scale, abs(t))
            if t == 0.0:
                pass  # trivial zero of zeta, says nothing about convergence
            elif k > s + 2 and abs(t) < 1e-18 * scale:
                small += 1
                if small == 2:
                    break
            else:
                small = 0
        mu_k *= mu / (k + 1)
    return math.fsum(terms)


def polylog(s: float, a: float) -> float:
    """Polylogarithm ``Li_s(a) = sum_k a^k / k^s`` for real ``s > 0``, ``0 < a <= 1``.

    Small activities are summed directly.  For ``a > 1/2`` the series in
    ``mu = ln a`` is used, which converges geometrically with ratio
    ``|mu| / 2pi`` however close ``a`` is to one.
    """
    s = _check_real("s", s)
    a = _check_real("a", a)
    if s <= 0.0:
        raise DomainError(f"polylog order must be positive, got {s}")
    if not 0.0 < a <= 1.0:
        raise DomainError(f"activity must lie in (0, 1], got {a}")
    if a == 1.0:
        if s <= 1.0:
            raise DomainError(f"Li_s(1) diverges for s <= 1 (s={s})")
        return _zeta_any(s)
    if s == 1.0:
        return -math.log1p(-a)
    if a <= _DIRECT_MAX_A:
        return _polylog_direct(s, a)
    return _polylog_mu_series(s, math.log(a))


# ------------------------------------------------------------ Bose kernel

# F(x) = 1/2 - sum_j B_2j x^(2j-1) / (2j)!
_KERNEL_SERIES = [-c for c in _EM_COEFFS[:6]]
_KERNEL_SWITCH = 0.1


def f_kernel(xi: float) -> float:
    """``F(xi) = 1/xi - 1/(e^xi - 1)``, with ``F(0) = 1/2``.

    Falls in ``(0, 1/2)`` and decreases monotonically.  Small arguments go
    through the Bernoulli expansion to avoid cancellation.
    """
    xi = _check_real("xi", xi)
    if xi < 0.0:
        raise DomainError(f"f_kernel needs xi >= 0, got {xi}")
    if xi < _KERNEL_SWITCH:
        x2 = xi * xi
        acc = 0.0
        for c in reversed(_KERNEL_SERIES):
            acc = acc * x2 + c
        return 0.5 + xi * acc
    if xi > 700.0:
        return 1.0 / xi
    return 1.0 / xi - 1.0 / math.expm1(xi)


def f_kernel_array(xi: np.ndarray) -> np.ndarray:
    """Vectorised :func:`f_kernel` for non-negative arrays."""
    xi = np.asarray(xi, dtype=float)
    out = np.empty_like(xi)
    small = xi < _KERNEL_SWITCH
    xs = xi[small]
    x2 = xs * xs
    acc = np.zeros_like(xs)
    for c in reversed(_KERNEL_SERIES):
        acc = acc * x2 + c
    out[small] = 0.5 + xs * acc
    big = ~small
    xb = np.minimum(xi[big], 700.0)
    out[big] = 1.0 / xi[big] - 1.0 / np.expm1(xb)
    return out


_C_GAMMA_MIN = -0.999
_C_GAMMA_SPLIT = 40.0


def c_gamma(gamma: float) -> float:
    """``c(gamma) = int_0^inf F(xi) xi^gamma dxi`` for ``-1 < gamma < 0``.

    Computed by quadrature: ``[0, 1]`` after the substitution
    ``xi = u^(1/(1+gamma))``, ``[1, 40]`` directly, and the tail from the
    ``1/xi`` asymptote.  Equals ``-Gamma(1+gamma) zeta(1+gamma)``.
    The integral blows up as ``gamma -> -1``; below -0.999 a
    :class:`DomainError` is raised.
    """
    gamma = _check_real("gamma", gamma)
    if not -1.0 < gamma < 0.0:
        raise DomainError(f"c_gamma needs -1 < gamma < 0, got {gamma}")
    if gamma < _C_GAMMA_MIN:
        raise DomainError(f"c_gamma diverges as gamma -> -1; refused below {_C_GAMMA_MIN}")
    alpha = 1.0 + gamma
    inv = 1.0 / alpha

    def near(u: np.ndarray) -> np.ndarray:
        return f_kernel_array(u**inv) * inv

    def middle(x: np.ndarray) -> np.ndarray:
        return f_kernel_array(x) * x**gamma

    i1, _ = quad(near, 0.0, 1.0, abs_tol=1e-13, rel_tol=1e-13)
    i2, _ = quad(middle, 1.0, _C_GAMMA_SPLIT, abs_tol=1e-13, rel_tol=1e-13)
    L = _C_GAMMA_SPLIT
    # beyond L: xi^(gamma-1) minus the exponentially small Bose part
    tail = L**gamma / -gamma - L**gamma * math.exp(-L)
    return i1 + i2 + tail
