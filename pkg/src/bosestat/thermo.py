"""Polylogarithm thermodynamics in reduced coordinates.

Activities follow ``a = exp(mu/T)`` with ``mu <= 0``, so every polylog
argument lies in ``(0, 1]``.  ``M`` is the energy-like total and ``N`` the
particle-like total; ``Z = M / (N T)`` is the compressibility factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, NoRootError
from .numerics import bisect, golden_min, sign_changes
from .specfun import c_gamma, polylog, zeta

ACTIVITY_CONVENTION = "a = exp(mu/T)"
GAMMA_LO = -0.999  # c(gamma) diverges at -1
GAMMA_HI = -1e-4
DOUBLE_ROOT_RTOL = 1e-9


def zc_of_gamma(gamma: float) -> float:
    """Critical compressibility ``zeta(gamma+2) / zeta(gamma+1)`` for ``gamma > 0``."""
    if not gamma > 0.0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    return zeta(gamma + 2.0) / zeta(gamma + 1.0)


def gamma_c_from_Zc(Z_c: float) -> float:
    """Unique ``gamma_c > 0`` with ``zeta(gamma_c+2)/zeta(gamma_c+1) = Z_c``.

    The ratio climbs monotonically from 0 (as ``gamma -> 0+``) to 1.
    """
    if not 0.0 < Z_c < 1.0:
        raise NoRootError(f"Z_c must lie in (0, 1), got {Z_c}")
    lo, hi = 1e-9, 60.0
    f = lambda g: zc_of_gamma(g) - Z_c
    f_lo, f_hi = f(lo), f(hi)
    if f_lo > 0.0 or f_hi < 0.0:
        raise NoRootError(f"Z_c = {Z_c} is outside the attainable range [{f_lo + Z_c:.3g}, {f_hi + Z_c:.15g}]")
    return bisect(f, lo, hi, xtol=1e-14, f_lo=f_lo, f_hi=f_hi)


@dataclass(frozen=True)
class GasSpec:
    """Reduced-coordinate description of one pure gas."""

    gamma_c: float
    Lambda: float = 2.0
    Z_c: float = field(default=float("nan"))
    activity_convention: str = ACTIVITY_CONVENTION

    def __post_init__(self):
        if not self.gamma_c > 0.0:
            raise DomainError(f"gamma_c must be positive, got {self.gamma_c}")
        if not self.Lambda > 0.0:
            raise DomainError(f"Lambda must be positive, got {self.Lambda}")
        zc = zc_of_gamma(self.gamma_c)
        if math.isnan(self.Z_c):
            object.__setattr__(self, "Z_c", zc)
        elif abs(self.Z_c - zc) > 1e-10:
            raise DomainError(f"Z_c = {self.Z_c} does not match gamma_c = {self.gamma_c} (gives {zc})")
        if self.activity_convention != ACTIVITY_CONVENTION:
            raise DomainError(f"unsupported activity convention {self.activity_convention!r}")

    @classmethod
    def from_Zc(cls, Z_c: float = 0.29, Lambda: float = 2.0) -> "GasSpec":
        g = gamma_c_from_Zc(Z_c)
        return cls(g, Lambda, zc_of_gamma(g))

    @cached_property
    def A_minimum(self) -> tuple[float, float]:
        """``(gamma_min, A_min)``: the minimum of ``A`` over ``(-1, 0)``."""
        g, log_a = golden_min(lambda x: log_A(x, self), GAMMA_LO, GAMMA_HI, xtol=1e-10)
        return g, math.exp(log_a)


@dataclass(frozen=True)
class ThermoPoint:
    T: float
    mu: float
    a: float
    M: float
    N: float
    Z: float
    gamma: float = float("nan")


@dataclass(frozen=True)
class IsoCurve:
    kind: str
    points: tuple[ThermoPoint, ...]
    skipped: tuple[tuple[float, str], ...] = ()

    KINDS = ("gas-isotherm", "liquid-isochor", "spinodal", "binodal-segment")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise DomainError(f"unknown curve kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.points)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points], dtype=float)


def _check_T(T: float) -> float:
    T = float(T)
    if not (math.isfinite(T) and T > 0.0):
        raise DomainError(f"T must be positive, got {T}")
    return T


def _activity(mu: float, T: float) -> float:
    if mu > 0.0:
        raise DomainError(f"mu must be <= 0, got {mu}")
    return math.exp(mu / T)


def gas_point(spec: GasSpec, T: float, mu: float, gamma: float) -> ThermoPoint:
    """``M = T^(2+g) Li_{2+g}(a)``, ``N = T^(1+g) Li_{1+g}(a)``, ``Z = M/(N T)``."""
    T = _check_T(T)
    if not gamma > -1.0:
        raise DomainError(f"gamma must exceed -1, got {gamma}")
    a = _activity(mu, T)
    if a == 0.0:
        # Boltzmann limit: both series reduce to their first term
        return ThermoPoint(T, mu, a, 0.0, 0.0, 1.0, gamma)
    li_m = polylog(2.0 + gamma, a)
    li_n = polylog(1.0 + gamma, a)
    M = T ** (2.0 + gamma) * li_m
    N = T ** (1.0 + gamma) * li_n
    return ThermoPoint(T, mu, a, M, N, li_m / li_n, gamma)


def gas_isotherm(spec: GasSpec, T: float, mu_grid: Sequence[float]) -> IsoCurve:
    """Gas branch at ``gamma = gamma_c`` over a decreasing grid of ``mu <= 0``."""
    mus = [float(m) for m in mu_grid]
    if not mus:
        raise DomainError("mu grid is empty")
    if any(b >= a for a, b in zip(mus, mus[1:])):
        raise DomainError("mu grid must be strictly decreasing")
    return IsoCurve("gas-isotherm", tuple(gas_point(spec, T, m, spec.gamma_c) for m in mus))


def liquid_isochor(spec: GasSpec, T: float) -> ThermoPoint:
    """Liquid level ``N = T^(g+1) zeta(g+1)`` with its anchor ``M = T^(g+2) zeta(g+2)``."""
    T = _check_T(T)
    if T > 1.0:
        raise DomainError(f"liquid branch needs T <= 1, got {T}")
    g = spec.gamma_c
    N = T ** (g + 1.0) * zeta(g + 1.0)
    M = T ** (g + 2.0) * zeta(g + 2.0)
    return ThermoPoint(T, 0.0, 1.0, M, N, M / (N * T), g)


def entropy_gas(n: float, spec: GasSpec, mu: float, T: float, gamma: float) -> float:
    """Hartley entropy ``S = n [Z (2 + gamma) + mu/T]`` of the gas branch.

    At ``mu = 0`` the count saturates at ``N_c = T^(1+gamma) zeta(1+gamma)``:
    larger ``n`` add nothing (the condensate plateau).
    """
    if not n > 0.0:
        raise DomainError(f"n must be positive, got {n}")
    if not gamma > 0.0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    pt = gas_point(spec, T, mu, gamma)
    if mu == 0.0:
        n = min(n, pt.N)
    return n * (pt.Z * (2.0 + gamma) + mu / T)


# -------------------------------------------------------- gamma < 0 side


def _check_negative_gamma(gamma: float) -> None:
    if not -1.0 < gamma < 0.0:
        raise DomainError(f"gamma must lie in (-1, 0), got {gamma}")


def log_A(gamma: float, spec: GasSpec) -> float:
    """``ln A(gamma) = [(gamma - gamma_c) ln Lambda + ln c(gamma)] / (1 + gamma)``."""
    _check_negative_gamma(gamma)
    return ((gamma - spec.gamma_c) * math.log(spec.Lambda) + math.log(c_gamma(gamma))) / (1.0 + gamma)


def A_of_gamma(gamma: float, spec: GasSpec) -> float:
    """Slope of the linear law ``N = A(gamma) T``: ``(Lambda^(gamma-gamma_c) c(gamma))^(1/(1+gamma))``."""
    return math.exp(log_A(gamma, spec))


def spinodal_target(spec: GasSpec, T: float) -> float:
    """Right-hand side ``T^gamma_c zeta(gamma_c + 1)`` of the spinodal condition."""
    return _check_T(T) ** spec.gamma_c * zeta(spec.gamma_c + 1.0)


def t0_min(spec: GasSpec) -> float:
    """Lowest temperature with a negative-gamma spinodal root."""
    _, a_min = spec.A_minimum
    return (a_min / zeta(spec.gamma_c + 1.0)) ** (1.0 / spec.gamma_c)


class GammaRoots(NamedTuple):
    least: float  # the more negative root, used downstream
    metastable: float


def gamma_roots(spec: GasSpec, target: float) -> GammaRoots:
    """Both roots of ``A(gamma) = target`` on ``(-1, 0)``.

    ``A`` is convex-like with a single minimum, so each side of the minimum
    is monotone and holds at most one root.
    """
    if not target > 0.0:
        raise DomainError(f"target must be positive, got {target}")
    g_min, a_min = spec.A_minimum
    gap = math.log(target) - math.log(a_min)
    if abs(gap) <= DOUBLE_ROOT_RTOL:
        return GammaRoots(g_min, g_min)
    if gap < 0.0:
        raise NoRootError(f"A(gamma) = {target:.10g} has no root: min A = {a_min:.10g} at gamma = {g_min:.6g}")
    log_t = math.log(target)
    f = lambda g: log_A(g, spec) - log_t
    f_mid = -gap
    roots = []
    for lo, hi in ((GAMMA_LO, g_min), (g_min, GAMMA_HI)):
        f_lo = f(lo) if lo != g_min else f_mid
        f_hi = f(hi) if hi != g_min else f_mid
        if f_lo * f_hi > 0.0:
            raise NoRootError(f"A(gamma) = {target:.10g} has no root in [{lo}, {hi}]")
        roots.append(bisect(f, lo, hi, xtol=1e-12, f_lo=f_lo, f_hi=f_hi))
    return GammaRoots(roots[0], roots[1])


def gamma_of_T(T: float, spec: GasSpec) -> GammaRoots:
    """Roots of ``A(gamma) = T^gamma_c zeta(gamma_c + 1)``; ``least`` is gamma(T)."""
    T = _check_T(T)
    try:
        return gamma_roots(spec, spinodal_target(spec, T))
    except NoRootError as exc:
        raise NoRootError(f"T = {T} is below T0 = {t0_min(spec):.10g}: {exc}") from exc


def a0_solve(spec: GasSpec, gamma_0: float, *, printed_orientation: bool = False) -> float:
    """Activity normalisation: root of ``Li_{2+g0}(a0) = zeta(2+g0) Lambda^(g0-gamma_c)``.

    ``printed_orientation=True`` uses ``Lambda^(gamma_c-g0)`` instead, which
    for ``Lambda > 1`` puts the target above ``zeta`` and has no root.
    """
    _check_negative_gamma(gamma_0)
    s = 2.0 + gamma_0
    expo = gamma_0 - spec.gamma_c
    if printed_orientation:
        expo = -expo
    target = zeta(s) * spec.Lambda**expo
    z = zeta(s)
    if target > z * (1.0 + 1e-15):
        raise NoRootError(f"Li_{s:.6g}(a) = {target:.10g} exceeds zeta({s:.6g}) = {z:.10g}; no activity in (0, 1]")
    if target >= z:
        return 1.0
    f = lambda a: polylog(s, a) - target
    return bisect(f, 0.0, 1.0, xtol=1e-16, f_lo=-target, f_hi=z - target)


class PhaseMatch(NamedTuple):
    a_g: float
    mu_star: float
    M_match: float


def _match_sides(spec: GasSpec, T: float, g_abs: float):
    left = lambda a: T**spec.gamma_c * polylog(2.0 + spec.gamma_c, a)
    scale = spec.Lambda ** (-g_abs - spec.gamma_c) * T ** (-g_abs)
    right = lambda a: scale * polylog(2.0 - g_abs, a)
    return left, right


def phase_match(spec: GasSpec, T: float) -> PhaseMatch:
    """Gas activity where the gas and liquid ``M`` coincide at temperature ``T``.

    Solves ``T^gc Li_{2+gc}(a) = Lambda^(-|g|-gc) T^-|g| Li_{2-|g|}(a)`` with
    ``g = gamma(T)``; the liquid activity is ``a_l = a0 a_g``.
    """
    T = _check_T(T)
    if T > 1.0:
        raise DomainError(f"phase matching needs T <= 1, got {T}")
    g_abs = abs(gamma_of_T(T, spec).least)
    left, right = _match_sides(spec, T, g_abs)
    f = lambda a: left(a) - right(a)
    lo, hi = 1e-8, 1.0 - 1e-12
    brackets = sign_changes(f, lo, hi, n=200)
    if not brackets:
        raise NoRootError(f"no gas-liquid transition at T = {T}: the M branches do not cross in (0, 1)")
    a_lo, a_hi = brackets[0]
    a_g = bisect(f, a_lo, a_hi, xtol=1e-16)
    lhs, rhs = left(a_g), right(a_g)
    if abs(lhs - rhs) > 1e-8 * max(lhs, 1.0):
        raise NoRootError(f"phase matching residual {abs(lhs - rhs):.3g} too large at T = {T}")
    return PhaseMatch(a_g, T * math.log(a_g), lhs)


def phase_match_residual(spec: GasSpec, T: float, a_g: float) -> tuple[float, float]:
    """Both sides of the matching equation at ``a_g``."""
    g_abs = abs(gamma_of_T(T, spec).least)
    left, right = _match_sides(spec, T, g_abs)
    return left(a_g), right(a_g)


def spinodal_point(spec: GasSpec, T: float) -> ThermoPoint:
    """Negative-gamma spinodal point at ``T``.

    ``gamma = gamma(T)``, ``N = A(gamma) T`` (equal to the liquid level), ``M``
    the liquid anchor.  ``mu`` carries the scale ``-T (ln N)^(-1/4)`` where
    ``N > 1`` and NaN otherwise.
    """
    T = _check_T(T)
    g = gamma_of_T(T, spec).least
    N = A_of_gamma(g, spec) * T
    M = T ** (spec.gamma_c + 2.0) * zeta(spec.gamma_c + 2.0)
    mu = -T * math.log(N) ** -0.25 if N > 1.0 else float("nan")
    a = math.exp(mu / T) if N > 1.0 else float("nan")
    return ThermoPoint(T, mu, a, M, N, M / (N * T), g)


def spinodal_curve(spec: GasSpec, T_grid: Sequence[float]) -> IsoCurve:
    """Spinodal over a temperature grid; points below ``T0`` are skipped with a reason."""
    points, skipped = [], []
    for T in T_grid:
        try:
            points.append(spinodal_point(spec, T))
        except NoRootError as exc:
            skipped.append((float(T), str(exc)))
    return IsoCurve("spinodal", tuple(points), tuple(skipped))


# ------------------------------------------------------ volume correction


def _xi(q: float, T: float) -> float:
    if not q >= 0.0:
        raise DomainError(f"q must be non-negative, got {q}")
    return q * (1.0 / T - 1.0)


def volume_corrected(
    spec: GasSpec, T: float, a: float, q: float, *, limit_threshold: float = 1e-6
) -> tuple[float, float]:
    """Pressure and ``Z`` with the wall-reflection correction, ``xi = q (1/T - 1)``.

    For ``|xi| < limit_threshold`` the ``xi -> 0`` limit is returned:
    ``P = T^(2+gc) Li_{2+gc}(a)``, ``Z = Li_{2+gc}(a) / Li_{1+gc}(a)``.
    """
    T = _check_T(T)
    if not 0.0 < a < 1.0:
        raise DomainError(f"activity must lie in (0, 1), got {a}")
    g = spec.gamma_c
    xi = _xi(q, T)
    if abs(xi) < limit_threshold:
        li2 = polylog(2.0 + g, a)
        return T ** (2.0 + g) * li2, li2 / polylog(1.0 + g, a)
    shifted = a * math.exp(-xi)
    if shifted >= 1.0:
        raise DomainError(f"a e^-xi = {shifted} >= 1 leaves the polylog domain")
    d3 = polylog(3.0 + g, shifted) - polylog(3.0 + g, a)
    d2 = polylog(2.0 + g, shifted) - polylog(2.0 + g, a)
    return -(T ** (2.0 + g)) / xi * d3, d3 / d2


def spinodal_corrected(spec: GasSpec, T: float, q: float) -> float:
    """Corrected spinodal target ``T^gc |Li_{2+gc}(e^-xi) - Li_{2+gc}(1)| / xi``.

    At ``xi = 0`` this is the uncorrected ``T^gc zeta(1+gc)``.
    """
    T = _check_T(T)
    g = spec.gamma_c
    xi = _xi(q, T)
    if xi == 0.0:
        return spinodal_target(spec, T)
    arg = math.exp(-xi)
    if arg >= 1.0:
        raise DomainError(f"e^-xi = {arg} >= 1: the correction needs T < 1")
    return T**g * abs(polylog(2.0 + g, arg) - zeta(2.0 + g)) / xi


def spinodal_corrected_roots(spec: GasSpec, T: float, q: float) -> GammaRoots:
    return gamma_roots(spec, spinodal_corrected(spec, T, q))


# ------------------------------------------------ mixtures and scaling


def _g_mix(gamma: float) -> float:
    return (gamma + 2.0) * zc_of_gamma(gamma)


def mixture_gamma(alpha: float, gamma_1: float, gamma_2: float) -> float:
    """Effective ``gamma`` of a two-gas mixture.

    Root of ``(g+2) Z(g) = alpha (g1+2) Z(g1) + (1-alpha) (g2+2) Z(g2)``
    with ``Z(g) = zeta(g+2)/zeta(g+1)``.  The left side increases in ``g``,
    so the root lies between ``g1`` and ``g2``.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    if not (gamma_1 > 0.0 and gamma_2 > 0.0):
        raise DomainError("gamma_1 and gamma_2 must be positive")
    if alpha == 1.0 or gamma_1 == gamma_2:
        return float(gamma_1)
    if alpha == 0.0:
        return float(gamma_2)
    target = alpha * _g_mix(gamma_1) + (1.0 - alpha) * _g_mix(gamma_2)
    lo, hi = min(gamma_1, gamma_2), max(gamma_1, gamma_2)
    f = lambda g: _g_mix(g) - target
    return bisect(f, lo, hi, xtol=1e-14)


def log_scale_add(A: float, B: float, n: float) -> float:
    """``ln(n^ln A + n^ln B) / ln n``, evaluated without forming the powers."""
    if not (A > 0.0 and B > 0.0):
        raise DomainError("A and B must be positive")
    if not n > 1.0:
        raise DomainError(f"n must exceed 1, got {n}")
    la, lb = math.log(A), math.log(B)
    hi, lo = max(la, lb), min(la, lb)
    ln_n = math.log(n)
    return hi + math.log1p(math.exp(-(hi - lo) * ln_n)) / ln_n


def total_probability_check(cond_probs: Sequence[float], priors: Sequence[float]) -> float:
    """``sum_i P(B | A_i) P(A_i)``."""
    p = np.asarray(cond_probs, dtype=float)
    w = np.asarray(priors, dtype=float)
    if p.ndim != 1 or p.shape != w.shape or p.size == 0:
        raise DomainError("conditional probabilities and priors must be equal-length, non-empty")
    if np.any((p < 0.0) | (p > 1.0)) or np.any(w < 0.0):
        raise DomainError("probabilities must lie in [0, 1]")
    if abs(math.fsum(w) - 1.0) > 1e-12:
        raise DomainError(f"priors sum to {math.fsum(w)!r}, not 1")
    return min(1.0, math.fsum(p * w))


def dimension_estimate(M: float, n: float) -> float:
    """``ln M / ln n``."""
    if not M >= 1.0:
        raise DomainError(f"M must be >= 1, got {M}")
    if not n > 1.0:
        raise DomainError(f"n must exceed 1, got {n}")
    return math.log(M) / math.log(n)
