"""Bose-Einstein level statistics.

Occupation numbers, the non-equilibrium entropy, inversion of the two
Lagrange multipliers from ``(N, E)``, Courant/Weyl state counting, the
degeneration energy, and the finite-occupancy (parastatistics) sums with
their zeta asymptotics.

Multipliers follow the occupation law ``n = 1 / (exp(a + b eps) - 1)`` with
``a = -mu/T >= 0`` and ``b = 1/T > 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import (
    ConvergenceError,
    DomainError,
    InfeasibleError,
    TruncationError,
)
from .numerics import bisect, quad
from .specfun import c_gamma, f_kernel, f_kernel_array, gamma_fn, hurwitz_zeta, zeta

SERIES_TOL = 1e-12


@dataclass(frozen=True)
class Multipliers:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a >= 0.0):
            raise DomainError(f"multiplier a must be finite and >= 0, got {self.a}")
        if not (math.isfinite(self.b) and self.b > 0.0):
            raise DomainError(f"multiplier b must be positive, got {self.b}")

    @classmethod
    def from_thermo(cls, T: float, mu: float) -> "Multipliers":
        return cls(-mu / T, 1.0 / T)


@dataclass(frozen=True)
class MacroState:
    N: float
    E: float


@dataclass(frozen=True)
class LevelSpectrum:
    """Energy levels with real degeneracies.

    ``basis_exponent`` marks a truncated basis series ``eps_i = i^p``
    (``p = D/2``, unit degeneracy): sums over it carry a rigorous tail
    bound and fail with :class:`TruncationError` when the stored levels are
    not enough.  Without it the listed levels are the whole spectrum.
    """

    energies: np.ndarray
    degeneracies: np.ndarray
    basis_exponent: float | None = None
    occupations: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        g = np.asarray(self.degeneracies, dtype=float)
        if e.ndim != 1 or e.shape != g.shape or e.size == 0:
            raise DomainError("energies and degeneracies must be equal-length 1-D sequences")
        if not (np.all(np.isfinite(e)) and np.all(e > 0.0)):
            raise DomainError("energies must be positive and finite")
        if np.any(np.diff(e) <= 0.0):
            raise DomainError("energies must be strictly increasing")
        if not np.all(g > 0.0):
            raise DomainError("degeneracies must be positive")
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "degeneracies", g)
        if self.occupations is not None:
            n = np.asarray(self.occupations, dtype=float)
            if n.shape != e.shape:
                raise DomainError("occupations must match the level count")
            object.__setattr__(self, "occupations", n)

    @property
    def truncation_index(self) -> int:
        return self.energies.size

    def with_occupations(self, occupations) -> "LevelSpectrum":
        return LevelSpectrum(self.energies, self.degeneracies, self.basis_exponent, occupations)


def basis_spectrum(D: float, n_levels: int) -> LevelSpectrum:
    """The first ``n_levels`` terms of the basis series ``eps_i = i^(D/2)``."""
    if D <= 0:
        raise DomainError(f"D must be positive, got {D}")
    p = D / 2.0
    i = np.arange(1, n_levels + 1, dtype=float)
    return LevelSpectrum(i**p, np.ones(n_levels), basis_exponent=p)


def occupation(eps: float, m: Multipliers) -> float:
    x = m.a + m.b * eps
    if x <= 0.0:
        raise DomainError(f"occupation diverges: a + b*eps = {x} <= 0")
    if x > 700.0:  # expm1 overflows; the Boltzmann tail is exact here
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def _occupations(spectrum: LevelSpectrum, a: float, b: float) -> np.ndarray:
    x = a + b * spectrum.energies
    if x[0] <= 0.0:
        raise DomainError(f"occupation diverges: a + b*eps_1 = {x[0]} <= 0")
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(x)


def entropy_noneq(spectrum: LevelSpectrum, occupations=None) -> float:
    """``sum_j G_j [(1+n_j) ln(1+n_j) - n_j ln n_j]``; empty levels add zero."""
    n = spectrum.occupations if occupations is None else np.asarray(occupations, dtype=float)
    if n is None:
        raise DomainError("spectrum carries no occupations")
    if n.shape != spectrum.energies.shape:
        raise DomainError("occupations must match the level count")
    if np.any(n < 0.0) or not np.all(np.isfinite(n)):
        raise DomainError("occupations must be finite and non-negative")
    g = spectrum.degeneracies
    with np.errstate(divide="ignore", invalid="ignore"):
        n_log_n = np.where(n > 0.0, n * np.log(np.where(n > 0.0, n, 1.0)), 0.0)
    return math.fsum(g * ((1.0 + n) * np.log1p(n) - n_log_n))


def _basis_tail(spectrum: LevelSpectrum, a: float, b: float) -> tuple[float, float]:
    """Upper bounds on the omitted ``N`` and ``E`` contributions of a basis series."""
    p = spectrum.basis_exponent
    n = spectrum.truncation_index
    x_n = a + b * spectrum.energies[-1]
    # 1/(e^x - 1) <= e^-x / (1 - e^-x_n) for x >= x_n; then sum <= integral
    pref = math.exp(-a) / -math.expm1(-x_n)
    z = b * n**p
    if z <= 1.0:  # x^p e^{-b x^p} not yet decreasing
        return math.inf, math.inf
    inv = 1.0 / p
    tail_n = pref * inv * b**-inv * special.gammaincc(inv, z) * special.gamma(inv)
    tail_e = pref * inv * b ** (-1.0 - inv) * special.gammaincc(1.0 + inv, z) * special.gamma(1.0 + inv)
    return tail_n, tail_e


def macro_from_multipliers(spectrum: LevelSpectrum, m: Multipliers) -> MacroState:
    """``N = sum G n``, ``E = sum eps G n`` over the spectrum."""
    occ = _occupations(spectrum, m.a, m.b)
    g = spectrum.degeneracies
    N = math.fsum(g * occ)
    E = math.fsum(spectrum.energies * g * occ)
    if spectrum.basis_exponent is not None:
        tail_n, tail_e = _basis_tail(spectrum, m.a, m.b)
        if tail_n > SERIES_TOL * N or tail_e > SERIES_TOL * E:
            raise TruncationError(
                f"{spectrum.truncation_index} levels leave a tail bound of "
                f"{max(tail_n / N, tail_e / E):.2e} (relative), above {SERIES_TOL}"
            )
    return MacroState(N, E)


def basis_spectrum_for(D: float, m: Multipliers, start: int = 64) -> LevelSpectrum:
    """Smallest doubling of ``start`` levels whose tail bound meets the tolerance."""
    n = start
    while n <= 2**24:
        spec = basis_spectrum(D, n)
        try:
            macro_from_multipliers(spec, m)
            return spec
        except TruncationError:
            n *= 2
    raise TruncationError(f"basis series D={D} needs more than 2^24 levels for {m}")


# ---------------------------------------------------------- inversion


def solve_multipliers(
    spectrum: LevelSpectrum,
    target: MacroState,
    *,
    rtol: float = 1e-12,
    maxiter: int = 100,
) -> Multipliers:
    """Find ``(a, b)`` reproducing ``target`` on ``spectrum``.

    Damped Newton on the logarithms of ``u = a + b eps_1`` and ``b``, with
    residuals ``ln N - ln N*`` and ``ln E - ln E*``.  The map is monotone in
    each multiplier so the root is unique; a nested-bisection solve takes
    over if Newton stalls.
    """
    N_t, E_t = float(target.N), float(target.E)
    if not (N_t > 0.0 and E_t > 0.0 and math.isfinite(N_t) and math.isfinite(E_t)):
        raise DomainError("target N and E must be positive and finite")
    e = spectrum.energies
    g = spectrum.degeneracies
    e1 = e[0]
    if e.size == 1:
        raise InfeasibleError("a single level fixes E/N = eps_1; b is undetermined")
    mean = E_t / N_t
    if mean <= e1 * (1.0 + 1e-9):
        raise InfeasibleError(
            f"mean energy {mean!r} is at the ground-state floor {float(e1)!r}; the inversion is ill-conditioned"
        )
    if spectrum.basis_exponent is None and mean >= float(np.dot(e, g) / g.sum()):
        raise InfeasibleError("mean energy is at or above the infinite-temperature mean of the spectrum")

    def residual(lu: float, lb: float):
        u, b = math.exp(lu), math.exp(lb)
        a = u - b * e1
        x = u + b * (e - e1)
        with np.errstate(over="ignore"):
            occ = 1.0 / np.expm1(x)
            dn = -occ * (1.0 + occ)  # d occ / d x
        N = math.fsum(g * occ)
        E = math.fsum(e * g * occ)
        r = np.array([math.log(N / N_t), math.log(E / E_t)])
        # x = u + b (e - e1); derivatives w.r.t. ln u and ln b
        dN = np.array([math.fsum(g * dn) * u, math.fsum(g * dn * (e - e1)) * b])
        dE = np.array([math.fsum(e * g * dn) * u, math.fsum(e * g * dn * (e - e1)) * b])
        J = np.vstack([dN / N, dE / E])
        return r, J, a

    # start from a Boltzmann-like guess: b from the mean excess, u from N
    lb = math.log(1.0 / max(mean - e1, 1e-300))
    lu = math.log(max(math.log1p(g[0] / N_t), 1e-12))
    converged = False
    for _ in range(maxiter):
        r, J, a = residual(lu, lb)
        if np.max(np.abs(r)) < rtol:
            converged = True
            break
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        lam = 1.0
        norm0 = np.max(np.abs(r))
        while lam > 1e-6:
            trial = (lu + lam * step[0], lb + lam * step[1])
            try:
                r_t, _, _ = residual(*trial)
            except (OverflowError, ZeroDivisionError, ValueError):
                r_t = None
            if r_t is not None and np.all(np.isfinite(r_t)) and np.max(np.abs(r_t)) < norm0:
                lu, lb = trial
                break
            lam *= 0.5
        else:
            break
    if converged:
        u, b = math.exp(lu), math.exp(lb)
        a = u - b * e1
    else:
        a, b = _nested_bisection(spectrum, N_t, E_t)
    if -1e-12 * (1.0 + b * e1) < a < 0.0:  # rounding at the a = 0 boundary
        a = 0.0
    if a < 0.0:
        raise InfeasibleError(f"target needs a = {a:.6g} < 0 (chemical potential above zero)")
    return Multipliers(float(a), float(b))


def _nested_bisection(spectrum: LevelSpectrum, N_t: float, E_t: float) -> tuple[float, float]:
    e, g = spectrum.energies, spectrum.degeneracies
    de = e - e[0]

    def occ_of(u: float, b: float) -> np.ndarray:
        with np.errstate(over="ignore"):
            return 1.0 / np.expm1(u + b * de)

    def u_for(b: float) -> float:
        # N decreases in u = a + b eps_1; bisect in ln u
        def f(lu):
            return math.log(math.fsum(g * occ_of(math.exp(lu), b)) / N_t)
        return math.exp(bisect(f, -60.0, math.log(40.0), xtol=1e-15))

    def mean_gap(lb: float) -> float:
        b = math.exp(lb)
        occ = occ_of(u_for(b), b)
        return math.log(math.fsum(e * g * occ) / math.fsum(g * occ)) - math.log(E_t / N_t)

    lb_lo = math.log(1e-8 / de[-1])
    lb_hi = math.log(30.0 / de[1])
    try:
        lb = bisect(mean_gap, lb_lo, lb_hi, xtol=1e-14)
    except ArithmeticError as exc:
        raise ConvergenceError(f"multiplier inversion failed: {exc}") from exc
    b = math.exp(lb)
    return u_for(b) - b * e[0], b


# ---------------------------------------------------- spectral counting


def courant_density(lam: float, V: float, mass: float, D: int, hbar: float) -> float:
    """Weyl/Courant count of Dirichlet eigenvalues below ``lam``."""
    for name, v in (("V", V), ("mass", mass), ("hbar", hbar)):
        if not v > 0.0:
            raise DomainError(f"{name} must be positive, got {v}")
    if lam < 0.0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    if int(D) != D or D < 1:
        raise DomainError(f"D must be a positive integer, got {D}")
    h = D / 2.0
    return V * mass**h * lam**h / (gamma_fn(h + 1.0) * (2.0 * math.pi) ** h * hbar**D)


def dirichlet_box_count(lam: float, side: float = math.pi, D: int = 3,
                        mass: float = 1.0, hbar: float = 1.0) -> int:
    """Eigenvalues of ``-(hbar^2/2m) Laplacian`` in a ``D``-cube below ``lam``, by lattice count."""
    # eigenvalue = hbar^2 pi^2 |n|^2 / (2 m side^2), n_i >= 1
    r2 = 2.0 * mass * lam * side**2 / (hbar**2 * math.pi**2)
    rmax = int(math.isqrt(int(r2))) + 1
    n = np.arange(1, rmax + 1, dtype=np.int64) ** 2
    grid = n
    for _ in range(D - 1):
        grid = (grid[:, None] + n[None, :]).ravel()
        grid = grid[grid <= r2]
    return int(np.count_nonzero(grid <= r2))


def weyl_cell_count(dp: float, dq: float, D: int, hbar: float) -> float:
    """Number of phase-space cells in a ``dp * dq`` block: ``dp dq / (2 pi hbar)^D``."""
    for name, v in (("dp", dp), ("dq", dq), ("hbar", hbar)):
        if not v > 0.0:
            raise DomainError(f"{name} must be positive, got {v}")
    if int(D) != D or D < 1:
        raise DomainError(f"D must be a positive integer, got {D}")
    return dp * dq / (2.0 * math.pi * hbar) ** D


def degeneration_energy(T_d: float, gamma: float, Lam: float, C: float, D: int) -> float:
    """``C Lam^D T_d^(2+gamma) zeta(1+D/2) Gamma(1+D/2)``."""
    if not T_d > 0.0 or not Lam > 0.0 or C < 0.0:
        raise DomainError("need T_d > 0, Lam > 0, C >= 0")
    if gamma <= -1.0:
        raise DomainError(f"gamma must exceed -1, got {gamma}")
    s = 1.0 + D / 2.0
    return C * Lam**D * T_d ** (2.0 + gamma) * zeta(s) * gamma_fn(s)


# ------------------------------------------------------ parastatistics


def parastat_omega(
    spectrum: LevelSpectrum,
    T: float,
    mu: float,
    N_cap: int,
    Lam: float,
    gamma: float,
    gamma_c: float,
) -> float:
    """Omega potential with at most ``N_cap - 1`` particles per state.

    ``-Lam^(gamma-gamma_c) T sum_k ln[(1 - x_k^N) / (1 - x_k)]``,
    ``x_k = exp((mu - eps_k)/T)``.  Basis-series spectra are checked for
    truncation: the omitted terms are bounded by the geometric majorant.
    """
    if not T > 0.0:
        raise DomainError(f"T must be positive, got {T}")
    if int(N_cap) != N_cap or N_cap < 1:
        raise DomainError(f"N_cap must be a positive integer, got {N_cap}")
    e = spectrum.energies
    if mu >= e[0]:
        raise DomainError(f"mu = {mu} must lie below the lowest level {e[0]}")
    y = (mu - e) / T  # < 0
    # ln(1 - x^N) - ln(1 - x), both via log1p/expm1
    log_num = np.log(-np.expm1(N_cap * y))
    log_den = np.log(-np.expm1(y))
    terms = spectrum.degeneracies * (log_num - log_den)
    total = math.fsum(terms)
    if spectrum.basis_exponent is not None and N_cap > 1:
        # each term <= -ln(1-x) <= x/(1-x); the tail is a geometric majorant
        x_n = math.exp(y[-1])
        spacing = (e[-1] - e[-2]) / T if e.size > 1 else 0.0
        q = math.exp(-spacing)
        bound = x_n / (1.0 - x_n) * q / (1.0 - q) if q < 1.0 else math.inf
        if spectrum.basis_exponent < 1.0 or bound > 1e-10 * max(abs(total), 1e-300):
            raise TruncationError(
                f"{e.size} levels leave a tail bound of {bound:.2e} in the Omega sum")
    return -(Lam ** (gamma - gamma_c)) * T * total


def _finite_occupancy_integrand(gamma: float, b: float, k: float):
    # 1/(e^{b xi}-1) - k/(e^{k b xi}-1) = k F(k b xi) - F(b xi), with F the Bose kernel
    alpha = 1.0 + gamma
    inv = 1.0 / alpha

    def f(u: np.ndarray) -> np.ndarray:
        xi = u**inv
        return k * f_kernel_array(k * b * xi) - f_kernel_array(b * xi)

    return f, inv


def parastat_identity_check(gamma: float, b: float, k: float) -> tuple[float, float]:
    """Both sides of the finite-occupancy integral identity.

    ``lhs = int_0^inf [1/(e^{b xi} - 1) - k/(e^{k b xi} - 1)] xi^gamma dxi``
    by quadrature (the measure ``xi^gamma dxi`` is ``d(xi^alpha)/alpha``,
    ``alpha = 1 + gamma``, matching the sum-to-integral passage), and
    ``rhs = c(gamma) b^-alpha (k^(1-alpha) - 1)``.
    """
    if not -1.0 < gamma < 0.0:
        raise DomainError(f"gamma must lie in (-1, 0), got {gamma}")
    if not b > 0.0 or not k >= 1.0:
        raise DomainError("need b > 0 and k >= 1")
    alpha = 1.0 + gamma
    rhs = c_gamma(gamma) * b**-alpha * (k ** (1.0 - alpha) - 1.0)
    if k == 1.0:
        return 0.0, rhs
    f, inv = _finite_occupancy_integrand(gamma, b, k)
    # xi = u^(1/alpha) removes the xi^gamma endpoint singularity
    u_max = (60.0 / b) ** alpha  # beyond this both Bose terms are < e^-60
    cuts = [(x / b) ** alpha for x in (1.0, 10.0) if (x / b) ** alpha < u_max]
    cuts += [(x / (k * b)) ** alpha for x in (1.0, 10.0) if (x / (k * b)) ** alpha < u_max]
    body, _ = quad(f, 0.0, u_max, abs_tol=1e-14, rel_tol=1e-12, breakpoints=cuts)
    # the 1/xi parts cancel exactly, so the tail is purely exponential
    xi_max = u_max**inv
    tail = xi_max**gamma * (math.exp(-b * xi_max) / b)
    lhs = body * inv + tail
    return lhs, rhs


def euler_maclaurin_gap(gamma: float, b: float, k: float) -> tuple[float, float]:
    """Lattice sum against its integral for the finite-occupancy kernel.

    Returns ``(sum_j j^gamma f(j), int_0^inf f(x) x^gamma dx)`` with
    ``f(x) = 1/(e^{bx} - 1) - k/(e^{kbx} - 1)``; their difference is the
    Euler-Maclaurin remainder, bounded by ``C b^-alpha``.
    """
    lhs, _ = parastat_identity_check(gamma, b, k)
    total = 0.0
    j = 1
    while True:
        term = j**gamma * (k * f_kernel(k * b * j) - f_kernel(b * j))
        total += term
        if b * j > 60.0:
            break
        j += 1
    return total, lhs


def _bose_power_sum(gamma: float, b: float) -> float:
    """``sum_{j>=1} j^gamma / (e^{bj} - 1)`` with a geometric tail bound."""
    total = 0.0
    j = 1
    q = math.exp(-b)
    while True:
        term = j**gamma / math.expm1(b * j)
        total += term
        # j^gamma decreasing (gamma < 0): remaining <= term * q/(1-q) * (1 + small)
        if term * q / (1.0 - q) < 1e-17 * total:
            return total
        j += 1


def nazaikinsky_bound(gamma: float, b: float) -> tuple[float, float]:
    """``sum_j j^gamma F(bj)`` and its integral majorant ``b^(-gamma-1) c(gamma)``.

    The sum is split as ``zeta(1-gamma)/b - sum_j j^gamma/(e^{bj}-1)``: the
    first part is exact, the second converges geometrically.
    """
    if not -1.0 < gamma < 0.0:
        raise DomainError(f"gamma must lie in (-1, 0), got {gamma}")
    if not b > 0.0:
        raise DomainError(f"b must be positive, got {b}")
    total = zeta(1.0 - gamma) / b - _bose_power_sum(gamma, b)
    bound = b ** (-gamma - 1.0) * c_gamma(gamma)
    return total, bound


def n_mu0_asymptotic(gamma: float, b: float, Lam: float, gamma_c: float) -> tuple[float, float]:
    """Particle number at zero chemical potential and its leading term.

    ``exact = Lam^(gamma-gamma_c) sum_j j^gamma / (e^{bj} - 1)``,
    ``leading = Lam^(gamma-gamma_c) zeta(1-gamma) / b``.
    """
    if not -1.0 < gamma < 0.0:
        raise DomainError(f"gamma must lie in (-1, 0), got {gamma}")
    if not b > 0.0:
        raise DomainError(f"b must be positive, got {b}")
    scale = Lam ** (gamma - gamma_c)
    return scale * _bose_power_sum(gamma, b), scale * zeta(1.0 - gamma) / b


def hurwitz_tail(gamma: float, b: float, n: int) -> float:
    """``sum_{j>n} j^(gamma-1) / b``: the power tail of ``sum j^gamma F(bj)``."""
    return hurwitz_zeta(1.0 - gamma, n + 1.0) / b
