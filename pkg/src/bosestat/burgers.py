"""Vanishing-viscosity Burgers equation ``v_t + v v_x = (eps/2) v_xx``.

The viscous solution comes from the Cole-Hopf transform
``v = -eps d/dx ln u`` of the heat equation ``u_t = (eps/2) u_xx`` with
``u(x, 0) = exp(-P(x)/eps)``, ``P' = p0``:

    u(x, t) = (2 pi eps t)^(-1/2) int exp(-S(xi)/eps) dxi,
    S(xi)   = (x - xi)^2 / (2t) + P(xi).

Stationary points of ``S`` are the characteristics ``xi + t p0(xi) = x``;
as ``eps -> 0`` the branch of least action wins, which places shocks by the
equal-area rule.  Antiderivatives ``P`` are referenced to ``P(0) = 0``; the
constant cancels from every ratio.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NoRootError, QuadratureError
from .numerics import bisect, quad
from .specfun import gamma_fn

# exp(-46) ~ 1e-20: below 1e-18 of the peak, with margin
CUTOFF = 46.0


# ----------------------------------------------------------- profiles


class Profile:
    """Initial velocity ``p0`` with antiderivative ``P`` and slope ``p0'``."""

    family: str

    def p0(self, x):
        raise NotImplementedError

    def P(self, x):
        raise NotImplementedError

    def dp0(self, x):
        raise NotImplementedError

    def root_window(self, x: float, t: float) -> tuple[float, float]:
        """Interval certain to contain every root of ``xi + t p0(xi) = x``."""
        raise NotImplementedError

    def fold_points(self, t: float) -> tuple[float, float] | None:
        """``(xi_a, xi_b)``: local max then local min of ``X = xi + t p0``, if folded."""
        raise NotImplementedError

    @property
    def min_slope(self) -> float:
        raise NotImplementedError

    @property
    def t_cr(self) -> float:
        """First time ``1 + t p0'`` touches zero; ``inf`` for non-compressive data."""
        s = self.min_slope
        return math.inf if s >= 0.0 else -1.0 / s


@dataclass(frozen=True)
class CubicProfile(Profile):
    """``p0(x) = x^3 + b x^2 - c x + d``; ``b = d = 0`` is the odd canonical case."""

    c: float = 1.0
    b: float = 0.0
    d: float = 0.0
    family: str = "cubic"

    def p0(self, x):
        return ((x + self.b) * x - self.c) * x + self.d

    def P(self, x):
        return (((0.25 * x + self.b / 3.0) * x - 0.5 * self.c) * x + self.d) * x

    def dp0(self, x):
        return (3.0 * x + 2.0 * self.b) * x - self.c

    @property
    def min_slope(self) -> float:
        return -self.c - self.b**2 / 3.0

    def root_window(self, x, t):
        # Cauchy bound for t xi^3 + t b xi^2 + (1 - t c) xi + (t d - x)
        r = 1.0 + max(abs(self.b), abs(1.0 - t * self.c) / t, abs(t * self.d - x) / t)
        return -r, r

    def fold_points(self, t):
        # 3 t xi^2 + 2 t b xi + (1 - t c) = 0
        disc = (t * self.b) ** 2 - 3.0 * t * (1.0 - t * self.c)
        if disc <= 0.0:
            return None
        s = math.sqrt(disc)
        return ((-t * self.b - s) / (3.0 * t), (-t * self.b + s) / (3.0 * t))


@dataclass(frozen=True)
class PiecewiseLinearProfile(Profile):
    """Linear interpolation through knots, constant beyond the end knots."""

    xs: tuple[float, ...]
    ps: tuple[float, ...]
    family: str = "sampled"

    def __post_init__(self):
        xs = tuple(float(v) for v in self.xs)
        ps = tuple(float(v) for v in self.ps)
        if len(xs) < 2 or len(xs) != len(ps):
            raise DomainError("need at least two knots with matching values")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("knot abscissae must be strictly increasing")
        if not all(math.isfinite(v) for v in xs + ps):
            raise DomainError("knots must be finite")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ps", ps)
        xa, pa = np.array(xs), np.array(ps)
        slopes = np.diff(pa) / np.diff(xa)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (pa[1:] + pa[:-1]) * np.diff(xa))])
        object.__setattr__(self, "_xa", xa)
        object.__setattr__(self, "_pa", pa)
        object.__setattr__(self, "_slopes", slopes)
        # cumulative integral from xs[0], shifted so that P(0) = 0
        object.__setattr__(self, "_cum", cum)
        object.__setattr__(self, "_shift", 0.0)
        object.__setattr__(self, "_shift", float(self._raw_P(np.array([0.0]))[0]))

    def p0(self, x):
        return np.interp(x, self._xa, self._pa)

    def dp0(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self._xa, x, side="right") - 1
        inside = (idx >= 0) & (idx < len(self._slopes))
        out = np.zeros_like(x)
        out[inside] = self._slopes[idx[inside]]
        return out if out.ndim else float(out)

    def _raw_P(self, x):
        x = np.asarray(x, dtype=float)
        xa, pa, cum = self._xa, self._pa, self._cum
        idx = np.clip(np.searchsorted(xa, x, side="right") - 1, 0, len(xa) - 2)
        x0 = xa[idx]
        h = np.clip(x, xa[0], xa[-1]) - x0
        slope = self._slopes[idx]
        inner = cum[idx] + pa[idx] * h + 0.5 * slope * h * h
        left = (x - xa[0]) * pa[0]
        right = cum[-1] + (x - xa[-1]) * pa[-1]
        return np.where(x < xa[0], left, np.where(x > xa[-1], right, inner))

    def P(self, x):
        out = self._raw_P(x) - self._shift
        return out if np.ndim(out) else float(out)

    @property
    def min_slope(self) -> float:
        return float(np.min(self._slopes))

    def root_window(self, x, t):
        lo = x - t * max(self.ps)
        hi = x - t * min(self.ps)
        return min(lo, self.xs[0]) - 1.0, max(hi, self.xs[-1]) + 1.0

    def fold_points(self, t):
        # X = xi + t p0 is piecewise linear; extrema sit on knots
        X = self._xa + t * self._pa
        rising = np.concatenate([[True], 1.0 + t * self._slopes > 0.0, [True]])
        peaks = [i for i in range(len(X)) if rising[i] and not rising[i + 1]]
        troughs = [i for i in range(len(X)) if not rising[i] and rising[i + 1]]
        if not peaks:
            return None
        if len(peaks) > 1:
            raise DomainError("profile folds in more than one place; pick a single-hump profile")
        return float(self._xa[peaks[0]]), float(self._xa[troughs[0]])


def cubic_profile(c: float = 1.0, b: float = 0.0, d: float = 0.0) -> CubicProfile:
    if not c > 0.0:
        raise DomainError(f"c must be positive, got {c}")
    return CubicProfile(c, b, d)


def two_ramp_profile(p_left: float = 1.0, p_right: float = 0.5,
                     w_left: float = 1.0, w_right: float = 0.5) -> PiecewiseLinearProfile:
    """Bounded compressive profile: ``p_left`` falls to 0 over ``w_left``, then to ``-p_right`` over ``w_right``."""
    if not (w_left > 0.0 and w_right > 0.0):
        raise DomainError("ramp widths must be positive")
    prof = PiecewiseLinearProfile((-w_left, 0.0, w_right), (p_left, 0.0, -p_right))
    object.__setattr__(prof, "family", "two-ramp")
    return prof


def sampled_profile(xs: Sequence[float], ps: Sequence[float]) -> PiecewiseLinearProfile:
    return PiecewiseLinearProfile(tuple(xs), tuple(ps))


def constant_profile(c: float) -> PiecewiseLinearProfile:
    return PiecewiseLinearProfile((-1.0, 1.0), (c, c))


# ----------------------------------------------------------- branches


@dataclass(frozen=True)
class Branch:
    xi: float
    S: float
    p: float


@dataclass(frozen=True)
class BranchSet:
    x: float
    t: float
    branches: tuple[Branch, ...]

    def __len__(self) -> int:
        return len(self.branches)

    @property
    def best(self) -> Branch:
        # min action; ties go to the smaller xi because branches are sorted
        return min(self.branches, key=lambda b: b.S)


def _check_t(t: float) -> float:
    t = float(t)
    if not (math.isfinite(t) and t > 0.0):
        raise DomainError(f"t must be positive, got {t}")
    return t


def action(xi, x: float, t: float, p0: Profile):
    return (x - xi) ** 2 / (2.0 * t) + p0.P(xi)


def branch_solve(x: float, t: float, p0: Profile, n_scan: int = 1000) -> BranchSet:
    """Every real root of ``xi + t p0(xi) = x`` with its action and slope value."""
    t = _check_t(t)
    lo, hi = p0.root_window(x, t)
    grid = np.linspace(lo, hi, n_scan)
    # the fold points split the line into monotone pieces of xi + t p0, so
    # putting them on the grid brackets near-coincident roots as well
    folds = p0.fold_points(t)
    if folds is not None:
        grid = np.unique(np.concatenate([grid, [f for f in folds if lo < f < hi]]))
    n_scan = grid.size
    q = grid + t * p0.p0(grid) - x
    roots = []
    for i in range(n_scan - 1):
        if q[i] == 0.0:
            roots.append(float(grid[i]))
        elif q[i] * q[i + 1] < 0.0:
            f = lambda xi: xi + t * float(p0.p0(xi)) - x
            roots.append(bisect(f, float(grid[i]), float(grid[i + 1]), xtol=1e-15,
                                f_lo=float(q[i]), f_hi=float(q[i + 1])))
    if q[-1] == 0.0:
        roots.append(float(grid[-1]))
    if not roots:
        raise NoRootError(f"no characteristic reaches x = {x} at t = {t}")
    branches = tuple(
        Branch(r, float(action(r, x, t, p0)), float(p0.p0(r))) for r in sorted(roots)
    )
    return BranchSet(float(x), t, branches)


def generalized_solution(x: float, t: float, p0: Profile) -> float:
    """Slope value of the least-action branch (the entropy solution)."""
    return branch_solve(x, t, p0).best.p


def tropical_min(w1: float, w2: float, eps: float) -> float:
    """``-eps ln(exp(-w1/eps) + exp(-w2/eps))``, tending to ``min(w1, w2)``."""
    if not eps > 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    lo, hi = min(w1, w2), max(w1, w2)
    return lo - eps * math.log1p(math.exp(-(hi - lo) / eps))


# ------------------------------------------------------- shock placement


def _outer_gap(x: float, t: float, p0: Profile) -> float:
    bs = branch_solve(x, t, p0)
    if len(bs) < 3:
        raise NoRootError(f"x = {x} is outside the three-branch window at t = {t}")
    return bs.branches[0].S - bs.branches[-1].S


def overlap_window(t: float, p0: Profile) -> tuple[float, float]:
    """``x`` interval where three characteristics overlap."""
    t = _check_t(t)
    folds = p0.fold_points(t)
    if folds is None:
        raise NoRootError(f"no shock: t = {t} is not past t_cr = {p0.t_cr}")
    xa, xb = folds
    X = lambda xi: xi + t * float(p0.p0(xi))
    return X(xb), X(xa)


def shock_position(t: float, p0: Profile) -> float:
    """Shock location: the ``x`` in the overlap window where ``S_1 = S_3``."""
    t = _check_t(t)
    if t <= p0.t_cr:
        raise NoRootError(f"no shock: t = {t} <= t_cr = {p0.t_cr}")
    lo, hi = overlap_window(t, p0)
    # S_1 - S_3 rises from <0 to >0 across the window
    pad = 1e-12 * max(1.0, hi - lo)
    a, b = lo + pad, hi - pad
    f = lambda x: _outer_gap(x, t, p0)
    try:
        return bisect(f, a, b, xtol=1e-14)
    except NoRootError as exc:
        raise NoRootError(f"equal-action point not bracketed at t = {t}: {exc}") from exc


def shock_states(t: float, p0: Profile) -> tuple[float, float, float]:
    """``(x_s, p_left, p_right)`` at the shock."""
    xs = shock_position(t, p0)
    bs = branch_solve(xs, t, p0)
    return xs, bs.branches[0].p, bs.branches[-1].p


def equal_area_lobes(t: float, p0: Profile) -> tuple[float, float]:
    """Areas cut from the multivalued wave by the vertical line at the shock.

    On the curve ``(X, p) = (xi + t p0(xi), p0(xi))`` the lobes between
    consecutive crossings are ``int (X - x_s) dp``; returned as magnitudes
    (left lobe, right lobe).  The two are equal at the shock.
    """
    xs = shock_position(t, p0)
    bs = branch_solve(xs, t, p0)
    if len(bs) != 3:
        raise NoRootError(f"expected three crossings at the shock, found {len(bs)}")
    r1, r2, r3 = (b.xi for b in bs.branches)
    f = lambda xi: (xi + t * p0.p0(xi) - xs) * p0.dp0(xi)
    knots = getattr(p0, "xs", ())
    left, _ = quad(f, r1, r2, abs_tol=1e-15, rel_tol=1e-14, breakpoints=knots)
    right, _ = quad(f, r2, r3, abs_tol=1e-15, rel_tol=1e-14, breakpoints=knots)
    return abs(left), abs(right)


def rankine_hugoniot(t: float, p0: Profile, dt: float = 1e-3) -> tuple[float, float]:
    """Shock speed by central difference and the average ``(p_l + p_r)/2``."""
    speed = (shock_position(t + dt, p0) - shock_position(t - dt, p0)) / (2.0 * dt)
    _, pl, pr = shock_states(t, p0)
    return speed, 0.5 * (pl + pr)


# ---------------------------------------------------- viscous solution


def _window(x: float, t: float, eps: float, p0: Profile):
    """Integration range, breakpoints and the minimal action for the Laplace integrals."""
    bs = branch_solve(x, t, p0)
    s_min = min(b.S for b in bs.branches)
    thr = CUTOFF * eps
    S = lambda xi: float(action(xi, x, t, p0)) - s_min - thr

    def edge(start: float, direction: float) -> float:
        step = math.sqrt(eps * t) + 1e-3 * eps**0.25
        far = start + direction * step
        while S(far) < 0.0:
            step *= 2.0
            far = start + direction * step
        lo, hi = sorted((start, far))
        return bisect(S, lo, hi, xtol=1e-13 * max(1.0, abs(start)))

    # branches whose weight is negligible are left out of the window; S is
    # monotone from the outermost kept branch to the cutoff level
    kept = [b for b in bs.branches if b.S - s_min <= thr]
    L = edge(kept[0].xi, -1.0)
    R = edge(kept[-1].xi, 1.0)
    h = math.sqrt(eps * t)
    q = eps**0.25
    cuts = set()
    for b in kept:
        for d in (0.0, h, 4.0 * h, 10.0 * h, q, 3.0 * q):
            cuts.update((b.xi - d, b.xi + d))
    cuts.update(getattr(p0, "xs", ()))
    cuts = sorted(c for c in cuts if L < c < R)
    return L, R, cuts, s_min


def _rel_tol(eps: float, s_min: float) -> float:
    # rounding in S - s_min is amplified by 1/eps in the exponent
    return max(1e-12, 1e-13 * (1.0 + abs(s_min)) / eps)


def _weight(x: float, t: float, eps: float, p0: Profile, s_min: float):
    def w(xi):
        return np.exp(-(action(xi, x, t, p0) - s_min) / eps)
    return w


def log_heat_solution(x: float, t: float, eps: float, p0: Profile) -> float:
    """``ln u(x, t)``, safe where ``u`` itself under- or overflows."""
    t = _check_t(t)
    if not eps > 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    L, R, cuts, s_min = _window(x, t, eps, p0)
    w = _weight(x, t, eps, p0, s_min)
    den, _ = quad(w, L, R, abs_tol=0.0, rel_tol=_rel_tol(eps, s_min), breakpoints=cuts)
    if not den > 0.0:
        raise QuadratureError(f"heat integral vanished at x = {x}, t = {t}")
    return -s_min / eps + math.log(den) - 0.5 * math.log(2.0 * math.pi * eps * t)


def heat_solution(x: float, t: float, eps: float, p0: Profile) -> float:
    return math.exp(log_heat_solution(x, t, eps, p0))


def viscous_solution(x: float, t: float, eps: float, p0: Profile) -> float:
    """``v = -eps d/dx ln u`` as the ratio ``int ((x - xi)/t) w / int w``."""
    t = _check_t(t)
    if not eps > 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    L, R, cuts, s_min = _window(x, t, eps, p0)
    w = _weight(x, t, eps, p0, s_min)
    den, _ = quad(w, L, R, abs_tol=0.0, rel_tol=_rel_tol(eps, s_min), breakpoints=cuts)
    if not den > 0.0:
        raise QuadratureError(f"heat integral vanished at x = {x}, t = {t}")
    scale = max(abs(x - L), abs(x - R)) / t
    num, _ = quad(lambda xi: (x - xi) / t * w(xi), L, R,
                  abs_tol=1e-13 * den * scale, rel_tol=_rel_tol(eps, s_min), breakpoints=cuts)
    return num / den


# ------------------------------------------------------ critical point

CRITICAL_PREFACTOR = 4.0**0.25 * (math.sqrt(math.pi) / 4.0) / gamma_fn(1.25)


def critical_value(eps: float) -> float:
    """``v(0, eps) = int_0^inf xi e^(-xi^4/(4 eps)) dxi / int_0^inf e^(-xi^4/(4 eps)) dxi``."""
    if not eps > 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    scale = (4.0 * eps) ** 0.25
    top = (CUTOFF * 1.1) ** 0.25 * scale
    cuts = [scale * k for k in (0.25, 0.5, 1.0, 1.5, 2.0)]
    w = lambda xi: np.exp(-(xi**4) / (4.0 * eps))
    den, _ = quad(w, 0.0, top, abs_tol=0.0, rel_tol=1e-13, breakpoints=cuts)
    num, _ = quad(lambda xi: xi * w(xi), 0.0, top, abs_tol=0.0, rel_tol=1e-13, breakpoints=cuts)
    return num / den


def _loglog_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, icpt = np.polyfit(np.log(x), np.log(y), 1)
    return float(math.exp(icpt)), float(slope)


def _check_grid(eps_grid: Sequence[float]) -> np.ndarray:
    eps = np.asarray(eps_grid, dtype=float)
    if eps.ndim != 1 or eps.size < 3 or np.any(eps <= 0.0):
        raise DomainError("need at least three positive eps values")
    if math.log10(eps.max() / eps.min()) < 3.0 - 1e-12:
        raise DomainError("eps grid must span at least three decades for the fit")
    return eps


def critical_scaling(eps_grid: Sequence[float]) -> tuple[float, float]:
    """Fit ``v(0, eps) = C eps^k``; returns ``(C, k)``, with ``k`` close to 1/4."""
    eps = _check_grid(eps_grid)
    v = np.array([critical_value(e) for e in eps])
    return _loglog_fit(eps, v)


def critical_inverse_exponent(eps_grid: Sequence[float]) -> float:
    """Exponent of ``eps`` as a power of ``v(0, eps)``; close to 4."""
    eps = _check_grid(eps_grid)
    v = np.array([critical_value(e) for e in eps])
    return _loglog_fit(v, eps)[1]
