"""Small numerical kernels shared by the physics modules.

Adaptive Gauss-Kronrod quadrature on finite intervals, sign-change
bracketing, bisection and golden-section minimisation.  Integrands are
evaluated on whole panels at once, so they must accept numpy arrays.
"""
from __future__ import annotations

import heapq
import math
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, NoRootError, QuadratureError

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
# Gauss nodes sit at the odd positions of the Kronrod set.
_GAUSS_W[[1, 3, 5]] = _WG[:3]
_GAUSS_W[[9, 11, 13]] = _WG[2::-1]
_GAUSS_W[7] = _WG[3]

ArrayFn = Callable[[np.ndarray], np.ndarray]


def _panel(f: ArrayFn, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    y = np.asarray(f(centre + half * _NODES), dtype=float)
    if not np.all(np.isfinite(y)):
        raise QuadratureError(f"non-finite integrand on [{a}, {b}]")
    kronrod = half * float(np.dot(_KRONROD_W, y))
    gauss = half * float(np.dot(_GAUSS_W, y))
    return kronrod, abs(kronrod - gauss)


def quad(
    f: ArrayFn,
    a: float,
    b: float,
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-12,
    breakpoints: Sequence[float] = (),
    limit: int = 4000,
) -> tuple[float, float]:
    """Integrate ``f`` over the finite interval ``[a, b]``.

    Panels are bisected greedily (largest error estimate first) until the
    summed estimate drops below ``max(abs_tol, rel_tol * |I|)``.  Returns
    ``(integral, error_estimate)``; raises :class:`QuadratureError` when
    ``limit`` panels are not enough.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise QuadratureError("quad needs finite limits")
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    cuts = sorted({a, b, *(p for p in breakpoints if a < p < b)})

    heap: list[tuple[float, float, float, float]] = []
    total = 0.0
    err = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        val, e = _panel(f, lo, hi)
        total += val
        err += e
        heapq.heappush(heap, (-e, lo, hi, val))

    n_panels = len(heap)
    while err > max(abs_tol, rel_tol * abs(total)):
        if n_panels >= limit:
            raise QuadratureError(
                f"no convergence on [{a}, {b}] after {limit} panels "
                f"(estimate {total!r}, error {err:.3g})"
            )
        neg_e, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise QuadratureError(f"panel [{lo}, {hi}] cannot be split further")
        v1, e1 = _panel(f, lo, mid)
        v2, e2 = _panel(f, mid, hi)
        total += v1 + v2 - val
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        n_panels += 1

    # Re-sum to shed the drift of the running updates.
    total = math.fsum(item[3] for item in heap)
    err = math.fsum(-item[0] for item in heap)
    return sign * total, err


def sign_changes(
    f: Callable[[float], float], lo: float, hi: float, n: int = 200
) -> list[tuple[float, float]]:
    """Brackets ``[x_i, x_{i+1}]`` of an ``n``-point grid where ``f`` changes sign.

    An exact zero on a grid point is reported as the degenerate bracket
    ``(x, x)``.
    """
    xs = np.linspace(lo, hi, n)
    ys = [f(float(x)) for x in xs]
    out = []
    for i in range(n - 1):
        if ys[i] == 0.0:
            out.append((float(xs[i]), float(xs[i])))
        elif ys[i] * ys[i + 1] < 0.0:
            out.append((float(xs[i]), float(xs[i + 1])))
    if ys[-1] == 0.0:
        out.append((float(xs[-1]), float(xs[-1])))
    return out


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float = 1e-12,
    maxiter: int = 300,
    f_lo: float | None = None,
    f_hi: float | None = None,
) -> float:
    """Root of ``f`` in a sign-change bracket, to absolute width ``xtol``."""
    if lo == hi:
        return lo
    f_lo = f(lo) if f_lo is None else f_lo
    f_hi = f(hi) if f_hi is None else f_hi
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise NoRootError(f"no sign change on [{lo}, {hi}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid in (lo, hi):
            return mid
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise ConvergenceError(f"bisection did not reach xtol={xtol}")


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_min(
    f: Callable[[float], float], lo: float, hi: float, *, xtol: float = 1e-10
) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(x_min, f_min)``."""
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)
