"""Command-line front end.

Every subcommand prints a table: CSV (header + rows, ``%.17g`` floats, LF
endings) or JSON (``{"meta": ..., "data": [...]}``).  Exit status is 0 on
success, 2 for bad arguments or out-of-domain input, 3 for numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from . import bose, burgers, counting, thermo
from .errors import DomainError, NoRootError

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC = 0, 2, 3

# options that steer the run but never change its result
_RUN_OPTIONS = {"command", "format", "out", "config", "jobs"}


class ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgError(f"{self.prog}: {message}")


# ------------------------------------------------------------- output


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def _check_finite(rows: list[dict]) -> None:
    for row in rows:
        for k, v in row.items():
            if isinstance(v, (float, np.floating)) and not math.isfinite(v):
                raise ArithmeticError(f"non-finite value in column {k!r}: {v}")


def emit(columns: Sequence[str], rows: list[dict], fmt: str, meta: dict | None = None) -> str:
    """Render a table as CSV or JSON text."""
    _check_finite(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(row.get(c)) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        data = [{c: _json_value(row.get(c)) for c in columns} for row in rows]
        return json.dumps({"meta": meta or {}, "data": data}, indent=2) + "\n"
    raise DomainError(f"unknown format {fmt!r}")


def _pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    """Ordered map, optionally over worker processes."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------- argument types


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text}")
    return v


def _add_gas(p: argparse.ArgumentParser) -> None:
    p.add_argument("--Zc", type=_float, default=0.29, help="critical compressibility Z_c (default 0.29)")
    p.add_argument("--Lambda", type=_float, default=2.0, help="calibration constant Lambda (default 2.0)")


def _gas(args) -> thermo.GasSpec:
    return thermo.GasSpec.from_Zc(args.Zc, args.Lambda)


def _add_profile(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("initial profile")
    g.add_argument("--profile", choices=("cubic", "two-ramp", "sampled"), default="cubic",
                   help="cubic: p0 = x^3 + b x^2 - c x + d; two-ramp: bounded piecewise-linear; "
                        "sampled: knots read from --samples")
    g.add_argument("--c", type=_float, default=1.0, help="cubic: linear coefficient c (fold at t = 1/(c + b^2/3))")
    g.add_argument("--b", dest="b_coef", type=_float, default=0.0, help="cubic: quadratic coefficient b")
    g.add_argument("--d", type=_float, default=0.0, help="cubic: constant term d")
    g.add_argument("--p-left", type=_float, default=1.0, help="two-ramp: left state")
    g.add_argument("--p-right", type=_float, default=0.5, help="two-ramp: right state is -p_right")
    g.add_argument("--w-left", type=_float, default=1.0, help="two-ramp: width of the left ramp")
    g.add_argument("--w-right", type=_float, default=0.5, help="two-ramp: width of the right ramp")
    g.add_argument("--samples", help="sampled: file with 'x,p' lines")


def _profile(args) -> burgers.Profile:
    if args.profile == "cubic":
        return burgers.cubic_profile(args.c, args.b_coef, args.d)
    if args.profile == "two-ramp":
        return burgers.two_ramp_profile(args.p_left, args.p_right, args.w_left, args.w_right)
    if not args.samples:
        raise DomainError("--profile sampled needs --samples FILE")
    xs, ps = [], []
    with open(args.samples, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                x, p = (float(v) for v in line.replace(",", " ").split())
            except ValueError as exc:
                raise DomainError(f"bad sample line {line!r}") from exc
            xs.append(x)
            ps.append(p)
    return burgers.sampled_profile(xs, ps)


def _grid(lo: float, hi: float, n: int) -> list[float]:
    return [float(v) for v in np.linspace(lo, hi, n)]


# ---------------------------------------------------------- subcommands
# Each runner returns (columns, rows).


def _partitions(args):
    M = args.M
    if args.table:
        table = counting.partition_table(M)
        return ["N", "count"], [{"N": n, "count": c} for n, c in table.rows()]
    if args.N is not None:
        count = counting.count_exact(M, args.N) if args.N <= M else 0
        at_most = counting.count_at_most(M, args.N)
        return ["M", "N", "count", "at_most", "hartley_bits"], [{
            "M": M, "N": args.N, "count": count, "at_most": at_most,
            "hartley_bits": counting.hartley_entropy(count) if count else None,
        }]
    nc, best, ties = counting.find_Nc(M)
    total = counting.partition_number(M)
    return ["M", "partitions", "Nc", "Nc_count", "ties", "hartley_bits"], [{
        "M": M, "partitions": total, "Nc": nc, "Nc_count": best,
        "ties": " ".join(map(str, ties)), "hartley_bits": counting.hartley_entropy(best),
    }]


def _erdos_row(M: int, exact: bool) -> dict:
    n_hat, beta, alpha = counting.erdos_estimate(M)
    row = {"M": M, "N_hat": n_hat, "beta": beta, "alpha": alpha}
    if exact:
        nc, _, _ = counting.find_Nc(M)
        row.update(Nc=nc, rel_error=abs(nc - n_hat) / n_hat, gap_over_sqrtM=abs(nc - n_hat) / math.sqrt(M))
    return row


def _erdos(args):
    cols = ["M", "N_hat", "beta", "alpha"]
    if not args.estimate_only:
        cols += ["Nc", "rel_error", "gap_over_sqrtM"]
    rows = _pmap(partial(_erdos_row, exact=not args.estimate_only), args.M, args.jobs)
    return cols, rows


def _compositions(args):
    M, N = args.M, args.N
    comp = counting.count_compositions(M, N)
    part = counting.count_exact(M, N)
    return ["M", "N", "compositions", "partitions", "boltzmann_bits", "hartley_bits"], [{
        "M": M, "N": N, "compositions": comp, "partitions": part,
        "boltzmann_bits": counting.hartley_entropy(comp), "hartley_bits": counting.hartley_entropy(part),
    }]


def _petersburg(args):
    net, ratio = counting.petersburg_net(args.stake, args.m)
    return ["m", "stake", "net", "ratio", "limit"], [{
        "m": args.m, "stake": args.stake, "net": net, "ratio": ratio,
        "limit": (math.e - 2.0) / (math.e - 1.0),
    }]


def _point_row(p: thermo.ThermoPoint) -> dict:
    return {"mu": p.mu, "T": p.T, "M": p.M, "N": p.N, "Z": p.Z}


def _isotherm_point(mu: float, Zc: float, Lam: float, T: float) -> dict:
    spec = thermo.GasSpec.from_Zc(Zc, Lam)
    return _point_row(thermo.gas_point(spec, T, mu, spec.gamma_c))


def _isotherm(args):
    if args.mu_max > 0.0 or args.mu_min >= args.mu_max:
        raise DomainError("need mu_min < mu_max <= 0")
    mus = _grid(args.mu_max, args.mu_min, args.points)
    rows = _pmap(partial(_isotherm_point, Zc=args.Zc, Lam=args.Lambda, T=args.T), mus, args.jobs)
    return ["mu", "T", "M", "N", "Z"], rows


def _liquid(args):
    spec = _gas(args)
    rows = [_point_row(thermo.liquid_isochor(spec, T)) for T in args.T]
    return ["mu", "T", "M", "N", "Z"], rows


def _spinodal_point(T: float, Zc: float, Lam: float):
    spec = thermo.GasSpec.from_Zc(Zc, Lam)
    try:
        p = thermo.spinodal_point(spec, T)
    except NoRootError as exc:
        return None, str(exc)
    roots = thermo.gamma_of_T(T, spec)
    return {
        "T": p.T, "gamma": roots.least, "gamma_metastable": roots.metastable,
        "N": p.N, "M": p.M, "Z": p.Z,
        "mu_tilde": None if math.isnan(p.mu) else p.mu,
    }, None


def _spinodal(args):
    spec = _gas(args)
    t0 = thermo.t0_min(spec)
    lo = args.T_min if args.T_min is not None else t0 + 0.01
    results = _pmap(partial(_spinodal_point, Zc=args.Zc, Lam=args.Lambda),
                    _grid(lo, args.T_max, args.points), args.jobs)
    rows = []
    for row, skipped in results:
        if row is None:
            print(f"skipped: {skipped}", file=sys.stderr)
        else:
            rows.append(row)
    return ["T", "gamma", "gamma_metastable", "N", "M", "Z", "mu_tilde"], rows


def _spinodal_corrected(args):
    spec = _gas(args)
    target = thermo.spinodal_corrected(spec, args.T, args.q)
    roots = thermo.gamma_roots(spec, target)
    return ["T", "q", "xi", "target", "gamma", "gamma_metastable"], [{
        "T": args.T, "q": args.q, "xi": args.q * (1.0 / args.T - 1.0), "target": target,
        "gamma": roots.least, "gamma_metastable": roots.metastable,
    }]


def _phase_match(args):
    spec = _gas(args)
    g = thermo.gamma_of_T(args.T, spec).least
    pm = thermo.phase_match(spec, args.T)
    a0 = thermo.a0_solve(spec, thermo.gamma_of_T(1.0, spec).least)
    return ["T", "gamma", "a_g", "mu_star", "M_match", "a0", "a_l"], [{
        "T": args.T, "gamma": g, "a_g": pm.a_g, "mu_star": pm.mu_star,
        "M_match": pm.M_match, "a0": a0, "a_l": pm.a_g * a0,
    }]


def _mixture(args):
    g = thermo.mixture_gamma(args.alpha, args.gamma1, args.gamma2)
    return ["alpha", "gamma1", "gamma2", "gamma", "Zc"], [{
        "alpha": args.alpha, "gamma1": args.gamma1, "gamma2": args.gamma2,
        "gamma": g, "Zc": thermo.zc_of_gamma(g),
    }]


def _logadd(args):
    r = thermo.log_scale_add(args.A, args.B, args.n)
    return ["A", "B", "n", "result", "max_log"], [{
        "A": args.A, "B": args.B, "n": args.n, "result": r,
        "max_log": max(math.log(args.A), math.log(args.B)),
    }]


def _dimension(args):
    return ["M", "n", "D"], [{"M": args.M, "n": args.n, "D": thermo.dimension_estimate(args.M, args.n)}]


def _bose_solve(args):
    if args.basis_D is not None:
        if args.energies:
            raise DomainError("give either --basis-D or --energies, not both")
        spectrum = bose.basis_spectrum(args.basis_D, args.levels)
    elif args.energies:
        g = args.degeneracies or [1.0] * len(args.energies)
        spectrum = bose.LevelSpectrum(args.energies, g)
    else:
        raise DomainError("need --basis-D or --energies")
    m = bose.solve_multipliers(spectrum, bose.MacroState(args.N, args.E))
    back = bose.macro_from_multipliers(spectrum, m)
    occ = [bose.occupation(e, m) for e in spectrum.energies]
    return ["a", "b", "T", "mu", "N", "E", "entropy", "levels"], [{
        "a": m.a, "b": m.b, "T": 1.0 / m.b, "mu": -m.a / m.b, "N": back.N, "E": back.E,
        "entropy": bose.entropy_noneq(spectrum, occ), "levels": spectrum.truncation_index,
    }]


def _courant(args):
    weyl = bose.courant_density(args.lam, args.V, args.mass, args.D, args.hbar)
    row = {"lam": args.lam, "V": args.V, "D": args.D, "weyl": weyl}
    cols = ["lam", "V", "D", "weyl"]
    if args.brute_force:
        side = args.V ** (1.0 / args.D)
        count = bose.dirichlet_box_count(args.lam, side, args.D, args.mass, args.hbar)
        row.update(count=count, rel_diff=abs(count - weyl) / weyl)
        cols += ["count", "rel_diff"]
    return cols, [row]


def _parastat_row(gbk) -> dict:
    g, b, k = gbk
    lhs, rhs = bose.parastat_identity_check(g, b, k)
    return {"gamma": g, "b": b, "k": k, "lhs": lhs, "rhs": rhs,
            "rel_diff": abs(lhs - rhs) / max(1.0, abs(rhs))}


def _parastat(args):
    grid = [(g, b, k) for g in args.gamma for b in args.b for k in args.k]
    return ["gamma", "b", "k", "lhs", "rhs", "rel_diff"], _pmap(_parastat_row, grid, args.jobs)


def _nazaikinsky_row(gb) -> dict:
    g, b = gb
    s, bound = bose.nazaikinsky_bound(g, b)
    return {"gamma": g, "b": b, "sum": s, "bound": bound, "ratio": s / bound, "holds": s <= bound}


def _nazaikinsky(args):
    grid = [(g, b) for g in args.gamma for b in args.b]
    return ["gamma", "b", "sum", "bound", "ratio", "holds"], _pmap(_nazaikinsky_row, grid, args.jobs)


def _burgers_row(x: float, t: float, eps: float | None, prof: burgers.Profile) -> dict:
    bs = burgers.branch_solve(x, t, prof)
    row = {"x": x, "t": t, "generalized": bs.best.p, "branches": len(bs)}
    if eps is not None:
        row.update(eps=eps, viscous=burgers.viscous_solution(x, t, eps, prof))
    return row


def _burgers_eval(args):
    prof = _profile(args)
    xs = _grid(args.x_min, args.x_max, args.points)
    rows = _pmap(partial(_burgers_row, t=args.t, eps=args.eps, prof=prof), xs, args.jobs)
    cols = ["x", "t", "eps", "viscous", "generalized", "branches"] if args.eps is not None \
        else ["x", "t", "generalized", "branches"]
    return cols, rows


def _shock_row(t: float, prof: burgers.Profile) -> dict:
    xs, pl, pr = burgers.shock_states(t, prof)
    speed, mean = burgers.rankine_hugoniot(t, prof)
    left, right = burgers.equal_area_lobes(t, prof)
    return {"t": t, "x_s": xs, "p_left": pl, "p_right": pr, "speed": speed,
            "mean_state": mean, "lobe_left": left, "lobe_right": right}


def _shock(args):
    prof = _profile(args)
    rows = _pmap(partial(_shock_row, prof=prof), args.t, args.jobs)
    return ["t", "x_s", "p_left", "p_right", "speed", "mean_state", "lobe_left", "lobe_right"], rows


def _scaling(args):
    eps = [float(v) for v in np.logspace(math.log10(args.eps_max), math.log10(args.eps_min), args.points)]
    values = _pmap(burgers.critical_value, eps, args.jobs)
    C, k = burgers.critical_scaling(eps)
    rows = [{"eps": e, "v": v, "closed_form": burgers.CRITICAL_PREFACTOR * e**0.25,
             "C_fit": C, "exponent_fit": k} for e, v in zip(eps, values)]
    return ["eps", "v", "closed_form", "C_fit", "exponent_fit"], rows


# ------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default csv)")
    common.add_argument("--out", help="write to this file instead of standard output")
    common.add_argument("--config", help="file of 'key = value' lines; command-line flags win")
    common.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for grid sweeps")

    parser = _Parser(prog="bosestat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, runner, desc):
        p = sub.add_parser(name, parents=[common], help=desc, description=desc)
        p.set_defaults(runner=runner)
        return p

    p = add("partitions", _partitions,
            "partitions p(M,N) of M into exactly N parts via p(M,N) = p(M-1,N-1) + p(M-N,N); "
            "with neither --N nor --table: the maximiser N_c and Hartley entropy log2 p(M,N_c)")
    p.add_argument("--M", type=_positive_int, required=True)
    p.add_argument("--N", type=_positive_int)
    p.add_argument("--table", action="store_true", help="emit the full row p(M, 1..M)")

    p = add("erdos", _erdos,
            "N_c against N_hat = sqrt(M) ln M / beta + alpha sqrt(M), beta = pi sqrt(2/3), beta/2 = exp(-alpha beta/2)")
    p.add_argument("--M", type=int, nargs="+", required=True)
    p.add_argument("--estimate-only", action="store_true", help="skip the exact maximiser")

    p = add("compositions", _compositions,
            "ordered decompositions C(M-1, N-1) against partitions p(M,N), with both Hartley entropies")
    p.add_argument("--M", type=_positive_int, required=True)
    p.add_argument("--N", type=_positive_int, required=True)

    p = add("petersburg", _petersburg,
            "net winnings e^m l - l (e^m - 1)/(e - 1) of the e-fold doubling strategy; ratio tends to (e-2)/(e-1)")
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--stake", type=_float, default=1.0)

    p = add("isotherm", _isotherm,
            "gas isotherm M = T^(2+gc) Li_{2+gc}(a), N = T^(1+gc) Li_{1+gc}(a), Z = M/(N T), a = exp(mu/T)")
    _add_gas(p)
    p.add_argument("--T", type=_float, default=1.0)
    p.add_argument("--mu-min", type=_float, default=-5.0)
    p.add_argument("--mu-max", type=_float, default=0.0)
    p.add_argument("--points", type=_positive_int, default=50)

    p = add("liquid", _liquid,
            "liquid isochor N = T^(gc+1) zeta(gc+1) with anchor M = T^(gc+2) zeta(gc+2), Z = Z_c")
    _add_gas(p)
    p.add_argument("--T", type=_float, nargs="+", default=[1.0])

    p = add("spinodal", _spinodal,
            "negative-gamma spinodal: least root of (Lambda^(g-gc) c(g))^(1/(1+g)) = T^gc zeta(gc+1), "
            "N = A(g) T, mu_tilde = -T (ln N)^(-1/4)")
    _add_gas(p)
    p.add_argument("--T-min", type=_float, help="default T0 + 0.01")
    p.add_argument("--T-max", type=_float, default=1.0)
    p.add_argument("--points", type=_positive_int, default=20)

    p = add("spinodal-corrected", _spinodal_corrected,
            "spinodal with wall reflection: A(g) = T^gc |Li_{2+gc}(e^-xi) - zeta(2+gc)| / xi, xi = q (1/T - 1)")
    _add_gas(p)
    p.add_argument("--T", type=_float, required=True)
    p.add_argument("--q", type=_float, required=True)

    p = add("phase-match", _phase_match,
            "gas-liquid matching T^gc Li_{2+gc}(a_g) = Lambda^(-|g|-gc) T^-|g| Li_{2-|g|}(a_g), "
            "a_g = a_l/a0, Li_{2+g0}(a0) = zeta(2+g0) Lambda^(g0-gc)")
    _add_gas(p)
    p.add_argument("--T", type=_float, default=0.9)

    p = add("mixture", _mixture,
            "mixture rule (g+2) Z(g) = alpha (g1+2) Z(g1) + (1-alpha) (g2+2) Z(g2), Z(g) = zeta(g+2)/zeta(g+1)")
    p.add_argument("--alpha", type=_float, required=True)
    p.add_argument("--gamma1", type=_float, required=True)
    p.add_argument("--gamma2", type=_float, required=True)

    p = add("logadd", _logadd, "logarithmic-scale addition ln(n^ln A + n^ln B) / ln n")
    p.add_argument("--A", type=_float, required=True)
    p.add_argument("--B", type=_float, required=True)
    p.add_argument("--n", type=_float, required=True)

    p = add("dimension", _dimension, "dimension estimate D = ln M / ln n")
    p.add_argument("--M", type=_float, required=True)
    p.add_argument("--n", type=_float, required=True)

    p = add("bose-solve", _bose_solve,
            "Lagrange multipliers (a, b) with sum G/(e^(a+b eps)-1) = N and sum eps G/(e^(a+b eps)-1) = E")
    p.add_argument("--N", type=_float, required=True)
    p.add_argument("--E", type=_float, required=True)
    p.add_argument("--basis-D", type=_float, help="use the basis series eps_i = i^(D/2)")
    p.add_argument("--levels", type=_positive_int, default=4096, help="basis-series length")
    p.add_argument("--energies", type=_float, nargs="+", help="level energies")
    p.add_argument("--degeneracies", type=_float, nargs="+", help="degeneracies (default all 1)")

    p = add("courant", _courant,
            "Weyl count V m^(D/2) lam^(D/2) / (Gamma(D/2+1) (2 pi)^(D/2) hbar^D) of eigenvalues below lam")
    p.add_argument("--lam", type=_float, required=True)
    p.add_argument("--V", type=_float, default=1.0)
    p.add_argument("--mass", type=_float, default=1.0)
    p.add_argument("--D", type=_positive_int, default=3)
    p.add_argument("--hbar", type=_float, default=1.0)
    p.add_argument("--brute-force", action="store_true", help="also count Dirichlet eigenvalues of a cube of volume V")

    p = add("parastat-check", _parastat,
            "int [1/(e^(b xi)-1) - k/(e^(k b xi)-1)] xi^g dxi against c(g) b^-(1+g) (k^-g - 1)")
    p.add_argument("--gamma", type=_float, nargs="+", default=[-0.8, -0.5, -0.2])
    p.add_argument("--b", type=_float, nargs="+", default=[0.5, 1.0, 2.0])
    p.add_argument("--k", type=_float, nargs="+", default=[2.0, 10.0, 100.0])

    p = add("nazaikinsky", _nazaikinsky,
            "sum_j j^g F(b j) <= b^(-g-1) c(g), F(x) = 1/x - 1/(e^x - 1)")
    p.add_argument("--gamma", type=_float, nargs="+", default=[-0.9, -0.7, -0.5, -0.3, -0.1])
    p.add_argument("--b", type=_float, nargs="+", default=[0.05, 0.1, 0.2, 0.5, 1.0, 2.0])

    p = add("burgers-eval", _burgers_eval,
            "Burgers v_t + v v_x = (eps/2) v_xx: viscous v = -eps d/dx ln u (Cole-Hopf) "
            "and the least-action solution min_j S_j, S = (x-xi)^2/(2t) + P(xi)")
    _add_profile(p)
    p.add_argument("--t", type=_float, required=True)
    p.add_argument("--eps", type=_float, help="viscosity; omit for the inviscid solution only")
    p.add_argument("--x-min", type=_float, default=-1.5)
    p.add_argument("--x-max", type=_float, default=1.5)
    p.add_argument("--points", type=_positive_int, default=31)

    p = add("shock", _shock,
            "shock where S_1 = S_3 (equal areas), with Rankine-Hugoniot speed against (p_l + p_r)/2")
    _add_profile(p)
    p.add_argument("--t", type=_float, nargs="+", required=True)

    p = add("scaling", _scaling,
            "critical-point value v(0,eps) = int xi e^(-xi^4/(4eps)) / int e^(-xi^4/(4eps)) and its eps^(1/4) fit")
    p.add_argument("--eps-min", type=_float, default=1e-6)
    p.add_argument("--eps-max", type=_float, default=1e-2)
    p.add_argument("--points", type=_positive_int, default=9)
    return parser


def _read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ArgError(f"{path}:{n}: expected 'key = value'")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    """Install config-file values as defaults of the chosen subcommand.

    Keys are option names (``mu-min`` or ``mu_min``) or destinations.
    Defaults are overridden by anything given on the command line.
    """
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    subparsers = parser._subparsers._group_actions[0].choices
    command = next((a for a in argv if a in subparsers), None)
    if command is None:
        return
    actions = {}
    for a in subparsers[command]._actions:
        actions[a.dest] = a
        for opt in a.option_strings:
            actions[opt.lstrip("-").replace("-", "_")] = a
    for k, v in _read_config(known.config).items():
        a = actions.get(k)
        if a is None or a.dest in ("help", "config"):
            raise ArgError(f"unknown config key {k!r} for {command}")
        if isinstance(a, argparse._StoreTrueAction):
            if v.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ArgError(f"config key {k!r} expects a boolean")
            a.default = v.lower() in ("true", "1", "yes")
        else:
            try:
                if a.nargs in ("+", "*"):
                    a.default = [a.type(x) if a.type else x for x in v.split()]
                else:
                    a.default = a.type(v) if a.type else v
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ArgError(f"config key {k!r}: {exc}") from exc
            if a.choices is not None and a.default not in a.choices:
                raise ArgError(f"config key {k!r}: {v!r} not in {sorted(a.choices)}")
        a.required = False


def _meta(args) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _RUN_OPTIONS and k != "runner"}
    return {"subcommand": args.command, "parameters": params, "version": __version__}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except ArgError as exc:
        print(exc, file=sys.stderr)
        return EXIT_ARGS
    except (OSError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"bosestat: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    try:
        columns, rows = args.runner(args)
        text = emit(columns, rows, args.format, _meta(args))
    except (ValueError, OSError) as exc:
        print(f"bosestat {args.command}: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except ArithmeticError as exc:
        print(f"bosestat {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except OSError as exc:
        print(f"bosestat: cannot write output: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


run = main

if __name__ == "__main__":
    sys.exit(main())
